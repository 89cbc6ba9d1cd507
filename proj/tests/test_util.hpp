#pragma once

#include <random>
#include <vector>

#include "tariffsched/tariffsched.hpp"

namespace tsx {

using namespace tariffsched;

inline TariffFunction mk_tariff(std::initializer_list<std::tuple<int, int, const char*>> ivs) {
  TariffFunction t;
  for (const auto& [a, b, c] : ivs) t.intervals.push_back({a, b, cost_from_string(c)});
  return t;
}

inline Instance mk_instance(std::initializer_list<std::tuple<int, int, const char*>> jobs,
                            std::initializer_list<std::tuple<int, int, const char*>> tariff,
                            int machines = 1) {
  Instance inst;
  inst.machines = machines;
  for (const auto& [id, p, w] : jobs) inst.jobs.push_back({id, p, rat_from_string(w), {}});
  inst.tariff = mk_tariff(tariff);
  return inst;
}

// Random tariff with small integral structure, for property tests.
inline TariffFunction random_tariff(std::mt19937_64& rng, int max_k, std::int64_t max_len,
                                    std::int64_t max_cost, bool allow_inf = false) {
  TariffFunction t;
  const int k = 1 + static_cast<int>(rng() % max_k);
  std::int64_t at = 0;
  for (int i = 0; i < k; ++i) {
    const std::int64_t len = 1 + static_cast<std::int64_t>(rng() % max_len);
    Cost c = allow_inf && rng() % 6 == 0 ? Cost::infinite()
                                         : Cost(static_cast<std::int64_t>(rng() % (max_cost + 1)));
    t.intervals.push_back({at, at + len, c});
    at += len;
  }
  return t;
}

inline std::vector<int> shuffled_ids(const Instance& inst, std::mt19937_64& rng) {
  std::vector<int> ids;
  for (const auto& j : inst.jobs) ids.push_back(j.id);
  for (std::size_t i = ids.size(); i > 1; --i) std::swap(ids[i - 1], ids[rng() % i]);
  return ids;
}

}  // namespace tsx
