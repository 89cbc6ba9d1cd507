#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

#include "tariffsched/instance.hpp"
#include "tariffsched/rational.hpp"

namespace tariffsched {

struct GenParams {
  int n = 4;
  int k = 3;
  std::int64_t dmax = 12;
  std::int64_t emax = 5;
  int machines = 1;
  bool weighted = false;
  std::uint64_t seed = 0;
  std::int64_t pmax = 3;
  std::int64_t wmax = 9;
};

// Deterministic for a fixed seed: raw engine draws with modulo, never
// std::uniform_int_distribution, so the byte stream is platform-stable.
inline Instance generate_instance(const GenParams& gp) {
  if (gp.n < 0 || gp.k < 1 || gp.machines < 1 || gp.pmax < 1 || gp.emax < 0 || gp.wmax < 0)
    throw std::invalid_argument("generate_instance: bad parameter");
  if (gp.dmax < gp.k)
    throw std::invalid_argument("generate_instance: dmax must be at least k");
  std::mt19937_64 rng(gp.seed);
  auto pick = [&rng](std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };

  Instance inst;
  inst.machines = gp.machines;
  std::int64_t at = 0;
  const std::int64_t spare = (gp.dmax - gp.k) / gp.k;
  for (int i = 0; i < gp.k; ++i) {
    const std::int64_t len = 1 + (spare > 0 ? pick(0, spare) : 0);
    inst.tariff.intervals.push_back({at, at + len, Cost(pick(0, gp.emax))});
    at += len;
  }

  for (int i = 0; i < gp.n; ++i) {
    Job j;
    j.id = i + 1;
    j.p = pick(1, gp.pmax);
    j.w = gp.weighted ? Rational(pick(0, gp.wmax)) : Rational(1);
    if (gp.machines > 1) {
      std::vector<std::int64_t> times;
      for (int mi = 0; mi < gp.machines; ++mi)
        times.push_back(pick(0, 5) == 0 ? kInfiniteTime : pick(1, gp.pmax));
      bool any = false;
      for (auto t : times) any |= t != kInfiniteTime;
      if (!any) times[static_cast<std::size_t>(pick(0, gp.machines - 1))] = pick(1, gp.pmax);
      std::int64_t mn = kInfiniteTime;
      for (auto t : times) mn = std::min(mn, t);
      j.p = mn;
      j.p_per_machine = std::move(times);
    }
    inst.jobs.push_back(std::move(j));
  }

  // Pad the horizon so the instance is always feasible.
  std::int64_t required = 0;
  for (const auto& j : inst.jobs) required += min_processing_time(j);
  const std::int64_t cap = finite_slot_count(inst.tariff);
  if (cap < required) inst.tariff.intervals.back().end += required - cap;
  return inst;
}

}  // namespace tariffsched
