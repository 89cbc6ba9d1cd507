#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "tariffsched/instance.hpp"
#include "tariffsched/rational.hpp"

namespace tariffsched {

// Places jobs in the given id order back-to-back into the profile's prefix
// slots on a single machine and prices the result with the instance's
// weights and tariffs.
inline Schedule place_sequence(const Instance& inst, const std::vector<int>& order,
                               const ReservationProfile& profile, const std::string& objective) {
  Schedule sched;
  sched.objective = objective;
  sched.profile = profile;
  sched.scheduling_cost = 0;
  sched.tariff_cost = 0;
  std::vector<std::int64_t> slots;
  for (std::size_t k = 0; k < profile.counts.size(); ++k) {
    const auto& iv = inst.tariff.intervals[k];
    if (profile.counts[k] < 0 || profile.counts[k] > iv.end - iv.start)
      throw std::invalid_argument("place_sequence: profile count exceeds interval length");
    if (profile.counts[k] > 0 && iv.cost.is_infinite())
      throw std::invalid_argument("place_sequence: profile reserves infinite-cost slots");
    for (std::int64_t i = 0; i < profile.counts[k]; ++i) slots.push_back(iv.start + i);
    if (profile.counts[k] > 0) sched.tariff_cost += iv.cost.value() * profile.counts[k];
  }
  std::sort(slots.begin(), slots.end());
  std::map<int, const Job*> by_id;
  for (const auto& j : inst.jobs) by_id[j.id] = &j;
  std::int64_t used = 0;
  for (int id : order) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw std::invalid_argument("place_sequence: unknown job id");
    const Job* job = it->second;
    if (used + job->p > static_cast<std::int64_t>(slots.size()))
      throw std::invalid_argument("place_sequence: profile capacity shortfall");
    std::int64_t a = used;
    const std::int64_t b = used + job->p;
    while (a < b) {
      std::int64_t r = a;
      while (r + 1 < b && slots[r + 1] == slots[r] + 1) ++r;
      sched.segments.push_back({id, 0, Rational(slots[a]), Rational(slots[r] + 1)});
      a = r + 1;
    }
    sched.completion_times[id] = Rational(slots[b - 1] + 1);
    sched.scheduling_cost += job->w * sched.completion_times[id];
    used = b;
  }
  sched.total_cost = sched.scheduling_cost + sched.tariff_cost;
  return sched;
}

}  // namespace tariffsched
