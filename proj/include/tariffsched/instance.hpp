#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tariffsched/rational.hpp"

namespace tariffsched {

// One piece [start, end) of the piecewise-constant tariff.
struct TariffInterval {
  std::int64_t start = 0;
  std::int64_t end = 0;
  Cost cost;
};

struct TariffFunction {
  std::vector<TariffInterval> intervals;

  std::int64_t horizon() const { return intervals.empty() ? 0 : intervals.back().end; }
  std::size_t size() const { return intervals.size(); }
};

// Per-machine processing time marker for "cannot run on this machine".
inline constexpr std::int64_t kInfiniteTime = std::numeric_limits<std::int64_t>::max();

struct Job {
  int id = 0;
  std::int64_t p = 1;
  Rational w = 0;
  // Present only for unrelated-machine instances; one entry per machine,
  // kInfiniteTime where the job cannot run.
  std::optional<std::vector<std::int64_t>> p_per_machine;
};

struct Instance {
  std::vector<Job> jobs;
  TariffFunction tariff;
  int machines = 1;

  std::int64_t total_processing() const {
    std::int64_t s = 0;
    for (const auto& j : jobs) s += j.p;
    return s;
  }
};

// Utilized slot counts per tariff interval; counts[k] means the first
// counts[k] slots of interval k are reserved.
struct ReservationProfile {
  std::vector<std::int64_t> counts;

  std::int64_t capacity() const {
    std::int64_t s = 0;
    for (auto c : counts) s += c;
    return s;
  }
};

struct ScheduleSegment {
  int job = 0;
  int machine = 0;
  Rational start;
  Rational end;
};

struct Schedule {
  std::string objective;  // "sumcj", "wsumcj" or "makespan"
  std::vector<ScheduleSegment> segments;
  std::map<int, Rational> completion_times;
  ReservationProfile profile;
  Rational scheduling_cost;
  Rational tariff_cost;
  Rational total_cost;
};

inline std::int64_t min_processing_time(const Job& j) {
  if (!j.p_per_machine) return j.p;
  std::int64_t best = kInfiniteTime;
  for (auto p : *j.p_per_machine) best = std::min(best, p);
  return best;
}

inline std::int64_t finite_slot_count(const TariffFunction& t) {
  std::int64_t n = 0;
  for (const auto& iv : t.intervals)
    if (iv.cost.is_finite()) n += iv.end - iv.start;
  return n;
}

// Returns one message per violated invariant; empty means well-formed and
// feasible.
inline std::vector<std::string> validate(const Instance& inst) {
  std::vector<std::string> out;
  const auto& ivs = inst.tariff.intervals;
  if (ivs.empty()) {
    out.push_back("tariff: must contain at least one interval");
  } else {
    if (ivs.front().start != 0) out.push_back("tariff: first interval must start at 0");
    for (std::size_t k = 0; k < ivs.size(); ++k) {
      const auto& iv = ivs[k];
      if (iv.start < 0 || iv.end < 0)
        out.push_back("tariff: interval " + std::to_string(k) + " has negative bounds");
      if (iv.start >= iv.end)
        out.push_back("tariff: interval " + std::to_string(k) + " is empty or reversed");
      if (iv.cost.is_finite() && iv.cost.value() < 0)
        out.push_back("tariff: interval " + std::to_string(k) + " has negative cost");
      if (k > 0 && ivs[k - 1].end != iv.start)
        out.push_back("tariff: contiguity violated between intervals " + std::to_string(k - 1) +
                      " and " + std::to_string(k));
    }
  }
  if (inst.machines < 1) out.push_back("machines: must be positive");

  std::map<int, int> id_seen;
  for (const auto& j : inst.jobs) {
    const std::string tag = "job " + std::to_string(j.id);
    if (++id_seen[j.id] == 2) out.push_back(tag + ": duplicate id");
    if (j.p < 1) out.push_back(tag + ": processing time must be >= 1");
    if (j.w < 0) out.push_back(tag + ": weight must be nonnegative");
    if (j.p_per_machine) {
      if (static_cast<int>(j.p_per_machine->size()) != inst.machines)
        out.push_back(tag + ": p_per_machine length differs from machine count");
      bool any_finite = false;
      for (auto p : *j.p_per_machine) {
        if (p == kInfiniteTime) continue;
        any_finite = true;
        if (p < 1) out.push_back(tag + ": per-machine processing time must be >= 1");
      }
      if (!any_finite) out.push_back(tag + ": no machine can process this job");
    }
  }

  // Feasibility: enough finite-cost slots for the minimum total work.
  std::int64_t required = 0;
  bool required_ok = true;
  for (const auto& j : inst.jobs) {
    const std::int64_t m = min_processing_time(j);
    if (m == kInfiniteTime) {
      required_ok = false;
      break;
    }
    required += m;
  }
  if (required_ok && !ivs.empty() && finite_slot_count(inst.tariff) < required)
    out.push_back("feasibility: finite-cost capacity " +
                  std::to_string(finite_slot_count(inst.tariff)) + " is less than required work " +
                  std::to_string(required));
  return out;
}

}  // namespace tariffsched
