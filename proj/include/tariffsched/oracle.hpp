#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "tariffsched/instance.hpp"
#include "tariffsched/makespan.hpp"
#include "tariffsched/placement.hpp"
#include "tariffsched/rational.hpp"
#include "tariffsched/seqdp.hpp"
#include "tariffsched/tariff.hpp"

namespace tariffsched {

// Enumeration stops with an error when a cap would be crossed; it never
// silently truncates.
struct EnumerationBudget {
  std::uint64_t max_profiles = 10'000'000;
  std::uint64_t max_permutations = 5040;  // 7!
};

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OracleResult {
  Rational total;
  Schedule witness;
};

// Exact cost of processing the sequence back-to-back in the profile's slots.
inline Rational evaluate_minsum(const Instance& inst, const std::vector<int>& sequence,
                                const ReservationProfile& profile) {
  return place_sequence(inst, sequence, profile, "wsumcj").total_cost;
}

namespace oracle_detail {

// Number of count vectors, or nullopt on overflow past the cap.
inline std::optional<std::uint64_t> profile_space(const TariffFunction& tariff,
                                                  std::uint64_t cap) {
  std::uint64_t total = 1;
  for (const auto& iv : tariff.intervals) {
    if (!iv.cost.is_finite()) continue;
    const std::uint64_t choices = static_cast<std::uint64_t>(iv.end - iv.start) + 1;
    if (total > cap / choices + 1) return std::nullopt;
    total *= choices;
    if (total > cap) return std::nullopt;
  }
  return total;
}

struct IntView {
  bool valid = false;
  std::vector<std::int64_t> weights;        // per job, sequence-independent
  std::vector<std::int64_t> interval_cost;  // -1 for infinite
};

inline IntView int_view(const Instance& inst, bool unit_weights) {
  IntView v;
  std::int64_t wmax = 0, emax = 0;
  for (const auto& j : inst.jobs) {
    if (!unit_weights && !rat_is_integer(j.w)) return v;
    const std::int64_t w = unit_weights ? 1 : rat_to_i64(j.w);
    v.weights.push_back(w);
    wmax = std::max(wmax, w);
  }
  for (const auto& iv : inst.tariff.intervals) {
    if (iv.cost.is_infinite()) {
      v.interval_cost.push_back(-1);
      continue;
    }
    if (!rat_is_integer(iv.cost.value())) return v;
    v.interval_cost.push_back(rat_to_i64(iv.cost.value()));
    emax = std::max(emax, v.interval_cost.back());
  }
  // Conservative overflow bound for sum w_j C_j + E.
  const std::int64_t hz = inst.tariff.horizon();
  const long double worst = static_cast<long double>(wmax + 1) * inst.jobs.size() * (hz + 1) +
                            static_cast<long double>(emax + 1) * (hz + 1);
  v.valid = worst < 4e18L;
  return v;
}

// Calls fn(counts, capacity) for every per-interval count vector in
// lexicographic order; infinite intervals stay at zero.
template <typename Fn>
inline void for_each_profile(const TariffFunction& tariff, Fn&& fn) {
  const std::size_t K = tariff.intervals.size();
  std::vector<std::int64_t> counts(K, 0), lens(K, 0);
  for (std::size_t k = 0; k < K; ++k)
    lens[k] = tariff.intervals[k].cost.is_finite()
                  ? tariff.intervals[k].end - tariff.intervals[k].start
                  : 0;
  std::int64_t capacity = 0;
  while (true) {
    fn(counts, capacity);
    std::size_t k = K;
    while (k-- > 0) {
      if (counts[k] < lens[k]) {
        ++counts[k];
        ++capacity;
        break;
      }
      capacity -= counts[k];
      counts[k] = 0;
      if (k == 0) return;
    }
  }
}

struct BestMinsum {
  bool found = false;
  std::int64_t total_int = 0;
  Rational total_rat;
  std::vector<std::int64_t> counts;
  std::vector<int> sequence;
};

}  // namespace oracle_detail

// Exact minimum over all reservation profiles for a fixed job order.
// unit_weights replaces every weight by 1 (the unweighted objective).
inline OracleResult opt_fixed_sequence(const Instance& inst, const std::vector<int>& sequence,
                                       const EnumerationBudget& budget = {},
                                       bool unit_weights = false) {
  const auto space = oracle_detail::profile_space(inst.tariff, budget.max_profiles);
  if (!space)
    throw BudgetExceeded("oracle: profile space exceeds budget of " +
                         std::to_string(budget.max_profiles));
  Instance work = inst;
  if (unit_weights)
    for (auto& j : work.jobs) j.w = 1;
  std::vector<std::int64_t> order_p;
  std::vector<std::size_t> order_idx;
  {
    std::vector<int> ids;
    for (const auto& j : work.jobs) ids.push_back(j.id);
    std::vector<char> used(ids.size(), 0);
    for (int id : sequence) {
      auto it = std::find(ids.begin(), ids.end(), id);
      if (it == ids.end()) throw std::invalid_argument("oracle: unknown job id in sequence");
      const auto pos = static_cast<std::size_t>(it - ids.begin());
      if (used[pos]) throw std::invalid_argument("oracle: duplicate job id in sequence");
      used[pos] = 1;
      order_idx.push_back(pos);
    }
    if (sequence.size() != work.jobs.size())
      throw std::invalid_argument("oracle: sequence is not a permutation");
    for (auto i : order_idx) order_p.push_back(work.jobs[i].p);
  }
  const std::int64_t total_work = work.total_processing();
  const auto iv_count = work.tariff.intervals.size();

  const auto ints = oracle_detail::int_view(work, false);
  oracle_detail::BestMinsum best;

  if (ints.valid) {
    std::vector<std::int64_t> wseq;
    for (auto i : order_idx) wseq.push_back(ints.weights[i]);
    oracle_detail::for_each_profile(work.tariff, [&](const std::vector<std::int64_t>& counts,
                                                     std::int64_t capacity) {
      if (capacity < total_work) return;
      std::int64_t total = 0;
      for (std::size_t k = 0; k < iv_count; ++k) total += counts[k] * ints.interval_cost[k];
      std::size_t k = 0;
      std::int64_t taken_in_k = 0;
      for (std::size_t idx = 0; idx < wseq.size(); ++idx) {
        std::int64_t remaining = order_p[idx];
        while (remaining > 0) {
          while (taken_in_k == counts[k]) {
            ++k;
            taken_in_k = 0;
          }
          const std::int64_t grab = std::min(remaining, counts[k] - taken_in_k);
          taken_in_k += grab;
          remaining -= grab;
        }
        const std::int64_t completion = work.tariff.intervals[k].start + taken_in_k;
        total += wseq[idx] * completion;
      }
      if (!best.found || total < best.total_int) {
        best.found = true;
        best.total_int = total;
        best.counts = counts;
      }
    });
    if (best.found) best.total_rat = Rational(best.total_int);
  } else {
    oracle_detail::for_each_profile(work.tariff, [&](const std::vector<std::int64_t>& counts,
                                                     std::int64_t capacity) {
      if (capacity < total_work) return;
      ReservationProfile prof{counts};
      const Rational total = evaluate_minsum(work, sequence, prof);
      if (!best.found || total < best.total_rat) {
        best.found = true;
        best.total_rat = total;
        best.counts = counts;
      }
    });
  }
  if (!best.found) throw std::runtime_error("oracle: no feasible profile");
  OracleResult out;
  out.total = best.total_rat;
  out.witness = place_sequence(work, sequence, ReservationProfile{best.counts},
                               unit_weights ? "sumcj" : "wsumcj");
  return out;
}

// Exact optimum of sum C_j + E: SPT is optimal for every reservation, so only
// profiles are enumerated.
inline OracleResult opt_unweighted(const Instance& inst, const EnumerationBudget& budget = {}) {
  return opt_fixed_sequence(inst, spt_order(inst.jobs), budget, /*unit_weights=*/true);
}

// Exact optimum of sum w_j C_j + E over all sequences and profiles.
inline OracleResult opt_weighted(const Instance& inst, const EnumerationBudget& budget = {}) {
  const auto space = oracle_detail::profile_space(inst.tariff, budget.max_profiles);
  if (!space)
    throw BudgetExceeded("oracle: profile space exceeds budget of " +
                         std::to_string(budget.max_profiles));
  {
    std::uint64_t fact = 1;
    for (std::size_t i = 2; i <= inst.jobs.size(); ++i) {
      fact *= i;
      if (fact > budget.max_permutations)
        throw BudgetExceeded("oracle: permutation space exceeds budget of " +
                             std::to_string(budget.max_permutations));
    }
  }
  std::vector<int> ids;
  for (const auto& j : inst.jobs) ids.push_back(j.id);
  std::sort(ids.begin(), ids.end());

  const std::int64_t total_work = inst.total_processing();
  const auto ints = oracle_detail::int_view(inst, false);
  oracle_detail::BestMinsum best;

  if (ints.valid && !inst.jobs.empty()) {
    std::vector<std::int64_t> p_of(ids.size()), w_of(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      for (std::size_t j = 0; j < inst.jobs.size(); ++j)
        if (inst.jobs[j].id == ids[i]) {
          p_of[i] = inst.jobs[j].p;
          w_of[i] = ints.weights[j];
        }
    }
    std::vector<std::int64_t> cumpos;  // completion of the c-th utilized slot
    oracle_detail::for_each_profile(inst.tariff, [&](const std::vector<std::int64_t>& counts,
                                                     std::int64_t capacity) {
      if (capacity < total_work) return;
      std::int64_t e_total = 0;
      cumpos.assign(1, 0);
      for (std::size_t k = 0; k < counts.size(); ++k) {
        e_total += counts[k] * ints.interval_cost[k];
        for (std::int64_t i = 0; i < counts[k]; ++i)
          cumpos.push_back(inst.tariff.intervals[k].start + i + 1);
      }
      std::vector<std::size_t> perm(ids.size());
      for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
      do {
        std::int64_t total = e_total, cum = 0;
        for (const auto i : perm) {
          cum += p_of[i];
          total += w_of[i] * cumpos[cum];
        }
        if (!best.found || total < best.total_int) {
          best.found = true;
          best.total_int = total;
          best.counts = counts;
          best.sequence.clear();
          for (const auto i : perm) best.sequence.push_back(ids[i]);
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
    });
    if (best.found) best.total_rat = Rational(best.total_int);
  } else {
    oracle_detail::for_each_profile(inst.tariff, [&](const std::vector<std::int64_t>& counts,
                                                     std::int64_t capacity) {
      if (capacity < total_work) return;
      ReservationProfile prof{counts};
      std::vector<int> perm = ids;
      do {
        const Rational total = evaluate_minsum(inst, perm, prof);
        if (!best.found || total < best.total_rat) {
          best.found = true;
          best.total_rat = total;
          best.counts = counts;
          best.sequence = perm;
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
    });
  }
  if (!best.found) throw std::runtime_error("oracle: no feasible profile");
  OracleResult out;
  out.total = best.total_rat;
  out.witness =
      place_sequence(inst, best.sequence, ReservationProfile{best.counts}, "wsumcj");
  return out;
}

// Exact optimum of effective makespan plus reservation cost: ceil(Z) slots
// chosen freely among the finite ones, so true subsets are enumerated.
inline OracleResult opt_makespan(const Instance& inst, const EnumerationBudget& budget = {}) {
  const LpLoads lp = solve_relaxed(inst);
  const std::int64_t need = static_cast<std::int64_t>(rat_ceil(lp.Z));
  std::vector<std::int64_t> finite_slots;
  std::vector<std::size_t> slot_interval;
  for (std::size_t k = 0; k < inst.tariff.intervals.size(); ++k) {
    const auto& iv = inst.tariff.intervals[k];
    if (!iv.cost.is_finite()) continue;
    for (std::int64_t t = iv.start; t < iv.end; ++t) {
      finite_slots.push_back(t);
      slot_interval.push_back(k);
    }
  }
  if (static_cast<std::int64_t>(finite_slots.size()) < need)
    throw std::runtime_error("oracle: insufficient finite capacity");
  {
    // Subset count C(F, need) against the budget.
    long double combos = 1;
    for (std::int64_t i = 0; i < need; ++i)
      combos *= static_cast<long double>(finite_slots.size() - i) / (i + 1);
    if (combos > static_cast<long double>(budget.max_profiles))
      throw BudgetExceeded("oracle: slot-subset space exceeds budget of " +
                           std::to_string(budget.max_profiles));
  }

  std::optional<Rational> best_total;
  std::vector<std::int64_t> best_counts;
  if (need == 0) {
    best_total = Rational(0);
    best_counts.assign(inst.tariff.intervals.size(), 0);
  } else {
    std::vector<std::int64_t> idx(need);
    for (std::int64_t i = 0; i < need; ++i) idx[i] = i;
    while (true) {
      Rational e_total = 0;
      for (const auto i : idx)
        e_total += inst.tariff.intervals[slot_interval[i]].cost.value();
      const std::int64_t last_end = finite_slots[idx.back()] + 1;
      const Rational total = e_total + detail::effective_makespan_at(last_end, lp.Z);
      if (!best_total || total < *best_total) {
        best_total = total;
        best_counts.assign(inst.tariff.intervals.size(), 0);
        for (const auto i : idx) ++best_counts[slot_interval[i]];
      }
      // Next combination in lexicographic order.
      std::int64_t pos = need - 1;
      while (pos >= 0 &&
             idx[pos] == static_cast<std::int64_t>(finite_slots.size()) - need + pos)
        --pos;
      if (pos < 0) break;
      ++idx[pos];
      for (std::int64_t q = pos + 1; q < need; ++q) idx[q] = idx[q - 1] + 1;
    }
  }

  OracleResult out;
  out.total = *best_total;
  out.witness = build_timetable(inst, lp, ReservationProfile{best_counts});
  // Report the same boundary-level objective as the solver.
  std::int64_t c_star = 0;
  for (std::size_t k = 0; k < best_counts.size(); ++k)
    if (best_counts[k] > 0)
      c_star = std::max(c_star, inst.tariff.intervals[k].start + best_counts[k]);
  out.witness.scheduling_cost = detail::effective_makespan_at(c_star, lp.Z);
  out.witness.total_cost = out.witness.scheduling_cost + out.witness.tariff_cost;
  return out;
}

}  // namespace tariffsched
