#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "tariffsched/instance.hpp"
#include "tariffsched/makespan.hpp"
#include "tariffsched/rational.hpp"
#include "tariffsched/tariff.hpp"

namespace tariffsched {

// Jobs sorted by nondecreasing processing time, ties by id; returns ids.
inline std::vector<int> spt_order(const std::vector<Job>& jobs) {
  std::vector<const Job*> ptr;
  ptr.reserve(jobs.size());
  for (const auto& j : jobs) ptr.push_back(&j);
  std::sort(ptr.begin(), ptr.end(), [](const Job* a, const Job* b) {
    if (a->p != b->p) return a->p < b->p;
    return a->id < b->id;
  });
  std::vector<int> out;
  out.reserve(ptr.size());
  for (auto* j : ptr) out.push_back(j->id);
  return out;
}

struct RegionJob {
  int id = 0;
  std::int64_t p = 1;
  Rational w;
};

// Minimum-cost sub-schedule of an ordered job block inside one region, with
// the block's slot usage and exact completion times.
struct RegionSolution {
  Rational cost;     // sum of w_j C_j plus the cost of every reserved slot
  BigInt sigma_ty;   // sum of reserved slot indices; canonical tie-break
  struct JobPlacement {
    int id = 0;
    std::int64_t completion = 0;
    std::vector<SlotFragment> fragments;
  };
  std::vector<JobPlacement> placements;  // sequence order
};

namespace detail {

struct RegionCandidate {
  RegionSolution sol;
  std::size_t jx;
  std::size_t guess_rank;
  int case_id;
};

inline BigInt selection_sigma_ty(const std::vector<SlotFragment>& frags) {
  BigInt s = 0;
  for (const auto& f : frags)
    for (std::int64_t i = 0; i < f.count; ++i) s += f.first_slot + i;
  return s;
}

// Rejection rule: an interior candidate point where some nonempty set of
// started jobs has fully completed would realize a split point inside the
// region, which the outer DP already models as two separate regions.
inline bool creates_interior_split(const std::vector<RegionSolution::JobPlacement>& placed,
                                   const std::vector<std::int64_t>& interior) {
  for (const std::int64_t q : interior) {
    std::size_t started = 0, completed = 0;
    for (const auto& pl : placed) {
      if (pl.fragments.empty()) continue;
      if (pl.fragments.front().first_slot < q) ++started;
      if (pl.completion <= q) ++completed;
      if (pl.completion == q) return true;  // completion on a candidate point
    }
    if (started == completed && completed >= 1) return true;
  }
  return false;
}

}  // namespace detail

// Optimal reservation for an ordered job block fully inside [ra, rb) with no
// interior split points; nullopt when no such sub-schedule exists.
// `candidates` may pass a precomputed split_point_candidates(tariff).
inline std::optional<RegionSolution> region_schedule(
    const TariffFunction& tariff, std::int64_t ra, std::int64_t rb,
    std::span<const RegionJob> jobs, const std::vector<std::int64_t>* candidates = nullptr) {
  RegionSolution empty;
  empty.cost = 0;
  empty.sigma_ty = 0;
  if (jobs.empty()) return empty;
  std::int64_t work = 0;
  for (const auto& j : jobs) work += j.p;
  if (finite_capacity(tariff, ra, rb) < work) return std::nullopt;

  std::vector<std::int64_t> owned;
  if (!candidates) {
    owned = split_point_candidates(tariff);
    candidates = &owned;
  }
  std::vector<std::int64_t> interior;
  for (const std::int64_t q : *candidates)
    if (q > ra && q < rb) interior.push_back(q);
  // A candidate point with no finite capacity left before the region end
  // would sit at or after every completion, so it always realizes a split.
  for (const std::int64_t q : interior)
    if (finite_capacity(tariff, q, rb) == 0) return std::nullopt;

  // Guess values: the distinct finite costs of intervals meeting the region.
  std::vector<Rational> guesses;
  for (const auto& iv : tariff.intervals) {
    if (iv.end <= ra || iv.start >= rb || !iv.cost.is_finite()) continue;
    guesses.push_back(iv.cost.value());
  }
  std::sort(guesses.begin(), guesses.end());
  guesses.erase(std::unique(guesses.begin(), guesses.end()), guesses.end());

  // Weight suffix sums: wsum[a] - wsum[b] = w_a + ... + w_{b-1}.
  std::vector<Rational> wpre(jobs.size() + 1, Rational(0));
  for (std::size_t i = 0; i < jobs.size(); ++i) wpre[i + 1] = wpre[i] + jobs[i].w;

  std::optional<detail::RegionCandidate> best;
  auto consider = [&](RegionSolution&& sol, std::size_t jx, std::size_t rank, int case_id) {
    if (detail::creates_interior_split(sol.placements, interior)) return;
    sol.cost = 0;
    sol.sigma_ty = 0;
    for (const auto& pl : sol.placements) {
      sol.cost += jobs[&pl - sol.placements.data()].w * pl.completion;
      for (const auto& f : pl.fragments) {
        sol.cost += tariff.intervals[f.interval].cost.value() * f.count;
        for (std::int64_t i = 0; i < f.count; ++i) sol.sigma_ty += f.first_slot + i;
      }
    }
    if (!best || sol.cost < best->sol.cost ||
        (sol.cost == best->sol.cost &&
         (sol.sigma_ty < best->sol.sigma_ty ||
          (sol.sigma_ty == best->sol.sigma_ty &&
           std::tie(jx, rank, case_id) < std::tie(best->jx, best->guess_rank, best->case_id)))))
      best = detail::RegionCandidate{std::move(sol), jx, rank, case_id};
  };

  for (std::size_t jx = 0; jx < jobs.size(); ++jx) {
    for (std::size_t rank = 0; rank < guesses.size(); ++rank) {
      const Rational& emax = guesses[rank];
      // Shared forward pass for the jobs before jx.
      std::vector<RegionSolution::JobPlacement> before;
      std::int64_t pos = ra;
      bool ok = true;
      for (std::size_t idx = 0; idx < jx && ok; ++idx) {
        const Rational bound = emax + (wpre[jx] - wpre[idx]);
        auto sel = threshold_reserve(tariff, pos, jobs[idx].p, bound, rb);
        if (!sel) {
          ok = false;
          break;
        }
        before.push_back({jobs[idx].id, *sel->last_slot + 1, std::move(sel->fragments)});
        pos = before.back().completion;
      }
      if (!ok) continue;

      // Case i: everything forward; the last interval of the region may stay
      // partially reserved.
      {
        std::vector<RegionSolution::JobPlacement> placed = before;
        std::int64_t fpos = pos;
        bool good = true;
        auto seljx = threshold_reserve(tariff, fpos, jobs[jx].p, emax, rb);
        if (seljx) {
          placed.push_back({jobs[jx].id, *seljx->last_slot + 1, std::move(seljx->fragments)});
          fpos = placed.back().completion;
          for (std::size_t idx = jx + 1; idx < jobs.size() && good; ++idx) {
            const Rational bound = emax - (wpre[idx] - wpre[jx]);
            auto sel = threshold_reserve(tariff, fpos, jobs[idx].p, bound, rb);
            if (!sel) {
              good = false;
              break;
            }
            placed.push_back({jobs[idx].id, *sel->last_slot + 1, std::move(sel->fragments)});
            fpos = placed.back().completion;
          }
          if (good) {
            RegionSolution sol;
            sol.placements = std::move(placed);
            consider(std::move(sol), jx, rank, 0);
          }
        }
      }

      // Case ii: jobs after jx anchored backwards at the region end, jx
      // placed in the remaining gap by the weighted single-slot solver.
      {
        std::vector<RegionSolution::JobPlacement> after;
        std::int64_t bpos = rb;
        bool good = true;
        for (std::size_t idx = jobs.size(); idx-- > jx + 1 && good;) {
          const Rational bound = emax - (wpre[idx] - wpre[jx]);
          auto sel = threshold_reserve_backward(tariff, bpos, jobs[idx].p, bound, pos);
          if (!sel) {
            good = false;
            break;
          }
          after.push_back({jobs[idx].id, *sel->last_slot + 1, sel->fragments});
          bpos = sel->fragments.front().first_slot;
        }
        if (good) {
          auto place = single_job_slot_selection(tariff, jobs[jx].p, pos, bpos, jobs[jx].w);
          if (place) {
            std::vector<RegionSolution::JobPlacement> placed = before;
            placed.push_back({jobs[jx].id, place->completion, place->selection.fragments});
            for (auto it = after.rbegin(); it != after.rend(); ++it) placed.push_back(*it);
            RegionSolution sol;
            sol.placements = std::move(placed);
            consider(std::move(sol), jx, rank, 1);
          }
        }
      }
    }
  }
  if (!best) return std::nullopt;
  return std::move(best->sol);
}

// ---------------------------------------------------------------------------
// Outer DP over (job prefix, split point candidate).
// ---------------------------------------------------------------------------

namespace detail {

struct DpEntry {
  Rational cost;
  BigInt sigma_ty;
  std::size_t prev_j = 0;
  std::size_t prev_t = 0;
};

// Fills Z[j][ti]: best cost of completing the first j jobs by points[ti].
inline std::vector<std::vector<std::optional<DpEntry>>> run_dp(
    const TariffFunction& tariff, const std::vector<RegionJob>& ordered,
    const std::vector<std::int64_t>& points) {
  const std::size_t T = points.size();
  const std::size_t n = ordered.size();
  std::vector<std::vector<std::optional<DpEntry>>> Z(n + 1,
                                                     std::vector<std::optional<DpEntry>>(T));
  for (std::size_t ti = 0; ti < T; ++ti) Z[0][ti] = DpEntry{Rational(0), BigInt(0), 0, 0};
  for (std::size_t ti = 1; ti < T; ++ti) {
    for (std::size_t j = 1; j <= n; ++j) {
      std::optional<DpEntry> best;
      auto consider = [&](const Rational& cost, const BigInt& sig, std::size_t pj,
                          std::size_t pt) {
        if (!best || cost < best->cost ||
            (cost == best->cost &&
             (sig < best->sigma_ty ||
              (sig == best->sigma_ty && std::tie(pt, pj) < std::tie(best->prev_t, best->prev_j)))))
          best = DpEntry{cost, sig, pj, pt};
      };
      for (std::size_t tip = 0; tip < ti; ++tip) {
        // Leaving [points[tip], points[ti]) without jobs.
        if (Z[j][tip]) consider(Z[j][tip]->cost, Z[j][tip]->sigma_ty, j, tip);
        for (std::size_t jp = 0; jp < j; ++jp) {
          if (!Z[jp][tip]) continue;
          auto rs = region_schedule(tariff, points[tip], points[ti],
                                    std::span<const RegionJob>(ordered.data() + jp, j - jp),
                                    &points);
          if (!rs) continue;
          consider(Z[jp][tip]->cost + rs->cost, Z[jp][tip]->sigma_ty + rs->sigma_ty, jp, tip);
        }
      }
      Z[j][ti] = best;
    }
  }
  return Z;
}

}  // namespace detail

namespace detail {

inline Schedule assemble_single_machine(const Instance& inst,
                                        const std::vector<RegionSolution::JobPlacement>& placed,
                                        const std::vector<Rational>& weights,
                                        const std::string& objective) {
  Schedule sched;
  sched.objective = objective;
  sched.profile.counts.assign(inst.tariff.intervals.size(), 0);
  sched.scheduling_cost = 0;
  sched.tariff_cost = 0;
  std::vector<std::vector<std::int64_t>> slots_by_interval(inst.tariff.intervals.size());
  for (std::size_t i = 0; i < placed.size(); ++i) {
    const auto& pl = placed[i];
    sched.completion_times[pl.id] = Rational(pl.completion);
    sched.scheduling_cost += weights[i] * pl.completion;
    std::vector<std::int64_t> slots;
    for (const auto& f : pl.fragments) {
      sched.profile.counts[f.interval] += f.count;
      sched.tariff_cost += inst.tariff.intervals[f.interval].cost.value() * f.count;
      for (std::int64_t s = 0; s < f.count; ++s) {
        slots.push_back(f.first_slot + s);
        slots_by_interval[f.interval].push_back(f.first_slot + s);
      }
    }
    std::sort(slots.begin(), slots.end());
    for (std::size_t a = 0; a < slots.size();) {
      std::size_t b = a;
      while (b + 1 < slots.size() && slots[b + 1] == slots[b] + 1) ++b;
      sched.segments.push_back(
          {pl.id, 0, Rational(slots[a]), Rational(slots[b] + 1)});
      a = b + 1;
    }
  }
  // Utilized slots must form a prefix of every interval; the canonical
  // tie-break above guarantees it, so treat a violation as a logic error.
  for (std::size_t k = 0; k < slots_by_interval.size(); ++k) {
    auto& s = slots_by_interval[k];
    std::sort(s.begin(), s.end());
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s[i] != inst.tariff.intervals[k].start + static_cast<std::int64_t>(i))
        throw std::logic_error("seqdp: reserved slots are not an interval prefix");
  }
  std::sort(sched.segments.begin(), sched.segments.end(),
            [](const ScheduleSegment& x, const ScheduleSegment& y) { return x.start < y.start; });
  sched.total_cost = sched.scheduling_cost + sched.tariff_cost;
  return sched;
}

}  // namespace detail

// Minimum-cost reservation decision for processing the jobs in the given id
// order; exact over all reservation decisions.
inline Schedule optimal_reservation(const Instance& inst, const std::vector<int>& sequence,
                                    const std::string& objective = "wsumcj") {
  if (inst.machines != 1)
    throw std::invalid_argument("optimal_reservation: single-machine instances only");
  if (sequence.size() != inst.jobs.size())
    throw std::invalid_argument("optimal_reservation: sequence is not a permutation");
  std::map<int, const Job*> by_id;
  for (const auto& j : inst.jobs) by_id[j.id] = &j;
  std::vector<RegionJob> ordered;
  ordered.reserve(sequence.size());
  for (int id : sequence) {
    auto it = by_id.find(id);
    if (it == by_id.end())
      throw std::invalid_argument("optimal_reservation: unknown job id in sequence");
    ordered.push_back({id, it->second->p, it->second->w});
    by_id.erase(it);
  }
  if (!by_id.empty()) throw std::invalid_argument("optimal_reservation: sequence misses jobs");

  const auto points = split_point_candidates(inst.tariff);
  const std::size_t T = points.size();
  const std::size_t n = ordered.size();

  if (n == 0) {
    Schedule sched;
    sched.objective = objective;
    sched.profile.counts.assign(inst.tariff.intervals.size(), 0);
    return sched;
  }

  const auto Z = detail::run_dp(inst.tariff, ordered, points);

  std::optional<std::size_t> final_t;
  for (std::size_t ti = 0; ti < T; ++ti) {
    if (!Z[n][ti]) continue;
    if (!final_t || Z[n][ti]->cost < Z[n][*final_t]->cost ||
        (Z[n][ti]->cost == Z[n][*final_t]->cost &&
         Z[n][ti]->sigma_ty < Z[n][*final_t]->sigma_ty))
      final_t = ti;
  }
  if (!final_t) throw std::runtime_error("optimal_reservation: no feasible reservation");

  // Reconstruct placements by replaying the winning chain.
  std::vector<RegionSolution::JobPlacement> placed(n);
  std::vector<Rational> weights(n);
  {
    std::size_t j = n, ti = *final_t;
    while (j > 0) {
      const auto& e = *Z[j][ti];
      if (e.prev_j < j) {
        auto rs = region_schedule(inst.tariff, points[e.prev_t], points[ti],
                                  std::span<const RegionJob>(ordered.data() + e.prev_j,
                                                             j - e.prev_j),
                                  &points);
        for (std::size_t i = 0; i < rs->placements.size(); ++i)
          placed[e.prev_j + i] = rs->placements[i];
      }
      j = e.prev_j;
      ti = e.prev_t;
    }
    for (std::size_t i = 0; i < n; ++i) weights[i] = ordered[i].w;
  }
  return detail::assemble_single_machine(inst, placed, weights, objective);
}

// Exact optimum of total completion time plus utilization cost: SPT order
// with an optimal reservation decision. Weights are treated as 1 regardless
// of the stored values.
inline Schedule solve_unweighted(const Instance& inst) {
  Instance unit = inst;
  for (auto& j : unit.jobs) j.w = 1;
  return optimal_reservation(unit, spt_order(unit.jobs), "sumcj");
}

}  // namespace tariffsched
