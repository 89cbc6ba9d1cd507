#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "tariffsched/instance.hpp"
#include "tariffsched/rational.hpp"
#include "tariffsched/tariff.hpp"

namespace tariffsched {

// ---------------------------------------------------------------------------
// Dense two-phase simplex over exact rationals. The relaxed makespan LP has
// at most machines*jobs+1 variables, so exactness is affordable and removes
// any snapping question around ceil(Z).
// ---------------------------------------------------------------------------

struct LinearProgram {
  struct Row {
    std::vector<Rational> a;
    Rational b;
    bool equality = false;
  };
  std::vector<Rational> c;  // minimize c.x, x >= 0
  std::vector<Row> rows;
};

struct LpSolution {
  Rational objective;
  std::vector<Rational> x;
};

namespace detail {

class SimplexTableau {
 public:
  explicit SimplexTableau(const LinearProgram& lp) : nvars_(lp.c.size()) {
    const std::size_t m = lp.rows.size();
    nslack_ = 0;
    for (const auto& r : lp.rows)
      if (!r.equality) ++nslack_;
    nart_ = 0;
    for (const auto& r : lp.rows)
      if (r.equality || r.b < 0) ++nart_;
    cols_ = nvars_ + nslack_ + nart_;
    rows_.assign(m, std::vector<Rational>(cols_ + 1, Rational(0)));
    basis_.assign(m, 0);
    blocked_.assign(cols_, false);

    std::size_t slack_at = nvars_;
    std::size_t art_at = nvars_ + nslack_;
    for (std::size_t i = 0; i < m; ++i) {
      const auto& r = lp.rows[i];
      for (std::size_t j = 0; j < nvars_; ++j) rows_[i][j] = r.a[j];
      rows_[i][cols_] = r.b;
      if (!r.equality) rows_[i][slack_at] = 1;
      // Normalize to nonnegative right-hand side.
      if (rows_[i][cols_] < 0)
        for (auto& v : rows_[i]) v = -v;
      if (r.equality || r.b < 0) {
        rows_[i][art_at] = 1;
        basis_[i] = art_at++;
      } else {
        basis_[i] = slack_at;
      }
      if (!r.equality) ++slack_at;
    }
  }

  LpSolution solve(const LinearProgram& lp) {
    if (nart_ > 0) {
      std::vector<Rational> phase1(cols_, Rational(0));
      for (std::size_t j = nvars_ + nslack_; j < cols_; ++j) phase1[j] = 1;
      const Rational art_sum = run(phase1);
      if (art_sum != 0) throw std::runtime_error("simplex: infeasible program");
      drop_artificials();
    }
    std::vector<Rational> obj(cols_, Rational(0));
    for (std::size_t j = 0; j < nvars_; ++j) obj[j] = lp.c[j];
    const Rational val = run(obj);
    LpSolution out;
    out.objective = val;
    out.x.assign(nvars_, Rational(0));
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (basis_[i] < nvars_) out.x[basis_[i]] = rows_[i][cols_];
    return out;
  }

 private:
  // Runs Bland-rule simplex for the given objective; returns its optimum.
  Rational run(const std::vector<Rational>& c) {
    std::vector<Rational> red(cols_ + 1, Rational(0));
    for (std::size_t j = 0; j < cols_; ++j) red[j] = c[j];
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const Rational coeff = c[basis_[i]];
      if (coeff == 0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) red[j] -= coeff * rows_[i][j];
    }
    while (true) {
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < cols_; ++j)
        if (red[j] < 0 && !blocked_[j]) {
          enter = j;
          break;
        }
      if (enter == cols_) return -red[cols_];
      std::size_t leave = rows_.size();
      Rational best_ratio;
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (rows_[i][enter] <= 0) continue;
        const Rational ratio = rows_[i][cols_] / rows_[i][enter];
        if (leave == rows_.size() || ratio < best_ratio ||
            (ratio == best_ratio && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave == rows_.size()) throw std::runtime_error("simplex: unbounded program");
      pivot(leave, enter, red);
    }
  }

  void pivot(std::size_t row, std::size_t col, std::vector<Rational>& red) {
    const Rational piv = rows_[row][col];
    for (auto& v : rows_[row]) v /= piv;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (i == row || rows_[i][col] == 0) continue;
      const Rational f = rows_[i][col];
      for (std::size_t j = 0; j <= cols_; ++j) rows_[i][j] -= f * rows_[row][j];
    }
    if (red[col] != 0) {
      const Rational f = red[col];
      for (std::size_t j = 0; j <= cols_; ++j) red[j] -= f * rows_[row][j];
    }
    basis_[row] = col;
  }

  void drop_artificials() {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (basis_[i] < nvars_ + nslack_) continue;
      // Basic artificial at value zero; pivot it out on any usable column.
      std::size_t col = cols_;
      for (std::size_t j = 0; j < nvars_ + nslack_; ++j)
        if (rows_[i][j] != 0) {
          col = j;
          break;
        }
      if (col != cols_) {
        std::vector<Rational> dummy(cols_ + 1, Rational(0));
        pivot(i, col, dummy);
      }
    }
    for (std::size_t j = nvars_ + nslack_; j < cols_; ++j) blocked_[j] = true;
  }

  std::size_t nvars_, nslack_ = 0, nart_ = 0, cols_ = 0;
  std::vector<std::vector<Rational>> rows_;
  std::vector<std::size_t> basis_;
  std::vector<bool> blocked_;
};

}  // namespace detail

inline LpSolution solve_lp(const LinearProgram& lp) {
  detail::SimplexTableau tab(lp);
  return tab.solve(lp);
}

// ---------------------------------------------------------------------------
// Relaxed preemptive makespan on unrelated machines (no tariffs).
// ---------------------------------------------------------------------------

struct LpLoads {
  Rational Z;
  // loads[i][j]: time job j receives on machine i; exact rationals satisfying
  // sum_i loads[i][j]/p_ij = 1, sum_i loads[i][j] <= Z, sum_j loads[i][j] <= Z.
  std::vector<std::vector<Rational>> loads;
};

inline std::int64_t processing_time_on(const Job& j, int machine) {
  if (j.p_per_machine) return (*j.p_per_machine)[machine];
  return machine == 0 ? j.p : kInfiniteTime;
}

inline LpLoads solve_relaxed(const Instance& inst) {
  const int m = inst.machines;
  const int n = static_cast<int>(inst.jobs.size());
  LpLoads out;
  out.loads.assign(m, std::vector<Rational>(n, Rational(0)));
  if (n == 0) {
    out.Z = 0;
    return out;
  }
  // Variable layout: one per finite (i, j) pair, then Z.
  std::vector<std::vector<int>> var(m, std::vector<int>(n, -1));
  int nv = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      if (processing_time_on(inst.jobs[j], i) != kInfiniteTime) var[i][j] = nv++;
  for (int j = 0; j < n; ++j) {
    bool any = false;
    for (int i = 0; i < m; ++i) any |= var[i][j] >= 0;
    if (!any) throw std::invalid_argument("solve_relaxed: job cannot run on any machine");
  }
  const int zvar = nv;
  LinearProgram lp;
  lp.c.assign(nv + 1, Rational(0));
  lp.c[zvar] = 1;
  for (int j = 0; j < n; ++j) {
    LinearProgram::Row frac{std::vector<Rational>(nv + 1, Rational(0)), Rational(1), true};
    LinearProgram::Row jtime{std::vector<Rational>(nv + 1, Rational(0)), Rational(0), false};
    jtime.a[zvar] = -1;
    for (int i = 0; i < m; ++i) {
      if (var[i][j] < 0) continue;
      frac.a[var[i][j]] = Rational(1, processing_time_on(inst.jobs[j], i));
      jtime.a[var[i][j]] = 1;
    }
    lp.rows.push_back(std::move(frac));
    lp.rows.push_back(std::move(jtime));
  }
  for (int i = 0; i < m; ++i) {
    LinearProgram::Row mload{std::vector<Rational>(nv + 1, Rational(0)), Rational(0), false};
    mload.a[zvar] = -1;
    for (int j = 0; j < n; ++j)
      if (var[i][j] >= 0) mload.a[var[i][j]] = 1;
    lp.rows.push_back(std::move(mload));
  }
  const auto sol = solve_lp(lp);
  out.Z = sol.objective;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      if (var[i][j] >= 0) out.loads[i][j] = sol.x[var[i][j]];
  return out;
}

// ---------------------------------------------------------------------------
// Reservation choice: place ceil(Z) slots and search the best completion
// boundary C*, improving each candidate with the slot replacement rule.
// ---------------------------------------------------------------------------

struct CStarCandidate {
  std::size_t k = 0;
  std::int64_t c_star = 0;
  ReservationProfile profile;
  Rational effective_makespan;
  Rational tariff_cost;
  Rational total;
};

namespace detail {

inline Rational effective_makespan_at(std::int64_t c_star, const Rational& Z) {
  if (rat_is_integer(Z)) return Rational(c_star);
  const Rational frac = Z - Rational(rat_floor(Z));
  return Rational(c_star - 1) + frac;
}

inline ReservationProfile selection_to_profile(const TariffFunction& tariff,
                                               const SlotSelection& sel) {
  ReservationProfile prof;
  prof.counts.assign(tariff.intervals.size(), 0);
  for (const auto& f : sel.fragments) prof.counts[f.interval] += f.count;
  return prof;
}

}  // namespace detail

inline std::optional<CStarCandidate> choose_reservation(const Rational& Z,
                                                        const TariffFunction& tariff) {
  const std::int64_t need = static_cast<std::int64_t>(rat_ceil(Z));
  if (need <= 0) {
    CStarCandidate c;
    c.profile.counts.assign(tariff.intervals.size(), 0);
    c.effective_makespan = 0;
    c.total = 0;
    return c;
  }
  if (finite_capacity(tariff, 0, tariff.horizon()) < need) return std::nullopt;

  std::optional<CStarCandidate> best;
  for (std::size_t k = 0; k < tariff.intervals.size(); ++k) {
    const auto& ik = tariff.intervals[k];
    const bool contains_need = ik.start < need && need <= ik.end;
    if (ik.start < need && !contains_need) continue;  // cannot host C*
    std::int64_t c_init = std::max(ik.start, need);
    // Infinite intervals earlier in the horizon can leave fewer than `need`
    // finite slots before c_init; push C* into I_k just far enough.
    const std::int64_t have = finite_capacity(tariff, 0, c_init);
    if (have < need) {
      if (!ik.cost.is_finite()) continue;
      const std::int64_t deficit = need - have;
      if (ik.end - c_init < deficit) continue;
      c_init += deficit;
    }
    auto sel = cheapest_slots(tariff, need, 0, c_init);
    if (!sel) continue;
    auto counts = detail::selection_to_profile(tariff, *sel).counts;

    if (ik.cost.is_finite()) {
      const Rational ek = ik.cost.value();
      while (true) {
        // Most expensive interval currently holding reserved slots, besides k.
        std::size_t l = tariff.intervals.size();
        for (std::size_t h = 0; h < tariff.intervals.size(); ++h) {
          if (h == k || counts[h] == 0) continue;
          if (l == tariff.intervals.size() ||
              tariff.intervals[h].cost.value() > tariff.intervals[l].cost.value())
            l = h;
        }
        if (l == tariff.intervals.size()) break;
        if (!(tariff.intervals[l].cost.value() > ek + 1)) break;
        const std::int64_t room = (ik.end - ik.start) - counts[k];
        const std::int64_t q = std::min(counts[l], room);
        if (q <= 0) break;
        counts[l] -= q;
        counts[k] += q;
      }
    }

    CStarCandidate cand;
    cand.k = k;
    cand.profile.counts = counts;
    cand.c_star = 0;
    cand.tariff_cost = 0;
    for (std::size_t h = 0; h < counts.size(); ++h) {
      if (counts[h] == 0) continue;
      cand.c_star = std::max(cand.c_star, tariff.intervals[h].start + counts[h]);
      cand.tariff_cost += tariff.intervals[h].cost.value() * counts[h];
    }
    cand.effective_makespan = detail::effective_makespan_at(cand.c_star, Z);
    cand.total = cand.effective_makespan + cand.tariff_cost;
    if (!best || cand.total < best->total ||
        (cand.total == best->total && cand.c_star < best->c_star))
      best = std::move(cand);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Timetable extraction: machine-job matching decomposition inside reserved
// slots, fractional preemptions only within a slot.
// ---------------------------------------------------------------------------

inline Schedule build_timetable(const Instance& inst, const LpLoads& lp,
                                const ReservationProfile& profile) {
  const int m = inst.machines;
  const int n = static_cast<int>(inst.jobs.size());
  const auto& tariff = inst.tariff;
  const std::int64_t need = static_cast<std::int64_t>(rat_ceil(lp.Z));
  if (profile.capacity() < need)
    throw std::invalid_argument("build_timetable: profile smaller than ceil(Z)");

  // Real positions of utilized slots, in time order.
  std::vector<std::int64_t> slots;
  for (std::size_t k = 0; k < profile.counts.size(); ++k)
    for (std::int64_t i = 0; i < profile.counts[k]; ++i)
      slots.push_back(tariff.intervals[k].start + i);
  std::sort(slots.begin(), slots.end());

  Schedule sched;
  sched.objective = "makespan";
  sched.profile = profile;
  sched.tariff_cost = 0;
  for (std::size_t k = 0; k < profile.counts.size(); ++k)
    if (profile.counts[k] > 0) {
      if (tariff.intervals[k].cost.is_infinite())
        throw std::invalid_argument("build_timetable: profile reserves infinite-cost slots");
      sched.tariff_cost += tariff.intervals[k].cost.value() * profile.counts[k];
    }

  auto loads = lp.loads;
  std::vector<Rational> rowsum(m, Rational(0)), colsum(n, Rational(0));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      rowsum[i] += loads[i][j];
      colsum[j] += loads[i][j];
    }
  for (int i = 0; i < m; ++i)
    if (rowsum[i] > lp.Z) throw std::invalid_argument("build_timetable: machine overloaded");
  for (int j = 0; j < n; ++j)
    if (colsum[j] > lp.Z) throw std::invalid_argument("build_timetable: job overloaded");

  struct VirtualSegment {
    int machine, job;
    Rational start, end;
  };
  std::vector<VirtualSegment> vsegs;

  Rational now = 0;  // virtual clock
  const Rational bound = lp.Z;
  auto any_load = [&] {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j)
        if (loads[i][j] > 0) return true;
    return false;
  };

  while (any_load()) {
    const Rational remaining = bound - now;
    std::vector<int> match_job(m, -1), match_machine(n, -1);
    // Alternating-path augmentation; paths only add matched vertices, so
    // earlier coverage survives later passes.
    auto augment_machine = [&](int start) {
      std::vector<char> seen(n, 0);
      auto dfs = [&](auto&& self, int mi) -> bool {
        for (int j = 0; j < n; ++j) {
          if (seen[j] || loads[mi][j] <= 0) continue;
          seen[j] = 1;
          if (match_machine[j] < 0 || self(self, match_machine[j])) {
            match_machine[j] = mi;
            match_job[mi] = j;
            return true;
          }
        }
        return false;
      };
      return dfs(dfs, start);
    };
    // Job-side coverage may legitimately drop a non-tight job from the
    // matching (a trade), not just extend it; plain augmentation is not
    // enough to cover every tight job.
    auto augment_job = [&](int start) {
      std::vector<char> seen(m, 0);
      auto dfs = [&](auto&& self, int jj) -> bool {
        for (int i = 0; i < m; ++i) {
          if (seen[i] || loads[i][jj] <= 0) continue;
          seen[i] = 1;
          const int old = match_job[i];
          const bool old_tight = old >= 0 && colsum[old] == remaining;
          if (old < 0 || !old_tight || self(self, old)) {
            if (old >= 0 && match_machine[old] == i) match_machine[old] = -1;
            match_machine[jj] = i;
            match_job[i] = jj;
            return true;
          }
        }
        return false;
      };
      return dfs(dfs, start);
    };
    std::vector<int> machine_order(m);
    for (int i = 0; i < m; ++i) machine_order[i] = i;
    std::stable_sort(machine_order.begin(), machine_order.end(), [&](int a, int b) {
      if (rowsum[a] != rowsum[b]) return rowsum[a] > rowsum[b];
      return a < b;
    });
    // Tight machines, tight jobs, then a maximal extension for throughput.
    for (int i : machine_order)
      if (rowsum[i] == remaining && rowsum[i] > 0 && match_job[i] < 0)
        if (!augment_machine(i))
          throw std::logic_error("build_timetable: tight machine left uncovered");
    for (int j = 0; j < n; ++j)
      if (colsum[j] == remaining && colsum[j] > 0 && match_machine[j] < 0)
        if (!augment_job(j)) throw std::logic_error("build_timetable: tight job left uncovered");
    for (int i : machine_order)
      if (match_job[i] < 0 && rowsum[i] > 0) augment_machine(i);

    Rational delta = remaining;
    for (int i = 0; i < m; ++i) {
      if (match_job[i] >= 0)
        delta = std::min(delta, loads[i][match_job[i]]);
      else
        delta = std::min(delta, remaining - rowsum[i]);
    }
    for (int j = 0; j < n; ++j)
      if (match_machine[j] < 0) delta = std::min(delta, remaining - colsum[j]);
    if (delta <= 0) throw std::logic_error("build_timetable: no progress");
    for (int i = 0; i < m; ++i) {
      if (match_job[i] < 0) continue;
      const int j = match_job[i];
      vsegs.push_back({i, j, now, now + delta});
      loads[i][j] -= delta;
      rowsum[i] -= delta;
      colsum[j] -= delta;
    }
    now += delta;
  }

  // Map virtual time [0, Z) into the reserved slots: unit q lands in slots[q].
  for (const auto& vs : vsegs) {
    Rational a = vs.start;
    while (a < vs.end) {
      const std::int64_t q = static_cast<std::int64_t>(rat_floor(a));
      const Rational unit_end(q + 1);
      const Rational b = std::min(vs.end, unit_end);
      ScheduleSegment seg;
      seg.job = inst.jobs[vs.job].id;
      seg.machine = vs.machine;
      seg.start = Rational(slots[q]) + (a - q);
      seg.end = Rational(slots[q]) + (b - q);
      sched.segments.push_back(seg);
      a = b;
    }
  }
  std::sort(sched.segments.begin(), sched.segments.end(),
            [](const ScheduleSegment& x, const ScheduleSegment& y) {
              if (x.start != y.start) return x.start < y.start;
              if (x.machine != y.machine) return x.machine < y.machine;
              return x.job < y.job;
            });
  // Merge back-to-back fragments of the same job on the same machine.
  std::vector<ScheduleSegment> merged;
  for (const auto& s : sched.segments) {
    if (!merged.empty() && merged.back().job == s.job && merged.back().machine == s.machine &&
        merged.back().end == s.start)
      merged.back().end = s.end;
    else
      merged.push_back(s);
  }
  sched.segments = std::move(merged);

  Rational cmax = 0;
  for (const auto& s : sched.segments) {
    auto it = sched.completion_times.find(s.job);
    if (it == sched.completion_times.end() || it->second < s.end)
      sched.completion_times[s.job] = s.end;
    cmax = std::max(cmax, s.end);
  }
  for (const auto& j : inst.jobs)
    if (!sched.completion_times.count(j.id)) sched.completion_times[j.id] = 0;
  sched.scheduling_cost = cmax;
  sched.total_cost = sched.scheduling_cost + sched.tariff_cost;
  return sched;
}

// ---------------------------------------------------------------------------
// Weighted single-job placement: minimize w*C + slot cost over all choices of
// p slots in the window, C being the end of the last chosen slot.
// ---------------------------------------------------------------------------

struct SingleJobPlacement {
  SlotSelection selection;
  std::int64_t completion = 0;
  Rational cost;       // w*completion + selection cost
  std::int64_t sigma_ty = 0;  // sum of chosen slot indices; earlier-slots tie-break
};

inline std::optional<SingleJobPlacement> single_job_slot_selection(const TariffFunction& tariff,
                                                                   std::int64_t p,
                                                                   std::int64_t t1,
                                                                   std::int64_t t2,
                                                                   const Rational& w) {
  if (p <= 0) throw std::invalid_argument("single_job_slot_selection: p must be positive");
  std::optional<SingleJobPlacement> best;
  std::optional<std::size_t> best_k;
  for (std::size_t k = 0; k < tariff.intervals.size(); ++k) {
    const auto& iv = tariff.intervals[k];
    if (!iv.cost.is_finite()) continue;
    const std::int64_t clip_start = std::max(iv.start, t1);
    const std::int64_t clip_end = std::min(iv.end, t2);
    if (clip_start >= clip_end) continue;
    const std::int64_t cap_before = finite_capacity(tariff, t1, clip_start);
    const std::int64_t m_lo = std::max<std::int64_t>(1, p - cap_before);
    const std::int64_t m_hi = std::min<std::int64_t>(p, clip_end - clip_start);
    if (m_lo > m_hi) continue;

    auto g = [&](std::int64_t mm) -> Rational {
      const auto earlier = cheapest_slots(tariff, p - mm, t1, clip_start);
      return w * (clip_start + mm) + iv.cost.value() * mm + earlier->total_cost;
    };
    // g is convex in m: one more slot here trades against the most expensive
    // retained earlier slot, whose cost is non-increasing.
    std::int64_t lo = m_lo, hi = m_hi;
    while (lo < hi) {
      const std::int64_t mid = lo + (hi - lo) / 2;
      if (g(mid + 1) - g(mid) >= 0)
        hi = mid;
      else
        lo = mid + 1;
    }
    const std::int64_t m_opt = lo;
    SingleJobPlacement cand;
    cand.completion = clip_start + m_opt;
    cand.cost = g(m_opt);
    auto earlier = cheapest_slots(tariff, p - m_opt, t1, clip_start);
    cand.selection = *earlier;
    cand.selection.add_fragment(tariff, k, clip_start, m_opt);
    for (const auto s : cand.selection.slots()) cand.sigma_ty += s;
    if (!best || cand.cost < best->cost ||
        (cand.cost == best->cost &&
         (cand.sigma_ty < best->sigma_ty ||
          (cand.sigma_ty == best->sigma_ty &&
           (cand.completion < best->completion ||
            (cand.completion == best->completion && k < *best_k)))))) {
      best = std::move(cand);
      best_k = k;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Full solver: LP relaxation, reservation choice, timetable extraction.
// ---------------------------------------------------------------------------

inline Schedule makespan_solve(const Instance& inst) {
  Schedule empty;
  empty.objective = "makespan";
  empty.profile.counts.assign(inst.tariff.intervals.size(), 0);
  if (inst.jobs.empty()) return empty;

  const LpLoads lp = solve_relaxed(inst);
  const auto cand = choose_reservation(lp.Z, inst.tariff);
  if (!cand) throw std::runtime_error("makespan_solve: insufficient finite capacity");
  Schedule sched = build_timetable(inst, lp, cand->profile);
  // Report the boundary-level objective: the fractional remainder of Z sits
  // in the last reserved slot for every candidate alike.
  sched.scheduling_cost = cand->effective_makespan;
  sched.total_cost = sched.scheduling_cost + sched.tariff_cost;
  return sched;
}

}  // namespace tariffsched
