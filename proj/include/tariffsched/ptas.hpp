#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "tariffsched/instance.hpp"
#include "tariffsched/placement.hpp"
#include "tariffsched/rational.hpp"
#include "tariffsched/tariff.hpp"

namespace tariffsched {

struct PtasOptions {
  // Job subsets are enumerated exhaustively over the positive-weight jobs;
  // the hard ceiling is 16.
  int max_positive_jobs = 12;
};

// round_weights output: weights and tariff costs share one integral scale so
// the two objective terms stay commensurate; positive weights are rounded up
// to integer powers of (1+eps).
struct RoundedInstance {
  Instance instance;
  Rational lambda;
};

inline RoundedInstance round_weights(const Instance& inst, const Rational& eps) {
  if (eps <= 0) throw std::invalid_argument("round_weights: eps must be positive");
  BigInt lambda = 1;
  for (const auto& j : inst.jobs) lambda = lcm(lambda, denominator(j.w));
  for (const auto& iv : inst.tariff.intervals)
    if (iv.cost.is_finite()) lambda = lcm(lambda, denominator(iv.cost.value()));
  RoundedInstance out;
  out.lambda = Rational(lambda);
  out.instance = inst;
  const Rational base = 1 + eps;
  for (auto& j : out.instance.jobs) {
    if (j.w == 0) continue;
    const Rational scaled = j.w * out.lambda;
    Rational pw = 1;
    while (pw < scaled) pw *= base;
    j.w = pw;
  }
  for (auto& iv : out.instance.tariff.intervals)
    if (iv.cost.is_finite()) iv.cost = Cost(iv.cost.value() * out.lambda);
  return out;
}

// ---------------------------------------------------------------------------
// Geometric budget grids.
// ---------------------------------------------------------------------------

struct PtasGrids {
  int nu = 1;
  Rational eta1, eta2;
  // B[0] = 0, B[i] = (1+eta1)^(i-1); AVG likewise. Both extended nu entries
  // past their nominal caps so that iterated round-ups along a chain of nu
  // links always stay representable.
  std::vector<Rational> B, AVG;
  Rational e_max;
  std::int64_t total_work = 0;
  std::vector<Rational> pow_eps;  // (1+eps)^0 .. (1+eps)^(nu+1)
};

namespace ptas_detail {

inline Rational first_finite_slots_cost(const TariffFunction& tariff, std::int64_t p) {
  Rational total = 0;
  std::int64_t remaining = p;
  for (const auto& iv : tariff.intervals) {
    if (remaining == 0) break;
    if (!iv.cost.is_finite()) continue;
    const std::int64_t take = std::min(remaining, iv.end - iv.start);
    total += iv.cost.value() * take;
    remaining -= take;
  }
  if (remaining > 0) throw std::invalid_argument("instance lacks capacity for its own work");
  return total;
}

inline std::vector<Rational> geometric_grid(const Rational& growth, const Rational& cap,
                                            int extra) {
  std::vector<Rational> grid;
  grid.push_back(Rational(0));
  Rational v = 1;
  grid.push_back(v);
  while (v < cap) {
    v *= growth;
    grid.push_back(v);
  }
  for (int i = 0; i < extra; ++i) {
    v *= growth;
    grid.push_back(v);
  }
  if (grid.size() > 200000) throw std::runtime_error("ptas: grid too large for this epsilon");
  return grid;
}

// Smallest grid index with grid[i] >= x; grid[0] = 0. Returns -1 when x lies
// beyond the grid (such links cannot belong to an optimum-tracking chain).
inline int grid_round_up(const std::vector<Rational>& grid, const Rational& x) {
  if (x <= 0) return 0;
  const auto it = std::lower_bound(grid.begin() + 1, grid.end(), x);
  if (it == grid.end()) return -1;
  return static_cast<int>(it - grid.begin());
}

}  // namespace ptas_detail

inline PtasGrids build_grids(const Instance& rounded, const Rational& eps) {
  Rational wsum = 0;
  for (const auto& j : rounded.jobs) wsum += j.w;
  if (wsum < 1) throw std::invalid_argument("build_grids: requires positive rounded weight");
  PtasGrids g;
  const Rational base = 1 + eps;
  {
    Rational pw = 1;
    int nu = 0;
    while (pw < wsum) {
      pw *= base;
      ++nu;
    }
    g.nu = std::max(1, nu);
  }
  // eta = min(eps/(2 nu), 2^(1/(nu-1)) - 1), the cap enforced exactly by
  // halving; nu <= 1 uses eps/2.
  Rational eta = g.nu <= 1 ? eps / 2 : eps / (2 * g.nu);
  if (g.nu >= 2) {
    auto pow_leq_2 = [&](const Rational& h) {
      Rational p = 1;
      const Rational b = 1 + h;
      for (int i = 0; i < g.nu - 1; ++i) p *= b;
      return p <= 2;
    };
    while (!pow_leq_2(eta)) eta /= 2;
  }
  g.eta1 = g.eta2 = eta;

  g.total_work = rounded.total_processing();
  g.e_max = ptas_detail::first_finite_slots_cost(rounded.tariff, g.total_work);

  g.pow_eps.assign(1, Rational(1));
  for (int i = 0; i < g.nu + 1; ++i) g.pow_eps.push_back(g.pow_eps.back() * base);

  g.B = ptas_detail::geometric_grid(1 + g.eta1, g.e_max, g.nu);
  g.AVG = ptas_detail::geometric_grid(1 + g.eta2, g.pow_eps[g.nu], g.nu);
  return g;
}

// ---------------------------------------------------------------------------
// DP state and the link subroutine.
// ---------------------------------------------------------------------------

struct PtasState {
  int u = 0;                  // iteration level this state belongs to
  std::uint32_t jobset = 0;   // not-yet-placed positive-weight jobs (bitmask)
  Rational b, avg;            // grid values
  std::int64_t t = 0;         // associated frontier time
};

// Minimum feasible frontier time extending Z1 (level u+1) to a state at the
// next level with job set jobset2 and bounds (b2, avg2); nullopt when the
// average-cost inequality or the budget cannot be met within the horizon.
inline std::optional<std::int64_t> transition(const Instance& rounded, const PtasGrids& grids,
                                              const PtasState& z1, std::uint32_t jobset2,
                                              const Rational& b2, const Rational& avg2,
                                              const std::vector<std::size_t>& positive_jobs) {
  if ((jobset2 & z1.jobset) != jobset2)
    throw std::invalid_argument("transition: jobset2 must be a subset of Z1's job set");
  if (z1.u < 1) throw std::invalid_argument("transition: Z1 must sit above level 0");
  const Rational P = grids.pow_eps[z1.u];  // (1+eps)^(u+1) for target level u
  const Rational residue = Rational(z1.t) * (z1.avg - P);

  std::int64_t tlb = 0;
  const Rational d2 = avg2 - P;
  if (d2 > 0) {
    const Rational x = residue / d2;
    if (x > rounded.tariff.horizon()) return std::nullopt;
    tlb = x <= 0 ? 0 : static_cast<std::int64_t>(rat_ceil(x));
  } else if (residue > 0) {
    return std::nullopt;
  }

  std::int64_t p_diff = 0;
  for (std::size_t bit = 0; bit < positive_jobs.size(); ++bit)
    if ((z1.jobset & (1u << bit)) && !(jobset2 & (1u << bit)))
      p_diff += rounded.jobs[positive_jobs[bit]].p;

  const Rational budget = b2 - z1.b;
  if (budget < 0) return std::nullopt;
  WindowCostFn fn(rounded.tariff, p_diff, z1.t);
  const auto tmin = fn.min_t2_within_budget(budget);
  if (!tmin) return std::nullopt;
  const std::int64_t t = std::max({z1.t, tlb, *tmin});
  if (t > rounded.tariff.horizon()) return std::nullopt;
  // The averaged-cost inequality must hold at the chosen time point.
  if (avg2 * t < P * t + residue) return std::nullopt;
  return t;
}

// Converts a weight-schedule (completion weights) plus a reservation into a
// time schedule: decreasing completion weight, ties by job id.
inline Schedule weight_to_time(const Instance& inst,
                               const std::map<int, Rational>& completion_weights,
                               const ReservationProfile& profile) {
  std::vector<std::pair<Rational, int>> order;
  for (const auto& [id, cw] : completion_weights) order.push_back({cw, id});
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<int> ids;
  ids.reserve(order.size());
  for (const auto& [cw, id] : order) ids.push_back(id);
  return place_sequence(inst, ids, profile, "wsumcj");
}

// ---------------------------------------------------------------------------
// The DP itself.
// ---------------------------------------------------------------------------

struct PtasChainLink {
  int u = 0;  // iteration that created the link (target level)
  std::uint32_t placed = 0;
  std::int64_t t1 = 0, t2 = 0;
  Rational b1, b2, avg1, avg2;
};

struct PtasRunInfo {
  Rational scaled_bound;  // b + avg*t(Z) in the scaled objective
  int nu = 0;
  std::vector<PtasChainLink> chain;  // top (u = nu-1) to bottom (u = 0)
};

inline Schedule ptas_run(const Instance& inst, const Rational& eps,
                         const PtasOptions& options = {}, PtasRunInfo* info = nullptr) {
  if (eps <= 0) throw std::invalid_argument("ptas_run: eps must be positive");
  if (inst.machines != 1) throw std::invalid_argument("ptas_run: single-machine instances only");
  const int hard_cap = 16;
  const int cap = std::min(options.max_positive_jobs, hard_cap);

  std::vector<int> zero_ids;
  std::vector<std::size_t> positive;
  for (std::size_t i = 0; i < inst.jobs.size(); ++i) {
    if (inst.jobs[i].w == 0)
      zero_ids.push_back(inst.jobs[i].id);
    else
      positive.push_back(i);
  }
  std::sort(zero_ids.begin(), zero_ids.end());
  if (static_cast<int>(positive.size()) > cap)
    throw std::invalid_argument("ptas_run: " + std::to_string(positive.size()) +
                                " positive-weight jobs exceed the enumeration limit of " +
                                std::to_string(cap));

  // All-zero-weight shortcut: only the reservation cost matters.
  if (positive.empty()) {
    const std::int64_t work = inst.total_processing();
    auto sel = cheapest_slots(inst.tariff, work, 0, inst.tariff.horizon());
    if (!sel) throw std::runtime_error("ptas_run: insufficient finite capacity");
    ReservationProfile prof;
    prof.counts.assign(inst.tariff.intervals.size(), 0);
    for (const auto& f : sel->fragments) prof.counts[f.interval] += f.count;
    if (info) {
      info->scaled_bound = sel->total_cost;
      info->nu = 0;
      info->chain.clear();
    }
    return place_sequence(inst, zero_ids, prof, "wsumcj");
  }

  const RoundedInstance rounded = round_weights(inst, eps);
  const PtasGrids grids = build_grids(rounded.instance, eps);
  const TariffFunction& tariff = rounded.instance.tariff;
  const std::int64_t t_fin = finite_horizon_end(tariff);
  const int nbits = static_cast<int>(positive.size());
  const std::uint32_t full = nbits == 32 ? ~0u : ((1u << nbits) - 1);

  // Per-mask rounded weight and work.
  std::vector<Rational> wsum(full + 1, Rational(0));
  std::vector<std::int64_t> psum(full + 1, 0);
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const int bit = std::countr_zero(mask);
    wsum[mask] = wsum[mask & (mask - 1)] + rounded.instance.jobs[positive[bit]].w;
    psum[mask] = psum[mask & (mask - 1)] + rounded.instance.jobs[positive[bit]].p;
  }

  struct State {
    std::uint32_t mask;
    int b_idx, avg_idx;
    std::int64_t t;
    std::int32_t parent;  // index into the previous level's vector
  };
  std::vector<std::vector<State>> levels(grids.nu + 1);
  levels[grids.nu] = {{full, 0, 0, 0, -1}};

  // Window-cost arrays: cost of the p cheapest slots in [t1, t) per integer t.
  std::map<std::pair<std::int64_t, std::int64_t>, std::vector<std::optional<Rational>>> cost_cache;
  auto window_costs = [&](std::int64_t t1, std::int64_t p)
      -> const std::vector<std::optional<Rational>>& {
    auto key = std::make_pair(t1, p);
    auto it = cost_cache.find(key);
    if (it != cost_cache.end()) return it->second;
    WindowCostFn fn(tariff, p, t1);
    std::vector<std::optional<Rational>> arr(t_fin + 1);
    for (std::int64_t t = t1; t <= t_fin; ++t) arr[t] = fn.eval(t);
    return cost_cache.emplace(key, std::move(arr)).first->second;
  };

  // Minimal grid average for each candidate frontier time: the smallest
  // avg2 in AVG with avg2*t >= P*t + t1*(avg1 - P).
  std::map<std::tuple<int, int, std::int64_t>, std::vector<std::optional<int>>> avg_cache;
  auto avg_targets = [&](int u1, int avg1_idx, std::int64_t t1)
      -> const std::vector<std::optional<int>>& {
    auto key = std::make_tuple(u1, avg1_idx, t1);
    auto it = avg_cache.find(key);
    if (it != avg_cache.end()) return it->second;
    const Rational P = grids.pow_eps[u1];
    const Rational avg1 = grids.AVG[avg1_idx];
    const Rational residue = Rational(t1) * (avg1 - P);
    std::vector<std::optional<int>> arr(t_fin + 1);
    for (std::int64_t t = t1; t <= t_fin; ++t) {
      if (t == 0) {
        arr[t] = 0;
        continue;
      }
      const Rational bound = P + residue / t;
      const int idx = ptas_detail::grid_round_up(grids.AVG, bound);
      if (idx >= 0) arr[t] = idx;
    }
    return avg_cache.emplace(key, std::move(arr)).first->second;
  };

  std::map<std::pair<int, Rational>, int> roundup_b_cache;
  auto round_b = [&](int b1_idx, const Rational& c) {
    auto key = std::make_pair(b1_idx, c);
    auto it = roundup_b_cache.find(key);
    if (it != roundup_b_cache.end()) return it->second;
    const int idx = ptas_detail::grid_round_up(grids.B, grids.B[b1_idx] + c);
    return roundup_b_cache.emplace(key, idx).first->second;  // -1 = beyond grid
  };

  for (int u = grids.nu - 1; u >= 0; --u) {
    // Candidate key -> (t, parent); kept minimal in t.
    std::unordered_map<std::uint64_t, std::pair<std::int64_t, std::int32_t>> next;
    const auto& src = levels[u + 1];
    for (std::size_t si = 0; si < src.size(); ++si) {
      const State& z1 = src[si];
      const auto& avg_arr = avg_targets(u + 1, z1.avg_idx, z1.t);
      std::uint32_t sub = z1.mask;
      while (true) {
        const bool allowed = u == 0 ? sub == 0 : wsum[sub] <= grids.pow_eps[u];
        if (allowed) {
          const std::int64_t p_diff = psum[z1.mask] - psum[sub];
          const auto& costs = window_costs(z1.t, p_diff);
          for (std::int64_t t = z1.t; t <= t_fin; ++t) {
            if (!costs[t] || !avg_arr[t]) continue;
            const int b2 = round_b(z1.b_idx, *costs[t]);
            if (b2 < 0) continue;
            const int a2 = *avg_arr[t];
            const std::uint64_t key = static_cast<std::uint64_t>(sub) |
                                      (static_cast<std::uint64_t>(b2) << 20) |
                                      (static_cast<std::uint64_t>(a2) << 40);
            auto [it, inserted] = next.try_emplace(key, t, static_cast<std::int32_t>(si));
            if (!inserted && t < it->second.first)
              it->second = {t, static_cast<std::int32_t>(si)};
          }
        }
        if (sub == 0) break;
        sub = (sub - 1) & z1.mask;
      }
    }
    // Materialize, then prune per mask by (b, avg, t) dominance.
    std::vector<State> states;
    states.reserve(next.size());
    for (const auto& [key, val] : next)
      states.push_back({static_cast<std::uint32_t>(key & 0xFFFFFu),
                        static_cast<int>((key >> 20) & 0xFFFFF),
                        static_cast<int>((key >> 40) & 0xFFFFF), val.first, val.second});
    std::sort(states.begin(), states.end(), [](const State& a, const State& b) {
      return std::tie(a.mask, a.b_idx, a.avg_idx, a.t) <
             std::tie(b.mask, b.b_idx, b.avg_idx, b.t);
    });
    std::vector<State> kept;
    std::size_t lo = 0;
    while (lo < states.size()) {
      std::size_t hi = lo;
      while (hi < states.size() && states[hi].mask == states[lo].mask) ++hi;
      for (std::size_t i = lo; i < hi; ++i) {
        bool dominated = false;
        for (std::size_t j = lo; j < hi && !dominated; ++j) {
          if (i == j) continue;
          const bool leq = states[j].b_idx <= states[i].b_idx &&
                           states[j].avg_idx <= states[i].avg_idx && states[j].t <= states[i].t;
          const bool strict = states[j].b_idx < states[i].b_idx ||
                              states[j].avg_idx < states[i].avg_idx || states[j].t < states[i].t;
          dominated = leq && (strict || j < i);
        }
        if (!dominated) kept.push_back(states[i]);
      }
      lo = hi;
    }
    if (kept.size() > 2000000) throw std::runtime_error("ptas: state budget exceeded");
    levels[u] = std::move(kept);
  }

  // Zero-weight jobs go after t(Z) at the cheapest slots; pick the state
  // minimizing b + append cost + avg * t(Z).
  const std::int64_t p0 = [&] {
    std::int64_t s = 0;
    for (const auto& j : inst.jobs)
      if (j.w == 0) s += j.p;
    return s;
  }();
  std::optional<std::size_t> best_idx;
  Rational best_value;
  std::optional<SlotSelection> best_append;
  for (std::size_t i = 0; i < levels[0].size(); ++i) {
    const State& z = levels[0][i];
    std::optional<SlotSelection> append;
    Rational append_cost = 0;
    if (p0 > 0) {
      append = cheapest_slots(tariff, p0, z.t, tariff.horizon());
      if (!append) continue;
      append_cost = append->total_cost;
    }
    const Rational value = grids.B[z.b_idx] + append_cost + grids.AVG[z.avg_idx] * z.t;
    if (!best_idx || value < best_value) {
      best_idx = i;
      best_value = value;
      best_append = append;
    }
  }
  if (!best_idx) throw std::runtime_error("ptas_run: no feasible schedule found");

  // Backtrack the chain, collect reserved slots and the placement order.
  std::vector<const State*> chain(grids.nu + 1);
  chain[0] = &levels[0][*best_idx];
  for (int u = 0; u < grids.nu; ++u)
    chain[u + 1] = &levels[u + 1][chain[u]->parent];

  ReservationProfile prof;
  prof.counts.assign(tariff.intervals.size(), 0);
  std::vector<int> order;
  if (info) {
    info->chain.clear();
    info->nu = grids.nu;
    info->scaled_bound = best_value;
  }
  for (int u = grids.nu - 1; u >= 0; --u) {
    const State& parent = *chain[u + 1];
    const State& child = *chain[u];
    const std::uint32_t placed = parent.mask & ~child.mask;
    if (info)
      info->chain.push_back({u, placed, parent.t, child.t, grids.B[parent.b_idx],
                             grids.B[child.b_idx], grids.AVG[parent.avg_idx],
                             grids.AVG[child.avg_idx]});
    const std::int64_t p_diff = psum[parent.mask] - psum[child.mask];
    if (p_diff > 0) {
      auto sel = cheapest_slots(tariff, p_diff, parent.t, child.t);
      if (!sel) throw std::logic_error("ptas_run: reconstruction lost feasibility");
      for (const auto& f : sel->fragments) prof.counts[f.interval] += f.count;
    }
    std::vector<int> ids;
    for (int bit = 0; bit < nbits; ++bit)
      if (placed & (1u << bit)) ids.push_back(inst.jobs[positive[bit]].id);
    std::sort(ids.begin(), ids.end());
    for (int id : ids) order.push_back(id);
  }
  if (best_append)
    for (const auto& f : best_append->fragments) prof.counts[f.interval] += f.count;
  for (int id : zero_ids) order.push_back(id);

  // Counts were collected from disjoint windows; reading them back as
  // interval prefixes only moves slots earlier and never raises the cost.
  return place_sequence(inst, order, prof, "wsumcj");
}

}  // namespace tariffsched
