#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "tariffsched/instance.hpp"
#include "tariffsched/rational.hpp"

namespace tariffsched {

// A chosen set of slots, stored as per-interval runs ordered by time.
// Each fragment covers [first_slot, first_slot + count) inside one interval.
struct SlotFragment {
  std::size_t interval = 0;
  std::int64_t first_slot = 0;
  std::int64_t count = 0;
};

struct SlotSelection {
  std::vector<SlotFragment> fragments;
  Rational total_cost;
  std::optional<std::int64_t> last_slot;

  std::int64_t slot_count() const {
    std::int64_t n = 0;
    for (const auto& f : fragments) n += f.count;
    return n;
  }

  void add_fragment(const TariffFunction& tariff, std::size_t k, std::int64_t first,
                    std::int64_t count) {
    if (count <= 0) return;
    fragments.push_back({k, first, count});
    total_cost += tariff.intervals[k].cost.value() * count;
    const std::int64_t last = first + count - 1;
    if (!last_slot || *last_slot < last) last_slot = last;
  }

  std::vector<std::int64_t> slots() const {
    std::vector<std::int64_t> out;
    for (const auto& f : fragments)
      for (std::int64_t i = 0; i < f.count; ++i) out.push_back(f.first_slot + i);
    std::sort(out.begin(), out.end());
    return out;
  }
};

inline std::size_t interval_index_at(const TariffFunction& tariff, std::int64_t t) {
  if (t < 0 || t >= tariff.horizon()) throw std::out_of_range("slot index outside tariff horizon");
  std::size_t lo = 0, hi = tariff.intervals.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (tariff.intervals[mid].end <= t)
      lo = mid + 1;
    else
      hi = mid;
  }
  return lo;
}

inline Cost cost_at(const TariffFunction& tariff, std::int64_t t) {
  return tariff.intervals[interval_index_at(tariff, t)].cost;
}

// Number of finite-cost slots in [t1, t2).
inline std::int64_t finite_capacity(const TariffFunction& tariff, std::int64_t t1,
                                    std::int64_t t2) {
  std::int64_t n = 0;
  for (const auto& iv : tariff.intervals) {
    if (iv.start >= t2) break;
    if (!iv.cost.is_finite()) continue;
    const std::int64_t a = std::max(iv.start, t1);
    const std::int64_t b = std::min(iv.end, t2);
    if (a < b) n += b - a;
  }
  return n;
}

// End of the last finite-cost interval; no solver ever places work beyond it.
inline std::int64_t finite_horizon_end(const TariffFunction& tariff) {
  std::int64_t end = 0;
  for (const auto& iv : tariff.intervals)
    if (iv.cost.is_finite()) end = iv.end;
  return end;
}

// The p cheapest finite-cost slots in [t1, t2); ties prefer earlier slots,
// then the lower interval index. Within an interval the earliest slots of the
// clipped span are taken. Nullopt when fewer than p finite slots exist.
inline std::optional<SlotSelection> cheapest_slots(const TariffFunction& tariff, std::int64_t p,
                                                   std::int64_t t1, std::int64_t t2) {
  if (t1 > t2) throw std::invalid_argument("cheapest_slots: reversed window");
  SlotSelection sel;
  if (p == 0) return sel;
  struct Entry {
    Rational cost;
    std::size_t k;
    std::int64_t start;
    std::int64_t len;
  };
  std::vector<Entry> entries;
  for (std::size_t k = 0; k < tariff.intervals.size(); ++k) {
    const auto& iv = tariff.intervals[k];
    if (iv.start >= t2) break;
    if (!iv.cost.is_finite()) continue;
    const std::int64_t a = std::max(iv.start, t1);
    const std::int64_t b = std::min(iv.end, t2);
    if (a < b) entries.push_back({iv.cost.value(), k, a, b - a});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
    if (x.cost != y.cost) return x.cost < y.cost;
    return x.k < y.k;
  });
  std::int64_t remaining = p;
  std::vector<Entry> used;
  for (const auto& e : entries) {
    if (remaining == 0) break;
    const std::int64_t take = std::min(remaining, e.len);
    used.push_back({e.cost, e.k, e.start, take});
    remaining -= take;
  }
  if (remaining > 0) return std::nullopt;
  std::sort(used.begin(), used.end(),
            [](const Entry& x, const Entry& y) { return x.start < y.start; });
  for (const auto& e : used) sel.add_fragment(tariff, e.k, e.start, e.len);
  return sel;
}

// Evaluator for t2 -> total cost of the p cheapest slots in [t1, t2).
// Non-increasing in t2 and non-decreasing in p. min_t2_within_budget answers
// the inverse query by binary search over interval boundaries, then resolves
// the slot inside one interval; no step is proportional to the horizon.
class WindowCostFn {
 public:
  WindowCostFn(const TariffFunction& tariff, std::int64_t p, std::int64_t t1)
      : tariff_(&tariff), p_(p), t1_(t1) {
    for (std::size_t k = 0; k < tariff.intervals.size(); ++k) {
      const auto& iv = tariff.intervals[k];
      if (!iv.cost.is_finite() || iv.end <= t1) continue;
      clipped_.push_back({iv.cost.value(), k, std::max(iv.start, t1), iv.end});
    }
  }

  std::optional<Rational> operator()(std::int64_t t2) const { return eval(t2); }

  std::optional<Rational> eval(std::int64_t t2) const {
    if (t2 < t1_) throw std::invalid_argument("window cost: t2 before t1");
    if (p_ == 0) return Rational(0);
    struct Piece {
      Rational cost;
      std::int64_t len;
    };
    std::vector<Piece> pieces;
    for (const auto& c : clipped_) {
      const std::int64_t b = std::min(c.end, t2);
      if (c.start < b) pieces.push_back({c.cost, b - c.start});
    }
    std::sort(pieces.begin(), pieces.end(),
              [](const Piece& x, const Piece& y) { return x.cost < y.cost; });
    std::int64_t remaining = p_;
    Rational total = 0;
    for (const auto& pc : pieces) {
      if (remaining == 0) break;
      const std::int64_t take = std::min(remaining, pc.len);
      total += pc.cost * take;
      remaining -= take;
    }
    if (remaining > 0) return std::nullopt;
    return total;
  }

  // Smallest t2 with eval(t2) <= budget, or nullopt if none exists within the
  // finite horizon.
  std::optional<std::int64_t> min_t2_within_budget(const Rational& budget) const {
    if (budget < 0) return std::nullopt;
    if (p_ == 0) return t1_;
    if (clipped_.empty()) return std::nullopt;
    // Feasibility frontier: earliest t2 with p_ finite slots available.
    std::int64_t have = 0;
    std::int64_t first_feasible = -1;
    for (const auto& c : clipped_) {
      const std::int64_t len = c.end - c.start;
      if (have + len >= p_) {
        first_feasible = c.start + (p_ - have);
        break;
      }
      have += len;
    }
    if (first_feasible < 0) return std::nullopt;
    const auto at_first = eval(first_feasible);
    if (at_first && *at_first <= budget) return first_feasible;
    // Binary search over clipped interval ends, then resolve inside the
    // found interval.
    if (!check_end(clipped_.size() - 1, budget)) return std::nullopt;
    std::size_t lo_idx = 0, hi_idx = clipped_.size() - 1;
    while (lo_idx < hi_idx) {
      const std::size_t mid = (lo_idx + hi_idx) / 2;
      if (check_end(mid, budget))
        hi_idx = mid;
      else
        lo_idx = mid + 1;
    }
    // Answer lies in clipped_[lo_idx]: find the smallest in-interval point.
    const auto& c = clipped_[lo_idx];
    std::int64_t lo_m = std::max<std::int64_t>(first_feasible > c.start ? first_feasible - c.start : 1, 1);
    std::int64_t hi_m = c.end - c.start;
    while (lo_m < hi_m) {
      const std::int64_t mid = lo_m + (hi_m - lo_m) / 2;
      const auto v = eval(c.start + mid);
      if (v && *v <= budget)
        hi_m = mid;
      else
        lo_m = mid + 1;
    }
    return c.start + lo_m;
  }

 private:
  struct Clipped {
    Rational cost;
    std::size_t k;
    std::int64_t start;
    std::int64_t end;
  };

  bool check_end(std::size_t idx, const Rational& budget) const {
    const auto v = eval(clipped_[idx].end);
    return v && *v <= budget;
  }

  const TariffFunction* tariff_;
  std::int64_t p_;
  std::int64_t t1_;
  std::vector<Clipped> clipped_;
};

inline WindowCostFn cheapest_cost_monotone(const TariffFunction& tariff, std::int64_t p,
                                           std::int64_t t1) {
  return WindowCostFn(tariff, p, t1);
}

// Union over intervals of {s_k, s_k+1} plus the horizon end, clipped and
// deduplicated.
inline std::vector<std::int64_t> split_point_candidates(const TariffFunction& tariff) {
  std::set<std::int64_t> pts;
  const std::int64_t hz = tariff.horizon();
  for (const auto& iv : tariff.intervals) {
    pts.insert(iv.start);
    if (iv.start + 1 <= hz) pts.insert(iv.start + 1);
  }
  pts.insert(hz);
  return {pts.begin(), pts.end()};
}

// Scans slots from from_t and reserves each slot with cost <= bound until p
// slots are selected; the scan never passes limit_t2. Nullopt if the window
// is exhausted first.
inline std::optional<SlotSelection> threshold_reserve(const TariffFunction& tariff,
                                                      std::int64_t from_t, std::int64_t p,
                                                      const Rational& bound,
                                                      std::int64_t limit_t2) {
  SlotSelection sel;
  if (p == 0) return sel;
  std::int64_t remaining = p;
  for (std::size_t k = 0; k < tariff.intervals.size() && remaining > 0; ++k) {
    const auto& iv = tariff.intervals[k];
    if (iv.start >= limit_t2) break;
    if (iv.end <= from_t) continue;
    if (!iv.cost.is_finite() || iv.cost.value() > bound) continue;
    const std::int64_t a = std::max(iv.start, from_t);
    const std::int64_t b = std::min(iv.end, limit_t2);
    if (a >= b) continue;
    const std::int64_t take = std::min(remaining, b - a);
    sel.add_fragment(tariff, k, a, take);
    remaining -= take;
  }
  if (remaining > 0) return std::nullopt;
  return sel;
}

inline std::optional<SlotSelection> threshold_reserve(const TariffFunction& tariff,
                                                      std::int64_t from_t, std::int64_t p,
                                                      const Rational& bound) {
  return threshold_reserve(tariff, from_t, p, bound, tariff.horizon());
}

// Backward counterpart used when a block of jobs is anchored at a region end:
// scans slots downward from before_t and selects those with cost <= bound.
inline std::optional<SlotSelection> threshold_reserve_backward(const TariffFunction& tariff,
                                                               std::int64_t before_t,
                                                               std::int64_t p,
                                                               const Rational& bound,
                                                               std::int64_t limit_t1) {
  SlotSelection sel;
  if (p == 0) return sel;
  std::int64_t remaining = p;
  std::vector<SlotFragment> rev;
  for (std::size_t ki = tariff.intervals.size(); ki-- > 0 && remaining > 0;) {
    const auto& iv = tariff.intervals[ki];
    if (iv.end <= limit_t1) break;
    if (iv.start >= before_t) continue;
    if (!iv.cost.is_finite() || iv.cost.value() > bound) continue;
    const std::int64_t a = std::max(iv.start, limit_t1);
    const std::int64_t b = std::min(iv.end, before_t);
    if (a >= b) continue;
    const std::int64_t take = std::min(remaining, b - a);
    rev.push_back({ki, b - take, take});
    remaining -= take;
  }
  if (remaining > 0) return std::nullopt;
  std::reverse(rev.begin(), rev.end());
  for (const auto& f : rev) sel.add_fragment(tariff, f.interval, f.first_slot, f.count);
  return sel;
}

}  // namespace tariffsched
