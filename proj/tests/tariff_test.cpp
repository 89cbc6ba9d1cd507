#include <gtest/gtest.h>

#include <random>

#include "tariffsched/tariff.hpp"
#include "test_util.hpp"

using namespace tariffsched;
using tsx::mk_tariff;

namespace {

// Independent reference: all finite slot costs in a window, sorted.
std::vector<Rational> window_slot_costs(const TariffFunction& t, std::int64_t t1,
                                        std::int64_t t2) {
  std::vector<Rational> out;
  for (std::int64_t s = t1; s < t2; ++s) {
    const Cost c = cost_at(t, s);
    if (c.is_finite()) out.push_back(c.value());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(CostAt, Lookup) {
  const auto t = mk_tariff({{0, 2, "5"}, {2, 4, "0"}});
  EXPECT_EQ(cost_at(t, 1).value(), Rational(5));
  EXPECT_EQ(cost_at(t, 2).value(), Rational(0));
  EXPECT_THROW(cost_at(t, 4), std::out_of_range);
}

TEST(CheapestSlots, PicksFreeSlotsFirst) {
  const auto t = mk_tariff({{0, 2, "5"}, {2, 4, "0"}});
  const auto sel = cheapest_slots(t, 3, 0, 4);
  ASSERT_TRUE(sel);
  EXPECT_EQ(sel->total_cost, Rational(5));
  EXPECT_EQ(sel->slot_count(), 3);
  EXPECT_EQ(*sel->last_slot, 3);
  // Counts (1, 2): one paid slot in the first interval, both free slots.
  std::vector<std::int64_t> counts(2, 0);
  for (const auto& f : sel->fragments) counts[f.interval] += f.count;
  EXPECT_EQ(counts[0], 1);
  EXPECT_EQ(counts[1], 2);
}

TEST(CheapestSlots, EmptySelection) {
  const auto t = mk_tariff({{0, 2, "5"}, {2, 4, "0"}});
  const auto sel = cheapest_slots(t, 0, 1, 3);
  ASSERT_TRUE(sel);
  EXPECT_EQ(sel->total_cost, Rational(0));
  EXPECT_FALSE(sel->last_slot.has_value());
}

TEST(CheapestSlots, InsufficientCapacity) {
  const auto t = mk_tariff({{0, 2, "5"}});
  EXPECT_FALSE(cheapest_slots(t, 3, 0, 2));
}

TEST(CheapestSlots, MatchesNaiveMultiset) {
  std::mt19937_64 rng(42);
  for (int iter = 0; iter < 500; ++iter) {
    const auto t = tsx::random_tariff(rng, 5, 13, 6, /*allow_inf=*/true);
    const std::int64_t hz = t.horizon();
    std::int64_t t1 = static_cast<std::int64_t>(rng() % (hz + 1));
    std::int64_t t2 = static_cast<std::int64_t>(rng() % (hz + 1));
    if (t1 > t2) std::swap(t1, t2);
    const auto costs = window_slot_costs(t, t1, t2);
    const std::int64_t p = static_cast<std::int64_t>(rng() % (costs.size() + 2));
    const auto sel = cheapest_slots(t, p, t1, t2);
    if (p > static_cast<std::int64_t>(costs.size())) {
      EXPECT_FALSE(sel);
      continue;
    }
    ASSERT_TRUE(sel);
    Rational expect = 0;
    for (std::int64_t i = 0; i < p; ++i) expect += costs[i];
    EXPECT_EQ(sel->total_cost, expect);
    for (const auto s : sel->slots()) {
      EXPECT_GE(s, t1);
      EXPECT_LT(s, t2);
      EXPECT_TRUE(cost_at(t, s).is_finite());
    }
  }
}

TEST(WindowCost, CheaperSlotEntersWindow) {
  const auto t = mk_tariff({{0, 2, "5"}, {2, 4, "0"}});
  const auto fn = cheapest_cost_monotone(t, 1, 0);
  EXPECT_EQ(*fn(2), Rational(5));
  EXPECT_EQ(*fn(3), Rational(0));
}

TEST(WindowCost, ZeroSlotsIsConstantZero) {
  const auto t = mk_tariff({{0, 2, "5"}});
  const auto fn = cheapest_cost_monotone(t, 0, 0);
  EXPECT_EQ(*fn(0), Rational(0));
  EXPECT_EQ(*fn(2), Rational(0));
}

TEST(WindowCost, AgreesWithCheapestSlotsEverywhere) {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 200; ++iter) {
    const auto t = tsx::random_tariff(rng, 4, 10, 5, /*allow_inf=*/true);
    const std::int64_t hz = t.horizon();
    const std::int64_t t1 = static_cast<std::int64_t>(rng() % (hz + 1));
    const std::int64_t p = static_cast<std::int64_t>(rng() % 6);
    const auto fn = cheapest_cost_monotone(t, p, t1);
    std::optional<Rational> prev;
    for (std::int64_t t2 = t1; t2 <= hz; ++t2) {
      const auto via_fn = fn(t2);
      const auto via_sel = cheapest_slots(t, p, t1, t2);
      ASSERT_EQ(via_fn.has_value(), via_sel.has_value());
      if (via_fn) {
        EXPECT_EQ(*via_fn, via_sel->total_cost);
        if (prev) EXPECT_LE(*via_fn, *prev);  // non-increasing in t2
        prev = via_fn;
      }
    }
  }
}

TEST(WindowCost, NonDecreasingInP) {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 100; ++iter) {
    const auto t = tsx::random_tariff(rng, 4, 8, 5);
    const std::int64_t hz = t.horizon();
    for (std::int64_t p = 0; p + 1 <= hz; ++p) {
      const auto a = cheapest_cost_monotone(t, p, 0)(hz);
      const auto b = cheapest_cost_monotone(t, p + 1, 0)(hz);
      if (a && b) EXPECT_LE(*a, *b);
    }
  }
}

TEST(WindowCost, InverseSearchMatchesLinearScan) {
  std::mt19937_64 rng(13);
  for (int iter = 0; iter < 300; ++iter) {
    const auto t = tsx::random_tariff(rng, 4, 9, 5, /*allow_inf=*/true);
    const std::int64_t hz = t.horizon();
    const std::int64_t t1 = static_cast<std::int64_t>(rng() % (hz + 1));
    const std::int64_t p = static_cast<std::int64_t>(rng() % 5);
    const Rational budget(static_cast<std::int64_t>(rng() % 20));
    const auto fn = cheapest_cost_monotone(t, p, t1);
    std::optional<std::int64_t> naive;
    for (std::int64_t t2 = t1; t2 <= hz && !naive; ++t2) {
      const auto c = fn(t2);
      if (c && *c <= budget) naive = t2;
    }
    EXPECT_EQ(fn.min_t2_within_budget(budget), naive);
  }
}

TEST(SplitPoints, Definition) {
  EXPECT_EQ(split_point_candidates(mk_tariff({{0, 2, "5"}, {2, 4, "0"}})),
            (std::vector<std::int64_t>{0, 1, 2, 3, 4}));
  EXPECT_EQ(split_point_candidates(mk_tariff({{0, 1, "0"}})), (std::vector<std::int64_t>{0, 1}));
  EXPECT_EQ(split_point_candidates(mk_tariff({{0, 1, "1"}, {1, 2, "2"}, {2, 3, "3"}})),
            (std::vector<std::int64_t>{0, 1, 2, 3}));
}

TEST(SplitPoints, SortedUniqueWithEndpoints) {
  std::mt19937_64 rng(3);
  for (int iter = 0; iter < 100; ++iter) {
    const auto t = tsx::random_tariff(rng, 6, 9, 4);
    const auto pts = split_point_candidates(t);
    ASSERT_FALSE(pts.empty());
    EXPECT_EQ(pts.front(), 0);
    EXPECT_EQ(pts.back(), t.horizon());
    for (std::size_t i = 1; i < pts.size(); ++i) EXPECT_LT(pts[i - 1], pts[i]);
  }
}

TEST(ThresholdReserve, SkipsExpensiveSlots) {
  const auto t = mk_tariff({{0, 2, "5"}, {2, 4, "0"}});
  const auto sel = threshold_reserve(t, 0, 1, Rational(3));
  ASSERT_TRUE(sel);
  EXPECT_EQ(sel->slots(), (std::vector<std::int64_t>{2}));
  EXPECT_EQ(*sel->last_slot + 1, 3);
}

TEST(ThresholdReserve, TakesFirstQualifyingSlot) {
  const auto t = mk_tariff({{0, 2, "5"}, {2, 4, "0"}});
  const auto sel = threshold_reserve(t, 0, 1, Rational(5));
  ASSERT_TRUE(sel);
  EXPECT_EQ(sel->slots(), (std::vector<std::int64_t>{0}));
  EXPECT_EQ(*sel->last_slot + 1, 1);
}

TEST(ThresholdReserve, BoundBelowAllCosts) {
  const auto t = mk_tariff({{0, 2, "5"}, {2, 4, "0"}});
  EXPECT_FALSE(threshold_reserve(t, 0, 1, Rational(-1)));
}
