#include <gtest/gtest.h>

#include <random>

#include "tariffsched/audit.hpp"
#include "tariffsched/generator.hpp"
#include "tariffsched/makespan.hpp"
#include "tariffsched/oracle.hpp"
#include "test_util.hpp"

using namespace tariffsched;
using tsx::mk_instance;
using tsx::mk_tariff;

TEST(SolveRelaxed, SingleMachineIsTotalWork) {
  const auto inst = mk_instance({{1, 3, "0"}}, {{0, 6, "0"}});
  EXPECT_EQ(solve_relaxed(inst).Z, Rational(3));
}

TEST(SolveRelaxed, TwoJobsTwoMachines) {
  Instance inst = mk_instance({{1, 2, "0"}, {2, 2, "0"}}, {{0, 8, "0"}}, 2);
  inst.jobs[0].p_per_machine = std::vector<std::int64_t>{2, 2};
  inst.jobs[1].p_per_machine = std::vector<std::int64_t>{2, 2};
  EXPECT_EQ(solve_relaxed(inst).Z, Rational(2));
}

TEST(SolveRelaxed, SplittingOneJobDoesNotBeatItsTime) {
  Instance inst = mk_instance({{1, 2, "0"}}, {{0, 8, "0"}}, 2);
  inst.jobs[0].p_per_machine = std::vector<std::int64_t>{2, 2};
  // A job may not run on two machines at once: Z = 2 despite the split.
  const auto lp = solve_relaxed(inst);
  EXPECT_EQ(lp.Z, Rational(2));
  Rational frac = 0;
  for (int i = 0; i < 2; ++i) frac += lp.loads[i][0] / 2;
  EXPECT_EQ(frac, Rational(1));
}

TEST(SolveRelaxed, LoadInvariantsHoldExactly) {
  std::mt19937_64 rng(5);
  for (int seed = 0; seed < 60; ++seed) {
    GenParams gp;
    gp.n = 1 + seed % 4;
    gp.k = 1 + seed % 3;
    gp.machines = 1 + seed % 3;
    gp.seed = 100 + seed;
    const Instance inst = generate_instance(gp);
    const auto lp = solve_relaxed(inst);
    for (std::size_t j = 0; j < inst.jobs.size(); ++j) {
      Rational frac = 0, time = 0;
      for (int i = 0; i < inst.machines; ++i) {
        const auto p = processing_time_on(inst.jobs[j], i);
        if (p != kInfiniteTime) frac += lp.loads[i][j] / p;
        time += lp.loads[i][j];
      }
      EXPECT_EQ(frac, Rational(1));
      EXPECT_LE(time, lp.Z);
    }
    for (int i = 0; i < inst.machines; ++i) {
      Rational load = 0;
      for (std::size_t j = 0; j < inst.jobs.size(); ++j) load += lp.loads[i][j];
      EXPECT_LE(load, lp.Z);
    }
  }
}

TEST(ChooseReservation, ValleyBeatsNothingOnTie) {
  const auto t = mk_tariff({{0, 2, "1"}, {2, 4, "0"}, {4, 6, "1"}});
  const auto cand = choose_reservation(Rational(3), t);
  ASSERT_TRUE(cand);
  EXPECT_EQ(cand->total, Rational(5));
  EXPECT_EQ(cand->c_star, 3);  // ties broken by the smaller boundary
}

TEST(ChooseReservation, AllZeroTariff) {
  const auto t = mk_tariff({{0, 8, "0"}});
  const auto cand = choose_reservation(Rational(5), t);
  ASSERT_TRUE(cand);
  EXPECT_EQ(cand->c_star, 5);
  EXPECT_EQ(cand->tariff_cost, Rational(0));
}

TEST(ChooseReservation, ReplacementMovesIntoCheapInterval) {
  const auto t = mk_tariff({{0, 2, "2"}, {2, 4, "0"}});
  const auto cand = choose_reservation(Rational(1), t);
  ASSERT_TRUE(cand);
  // Slot 0 at cost 2 (total 3) ties with slot 2 at cost 0 (total 3).
  EXPECT_EQ(cand->total, Rational(3));
  EXPECT_EQ(cand->c_star, 1);
}

TEST(ChooseReservation, InsufficientCapacity) {
  TariffFunction t;
  t.intervals = {{0, 2, Cost(1)}, {2, 9, Cost::infinite()}};
  EXPECT_FALSE(choose_reservation(Rational(3), t));
}

TEST(ChooseReservation, InfinitePrefixPushesCStarIntoInterval) {
  // No finite slot exists before the candidate boundary; C* must advance
  // into the interval far enough to host the reservation.
  TariffFunction t;
  t.intervals = {{0, 1, Cost::infinite()}, {1, 4, Cost(3)}};
  const auto cand = choose_reservation(Rational(1), t);
  ASSERT_TRUE(cand);
  EXPECT_EQ(cand->c_star, 2);
  EXPECT_EQ(cand->total, Rational(5));
}

TEST(ChooseReservation, NeverWorseThanTrivialBoundary) {
  std::mt19937_64 rng(17);
  for (int iter = 0; iter < 200; ++iter) {
    const auto t = tsx::random_tariff(rng, 4, 8, 5);
    const std::int64_t cap = finite_slot_count(t);
    const std::int64_t need = 1 + static_cast<std::int64_t>(rng() % cap);
    const auto cand = choose_reservation(Rational(need), t);
    ASSERT_TRUE(cand);
    const auto trivial = cheapest_slots(t, need, 0, need);
    if (trivial) EXPECT_LE(cand->total, Rational(need) + trivial->total_cost);
  }
}

TEST(BuildTimetable, SingleMachineBackToBack) {
  const auto inst = mk_instance({{1, 3, "0"}}, {{0, 4, "0"}});
  const auto lp = solve_relaxed(inst);
  ReservationProfile prof{{3}};
  const auto sched = build_timetable(inst, lp, prof);
  ASSERT_EQ(sched.segments.size(), 1u);
  EXPECT_EQ(sched.segments[0].start, Rational(0));
  EXPECT_EQ(sched.segments[0].end, Rational(3));
}

TEST(BuildTimetable, DisjointMachinesShareASlot) {
  Instance inst = mk_instance({{1, 1, "0"}, {2, 1, "0"}}, {{0, 4, "0"}}, 2);
  inst.jobs[0].p_per_machine = std::vector<std::int64_t>{1, kInfiniteTime};
  inst.jobs[1].p_per_machine = std::vector<std::int64_t>{kInfiniteTime, 1};
  LpLoads lp;
  lp.Z = 1;
  lp.loads = {{Rational(1), Rational(0)}, {Rational(0), Rational(1)}};
  ReservationProfile prof{{1}};
  const auto sched = build_timetable(inst, lp, prof);
  EXPECT_EQ(sched.segments.size(), 2u);
  EXPECT_TRUE(audit_makespan_schedule(inst, sched, lp).empty());
}

TEST(BuildTimetable, RandomLoadsDecomposeExactly) {
  std::mt19937_64 rng(23);
  for (int seed = 0; seed < 120; ++seed) {
    GenParams gp;
    gp.n = 1 + seed % 4;
    gp.k = 1 + seed % 3;
    gp.machines = 1 + seed % 3;
    gp.seed = 300 + seed;
    const Instance inst = generate_instance(gp);
    const auto lp = solve_relaxed(inst);
    const auto cand = choose_reservation(lp.Z, inst.tariff);
    ASSERT_TRUE(cand);
    const auto sched = build_timetable(inst, lp, cand->profile);
    const auto violations = audit_makespan_schedule(inst, sched, lp);
    EXPECT_TRUE(violations.empty()) << violations.front() << "\n" << write_instance(inst);
    // Observation: the reserved slots admit a schedule within the claim.
    Rational realized = 0;
    for (const auto& s : sched.segments) realized = std::max(realized, s.end);
    EXPECT_LE(realized, cand->effective_makespan);
  }
}

TEST(MakespanSolve, ValleyExample) {
  const auto inst = mk_instance({{1, 3, "0"}}, {{0, 2, "1"}, {2, 4, "0"}, {4, 6, "1"}});
  EXPECT_EQ(makespan_solve(inst).total_cost, Rational(5));
}

TEST(MakespanSolve, FreeTariff) {
  const auto inst = mk_instance({{1, 4, "0"}}, {{0, 5, "0"}});
  const auto sched = makespan_solve(inst);
  EXPECT_EQ(sched.scheduling_cost, Rational(4));
  EXPECT_EQ(sched.tariff_cost, Rational(0));
  EXPECT_EQ(sched.total_cost, Rational(4));
}

TEST(MakespanSolve, MatchesOracleOnRandomInstances) {
  for (int seed = 0; seed < 120; ++seed) {
    GenParams gp;
    gp.n = 1 + seed % 4;
    gp.k = 1 + seed % 4;
    gp.machines = 1 + seed % 3;
    gp.seed = 700 + seed;
    const Instance inst = generate_instance(gp);
    const auto sched = makespan_solve(inst);
    const auto orc = opt_makespan(inst);
    EXPECT_EQ(sched.total_cost, orc.total) << write_instance(inst);
  }
}

// ---------------------------------------------------------------------------
// Weighted single-job placement.
// ---------------------------------------------------------------------------

namespace {

// Reference: enumerate all p-subsets of the window's finite slots.
std::optional<Rational> naive_single_job(const TariffFunction& t, std::int64_t p, std::int64_t t1,
                                         std::int64_t t2, const Rational& w) {
  std::vector<std::int64_t> slots;
  for (std::int64_t s = t1; s < t2; ++s)
    if (cost_at(t, s).is_finite()) slots.push_back(s);
  if (static_cast<std::int64_t>(slots.size()) < p) return std::nullopt;
  std::optional<Rational> best;
  std::vector<std::int64_t> idx(p);
  for (std::int64_t i = 0; i < p; ++i) idx[i] = i;
  while (true) {
    Rational cost = w * (slots[idx.back()] + 1);
    for (const auto i : idx) cost += cost_at(t, slots[i]).value();
    if (!best || cost < *best) best = cost;
    std::int64_t pos = p - 1;
    while (pos >= 0 && idx[pos] == static_cast<std::int64_t>(slots.size()) - p + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (std::int64_t q = pos + 1; q < p; ++q) idx[q] = idx[q - 1] + 1;
  }
  return best;
}

}  // namespace

TEST(SingleJob, PrefersLateFreeSlot) {
  const auto t = mk_tariff({{0, 1, "3"}, {1, 2, "0"}});
  const auto place = single_job_slot_selection(t, 1, 0, 2, Rational(1));
  ASSERT_TRUE(place);
  EXPECT_EQ(place->completion, 2);
  EXPECT_EQ(place->cost, Rational(2));
}

TEST(SingleJob, ZeroWeightReducesToCheapestSlots) {
  const auto t = mk_tariff({{0, 2, "5"}, {2, 4, "0"}});
  const auto place = single_job_slot_selection(t, 3, 0, 4, Rational(0));
  ASSERT_TRUE(place);
  const auto sel = cheapest_slots(t, 3, 0, 4);
  EXPECT_EQ(place->cost, sel->total_cost);
  EXPECT_EQ(place->completion, *sel->last_slot + 1);
}

TEST(SingleJob, UniformTariffTakesEarliestSlots) {
  const auto t = mk_tariff({{0, 6, "2"}});
  const auto place = single_job_slot_selection(t, 3, 1, 6, Rational(1));
  ASSERT_TRUE(place);
  EXPECT_EQ(place->completion, 4);
  EXPECT_EQ(place->selection.slots(), (std::vector<std::int64_t>{1, 2, 3}));
}

TEST(SingleJob, MatchesNaiveSubsetEnumeration) {
  std::mt19937_64 rng(31);
  for (int iter = 0; iter < 400; ++iter) {
    const auto t = tsx::random_tariff(rng, 4, 5, 5, /*allow_inf=*/true);
    const std::int64_t hz = std::min<std::int64_t>(t.horizon(), 14);
    std::int64_t t1 = static_cast<std::int64_t>(rng() % (hz + 1));
    std::int64_t t2 = static_cast<std::int64_t>(rng() % (hz + 1));
    if (t1 > t2) std::swap(t1, t2);
    const std::int64_t p = 1 + static_cast<std::int64_t>(rng() % 4);
    const Rational w(static_cast<std::int64_t>(rng() % 5), 1 + static_cast<std::int64_t>(rng() % 3));
    const auto got = single_job_slot_selection(t, p, t1, t2, w);
    const auto want = naive_single_job(t, p, t1, t2, w);
    ASSERT_EQ(got.has_value(), want.has_value());
    if (got) EXPECT_EQ(got->cost, *want);
  }
}
