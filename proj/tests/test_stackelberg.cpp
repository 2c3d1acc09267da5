#include <gtest/gtest.h>

#include <random>

#include "ipg/stackelberg.hpp"
#include "support/brute.hpp"
#include "support/fuzz.hpp"

using namespace ipg;

namespace {

// Follower with 0 <= x <= 1 regardless of s_0 (d_0 = 1).
Follower unit_follower(std::vector<AffinePiece> convex, std::vector<AffinePiece> concave) {
  return Follower{1, {{1}, {-1}}, {{0}, {0}}, {1, 0}, {std::move(convex), std::move(concave)}};
}

Leader leader_on(std::int64_t lo, std::int64_t hi, DPLCPayoff payoff) {
  return Leader{1, RationalPolytope::box(1, lo, hi), std::move(payoff)};
}

std::vector<Follower> pd_followers() {
  return {unit_follower({{{1, -2}, 2}}, {{{0, 0}, 0}}), unit_follower({{{-2, 1}, 2}}, {{{0, 0}, 0}})};
}

std::vector<Follower> coordination_followers() {
  std::vector<AffinePiece> gap{{{1, -1}, 0}, {{-1, 1}, 0}}, one{{{0, 0}, 1}};
  return {unit_follower(one, gap), unit_follower(one, gap)};
}

std::vector<Follower> pennies_followers() {
  std::vector<AffinePiece> gap{{{2, -2}, 0}, {{-2, 2}, 0}}, one{{{0, 0}, 1}};
  return {unit_follower(one, gap), unit_follower(gap, one)};
}

// One follower maximizing x on 0 <= x <= s_0.
Follower budget_follower() { return Follower{1, {{1}, {-1}}, {{1}, {0}}, {0, 0}, {{{{1}, 0}}, {{{0}, 0}}}}; }

DPLCPayoff constant(std::size_t len, std::int64_t c) { return {{{IntPoint(len, 0), c}}, {{IntPoint(len, 0), 0}}}; }

}  // namespace

TEST(Stackelberg, JointRegionFollowsTheBudget) {
  StackelbergGame sg(2, leader_on(1, 2, constant(2, 0)), {budget_follower()});
  auto region = follower_feasible_region(sg, {0});
  std::set<IntPoint> pairs;
  for (const auto& x : enumerate_lattice_points(region)) pairs.insert({x[0], x[1]});
  EXPECT_EQ(pairs, (std::set<IntPoint>{{1, 0}, {1, 1}, {2, 0}, {2, 1}, {2, 2}}));
}

TEST(Stackelberg, InfeasibleCouplingEmptiesTheFibre) {
  // 0 <= x <= s_0 - 1 is empty at s_0 = 0.
  Follower f{1, {{1}, {-1}}, {{1}, {0}}, {-1, 0}, {{{{1}, 0}}, {{{0}, 0}}}};
  StackelbergGame sg(2, leader_on(0, 2, constant(2, 0)), {f});
  auto n = stackelberg_nash_feasible(sg).points();
  EXPECT_EQ(n, (std::vector<IntPoint>{{1, 0}, {2, 1}}));
}

TEST(Stackelberg, UncoupledPrisonersDilemma) {
  StackelbergGame sg(1, leader_on(0, 1, constant(3, 0)), pd_followers());
  EXPECT_EQ(stackelberg_nash_feasible(sg).points(), (std::vector<IntPoint>{{0, 1, 1}, {1, 1, 1}}));
}

TEST(Stackelberg, BudgetFollowerSpendsEverything) {
  StackelbergGame sg(3, leader_on(0, 3, constant(2, 0)), {budget_follower()});
  EXPECT_EQ(stackelberg_nash_feasible(sg).points(), (std::vector<IntPoint>{{0, 0}, {1, 1}, {2, 2}, {3, 3}}));
}

TEST(Stackelberg, LeaderOptimumOverCoordinationFollowers) {
  DPLCPayoff sum{{{{0, 1, 1}, 0}}, {{{0, 0, 0}, 0}}};
  StackelbergGame sg(1, leader_on(0, 1, sum), coordination_followers());
  auto sol = leader_optimize(sg);
  ASSERT_TRUE(sol.leader_optimum);
  EXPECT_EQ(*sol.leader_optimum, 2);
  EXPECT_EQ(sol.equilibria.points(), (std::vector<IntPoint>{{0, 1, 1}, {1, 1, 1}}));
}

TEST(Stackelberg, ConstantLeaderKeepsAllOfN) {
  StackelbergGame sg(1, leader_on(0, 1, constant(3, 5)), coordination_followers());
  auto sol = leader_optimize(sg);
  ASSERT_TRUE(sol.leader_optimum);
  EXPECT_EQ(*sol.leader_optimum, 5);
  EXPECT_EQ(sol.equilibria.points(), stackelberg_nash_feasible(sg).points());
}

TEST(Stackelberg, NoFollowerEquilibrium) {
  StackelbergGame sg(1, leader_on(0, 1, constant(3, 0)), pennies_followers());
  auto sol = leader_optimize(sg);
  EXPECT_FALSE(sol.leader_optimum);
  EXPECT_EQ(sol.equilibria.count(), 0);
}

TEST(Stackelberg, ValidationRejectsEscapingFollowerPolytopes) {
  // x <= 2 s_0 leaves [-1, 1] at s_0 = 1.
  Follower f{1, {{1}, {-1}}, {{2}, {0}}, {0, 0}, {{{{1}, 0}}, {{{0}, 0}}}};
  try {
    StackelbergGame(1, leader_on(0, 1, constant(2, 0)), {f});
    FAIL() << "expected ModelError";
  } catch (const ModelError& e) {
    EXPECT_NE(std::string(e.what()).find("joint point"), std::string::npos);
  }
  // Follower payoffs may not depend on s_0.
  Follower g = budget_follower();
  g.payoff.convex[0].gradient = {1, 1};
  EXPECT_THROW(StackelbergGame(3, leader_on(0, 3, constant(2, 0)), {g}), ModelError);
}

TEST(StackelbergFuzz, FibresMatchInducedGamesAndOptimumMatchesBruteForce) {
  std::mt19937_64 rng(404);
  for (int t = 0; t < 8; ++t) {
    auto sg = fuzz::random_stackelberg(rng);
    StackelbergSolver solver(sg);
    auto n = solver.feasible_set().points();
    std::vector<IntPoint> expected;
    for (const auto& s0 : enumerate_lattice_points(sg.leader().polytope)) {
      bool nonempty = true;
      for (std::size_t i = 0; i < sg.num_followers(); ++i)
        nonempty &= !enumerate_lattice_points(sg.follower_polytope(i, s0)).empty();
      if (!nonempty) continue;
      for (const auto& s : brute::nash(induced_game(sg, s0))) expected.push_back(concat(s0, s));
    }
    EXPECT_EQ(n, expected) << "trial " << t;

    auto sol = solver.leader_optimize();
    std::optional<std::int64_t> best;
    for (const auto& x : expected) {
      auto v = sg.leader().payoff.value(x);
      if (!best || v > *best) best = v;
    }
    EXPECT_EQ(sol.leader_optimum, best) << "trial " << t;
    if (!best) continue;
    for (const auto& x : sol.equilibria.points()) EXPECT_EQ(sg.leader().payoff.value(x), *best);
    EXPECT_EQ(solver.at_least(*best + 1).count(), 0);
    Integer prev = solver.at_least(*best - 3).count();
    for (std::int64_t v = *best - 2; v <= *best; ++v) {
      Integer c = solver.at_least(v).count();
      EXPECT_LE(c, prev);
      prev = c;
    }
  }
}
