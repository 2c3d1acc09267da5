#include <gtest/gtest.h>

#include <random>

#include "ipg/model.hpp"
#include "support/brute.hpp"
#include "support/fuzz.hpp"

using namespace ipg;

namespace {

Player unit_player(std::vector<AffinePiece> convex, std::vector<AffinePiece> concave) {
  Player p;
  p.dimension = 1;
  p.polytope = RationalPolytope::box(1, 0, 1);
  p.payoff.convex = std::move(convex);
  p.payoff.concave = std::move(concave);
  return p;
}

Game prisoners_dilemma() {
  return Game(1, {unit_player({{{1, -2}, 2}}, {{{0, 0}, 0}}), unit_player({{{-2, 1}, 2}}, {{{0, 0}, 0}})});
}

// Cournot duopoly on s_i in [0, 3] with fixed cost F = 2: the payoff is a
// max of cost pieces plus the minimum of two revenue pieces minus the maximum
// of two expense pieces, written out as plain arithmetic.
std::int64_t cournot_profit(std::int64_t own, std::int64_t other) {
  const std::int64_t f = 2;
  std::int64_t cost = std::max(-f, -f * own);
  std::int64_t revenue = std::min(3 * own - other, own + 4 - other);
  std::int64_t expense = std::max(own, 2 * own - 2);
  return cost + revenue - expense;
}

Game cournot() {
  std::vector<Player> players;
  for (std::size_t i = 0; i < 2; ++i) {
    auto v = [&](std::int64_t self, std::int64_t other, std::int64_t off) {
      IntPoint g(2, 0);
      g[i] = self;
      g[1 - i] = other;
      return AffinePiece{g, off};
    };
    Player p;
    p.dimension = 1;
    p.polytope = RationalPolytope::box(1, 0, 3);
    p.payoff.convex = {v(0, 0, -2), v(-2, 0, 0)};
    const std::int64_t r[2][3] = {{3, -1, 0}, {1, -1, 4}}, c[2][3] = {{1, 0, 0}, {2, 0, -2}};
    for (const auto& rl : r)
      for (const auto& cl : c) p.payoff.concave.push_back(v(-rl[0] + cl[0], -rl[1] + cl[1], -rl[2] + cl[2]));
    players.push_back(p);
  }
  return Game(3, players);
}

}  // namespace

TEST(Model, ValidationNamesTheFailingConstraint) {
  auto ok = unit_player({{{1, 0}, 0}}, {{{0, 0}, 0}});
  auto short_gradient = unit_player({{{1}, 0}}, {{{0, 0}, 0}});
  EXPECT_THROW(Game(0, {ok, ok}), ModelError);
  try {
    Game(1, {ok, short_gradient});
    FAIL() << "expected ModelError";
  } catch (const ModelError& e) {
    EXPECT_NE(std::string(e.what()).find("gradient"), std::string::npos);
  }
  Player big = ok;
  big.polytope = RationalPolytope::box(1, 0, 3);
  EXPECT_THROW(Game(2, {ok, big}), ModelError);
  EXPECT_NO_THROW(Game(3, {ok, big}));
  Player no_concave = ok;
  no_concave.payoff.concave.clear();
  EXPECT_THROW(Game(1, {ok, no_concave}), ModelError);
}

TEST(Model, PayoffsAndShifts) {
  auto g = prisoners_dilemma();
  EXPECT_EQ(g.payoff(0, {0, 0}), 2);
  EXPECT_EQ(g.payoff(0, {1, 1}), 1);
  EXPECT_EQ(g.payoff(1, {1, 0}), 0);
  for (const auto& s : brute::tabulate(g).profiles)
    for (std::size_t i = 0; i < 2; ++i) {
      EXPECT_GE(g.shifted_payoff(i, s), 0);
      EXPECT_LE(g.shifted_payoff(i, s), g.payoff_upper_bound(i));
    }
}

TEST(Model, CournotPiecesMatchDirectFormula) {
  auto g = cournot();
  for (std::int64_t a = 0; a <= 3; ++a)
    for (std::int64_t b = 0; b <= 3; ++b) {
      EXPECT_EQ(g.payoff(0, {a, b}), cournot_profit(a, b)) << a << "," << b;
      EXPECT_EQ(g.payoff(1, {a, b}), cournot_profit(b, a)) << a << "," << b;
    }
}

TEST(Model, RegionsPartitionProfilesDisjointly) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 15; ++t) {
    auto g = fuzz::random_game(rng);
    auto profiles = brute::tabulate(g).profiles;
    std::map<IntPoint, int> hits;
    for (const auto& k : g.region_vectors())
      for (const auto& s : enumerate_lattice_points(g.region_polytope(k, false))) ++hits[s];
    ASSERT_EQ(hits.size(), profiles.size()) << "trial " << t;
    for (const auto& s : profiles) EXPECT_EQ(hits[s], 1);
  }
}

TEST(Model, ExtendedSetHasOneFibrePointPerPayoffLevel) {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 10; ++t) {
    auto g = fuzz::random_game(rng);
    Integer expected = 0;
    for (const auto& s : brute::tabulate(g).profiles) {
      Integer prod = 1;
      for (std::size_t i = 0; i < g.num_players(); ++i) prod *= g.shifted_payoff(i, s) + 1;
      expected += prod;
    }
    EXPECT_EQ(extended_set(g).count(), expected) << "trial " << t;
  }
}

TEST(Model, DeviationSetMatchesProfitableDeviations) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 8; ++t) {
    auto g = fuzz::random_game(rng);
    auto table = brute::tabulate(g);
    for (std::size_t i = 0; i < g.num_players(); ++i) {
      auto pts = deviation_set(g, i).points();
      std::set<IntPoint> got(pts.begin(), pts.end());
      std::size_t expected = 0;
      for (const auto& s : table.profiles) {
        // (s, y) is in D_i iff 0 <= y_j <= u_j(s) + c_j and y_i < best reply + c_i.
        std::vector<std::int64_t> top;
        for (std::size_t j = 0; j < g.num_players(); ++j) top.push_back(g.shifted_payoff(j, s));
        std::int64_t br = brute::best_reply(g, table, s, i) + g.shift(i);
        std::int64_t yi_max = std::min(top[i], br - 1);
        if (yi_max < 0) continue;
        std::size_t n = static_cast<std::size_t>(yi_max + 1);
        for (std::size_t j = 0; j < g.num_players(); ++j)
          if (j != i) n *= static_cast<std::size_t>(top[j] + 1);
        expected += n;
        IntPoint probe = s;
        for (std::size_t j = 0; j < g.num_players(); ++j) probe.push_back(j == i ? yi_max : top[j]);
        EXPECT_TRUE(got.count(probe)) << "trial " << t;
      }
      EXPECT_EQ(got.size(), expected) << "trial " << t << " player " << i;
    }
  }
}

TEST(NormalForm, ConvertedPayoffsEqualTable) {
  NormalFormGame nf({2, 3}, {{3, 0, -2, 5, 1, 0}, {-1, 4, 2, 0, 0, 7}});
  auto g = normal_form_to_ipg(nf);
  for (std::size_t idx = 0; idx < nf.num_profiles(); ++idx) {
    auto a = nf.profile(idx);
    auto x = nf.characteristic(a);
    for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(g.payoff(i, x), nf.payoff(i, a));
  }
  EXPECT_EQ(brute::tabulate(g).profiles.size(), 6u);
}

TEST(NormalForm, RejectsMalformedTables) {
  EXPECT_THROW(NormalFormGame({2, 2}, {{1, 2, 3}, {1, 2, 3, 4}}), ModelError);
  EXPECT_THROW(NormalFormGame({2, 0}, {{}, {}}), ModelError);
  EXPECT_THROW(NormalFormGame({2, 2}, {{1, 2, 3, 4}}), ModelError);
}
