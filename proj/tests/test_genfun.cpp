#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ipg/lattice_set.hpp"
#include "support/fuzz.hpp"

using namespace ipg;

namespace {

// Direct sum of xi^x over a finite point list.
Rational direct_sum(const std::vector<IntPoint>& pts, const RationalVector& xi) {
  Rational total = 0;
  for (const auto& x : pts) {
    Rational m = 1;
    for (std::size_t i = 0; i < x.size(); ++i)
      for (std::int64_t k = 0; k < std::abs(x[i]); ++k) m *= x[i] > 0 ? xi[i] : 1 / xi[i];
    total += m;
  }
  return total;
}

std::vector<IntPoint> sorted_intersection(std::vector<IntPoint> a, std::vector<IntPoint> b) {
  std::vector<IntPoint> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

TEST(GenFun, SquareCountAndEvaluation) {
  auto p = RationalPolytope::box(2, 0, 3);
  auto g = genfun_of_polytope(p);
  EXPECT_EQ(count(g), 16);
  auto pts = enumerate_lattice_points(p);
  RationalVector xi{Rational(1, 3), Rational(5, 7)};
  EXPECT_EQ(evaluate(g, xi), direct_sum(pts, xi));
}

TEST(GenFun, RationalVerticesAndNegativeCoordinates) {
  // 3x - 2y <= 7/2, -x + 4y <= 9, -2x - y <= 5
  RationalPolytope p(2, {{3, -2}, {-1, 4}, {-2, -1}}, {Rational(7, 2), 9, 5});
  auto g = genfun_of_polytope(p);
  auto pts = enumerate_lattice_points(p);
  EXPECT_EQ(count(g), Integer(pts.size()));
  EXPECT_EQ(enumerate_all(g), pts);
  RationalVector xi{Rational(2), Rational(-3, 5)};
  EXPECT_EQ(evaluate(g, xi), direct_sum(pts, xi));
}

TEST(GenFun, EmptyAndLowerDimensional) {
  RationalPolytope empty(2, {{1, 0}, {-1, 0}, {0, 1}, {0, -1}}, {Rational(1, 3), Rational(-1, 4), 1, 0});
  EXPECT_EQ(count(genfun_of_polytope(empty)), 0);
  RationalPolytope segment(2, {{1, 0}, {-1, 0}, {0, 1}, {0, -1}}, {1, -1, 3, 0});
  EXPECT_THROW(genfun_of_polytope(segment), NotFullDimensionalError);
  // The encoding policy falls back to explicit enumeration.
  EXPECT_EQ(count(encode_polytope(segment)), 4);
}

TEST(GenFun, RandomPolytopesCountLikeBruteForce) {
  std::mt19937_64 rng(101);
  for (int t = 0; t < 40; ++t) {
    std::size_t dim = static_cast<std::size_t>(fuzz::uniform(rng, 1, 3));
    auto p = fuzz::random_polytope(rng, dim, fuzz::uniform(rng, 1, 5), static_cast<std::size_t>(fuzz::uniform(rng, 0, 3)));
    auto pts = enumerate_lattice_points(p);
    GenFun g;
    try {
      g = genfun_of_polytope(p);
    } catch (const NotFullDimensionalError&) {
      g = encode_polytope(p);
    }
    EXPECT_EQ(count(g), Integer(pts.size())) << "trial " << t;
  }
}

TEST(Barvinok, DecompositionIsUnimodularAndCountsTheCone) {
  // Cone at the origin generated by (1,0) and (1,7): det 7.
  IntMatrix rays{{1, 0}, {1, 7}};
  auto cones = barvinok_decompose(rays, {0, 0});
  ASSERT_FALSE(cones.empty());
  for (const auto& c : cones) EXPECT_EQ(std::abs(to_int64(linalg::determinant(c.generators))), 1);
  // Truncate with the box x <= 6 and compare the series inside it.
  GenFun g(IntPoint{0, 0}, IntPoint{6, 42});
  for (const auto& c : cones) g.add_term(to_term(c));
  auto coeffs = expand(g, {0, 0}, {6, 42});
  std::size_t inside = 0;
  for (std::int64_t x = 0; x <= 6; ++x)
    for (std::int64_t y = 0; y <= 7 * x; ++y) {
      ++inside;
      auto it = coeffs.find(IntPoint{x, y});
      ASSERT_NE(it, coeffs.end()) << x << "," << y;
      EXPECT_EQ(it->second, 1);
    }
  std::size_t nonzero = 0;
  for (const auto& [x, c] : coeffs) nonzero += c != 0;
  EXPECT_EQ(nonzero, inside);
}

TEST(Barvinok, SeriesInMixedSignDirection) {
  // Cone generated by (-1,0) and (-1,5), expanded along lambda = (-k, 1).
  IntMatrix rays{{-1, 0}, {-1, 5}};
  GenFun g(IntPoint{-6, -6}, IntPoint{6, 36});
  for (const auto& c : barvinok_decompose(rays, {0, 0})) g.add_term(to_term(c));
  IntPoint lambda{-3, 1};
  auto generic = [&] {
    for (const auto& t : g.terms())
      for (const auto& d : t.denominators)
        if (dot(lambda, d) == 0) return false;
    return true;
  };
  while (!generic()) --lambda[0];
  auto coeffs = expand(g, {-6, -6}, {6, 36}, lambda);
  for (std::int64_t x = -6; x <= 6; ++x)
    for (std::int64_t y = -6; y <= 36; ++y) {
      Rational expected = x <= 0 && y >= 0 && y <= -5 * x ? 1 : 0;
      auto it = coeffs.find(IntPoint{x, y});
      EXPECT_EQ(it == coeffs.end() ? Rational(0) : it->second, expected) << x << "," << y;
    }
}

TEST(Barvinok, ShortDecompositionForLargeDeterminant) {
  for (std::int64_t det : {2, 17, 257, 999}) {
    IntMatrix rays{{1, 0}, {det - 1, det}};
    auto cones = barvinok_decompose(rays, {0, 0});
    double bound = 4.0 * std::pow(1.0 + std::log2(static_cast<double>(det)), 2);
    EXPECT_LE(static_cast<double>(cones.size()), bound) << "det " << det;
  }
}

TEST(SetOps, IntersectionUnionDifference) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 15; ++t) {
    auto a = fuzz::random_polytope(rng, 2, 4, 2);
    auto b = fuzz::random_polytope(rng, 2, 4, 2);
    auto pa = enumerate_lattice_points(a), pb = enumerate_lattice_points(b);
    GenFun ga = encode_polytope(a), gb = encode_polytope(b);
    auto inter = sorted_intersection(pa, pb);
    std::vector<IntPoint> uni, diff;
    std::set_union(pa.begin(), pa.end(), pb.begin(), pb.end(), std::back_inserter(uni));
    std::set_difference(pa.begin(), pa.end(), pb.begin(), pb.end(), std::back_inserter(diff));
    EXPECT_EQ(enumerate_all(hadamard_product(ga, gb)), inter);
    EXPECT_EQ(enumerate_all(boolean_combine({ga, gb}, union_table(2))), uni);
    EXPECT_EQ(enumerate_all(boolean_combine({ga, gb}, difference_table(2))), diff);
    EXPECT_EQ(enumerate_all(boolean_combine({ga, gb}, intersection_table(2))), inter);
  }
}

TEST(SetOps, CartesianProductMultipliesCounts) {
  auto a = genfun_of_polytope(RationalPolytope::box(1, -2, 2));
  auto b = genfun_of_polytope(RationalPolytope(2, {{1, 1}, {-1, 0}, {0, -1}}, {3, 0, 0}));
  EXPECT_EQ(count(cartesian_product(a, b)), 5 * 10);
}

TEST(Projection, DropsCoordinatesAndCollapsesFibres) {
  // Triangle 0 <= y <= x <= 4: projection onto x is {0..4}, onto y is {0..4}.
  RationalPolytope tri(2, {{-1, 1}, {1, 0}, {0, -1}}, {0, 4, 0});
  auto g = genfun_of_polytope(tri);
  auto px = project(g, selection_matrix(2, {0}));
  auto py = project(g, selection_matrix(2, {1}));
  EXPECT_EQ(count(px), 5);
  EXPECT_EQ(count(py), 5);
  EXPECT_EQ(count(project_polytope(tri, {1})), 5);
  // Injective substitution keeps counts.
  EXPECT_EQ(count(project(g, IntMatrix{{1, 0}, {1, 1}})), 15);
}

TEST(Projection, DegenerateSubstitutionIsReported) {
  auto g = genfun_of_polytope(RationalPolytope::box(2, 0, 2));
  bool has_axis = false;
  for (const auto& t : g.terms())
    for (const auto& d : t.denominators) has_axis |= d[0] == 0;
  if (has_axis) EXPECT_THROW(monomial_substitution(g, selection_matrix(2, {0})), DegenerateSubstitutionError);
  EXPECT_EQ(count(project(g, selection_matrix(2, {0}))), 3);
}

TEST(Enumeration, StrictlyLexicographicAndBounded) {
  auto g = genfun_of_polytope(RationalPolytope::box(2, -50, 49));  // 10^4 points
  IntPoint prev;
  bool first = true, ordered = true;
  auto stats = enumerate(g, 2, [&](const IntPoint& x) {
    if (!first && !(prev < x)) ordered = false;
    prev = x;
    first = false;
    return true;
  });
  EXPECT_TRUE(ordered);
  EXPECT_EQ(stats.emitted, 10000u);
  EXPECT_LE(stats.peak_buffer, 200u);
}

TEST(Enumeration, StopsWhenSinkDeclines) {
  auto g = genfun_of_polytope(RationalPolytope::box(1, 0, 9));
  std::size_t seen = 0;
  auto stats = enumerate(g, 1, [&](const IntPoint&) { return ++seen < 3; });
  EXPECT_EQ(seen, 3u);
  EXPECT_EQ(stats.emitted, 3u);
}

TEST(Optimization, LinearOptimumAndWitness) {
  RationalPolytope p(2, {{2, 3}, {-1, 0}, {0, -1}}, {12, 0, 0});
  auto g = genfun_of_polytope(p);
  auto best = linear_optimize(g, {1, 1});
  ASSERT_TRUE(best);
  std::int64_t expected = std::numeric_limits<std::int64_t>::min();
  IntPoint arg;
  for (const auto& x : enumerate_lattice_points(p))
    if (x[0] + x[1] > expected) {
      expected = x[0] + x[1];
      arg = x;
    }
  EXPECT_EQ(best->value, expected);
  EXPECT_EQ(best->witness, arg);
  auto worst = linear_minimize(g, {1, -1});
  ASSERT_TRUE(worst);
  EXPECT_EQ(worst->value, -4);
  EXPECT_FALSE(linear_optimize(GenFun(2, 3), {1, 0}));
}

TEST(Dump, RoundTrips) {
  auto g = genfun_of_polytope(RationalPolytope(2, {{1, 2}, {-3, 1}, {0, -1}}, {7, 2, 1}));
  auto back = parse_dump(dump(g));
  EXPECT_EQ(dump(back), dump(g));
  EXPECT_EQ(count(back), count(g));
}
