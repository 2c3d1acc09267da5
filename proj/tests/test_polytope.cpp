#include <gtest/gtest.h>

#include <random>

#include "ipg/polytope.hpp"

using namespace ipg;

namespace {

// Brute-force lattice points of {x : Ax <= b} inside [-box, box]^n.
std::vector<IntPoint> brute_force(const RationalPolytope& p, std::int64_t box) {
  std::vector<IntPoint> out;
  IntPoint x(p.dimension(), -box);
  for (;;) {
    if (p.contains(to_rational(x))) out.push_back(x);
    std::size_t j = p.dimension();
    while (j-- > 0) {
      if (++x[j] <= box) break;
      x[j] = -box;
      if (j == 0) return out;
    }
  }
}

}  // namespace

TEST(Polytope, BoxConstructorAndContainment) {
  auto p = RationalPolytope::box(2, -1, 2);
  EXPECT_TRUE(p.contains(IntPoint{2, -1}));
  EXPECT_FALSE(p.contains(IntPoint{3, 0}));
  EXPECT_EQ(enumerate_lattice_points(p).size(), 16u);
}

TEST(Polytope, RejectsMalformedSystems) {
  EXPECT_THROW(RationalPolytope(2, {{1, 0}}, {1, 2}), PolytopeError);
  EXPECT_THROW(RationalPolytope(2, {{1}}, {1}), PolytopeError);
  EXPECT_THROW(RationalPolytope(0, {}, {}), PolytopeError);
}

TEST(Polytope, BoxValidationAndBounds) {
  // x + y <= 3/2, x, y >= 0
  RationalPolytope tri(2, {{1, 1}, {-1, 0}, {0, -1}}, {Rational(3, 2), 0, 0});
  EXPECT_TRUE(validate_box(tri, 2));
  EXPECT_FALSE(validate_box(tri, 1));
  auto b = coordinate_bounds(tri);
  ASSERT_TRUE(b);
  EXPECT_EQ((*b)[0].second, Rational(3, 2));
  RationalPolytope half(1, {{1}}, {0});
  EXPECT_THROW(validate_box(half, 5), UnboundedError);
}

TEST(Polytope, EmptinessAndDimension) {
  RationalPolytope empty(1, {{1}, {-1}}, {0, -1});
  EXPECT_TRUE(is_empty(empty));
  EXPECT_TRUE(enumerate_lattice_points(empty).empty());
  RationalPolytope segment(2, {{1, 0}, {-1, 0}, {0, 1}, {0, -1}}, {1, -1, 3, 0});
  EXPECT_FALSE(is_full_dimensional(segment));
  EXPECT_TRUE(is_full_dimensional(RationalPolytope::box(2, 0, 1)));
}

TEST(Polytope, VerticesOfSimplex) {
  RationalPolytope tri(2, {{1, 1}, {-1, 0}, {0, -1}}, {2, 0, 0});
  auto vs = enumerate_vertices(tri);
  std::set<RationalVector> got;
  for (const auto& v : vs) got.insert(v.coordinates);
  EXPECT_EQ(got, (std::set<RationalVector>{{0, 0}, {2, 0}, {0, 2}}));
}

TEST(Polytope, RandomEnumerationMatchesBruteForce) {
  std::mt19937_64 rng(3);
  auto u = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); };
  for (int t = 0; t < 60; ++t) {
    std::size_t n = static_cast<std::size_t>(u(1, 3));
    std::int64_t b = u(1, 4);
    auto p = RationalPolytope::box(n, -b, b);
    for (int c = u(0, 3); c > 0; --c) {
      RationalVector row(n);
      for (auto& v : row) v = u(-5, 5);
      p = p.add_constraint(row, Rational(u(-6, 12), u(1, 3)));
    }
    EXPECT_EQ(enumerate_lattice_points(p), brute_force(p, b)) << "trial " << t;
  }
}

TEST(Polytope, LatticeSearchCompletesPartialAssignments) {
  // 2x + 3y = 7 within [0, 5]^2 has the single solution (2, 1).
  RationalPolytope p(2, {{2, 3}, {-2, -3}}, {7, -7});
  auto sys = to_integer_system(p, {0, 0}, {5, 5});
  LatticeSearch s(sys);
  s.set(0, 2);
  EXPECT_TRUE(s.complete(1));
  EXPECT_EQ(s.point(), (IntPoint{2, 1}));
  s.set(0, 1);
  EXPECT_FALSE(s.complete(1));
}
