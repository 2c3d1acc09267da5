#pragma once

// Seeded random instances shared by the property tests and the acceptance
// binary.

#include "ipg/stackelberg.hpp"

#include <random>

namespace ipg::fuzz {

inline std::int64_t uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

/// Random bounded polytope: the box [-b, b]^dim cut by `cuts` random halfspaces
/// with coefficients in [-coef, coef].
inline RationalPolytope random_polytope(std::mt19937_64& rng, std::size_t dim, std::int64_t b, std::size_t cuts,
                                        std::int64_t coef = 5) {
  RationalMatrix a;
  RationalVector rhs;
  for (std::size_t c = 0; c < cuts; ++c) {
    RationalVector row(dim);
    for (auto& v : row) v = uniform(rng, -coef, coef);
    a.push_back(row);
    rhs.push_back(uniform(rng, -b, 2 * b * static_cast<std::int64_t>(dim)));
  }
  return RationalPolytope(dim, a, rhs).intersect(RationalPolytope::box(dim, -b, b));
}

struct GameShape {
  std::size_t players = 2;
  std::size_t max_dim = 2;          // d_i in [1, max_dim]
  std::int64_t max_bound = 5;       // B in [1, max_bound]
  std::size_t max_convex = 2;       // |K_i|
  std::size_t max_concave = 3;      // |L_i|
  std::int64_t coef = 3;            // coefficients in [-coef, coef]
  std::int64_t max_extended = 4000; // resample while |S^| exceeds this
};

inline AffinePiece random_piece(std::mt19937_64& rng, std::size_t d, std::int64_t coef) {
  AffinePiece p{IntPoint(d), uniform(rng, -coef, coef)};
  for (auto& v : p.gradient) v = uniform(rng, -coef, coef);
  return p;
}

/// One random game with nonempty S inside the shape; resamples (deterministically)
/// until |S^| <= max_extended.
inline Game random_game(std::mt19937_64& rng, const GameShape& shape = {}) {
  for (;;) {
    std::int64_t b = uniform(rng, 1, shape.max_bound);
    std::vector<std::size_t> dims(shape.players);
    std::size_t d = 0;
    for (auto& di : dims) d += di = static_cast<std::size_t>(uniform(rng, 1, static_cast<std::int64_t>(shape.max_dim)));
    std::vector<Player> players;
    bool nonempty = true;
    for (std::size_t i = 0; i < shape.players; ++i) {
      Player p;
      p.dimension = dims[i];
      p.polytope = random_polytope(rng, dims[i], b, static_cast<std::size_t>(uniform(rng, 0, 2)), shape.coef);
      nonempty &= !enumerate_lattice_points(p.polytope).empty();
      auto nk = uniform(rng, 1, static_cast<std::int64_t>(shape.max_convex));
      auto nl = uniform(rng, 1, static_cast<std::int64_t>(shape.max_concave));
      for (std::int64_t k = 0; k < nk; ++k) p.payoff.convex.push_back(random_piece(rng, d, shape.coef));
      for (std::int64_t l = 0; l < nl; ++l) p.payoff.concave.push_back(random_piece(rng, d, shape.coef));
      players.push_back(std::move(p));
    }
    if (!nonempty) continue;
    Game g(b, std::move(players));
    if (oracle::extended_count(g) > shape.max_extended) continue;
    return g;
  }
}

/// |S^| of a leader-followers game, by enumerating the joint polytope.
inline Integer stackelberg_extended_count(const StackelbergGame& sg) {
  Integer total = 0;
  const std::size_t d0 = sg.leader_dimension();
  for (const auto& x : enumerate_lattice_points(sg.joint_polytope())) {
    IntPoint s(x.begin() + static_cast<std::ptrdiff_t>(d0), x.end());
    Integer prod = 1;
    for (std::size_t i = 0; i < sg.num_followers(); ++i) prod *= sg.followers()[i].payoff.value(s) + sg.shift(i) + 1;
    total += prod;
  }
  return total;
}

/// Random leader-followers game: d_0 = 1 with |S_0| <= 6, followers shaped as
/// in `shape`, each with up to two cuts coupled to s_0 on top of [-B, B]^{d_i}.
inline StackelbergGame random_stackelberg(std::mt19937_64& rng, const GameShape& shape = {}) {
  for (;;) {
    std::int64_t b = uniform(rng, 1, shape.max_bound);
    std::int64_t s0_lo = uniform(rng, -b, b);
    std::int64_t s0_hi = std::min(b, s0_lo + uniform(rng, 0, 5));
    Leader leader{1, RationalPolytope::box(1, s0_lo, s0_hi), {}};
    std::vector<std::size_t> dims(shape.players);
    std::size_t d = 0;
    for (auto& di : dims) d += di = static_cast<std::size_t>(uniform(rng, 1, static_cast<std::int64_t>(shape.max_dim)));
    std::vector<Follower> followers;
    for (std::size_t i = 0; i < shape.players; ++i) {
      Follower f;
      f.dimension = dims[i];
      for (std::size_t j = 0; j < dims[i]; ++j)
        for (std::int64_t sign : {1, -1}) {
          IntPoint row(dims[i], 0);
          row[j] = sign;
          f.constraints.push_back(row);
          f.coupling.push_back({0});
          f.offset.push_back(b);
        }
      for (auto c = uniform(rng, 0, 2); c > 0; --c) {
        IntPoint row(dims[i]);
        for (auto& v : row) v = uniform(rng, -shape.coef, shape.coef);
        f.constraints.push_back(row);
        f.coupling.push_back({uniform(rng, -2, 2)});
        f.offset.push_back(uniform(rng, 0, b * static_cast<std::int64_t>(dims[i])));
      }
      auto nk = uniform(rng, 1, static_cast<std::int64_t>(shape.max_convex));
      auto nl = uniform(rng, 1, static_cast<std::int64_t>(shape.max_concave));
      for (std::int64_t k = 0; k < nk; ++k) f.payoff.convex.push_back(random_piece(rng, d, shape.coef));
      for (std::int64_t l = 0; l < nl; ++l) f.payoff.concave.push_back(random_piece(rng, d, shape.coef));
      followers.push_back(std::move(f));
    }
    for (auto k = uniform(rng, 1, 2); k > 0; --k) leader.payoff.convex.push_back(random_piece(rng, 1 + d, shape.coef));
    for (auto l = uniform(rng, 1, 2); l > 0; --l) leader.payoff.concave.push_back(random_piece(rng, 1 + d, shape.coef));
    StackelbergGame sg(b, std::move(leader), std::move(followers));
    auto n = stackelberg_extended_count(sg);
    if (n == 0 || n > shape.max_extended) continue;
    return sg;
  }
}

}  // namespace ipg::fuzz
