#pragma once

// Rational polyhedra {x : Mx <= b}: validation, lattice-point and vertex
// enumeration, tangent cones, and the small cone-triangulation helper used by
// the generating-function engine.

#include "ipg/arith.hpp"
#include "ipg/linalg.hpp"
#include "ipg/lp.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <utility>

namespace ipg {

class PolytopeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnboundedError : public PolytopeError {
 public:
  using PolytopeError::PolytopeError;
};

class NotFullDimensionalError : public PolytopeError {
 public:
  NotFullDimensionalError()
      : PolytopeError("polytope is not full-dimensional; use lattice-point enumeration instead") {}
};

class RationalPolytope {
 public:
  RationalPolytope() = default;

  RationalPolytope(std::size_t dimension, RationalMatrix matrix, RationalVector rhs,
                   std::optional<std::int64_t> box_bound = std::nullopt)
      : dimension_(dimension), matrix_(std::move(matrix)), rhs_(std::move(rhs)), box_(box_bound) {
    if (dimension_ == 0) throw PolytopeError("polytope dimension must be positive");
    if (matrix_.size() != rhs_.size())
      throw PolytopeError("constraint matrix has " + std::to_string(matrix_.size()) +
                          " rows but rhs has " + std::to_string(rhs_.size()) + " entries");
    for (std::size_t i = 0; i < matrix_.size(); ++i)
      if (matrix_[i].size() != dimension_)
        throw PolytopeError("constraint row " + std::to_string(i) + " has " +
                            std::to_string(matrix_[i].size()) + " columns, expected " +
                            std::to_string(dimension_));
    if (box_ && *box_ < 0) throw PolytopeError("box bound must be nonnegative");
  }

  static RationalPolytope from_integers(std::size_t dimension, const IntMatrix& matrix,
                                        const IntPoint& rhs,
                                        std::optional<std::int64_t> box_bound = std::nullopt) {
    RationalMatrix m;
    m.reserve(matrix.size());
    for (const auto& row : matrix) m.push_back(to_rational(row));
    return RationalPolytope(dimension, std::move(m), to_rational(rhs), box_bound);
  }

  /// The box [lo, hi]^dimension.
  static RationalPolytope box(std::size_t dimension, std::int64_t lo, std::int64_t hi) {
    IntMatrix m;
    IntPoint b;
    for (std::size_t j = 0; j < dimension; ++j) {
      IntPoint up(dimension, 0), down(dimension, 0);
      up[j] = 1;
      down[j] = -1;
      m.push_back(up);
      b.push_back(hi);
      m.push_back(down);
      b.push_back(-lo);
    }
    return from_integers(dimension, m, b);
  }

  std::size_t dimension() const { return dimension_; }
  std::size_t num_constraints() const { return matrix_.size(); }
  const RationalMatrix& matrix() const { return matrix_; }
  const RationalVector& rhs() const { return rhs_; }
  std::optional<std::int64_t> box_bound() const { return box_; }

  RationalPolytope with_box_bound(std::int64_t b) const {
    RationalPolytope p = *this;
    p.box_ = b;
    return p;
  }

  RationalPolytope add_constraint(RationalVector row, Rational rhs) const {
    RationalPolytope p = *this;
    if (row.size() != dimension_) throw PolytopeError("added constraint has wrong length");
    p.matrix_.push_back(std::move(row));
    p.rhs_.push_back(std::move(rhs));
    return p;
  }

  RationalPolytope intersect(const RationalPolytope& other) const {
    if (other.dimension_ != dimension_) throw PolytopeError("intersecting polytopes of different dimension");
    RationalPolytope p = *this;
    p.matrix_.insert(p.matrix_.end(), other.matrix_.begin(), other.matrix_.end());
    p.rhs_.insert(p.rhs_.end(), other.rhs_.begin(), other.rhs_.end());
    return p;
  }

  bool contains(const RationalVector& x) const {
    for (std::size_t i = 0; i < matrix_.size(); ++i) {
      Rational s = 0;
      for (std::size_t j = 0; j < dimension_; ++j) s += matrix_[i][j] * x[j];
      if (s > rhs_[i]) return false;
    }
    return true;
  }

  bool contains(const IntPoint& x) const { return contains(to_rational(x)); }

  std::vector<std::size_t> tight_constraints(const RationalVector& x) const {
    std::vector<std::size_t> tight;
    for (std::size_t i = 0; i < matrix_.size(); ++i) {
      Rational s = 0;
      for (std::size_t j = 0; j < dimension_; ++j) s += matrix_[i][j] * x[j];
      if (s == rhs_[i]) tight.push_back(i);
    }
    return tight;
  }

 private:
  std::size_t dimension_ = 0;
  RationalMatrix matrix_;
  RationalVector rhs_;
  std::optional<std::int64_t> box_;
};

struct Vertex {
  RationalVector coordinates;
  std::vector<std::size_t> tight_constraints;
};

/// Exact per-coordinate [min, max] over P; nullopt if P is empty.
inline std::optional<std::vector<std::pair<Rational, Rational>>> coordinate_bounds(
    const RationalPolytope& p) {
  std::vector<std::pair<Rational, Rational>> out;
  out.reserve(p.dimension());
  for (std::size_t j = 0; j < p.dimension(); ++j) {
    RationalVector c(p.dimension(), 0);
    c[j] = 1;
    auto hi = lp::maximize(p.matrix(), p.rhs(), c);
    if (hi.status == lp::Status::infeasible) return std::nullopt;
    if (hi.status == lp::Status::unbounded)
      throw UnboundedError("polytope is unbounded above in coordinate " + std::to_string(j));
    auto lo = lp::minimize(p.matrix(), p.rhs(), c);
    if (lo.status == lp::Status::unbounded)
      throw UnboundedError("polytope is unbounded below in coordinate " + std::to_string(j));
    out.emplace_back(lo.value, hi.value);
  }
  return out;
}

inline bool is_empty(const RationalPolytope& p) {
  RationalVector c(p.dimension(), 0);
  return lp::maximize(p.matrix(), p.rhs(), c).status == lp::Status::infeasible;
}

/// True iff every coordinate of P stays within [-B, B]. An empty P is inside
/// any box. Throws UnboundedError for unbounded P.
inline bool validate_box(const RationalPolytope& p, std::int64_t bound) {
  auto bounds = coordinate_bounds(p);
  if (!bounds) return true;
  for (const auto& [lo, hi] : *bounds)
    if (lo < -bound || hi > bound) return false;
  return true;
}

/// P has an interior point (strict feasibility of every inequality).
inline bool is_full_dimensional(const RationalPolytope& p) {
  const std::size_t n = p.dimension();
  RationalMatrix a;
  RationalVector b;
  for (std::size_t i = 0; i < p.num_constraints(); ++i) {
    RationalVector row = p.matrix()[i];
    bool zero = std::all_of(row.begin(), row.end(), [](const Rational& v) { return v == 0; });
    if (zero) {
      if (p.rhs()[i] < 0) return false;
      if (p.rhs()[i] == 0) return false;
      continue;
    }
    row.push_back(1);
    a.push_back(std::move(row));
    b.push_back(p.rhs()[i]);
  }
  RationalVector cap(n + 1, 0);
  cap[n] = 1;
  a.push_back(cap);
  b.push_back(1);
  RationalVector c(n + 1, 0);
  c[n] = 1;
  auto r = lp::maximize(a, b, c);
  return r.status == lp::Status::optimal && r.value > 0;
}

// ---------------------------------------------------------------------------
// Integer systems: rows scaled to integers, rhs floored. Equivalent to P on
// lattice points, which is all the enumeration code needs.

struct IntegerSystem {
  std::size_t dimension = 0;
  IntMatrix rows;
  IntPoint rhs;
  IntPoint lo, hi;  // a box containing every lattice point of the system
};

inline std::pair<IntMatrix, IntPoint> integer_rows(const RationalPolytope& p) {
  IntMatrix rows;
  IntPoint rhs;
  for (std::size_t i = 0; i < p.num_constraints(); ++i) {
    const auto& row = p.matrix()[i];
    Integer den = denominator(p.rhs()[i]);
    for (const auto& v : row) den = lcm(den, denominator(v));
    IntegerVector z(row.size());
    Integer g = 0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      z[j] = numerator(row[j]) * (den / denominator(row[j]));
      g = gcd(g, z[j]);
    }
    Rational scaled_rhs = p.rhs()[i] * Rational(den);
    if (g == 0) {
      rows.emplace_back(row.size(), 0);
      rhs.push_back(scaled_rhs < 0 ? -1 : 0);
      continue;
    }
    IntPoint r(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) r[j] = to_int64(z[j] / g);
    rows.push_back(std::move(r));
    rhs.push_back(to_int64(floor(scaled_rhs / Rational(g))));
  }
  return {std::move(rows), std::move(rhs)};
}

/// Builds the integer system with an LP-derived bounding box. nullopt if P
/// has no real points.
inline std::optional<IntegerSystem> to_integer_system(const RationalPolytope& p) {
  auto bounds = coordinate_bounds(p);
  if (!bounds) return std::nullopt;
  IntegerSystem sys;
  sys.dimension = p.dimension();
  std::tie(sys.rows, sys.rhs) = integer_rows(p);
  for (const auto& [lo, hi] : *bounds) {
    sys.lo.push_back(to_int64(ceil(lo)));
    sys.hi.push_back(to_int64(floor(hi)));
  }
  return sys;
}

/// Integer system with a caller-supplied box known to contain every lattice
/// point of P (skips the bounding LPs).
inline IntegerSystem to_integer_system(const RationalPolytope& p, IntPoint lo, IntPoint hi) {
  IntegerSystem sys;
  sys.dimension = p.dimension();
  std::tie(sys.rows, sys.rhs) = integer_rows(p);
  sys.lo = std::move(lo);
  sys.hi = std::move(hi);
  return sys;
}

/// Depth-first lattice-point search over an IntegerSystem in coordinate order,
/// pruning each coordinate's range with interval propagation against the box.
class LatticeSearch {
 public:
  explicit LatticeSearch(const IntegerSystem& sys) : sys_(sys) {
    const std::size_t m = sys_.rows.size(), n = sys_.dimension;
    suffix_min_.assign(m, IntPoint(n + 1, 0));
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t j = n; j-- > 0;) {
        std::int64_t a = sys_.rows[r][j];
        std::int64_t lo = a * sys_.lo[j], hi = a * sys_.hi[j];
        suffix_min_[r][j] = suffix_min_[r][j + 1] + std::min(lo, hi);
      }
    partial_.assign(m, 0);
    point_.assign(n, 0);
  }

  /// Range of coordinate `depth` given the fixed prefix; empty if lo > hi.
  std::pair<std::int64_t, std::int64_t> range(std::size_t depth) const {
    std::int64_t lo = sys_.lo[depth], hi = sys_.hi[depth];
    for (std::size_t r = 0; r < sys_.rows.size(); ++r) {
      std::int64_t a = sys_.rows[r][depth];
      std::int64_t slack = sys_.rhs[r] - partial_[r] - suffix_min_[r][depth + 1];
      if (a > 0) {
        hi = std::min(hi, floor_div64(slack, a));
      } else if (a < 0) {
        lo = std::max(lo, ceil_div64(slack, a));
      } else if (slack < 0) {
        return {1, 0};
      }
      if (lo > hi) return {1, 0};
    }
    return {lo, hi};
  }

  void set(std::size_t depth, std::int64_t v) {
    std::int64_t old = point_[depth];
    point_[depth] = v;
    for (std::size_t r = 0; r < sys_.rows.size(); ++r) partial_[r] += sys_.rows[r][depth] * (v - old);
  }

  void clear(std::size_t depth) { set(depth, 0); }

  const IntPoint& point() const { return point_; }

  /// Visits every lattice point in lexicographic order; the visitor returns
  /// false to stop early. Returns false iff stopped.
  bool visit_all(const std::function<bool(const IntPoint&)>& visit) {
    if (sys_.dimension == 0) return visit(point_);
    return dfs(0, visit);
  }

  /// Feasibility of completing coordinates [from, n) given the current prefix;
  /// on success the completion is left in point().
  bool complete(std::size_t from) {
    if (from == sys_.dimension) return satisfied();
    auto [lo, hi] = range(from);
    for (std::int64_t v = lo; v <= hi; ++v) {
      set(from, v);
      if (complete(from + 1)) return true;
    }
    clear(from);
    return false;
  }

  bool satisfied() const {
    for (std::size_t r = 0; r < sys_.rows.size(); ++r)
      if (partial_[r] > sys_.rhs[r]) return false;
    return true;
  }

 private:
  bool dfs(std::size_t depth, const std::function<bool(const IntPoint&)>& visit) {
    auto [lo, hi] = range(depth);
    for (std::int64_t v = lo; v <= hi; ++v) {
      set(depth, v);
      if (depth + 1 == sys_.dimension) {
        if (!visit(point_)) return false;
      } else if (!dfs(depth + 1, visit)) {
        return false;
      }
    }
    clear(depth);
    return true;
  }

  const IntegerSystem& sys_;
  IntMatrix suffix_min_;
  IntPoint partial_;
  IntPoint point_;
};

/// Visits P's lattice points in lexicographic order without materializing them.
inline void for_each_lattice_point(const RationalPolytope& p,
                                   const std::function<bool(const IntPoint&)>& visit) {
  auto sys = to_integer_system(p);
  if (!sys) return;
  for (std::size_t j = 0; j < sys->dimension; ++j)
    if (sys->lo[j] > sys->hi[j]) return;
  LatticeSearch search(*sys);
  search.visit_all(visit);
}

inline std::vector<IntPoint> enumerate_lattice_points(const RationalPolytope& p) {
  std::vector<IntPoint> out;
  for_each_lattice_point(p, [&](const IntPoint& x) {
    out.push_back(x);
    return true;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Vertices.

/// All vertices (basic feasible solutions) of a bounded full-dimensional P.
inline std::vector<Vertex> enumerate_vertices(const RationalPolytope& p) {
  if (!is_full_dimensional(p)) throw NotFullDimensionalError();
  coordinate_bounds(p);  // throws when unbounded
  const std::size_t n = p.dimension(), m = p.num_constraints();
  std::vector<Vertex> out;
  std::set<RationalVector> seen;
  if (m < n) return out;
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (;;) {
    RationalMatrix a(n);
    RationalVector b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = p.matrix()[idx[i]];
      b[i] = p.rhs()[idx[i]];
    }
    if (auto x = linalg::solve(a, b); x && p.contains(*x) && seen.insert(*x).second) {
      out.push_back(Vertex{*x, p.tight_constraints(*x)});
    }
    std::size_t k = n;
    while (k > 0 && idx[k - 1] == m - n + (k - 1)) --k;
    if (k == 0) break;
    ++idx[k - 1];
    for (std::size_t j = k; j < n; ++j) idx[j] = idx[j - 1] + 1;
  }
  std::sort(out.begin(), out.end(),
            [](const Vertex& a, const Vertex& b) { return a.coordinates < b.coordinates; });
  return out;
}

// ---------------------------------------------------------------------------
// Cones.

/// Facets of the full-dimensional cone spanned by `gens` (rows), as sorted
/// generator index sets with an inward normal.
struct ConeFacet {
  std::vector<std::size_t> members;
  IntPoint normal;
};

inline std::vector<ConeFacet> cone_facets(const IntMatrix& gens, std::size_t n) {
  std::vector<ConeFacet> facets;
  std::set<std::vector<std::size_t>> seen;
  const std::size_t m = gens.size();
  if (n == 1) {
    // Facets of a half-line are {0}.
    facets.push_back(ConeFacet{{}, IntPoint{gens.empty() ? 1 : (gens[0][0] > 0 ? 1 : -1)}});
    return facets;
  }
  if (m + 1 < n) return facets;
  std::vector<std::size_t> idx(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) idx[i] = i;
  for (;;) {
    IntMatrix rows;
    for (auto i : idx) rows.push_back(gens[i]);
    if (auto h = linalg::orthogonal_complement(rows, n)) {
      bool pos = false, neg = false;
      for (const auto& g : gens) {
        auto v = dot(*h, g);
        pos |= v > 0;
        neg |= v < 0;
      }
      if (!(pos && neg)) {
        IntPoint normal = *h;
        if (neg)
          for (auto& v : normal) v = -v;
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < m; ++i)
          if (dot(normal, gens[i]) == 0) members.push_back(i);
        if (seen.insert(members).second) facets.push_back(ConeFacet{members, normal});
      }
    }
    std::size_t k = n - 1;
    while (k > 0 && idx[k - 1] == m - (n - 1) + (k - 1)) --k;
    if (k == 0) break;
    ++idx[k - 1];
    for (std::size_t j = k; j < n - 1; ++j) idx[j] = idx[j - 1] + 1;
  }
  return facets;
}

/// Pulling triangulation of the pointed full-dimensional cone spanned by the
/// rows of `gens`. Each piece is returned as a list of generator indices.
inline std::vector<std::vector<std::size_t>> triangulate_cone(const IntMatrix& gens, std::size_t n) {
  auto facets = cone_facets(gens, n);
  auto rank_of = [&](const std::vector<std::size_t>& s) {
    IntMatrix rows;
    for (auto i : s) rows.push_back(gens[i]);
    return rows.empty() ? std::size_t{0} : linalg::rank(rows);
  };
  std::function<std::vector<std::vector<std::size_t>>(const std::vector<std::size_t>&, std::size_t)> pull;
  pull = [&](const std::vector<std::size_t>& face, std::size_t r) {
    std::vector<std::vector<std::size_t>> out;
    if (face.size() == r) {
      out.push_back(face);
      return out;
    }
    const std::size_t apex = face.front();
    std::set<std::vector<std::size_t>> sub;
    for (const auto& f : facets) {
      std::vector<std::size_t> inter;
      std::set_intersection(face.begin(), face.end(), f.members.begin(), f.members.end(),
                            std::back_inserter(inter));
      if (inter.size() + 1 < r || inter.size() == face.size()) continue;
      if (std::binary_search(inter.begin(), inter.end(), apex)) continue;
      if (rank_of(inter) != r - 1) continue;
      sub.insert(inter);
    }
    for (const auto& e : sub) {
      for (auto piece : pull(e, r - 1)) {
        piece.insert(std::lower_bound(piece.begin(), piece.end(), apex), apex);
        out.push_back(std::move(piece));
      }
    }
    return out;
  };
  std::vector<std::size_t> all(gens.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return pull(all, n);
}

struct TangentCone {
  RationalVector apex;
  IntMatrix rays;                                  // primitive extreme rays
  std::vector<IntMatrix> simplicial_cones;         // triangulation of the rays
};

/// Extreme rays of {y : A_I y <= 0} for the constraints tight at v, plus a
/// triangulation into simplicial cones (a single cone when v is simple).
inline TangentCone tangent_cone(const RationalPolytope& p, const Vertex& v) {
  const std::size_t n = p.dimension();
  IntMatrix tight;
  for (auto i : v.tight_constraints) tight.push_back(linalg::primitive(p.matrix()[i]));
  std::sort(tight.begin(), tight.end());
  tight.erase(std::unique(tight.begin(), tight.end()), tight.end());
  TangentCone tc;
  tc.apex = v.coordinates;
  std::set<IntPoint> rays;
  if (n == 1) {
    for (const auto& row : tight) rays.insert(IntPoint{row[0] > 0 ? -1 : 1});
  } else {
    std::vector<std::size_t> idx(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) idx[i] = i;
    const std::size_t m = tight.size();
    while (m + 1 >= n) {
      IntMatrix rows;
      for (auto i : idx) rows.push_back(tight[i]);
      if (auto h = linalg::orthogonal_complement(rows, n)) {
        for (int s : {1, -1}) {
          IntPoint ray = *h;
          for (auto& x : ray) x *= s;
          bool ok = std::all_of(tight.begin(), tight.end(),
                                [&](const IntPoint& a) { return dot(a, ray) <= 0; });
          if (ok) rays.insert(ray);
        }
      }
      std::size_t k = n - 1;
      while (k > 0 && idx[k - 1] == m - (n - 1) + (k - 1)) --k;
      if (k == 0) break;
      ++idx[k - 1];
      for (std::size_t j = k; j < n - 1; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  tc.rays.assign(rays.begin(), rays.end());
  for (const auto& piece : triangulate_cone(tc.rays, n)) {
    IntMatrix cone;
    for (auto i : piece) cone.push_back(tc.rays[i]);
    tc.simplicial_cones.push_back(std::move(cone));
  }
  return tc;
}

}  // namespace ipg
