#pragma once

// Short rational generating functions
//
//     g(S; xi) = sum_i gamma_i * xi^{c_i} / prod_j (1 - xi^{d_ij})
//
// encoding finite lattice-point sets S. Polytopes are encoded with Brion's
// theorem over vertex cones, each cone decomposed (in the dual, so that
// lower-dimensional pieces can be dropped) into signed unimodular cones.
//
// Series conventions. Every operation that needs actual lattice points
// (Hadamard products of two rational forms, enumeration, non-injective
// projection) works with the Laurent expansion of each term in a single
// direction: a vector lambda with lambda.d != 0 for every denominator, each
// binomial flipped so lambda.d > 0. All those expansions live in one ring, so
// they sum to the Laurent polynomial of S; truncating to a box that contains
// S therefore recovers S exactly.

#include "ipg/arith.hpp"
#include "ipg/linalg.hpp"
#include "ipg/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <utility>

namespace ipg {

class GenFunError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by monomial_substitution when a denominator maps to the zero vector.
class DegenerateSubstitutionError : public GenFunError {
 public:
  using GenFunError::GenFunError;
};

struct IntPointHash {
  std::size_t operator()(const IntPoint& p) const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ULL ^ p.size();
    for (auto v : p) h ^= std::hash<std::int64_t>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

struct GenFunTerm {
  Rational coefficient;
  IntPoint numerator;
  IntMatrix denominators;  // each a nonzero vector; empty list = monomial

  bool is_monomial() const { return denominators.empty(); }
};

/// One signed unimodular cone: sign * xi^apex / prod (1 - xi^g) over the
/// generator rows g (|det| = 1).
struct SignedCone {
  int sign = 1;
  IntPoint apex;
  IntMatrix generators;
};

class GenFun {
 public:
  static constexpr std::size_t kDefaultDenominatorCap = 64;

  GenFun() = default;

  GenFun(std::size_t dimension, std::int64_t box)
      : dimension_(dimension), lo_(dimension, -box), hi_(dimension, box) {
    if (dimension == 0) throw GenFunError("generating function dimension must be positive");
    if (box < 0) throw GenFunError("box bound must be nonnegative");
  }

  /// Per-coordinate box [lo, hi]; box() is the smallest M with [lo,hi] in [-M,M]^n.
  GenFun(IntPoint lo, IntPoint hi) : dimension_(lo.size()), lo_(std::move(lo)), hi_(std::move(hi)) {
    if (dimension_ == 0) throw GenFunError("generating function dimension must be positive");
    if (hi_.size() != dimension_) throw GenFunError("box corners differ in length");
  }

  std::size_t dimension() const { return dimension_; }
  const IntPoint& lo() const { return lo_; }
  const IntPoint& hi() const { return hi_; }
  std::int64_t box() const {
    std::int64_t m = 0;
    for (std::size_t i = 0; i < dimension_; ++i) m = std::max({m, std::abs(lo_[i]), std::abs(hi_[i])});
    return m;
  }
  std::size_t denominator_cap() const { return cap_; }
  void set_denominator_cap(std::size_t cap) { cap_ = cap; }
  const std::vector<GenFunTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  bool is_explicit() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const GenFunTerm& t) { return t.is_monomial(); });
  }

  std::size_t max_denominators() const {
    std::size_t m = 0;
    for (const auto& t : terms_) m = std::max(m, t.denominators.size());
    return m;
  }

  void add_term(GenFunTerm t) {
    if (t.numerator.size() != dimension_) throw GenFunError("term numerator has wrong dimension");
    if (t.denominators.size() > cap_) throw GenFunError("term exceeds the denominator cap");
    for (const auto& d : t.denominators) {
      if (d.size() != dimension_) throw GenFunError("term denominator has wrong dimension");
      if (std::all_of(d.begin(), d.end(), [](std::int64_t v) { return v == 0; }))
        throw GenFunError("term denominator is the zero vector");
    }
    if (t.coefficient != 0) terms_.push_back(std::move(t));
  }

  void add_monomial(IntPoint x, Rational coefficient = 1) {
    add_term(GenFunTerm{std::move(coefficient), std::move(x), {}});
  }

  /// Merges terms with identical (numerator, denominator multiset), drops zero
  /// coefficients and sorts into canonical order.
  GenFun& normalize() {
    for (auto& t : terms_) std::sort(t.denominators.begin(), t.denominators.end());
    std::sort(terms_.begin(), terms_.end(), term_less);
    std::vector<GenFunTerm> merged;
    merged.reserve(terms_.size());
    for (auto& t : terms_) {
      if (!merged.empty() && merged.back().numerator == t.numerator &&
          merged.back().denominators == t.denominators) {
        merged.back().coefficient += t.coefficient;
      } else {
        if (!merged.empty() && merged.back().coefficient == 0) merged.pop_back();
        merged.push_back(std::move(t));
      }
    }
    if (!merged.empty() && merged.back().coefficient == 0) merged.pop_back();
    terms_ = std::move(merged);
    return *this;
  }

  GenFun& operator+=(const GenFun& other) {
    check_same_dimension(other);
    for (std::size_t i = 0; i < dimension_; ++i) {
      lo_[i] = std::min(lo_[i], other.lo_[i]);
      hi_[i] = std::max(hi_[i], other.hi_[i]);
    }
    terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
    return normalize();
  }

  GenFun& operator-=(const GenFun& other) { return *this += other.scaled(-1); }

  GenFun scaled(const Rational& factor) const {
    GenFun g = *this;
    if (factor == 0) {
      g.terms_.clear();
      return g;
    }
    for (auto& t : g.terms_) t.coefficient *= factor;
    return g;
  }

  friend GenFun operator+(GenFun a, const GenFun& b) { return a += b; }
  friend GenFun operator-(GenFun a, const GenFun& b) { return a -= b; }

  GenFun with_box(IntPoint lo, IntPoint hi) const {
    GenFun g = *this;
    g.lo_ = std::move(lo);
    g.hi_ = std::move(hi);
    return g;
  }

  void check_same_dimension(const GenFun& other) const {
    if (other.dimension_ != dimension_)
      throw GenFunError("dimension mismatch: " + std::to_string(dimension_) + " vs " +
                        std::to_string(other.dimension_));
  }

 private:
  static bool term_less(const GenFunTerm& a, const GenFunTerm& b) {
    if (a.denominators.size() != b.denominators.size())
      return a.denominators.size() < b.denominators.size();
    if (a.denominators != b.denominators) return a.denominators < b.denominators;
    return a.numerator < b.numerator;
  }

  std::size_t dimension_ = 0;
  IntPoint lo_, hi_;
  std::size_t cap_ = kDefaultDenominatorCap;
  std::vector<GenFunTerm> terms_;
};

// ---------------------------------------------------------------------------
// Construction

inline GenFun genfun_of_finite_set(const std::vector<IntPoint>& points, IntPoint lo, IntPoint hi) {
  GenFun g(std::move(lo), std::move(hi));
  for (const auto& p : points) g.add_monomial(p);
  return g.normalize();
}

inline GenFun genfun_of_finite_set(const std::vector<IntPoint>& points, std::size_t dim, std::int64_t box) {
  return genfun_of_finite_set(points, IntPoint(dim, -box), IntPoint(dim, box));
}

namespace detail {

inline IntMatrix transpose(const IntMatrix& m) {
  if (m.empty()) return {};
  IntMatrix t(m[0].size(), IntPoint(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
  return t;
}

inline RationalMatrix to_rational(const IntMatrix& m) {
  RationalMatrix r;
  r.reserve(m.size());
  for (const auto& row : m) r.push_back(ipg::to_rational(row));
  return r;
}

/// Inverse of an integer matrix with |det| = 1.
inline IntMatrix unimodular_inverse(const IntMatrix& m) {
  auto inv = linalg::inverse(to_rational(m));
  if (!inv) throw GenFunError("singular matrix where a unimodular one was expected");
  IntMatrix out(m.size(), IntPoint(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) out[i][j] = to_int64((*inv)[i][j]);
  return out;
}

inline std::int64_t abs_det(const IntMatrix& rows) {
  Integer d = linalg::determinant(rows);
  return to_int64(d < 0 ? Integer(-d) : d);
}

inline std::int64_t centered_mod(std::int64_t v, std::int64_t m) {
  std::int64_t r = v % m;
  if (r < 0) r += m;
  if (2 * r > m) r -= m;
  return r;
}

/// Scaled short vector of Lambda = {l : sum l_i w_i in Z^n} modulo Z^n, where
/// the w_i are the rows of `gens` and D = |det|. Returns v with l = v / D, each
/// |v_i| <= D/2, minimizing max |v_i| (exactly, by walking the group
/// Lambda/Z^n, when D is small; otherwise over small combinations of an
/// LLL-reduced basis).
inline IntPoint short_dual_vector(const IntMatrix& gens, std::int64_t det_abs) {
  const std::size_t n = gens.size();
  // Columns of W^{-1} (W has the w_i as columns) generate Lambda. Since
  // W = gens^T, W^{-1} = (gens^{-1})^T, so its columns are rows of gens^{-1}.
  auto inv = linalg::inverse(to_rational(gens));
  if (!inv) throw GenFunError("singular cone in decomposition");
  IntMatrix group_gens(n, IntPoint(n));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      group_gens[k][i] = centered_mod(to_int64((*inv)[k][i] * Rational(det_abs)), det_abs);
  auto linf = [](const IntPoint& v) {
    std::int64_t m = 0;
    for (auto x : v) m = std::max(m, std::abs(x));
    return m;
  };
  auto is_zero = [](const IntPoint& v) {
    return std::all_of(v.begin(), v.end(), [](std::int64_t x) { return x == 0; });
  };
  IntPoint best;
  std::int64_t best_norm = std::numeric_limits<std::int64_t>::max();
  auto consider = [&](IntPoint v) {
    for (auto& x : v) x = centered_mod(x, det_abs);
    if (is_zero(v)) return;
    auto nrm = linf(v);
    if (nrm < best_norm || (nrm == best_norm && v < best)) {
      best_norm = nrm;
      best = std::move(v);
    }
  };
  constexpr std::int64_t kGroupWalkLimit = 40000;
  if (det_abs <= kGroupWalkLimit) {
    std::set<IntPoint> seen;
    std::vector<IntPoint> frontier{IntPoint(n, 0)};
    seen.insert(frontier[0]);
    while (!frontier.empty()) {
      std::vector<IntPoint> next;
      for (const auto& e : frontier) {
        for (const auto& g : group_gens) {
          IntPoint s(n);
          for (std::size_t i = 0; i < n; ++i) s[i] = centered_mod(e[i] + g[i], det_abs);
          if (seen.insert(s).second) {
            consider(s);
            next.push_back(std::move(s));
          }
        }
      }
      frontier = std::move(next);
    }
  } else {
    RationalMatrix basis(n, RationalVector(n));
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) basis[k][i] = Rational(group_gens[k][i], det_abs);
    basis = linalg::lll_reduce(basis);
    IntMatrix scaled(n, IntPoint(n));
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        scaled[k][i] = centered_mod(to_int64(basis[k][i] * Rational(det_abs)), det_abs);
    std::vector<int> coef(n, -1);
    for (;;) {
      IntPoint v(n, 0);
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) v[i] += coef[k] * scaled[k][i];
      consider(std::move(v));
      std::size_t k = 0;
      while (k < n && coef[k] == 1) coef[k++] = -1;
      if (k == n) break;
      ++coef[k];
    }
  }
  if (best.empty()) throw GenFunError("no short vector found for non-unimodular cone");
  return best;
}

/// Signed decomposition of the simplicial cone spanned by the rows of `gens`
/// into unimodular cones, modulo lower-dimensional cones.
inline void decompose_simplicial(IntMatrix gens, int sign, std::vector<std::pair<int, IntMatrix>>& out) {
  const std::size_t n = gens.size();
  std::int64_t det = abs_det(gens);
  if (det == 0) return;  // lower-dimensional: discarded
  if (det == 1) {
    out.emplace_back(sign, std::move(gens));
    return;
  }
  IntPoint v = short_dual_vector(gens, det);
  if (std::none_of(v.begin(), v.end(), [](std::int64_t x) { return x > 0; }))
    for (auto& x : v) x = -x;
  // z = sum_i (v_i / det) w_i is integral.
  IntPoint z(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) z[j] += v[i] * gens[i][j];
  for (auto& x : z) x /= det;
  z = linalg::primitive(z);
  for (std::size_t i = 0; i < n; ++i) {
    if (v[i] == 0) continue;
    IntMatrix next = gens;
    next[i] = z;
    decompose_simplicial(std::move(next), v[i] > 0 ? sign : -sign, out);
  }
}

/// Primal unimodular cone (rays = columns of W^{-1}) paired with the lattice
/// point where the shifted cone v + K starts.
inline SignedCone primal_cone(int sign, const IntMatrix& dual, const RationalVector& vertex) {
  const std::size_t n = dual.size();
  IntMatrix inv = unimodular_inverse(dual);  // dual * inv = I
  SignedCone cone;
  cone.sign = sign;
  cone.generators.assign(n, IntPoint(n));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) cone.generators[j][i] = inv[i][j];
  cone.apex.assign(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    Rational mu = 0;
    for (std::size_t i = 0; i < n; ++i) mu += Rational(dual[j][i]) * vertex[i];
    std::int64_t m = to_int64(ceil(mu));
    for (std::size_t i = 0; i < n; ++i) cone.apex[i] += m * cone.generators[j][i];
  }
  return cone;
}

}  // namespace detail

/// Signed unimodular decomposition of apex + cone(rays) for a simplicial,
/// full-dimensional cone with primitive rays (given as rows).
inline std::vector<SignedCone> barvinok_decompose(const IntMatrix& rays, const RationalVector& apex) {
  const std::size_t n = rays.size();
  if (n == 0 || rays[0].size() != n) throw GenFunError("barvinok_decompose: cone must be simplicial and full-dimensional");
  // Dual cone generators: rows w with w.r_j >= 0, i.e. columns of R^{-1}
  // where R has the rays as columns (rows of (rays^T)^{-1} ... equivalently
  // the columns of rays^{-1}).
  auto inv = linalg::inverse(detail::to_rational(rays));
  if (!inv) throw GenFunError("barvinok_decompose: rays are linearly dependent");
  IntMatrix dual(n);
  for (std::size_t j = 0; j < n; ++j) {
    RationalVector col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = (*inv)[i][j];
    dual[j] = linalg::primitive(col);
  }
  std::vector<std::pair<int, IntMatrix>> pieces;
  detail::decompose_simplicial(dual, 1, pieces);
  std::vector<SignedCone> out;
  out.reserve(pieces.size());
  for (const auto& [s, w] : pieces) out.push_back(detail::primal_cone(s, w, apex));
  return out;
}

inline GenFunTerm to_term(const SignedCone& c) {
  return GenFunTerm{Rational(c.sign), c.apex, c.generators};
}

/// Brion + signed decomposition. Empty P yields the zero function; a
/// nonempty lower-dimensional P raises NotFullDimensionalError.
inline GenFun genfun_of_polytope(const RationalPolytope& p) {
  const std::size_t n = p.dimension();
  auto bounds = coordinate_bounds(p);
  if (!bounds) return GenFun(n, 0);
  IntPoint lo(n), hi(n);
  for (std::size_t j = 0; j < n; ++j) {
    lo[j] = to_int64(ceil((*bounds)[j].first));
    hi[j] = to_int64(floor((*bounds)[j].second));
  }
  for (std::size_t j = 0; j < n; ++j)
    if (lo[j] > hi[j]) {
      // No lattice point at all; keep a valid (non-inverted) box.
      return GenFun(IntPoint(n, 0), IntPoint(n, 0));
    }
  if (!is_full_dimensional(p)) throw NotFullDimensionalError();
  GenFun g(lo, hi);
  for (const auto& v : enumerate_vertices(p)) {
    IntMatrix dual;
    for (auto r : v.tight_constraints) {
      RationalVector neg(n);
      for (std::size_t i = 0; i < n; ++i) neg[i] = -p.matrix()[r][i];
      dual.push_back(linalg::primitive(neg));
    }
    std::sort(dual.begin(), dual.end());
    dual.erase(std::unique(dual.begin(), dual.end()), dual.end());
    std::vector<std::vector<std::size_t>> pieces;
    if (dual.size() == n) {
      std::vector<std::size_t> all(n);
      for (std::size_t i = 0; i < n; ++i) all[i] = i;
      pieces.push_back(all);
    } else {
      pieces = triangulate_cone(dual, n);
    }
    for (const auto& piece : pieces) {
      IntMatrix gens;
      for (auto i : piece) gens.push_back(dual[i]);
      std::vector<std::pair<int, IntMatrix>> unimodular;
      detail::decompose_simplicial(gens, 1, unimodular);
      for (const auto& [s, w] : unimodular) g.add_term(to_term(detail::primal_cone(s, w, v.coordinates)));
    }
  }
  return g.normalize();
}

// ---------------------------------------------------------------------------
// Specialization direction

/// Deterministic lambda = (1, t, t^2, ...) for the least t = 1, 2, ... with
/// lambda.d != 0 for every denominator of every listed function.
inline IntPoint choose_direction(std::initializer_list<const GenFun*> gs) {
  std::size_t n = 0;
  for (auto g : gs) n = std::max(n, g->dimension());
  for (std::int64_t t = 1;; ++t) {
    IntPoint lambda(n);
    Integer pw = 1;
    bool overflow = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (!fits_int64(pw)) overflow = true;
      lambda[i] = overflow ? 0 : pw.convert_to<std::int64_t>();
      pw *= t;
    }
    if (overflow) throw GenFunError("no specialization direction within 64-bit range");
    bool ok = true;
    for (auto g : gs) {
      for (const auto& term : g->terms()) {
        for (const auto& d : term.denominators)
          if (dot(lambda, d) == 0) {
            ok = false;
            break;
          }
        if (!ok) break;
      }
      if (!ok) break;
    }
    if (ok) return lambda;
  }
}

inline IntPoint choose_direction(const GenFun& g) { return choose_direction({&g}); }

// ---------------------------------------------------------------------------
// Counting

namespace detail {

/// Generalized binomial coefficient C(a, k) for integer a (possibly negative).
inline Rational binomial(std::int64_t a, std::size_t k) {
  Rational r = 1;
  for (std::size_t i = 0; i < k; ++i) r = r * Rational(a - static_cast<std::int64_t>(i)) / Rational(i + 1);
  return r;
}

using Series = std::vector<Rational>;  // truncated power series in t

inline Series multiply(const Series& a, const Series& b, std::size_t order) {
  Series c(order + 1, 0);
  for (std::size_t i = 0; i <= order && i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; i + j <= order && j < b.size(); ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

inline Series invert(const Series& a, std::size_t order) {
  // a[0] != 0
  Series inv(order + 1, 0);
  inv[0] = 1 / a[0];
  for (std::size_t k = 1; k <= order; ++k) {
    Rational s = 0;
    for (std::size_t j = 1; j <= k && j < a.size(); ++j) s += a[j] * inv[k - j];
    inv[k] = -s / a[0];
  }
  return inv;
}

/// Constant term of gamma (1+t)^e / prod_j (1 - (1+t)^{a_j}) as t -> 0.
inline Rational residue_constant_term(const Rational& gamma, std::int64_t e, const IntPoint& a) {
  const std::size_t ell = a.size();
  Series acc(ell + 1);
  for (std::size_t k = 0; k <= ell; ++k) acc[k] = binomial(e, k);
  Rational prefactor = gamma;
  for (auto aj : a) {
    // 1 - (1+t)^a = -a t (1 + sum_{m>=1} C(a, m+1)/a t^m)
    Series h(ell + 1);
    h[0] = 1;
    for (std::size_t m = 1; m <= ell; ++m) h[m] = binomial(aj, m + 1) / Rational(aj);
    acc = multiply(acc, invert(h, ell), ell);
    prefactor *= Rational(-1) / Rational(aj);
  }
  return prefactor * acc[ell];
}

}  // namespace detail

/// |S| via the limit xi -> 1 along xi_j = (1+t)^{lambda_j}.
inline Integer count(const GenFun& g) {
  if (g.empty()) return 0;
  IntPoint lambda = choose_direction(g);
  Rational total = 0;
  for (const auto& t : g.terms()) {
    if (t.is_monomial()) {
      total += t.coefficient;
      continue;
    }
    IntPoint a;
    a.reserve(t.denominators.size());
    for (const auto& d : t.denominators) a.push_back(dot(lambda, d));
    total += detail::residue_constant_term(t.coefficient, dot(lambda, t.numerator), a);
  }
  if (denominator(total) != 1) throw GenFunError("count is not an integer: " + to_string(total));
  return numerator(total);
}

/// Evaluates the rational form at a point avoiding every pole.
inline Rational evaluate(const GenFun& g, const RationalVector& xi) {
  if (xi.size() != g.dimension()) throw GenFunError("evaluation point has wrong dimension");
  auto monomial = [&](const IntPoint& e) {
    Rational r = 1;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (xi[i] == 0) throw GenFunError("evaluation at a zero coordinate");
      Rational base = e[i] > 0 ? xi[i] : 1 / xi[i];
      for (std::int64_t k = 0; k < std::abs(e[i]); ++k) r *= base;
    }
    return r;
  };
  Rational total = 0;
  for (const auto& t : g.terms()) {
    Rational v = t.coefficient * monomial(t.numerator);
    for (const auto& d : t.denominators) {
      Rational den = 1 - monomial(d);
      if (den == 0) throw GenFunError("evaluation point is a pole");
      v /= den;
    }
    total += v;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Series expansion

namespace detail {

/// Flips binomials so lambda.d > 0: 1/(1-x^d) = -x^{-d}/(1-x^{-d}).
inline GenFunTerm oriented(GenFunTerm t, const IntPoint& lambda) {
  for (auto& d : t.denominators) {
    if (dot(lambda, d) < 0) {
      t.coefficient = -t.coefficient;
      for (std::size_t i = 0; i < d.size(); ++i) {
        t.numerator[i] -= d[i];
        d[i] = -d[i];
      }
    }
  }
  return t;
}

/// Integer system over the exponent multipliers m in N^ell of an oriented
/// term, restricted to the box [lo, hi]: lo <= c + sum m_j d_j <= hi.
inline IntegerSystem multiplier_system(const GenFunTerm& t, const IntPoint& lambda, const IntPoint& lo,
                                       const IntPoint& hi) {
  const std::size_t ell = t.denominators.size(), n = t.numerator.size();
  IntegerSystem sys;
  sys.dimension = ell;
  for (std::size_t r = 0; r < n; ++r) {
    IntPoint up(ell), down(ell);
    for (std::size_t j = 0; j < ell; ++j) {
      up[j] = t.denominators[j][r];
      down[j] = -t.denominators[j][r];
    }
    sys.rows.push_back(std::move(up));
    sys.rhs.push_back(hi[r] - t.numerator[r]);
    sys.rows.push_back(std::move(down));
    sys.rhs.push_back(t.numerator[r] - lo[r]);
  }
  // Largest value of lambda over the box.
  std::int64_t top = 0;
  for (std::size_t r = 0; r < n; ++r) top += lambda[r] * (lambda[r] > 0 ? hi[r] : lo[r]);
  std::int64_t budget = top - dot(lambda, t.numerator);
  IntPoint lam_row(ell);
  for (std::size_t j = 0; j < ell; ++j) lam_row[j] = dot(lambda, t.denominators[j]);
  sys.rows.push_back(lam_row);
  sys.rhs.push_back(budget);
  sys.lo.assign(ell, 0);
  sys.hi.resize(ell);
  for (std::size_t j = 0; j < ell; ++j) sys.hi[j] = budget < 0 ? -1 : budget / lam_row[j];
  return sys;
}

/// Adds gamma to acc[x] for every series exponent x of the oriented term
/// inside [lo, hi].
template <class Acc>
inline void expand_term(const GenFunTerm& t, const IntPoint& lambda, const IntPoint& lo, const IntPoint& hi,
                        Acc&& acc) {
  const std::size_t n = t.numerator.size();
  if (t.is_monomial()) {
    for (std::size_t i = 0; i < n; ++i)
      if (t.numerator[i] < lo[i] || t.numerator[i] > hi[i]) return;
    acc(t.numerator, t.coefficient);
    return;
  }
  IntegerSystem sys = multiplier_system(t, lambda, lo, hi);
  for (std::size_t j = 0; j < sys.dimension; ++j)
    if (sys.hi[j] < 0) return;
  LatticeSearch search(sys);
  IntPoint x(n);
  search.visit_all([&](const IntPoint& m) {
    x = t.numerator;
    for (std::size_t j = 0; j < m.size(); ++j)
      if (m[j] != 0)
        for (std::size_t i = 0; i < n; ++i) x[i] += m[j] * t.denominators[j][i];
    acc(x, t.coefficient);
    return true;
  });
}

}  // namespace detail

/// Coefficients of the Laurent expansion of g inside [lo, hi] (nonzero only).
inline std::unordered_map<IntPoint, Rational, IntPointHash> expand(const GenFun& g, const IntPoint& lo,
                                                                  const IntPoint& hi,
                                                                  std::optional<IntPoint> direction = std::nullopt) {
  IntPoint lambda = direction ? *direction : choose_direction(g);
  std::unordered_map<IntPoint, Rational, IntPointHash> acc;
  for (const auto& term : g.terms()) {
    auto t = detail::oriented(term, lambda);
    detail::expand_term(t, lambda, lo, hi, [&](const IntPoint& x, const Rational& c) { acc[x] += c; });
  }
  for (auto it = acc.begin(); it != acc.end();) {
    if (it->second == 0)
      it = acc.erase(it);
    else
      ++it;
  }
  return acc;
}

/// The same set as g, with one monomial per point.
inline GenFun to_explicit(const GenFun& g) {
  if (g.is_explicit()) return g;
  GenFun out(g.lo(), g.hi());
  for (auto& [x, c] : expand(g, g.lo(), g.hi())) out.add_monomial(x, c);
  return out.normalize();
}

/// Coefficient lookups of individual exponents in the series of g.
class SeriesOracle {
 public:
  explicit SeriesOracle(const GenFun& g, std::optional<IntPoint> direction = std::nullopt)
      : lambda_(direction ? *direction : choose_direction(g)) {
    for (const auto& term : g.terms()) {
      if (term.is_monomial()) {
        monomials_[term.numerator] += term.coefficient;
        continue;
      }
      Entry e{detail::oriented(term, lambda_), {}};
      if (e.term.denominators.size() == e.term.numerator.size() &&
          detail::abs_det(e.term.denominators) == 1)
        e.inverse = detail::unimodular_inverse(detail::transpose(e.term.denominators));
      rational_.push_back(std::move(e));
    }
  }

  Rational coefficient(const IntPoint& x) const {
    Rational total = 0;
    if (auto it = monomials_.find(x); it != monomials_.end()) total += it->second;
    for (const auto& e : rational_) {
      if (!e.inverse.empty()) {
        // x - c = D^T m with D rows = denominators; m = (D^T)^{-1} (x - c).
        bool ok = true;
        for (std::size_t j = 0; j < e.inverse.size() && ok; ++j) {
          std::int64_t m = 0;
          for (std::size_t i = 0; i < x.size(); ++i) m += e.inverse[j][i] * (x[i] - e.term.numerator[i]);
          ok = m >= 0;
        }
        if (ok) total += e.term.coefficient;
        continue;
      }
      std::int64_t hits = 0;
      detail::expand_term(e.term, lambda_, x, x, [&](const IntPoint&, const Rational&) { ++hits; });
      total += e.term.coefficient * Rational(hits);
    }
    return total;
  }

 private:
  struct Entry {
    GenFunTerm term;
    IntMatrix inverse;
  };
  IntPoint lambda_;
  std::unordered_map<IntPoint, Rational, IntPointHash> monomials_;
  std::vector<Entry> rational_;
};

// ---------------------------------------------------------------------------
// Set operations

inline GenFun cartesian_product(const GenFun& a, const GenFun& b) {
  const std::size_t na = a.dimension(), nb = b.dimension();
  GenFun g(concat(a.lo(), b.lo()), concat(a.hi(), b.hi()));
  g.set_denominator_cap(std::max(a.denominator_cap(), b.denominator_cap()) * 2);
  for (const auto& s : a.terms()) {
    for (const auto& t : b.terms()) {
      GenFunTerm p;
      p.coefficient = s.coefficient * t.coefficient;
      p.numerator = concat(s.numerator, t.numerator);
      for (const auto& d : s.denominators) p.denominators.push_back(concat(d, IntPoint(nb, 0)));
      for (const auto& d : t.denominators) p.denominators.push_back(concat(IntPoint(na, 0), d));
      g.add_term(std::move(p));
    }
  }
  return g.normalize();
}

/// Coefficientwise product; g(S1) * g(S2) = g(S1 cap S2).
inline GenFun hadamard_product(const GenFun& a, const GenFun& b) {
  a.check_same_dimension(b);
  const std::size_t n = a.dimension();
  IntPoint lo(n), hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = std::max(a.lo()[i], b.lo()[i]);
    hi[i] = std::min(a.hi()[i], b.hi()[i]);
  }
  bool empty_box = false;
  for (std::size_t i = 0; i < n; ++i) empty_box |= lo[i] > hi[i];
  if (empty_box) {
    for (std::size_t i = 0; i < n; ++i) hi[i] = lo[i] = std::clamp<std::int64_t>(0, a.lo()[i], a.hi()[i]);
    return GenFun(lo, hi);
  }
  GenFun out(lo, hi);
  auto in_box = [&](const IntPoint& x) {
    for (std::size_t i = 0; i < n; ++i)
      if (x[i] < lo[i] || x[i] > hi[i]) return false;
    return true;
  };
  if (a.is_explicit() || b.is_explicit()) {
    const GenFun& expl = a.is_explicit() ? a : b;
    const GenFun& other = a.is_explicit() ? b : a;
    if (other.is_explicit()) {
      std::unordered_map<IntPoint, Rational, IntPointHash> coef;
      for (const auto& t : other.terms()) coef[t.numerator] += t.coefficient;
      for (const auto& t : expl.terms()) {
        if (!in_box(t.numerator)) continue;
        auto it = coef.find(t.numerator);
        if (it != coef.end()) out.add_monomial(t.numerator, t.coefficient * it->second);
      }
    } else {
      SeriesOracle oracle(other);
      for (const auto& t : expl.terms()) {
        if (!in_box(t.numerator)) continue;
        Rational c = oracle.coefficient(t.numerator);
        if (c != 0) out.add_monomial(t.numerator, t.coefficient * c);
      }
    }
    return out.normalize();
  }
  auto ea = expand(a, lo, hi);
  auto eb = expand(b, lo, hi);
  for (const auto& [x, c] : ea) {
    auto it = eb.find(x);
    if (it != eb.end()) out.add_monomial(x, c * it->second);
  }
  return out.normalize();
}

/// Boolean combination phi(S_1, ..., S_m), phi given as a truth table indexed
/// by bitmask (bit i set = member of S_i); phi(0) must be false. Expanded by
/// Moebius inversion into a signed sum of intersections.
inline GenFun boolean_combine(const std::vector<GenFun>& gs, const std::vector<bool>& truth_table) {
  const std::size_t m = gs.size();
  if (m == 0) throw GenFunError("boolean_combine needs at least one operand");
  if (m > 16) throw GenFunError("boolean_combine supports at most 16 operands");
  if (truth_table.size() != (std::size_t{1} << m)) throw GenFunError("truth table has wrong size");
  if (truth_table[0]) throw GenFunError("boolean function must map all-false to false (finite result)");
  for (const auto& g : gs) gs[0].check_same_dimension(g);
  const std::size_t n = gs[0].dimension();
  IntPoint lo = gs[0].lo(), hi = gs[0].hi();
  for (const auto& g : gs)
    for (std::size_t i = 0; i < n; ++i) {
      lo[i] = std::min(lo[i], g.lo()[i]);
      hi[i] = std::max(hi[i], g.hi()[i]);
    }
  GenFun result(lo, hi);
  std::map<std::size_t, GenFun> inter;
  for (std::size_t t = 1; t < (std::size_t{1} << m); ++t) {
    // c_T = sum_{mask subset of T} phi(mask) (-1)^{|T|-|mask|}
    std::int64_t c = 0;
    for (std::size_t mask = t;; mask = (mask - 1) & t) {
      if (truth_table[mask]) c += ((__builtin_popcountll(t) - __builtin_popcountll(mask)) % 2) ? -1 : 1;
      if (mask == 0) break;
    }
    if (c == 0) continue;
    // Intersection over T, built from the intersection over T minus its top bit.
    std::function<const GenFun&(std::size_t)> get = [&](std::size_t s) -> const GenFun& {
      if (auto it = inter.find(s); it != inter.end()) return it->second;
      std::size_t top = 63 - __builtin_clzll(s);
      std::size_t rest = s & ~(std::size_t{1} << top);
      GenFun value = rest == 0 ? gs[top] : hadamard_product(get(rest), gs[top]);
      return inter.emplace(s, std::move(value)).first->second;
    };
    result += get(t).scaled(Rational(c));
  }
  return result.normalize();
}

inline std::vector<bool> union_table(std::size_t m) {
  std::vector<bool> t(std::size_t{1} << m, true);
  t[0] = false;
  return t;
}

/// S_0 minus the union of the others.
inline std::vector<bool> difference_table(std::size_t m) {
  std::vector<bool> t(std::size_t{1} << m, false);
  t[1] = true;
  return t;
}

inline std::vector<bool> intersection_table(std::size_t m) {
  std::vector<bool> t(std::size_t{1} << m, false);
  t.back() = true;
  return t;
}

namespace detail {

inline void image_box(const IntMatrix& psi, const IntPoint& lo, const IntPoint& hi, IntPoint& out_lo,
                      IntPoint& out_hi) {
  out_lo.assign(psi.size(), 0);
  out_hi.assign(psi.size(), 0);
  for (std::size_t r = 0; r < psi.size(); ++r)
    for (std::size_t j = 0; j < lo.size(); ++j) {
      std::int64_t a = psi[r][j] * lo[j], b = psi[r][j] * hi[j];
      out_lo[r] += std::min(a, b);
      out_hi[r] += std::max(a, b);
    }
}

inline IntPoint apply(const IntMatrix& psi, const IntPoint& x) {
  IntPoint y(psi.size(), 0);
  for (std::size_t r = 0; r < psi.size(); ++r) y[r] = dot(psi[r], x);
  return y;
}

}  // namespace detail

/// xi^x -> eta^{psi x} termwise. Represents g(psi(S)) when psi is injective
/// on S; otherwise the image multiset.
inline GenFun monomial_substitution(const GenFun& g, const IntMatrix& psi) {
  for (const auto& row : psi)
    if (row.size() != g.dimension()) throw GenFunError("substitution matrix has wrong width");
  if (psi.empty()) throw GenFunError("substitution matrix has no rows");
  IntPoint lo, hi;
  detail::image_box(psi, g.lo(), g.hi(), lo, hi);
  GenFun out(lo, hi);
  out.set_denominator_cap(g.denominator_cap());
  for (const auto& t : g.terms()) {
    GenFunTerm s;
    s.coefficient = t.coefficient;
    s.numerator = detail::apply(psi, t.numerator);
    for (const auto& d : t.denominators) {
      IntPoint e = detail::apply(psi, d);
      if (std::all_of(e.begin(), e.end(), [](std::int64_t v) { return v == 0; }))
        throw DegenerateSubstitutionError("substitution sends denominator " + to_string(d) + " to zero");
      s.denominators.push_back(std::move(e));
    }
    out.add_term(std::move(s));
  }
  return out.normalize();
}

/// Coordinate-selection matrix keeping `keep` (in order) out of `dim` coordinates.
inline IntMatrix selection_matrix(std::size_t dim, const std::vector<std::size_t>& keep) {
  IntMatrix psi(keep.size(), IntPoint(dim, 0));
  for (std::size_t r = 0; r < keep.size(); ++r) psi[r][keep[r]] = 1;
  return psi;
}

inline IntMatrix drop_last(std::size_t dim, std::size_t drop) {
  std::vector<std::size_t> keep(dim - drop);
  for (std::size_t i = 0; i < keep.size(); ++i) keep[i] = i;
  return selection_matrix(dim, keep);
}

/// g(psi(S)) for any integer psi. Uses the monomial substitution when it is
/// nondegenerate and verified injective on S; otherwise enumerates S, maps,
/// deduplicates and re-encodes.
inline GenFun project(const GenFun& g, const IntMatrix& psi) {
  try {
    GenFun sub = monomial_substitution(g, psi);
    // Injective iff the image series has 0/1 coefficients: sum c^2 == sum c.
    if (sub.is_explicit()) {
      bool ok = std::all_of(sub.terms().begin(), sub.terms().end(),
                            [](const GenFunTerm& t) { return t.coefficient == 1; });
      if (ok) return sub;
    } else if (count(hadamard_product(sub, sub)) == count(sub)) {
      return sub;
    }
  } catch (const DegenerateSubstitutionError&) {
  }
  IntPoint lo, hi;
  detail::image_box(psi, g.lo(), g.hi(), lo, hi);
  std::unordered_map<IntPoint, bool, IntPointHash> image;
  if (g.is_explicit()) {
    for (const auto& t : g.terms()) image.emplace(detail::apply(psi, t.numerator), true);
  } else {
    for (const auto& [x, c] : expand(g, g.lo(), g.hi())) image.emplace(detail::apply(psi, x), true);
  }
  GenFun out(lo, hi);
  for (const auto& [y, _] : image) out.add_monomial(y);
  return out.normalize();
}

/// Projection of the lattice points of a polytope onto the coordinates
/// `keep` (in order): the image set psi(P cap Z^n) for a coordinate
/// selection psi. Image points are generated directly, one feasibility
/// search per candidate, so the fibre over an image point is never listed.
/// `box`, when given, is a box (in P's coordinates) containing every lattice
/// point of P; otherwise it is found by LP.
inline GenFun project_polytope(const RationalPolytope& p, const std::vector<std::size_t>& keep,
                               const std::optional<std::pair<IntPoint, IntPoint>>& box = std::nullopt) {
  const std::size_t n = p.dimension(), k = keep.size();
  // Reorder coordinates: kept first, hidden after.
  std::vector<std::size_t> order = keep;
  std::vector<bool> kept(n, false);
  for (auto i : keep) kept[i] = true;
  for (std::size_t i = 0; i < n; ++i)
    if (!kept[i]) order.push_back(i);
  RationalMatrix m;
  for (const auto& row : p.matrix()) {
    RationalVector r(n);
    for (std::size_t j = 0; j < n; ++j) r[j] = row[order[j]];
    m.push_back(std::move(r));
  }
  RationalPolytope q(n, std::move(m), p.rhs());
  std::optional<IntegerSystem> sys;
  if (box) {
    IntPoint blo(n), bhi(n);
    for (std::size_t j = 0; j < n; ++j) {
      blo[j] = box->first[order[j]];
      bhi[j] = box->second[order[j]];
    }
    sys = to_integer_system(q, std::move(blo), std::move(bhi));
  } else {
    sys = to_integer_system(q);
  }
  IntPoint lo(k, 0), hi(k, 0);
  if (!sys) return GenFun(lo, hi);
  for (std::size_t j = 0; j < k; ++j) {
    lo[j] = sys->lo[j];
    hi[j] = sys->hi[j];
  }
  for (std::size_t j = 0; j < n; ++j)
    if (sys->lo[j] > sys->hi[j]) return GenFun(IntPoint(k, 0), IntPoint(k, 0));
  GenFun out(lo, hi);
  if (k == n) {
    LatticeSearch s(*sys);
    s.visit_all([&](const IntPoint& x) {
      out.add_monomial(x);
      return true;
    });
    return out.normalize();
  }
  LatticeSearch search(*sys);
  IntPoint witness;  // last successful hidden completion
  std::function<void(std::size_t)> dfs = [&](std::size_t depth) {
    if (depth == k) {
      bool ok = false;
      if (!witness.empty()) {
        for (std::size_t j = k; j < n; ++j) search.set(j, witness[j - k]);
        ok = search.satisfied();
        if (!ok)
          for (std::size_t j = k; j < n; ++j) search.clear(j);
      }
      if (!ok && search.complete(k)) {
        ok = true;
        witness.assign(search.point().begin() + static_cast<std::ptrdiff_t>(k), search.point().end());
      }
      if (ok) {
        out.add_monomial(IntPoint(search.point().begin(), search.point().begin() + static_cast<std::ptrdiff_t>(k)));
        for (std::size_t j = k; j < n; ++j) search.clear(j);
      }
      return;
    }
    auto [a, b] = search.range(depth);
    for (std::int64_t v = a; v <= b; ++v) {
      search.set(depth, v);
      dfs(depth + 1);
    }
    search.clear(depth);
  };
  dfs(0);
  return out.normalize();
}

// ---------------------------------------------------------------------------
// Enumeration and optimization

struct EnumerationStats {
  std::size_t emitted = 0;
  std::size_t peak_buffer = 0;  // largest number of points held at once
};

/// Streams W = {w : (t, w) in S}, the projection onto the last p coordinates,
/// in strictly increasing lexicographic order. Explicit functions are sorted
/// directly; rational ones are expanded one slab (first coordinate of w
/// fixed) at a time, so memory is bounded by a slab rather than by |W|. The
/// sink returns false to stop.
inline EnumerationStats enumerate(const GenFun& g, std::size_t p, const std::function<bool(const IntPoint&)>& sink) {
  const std::size_t n = g.dimension();
  if (p < 1 || p > n) throw GenFunError("enumerate: need 1 <= p <= dimension");
  EnumerationStats stats;
  auto check_set = [](const Rational& c) {
    if (c != 1) throw GenFunError("generating function is not the indicator of a set (coefficient " + to_string(c) + ")");
  };
  auto tail = [&](const IntPoint& x) { return IntPoint(x.begin() + static_cast<std::ptrdiff_t>(n - p), x.end()); };
  if (g.is_explicit()) {
    std::vector<IntPoint> pts;
    pts.reserve(g.size());
    for (const auto& t : g.terms()) {
      check_set(t.coefficient);
      pts.push_back(tail(t.numerator));
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    stats.peak_buffer = pts.size();
    for (const auto& w : pts) {
      ++stats.emitted;
      if (!sink(w)) break;
    }
    return stats;
  }
  IntPoint lambda = choose_direction(g);
  std::vector<GenFunTerm> oriented;
  for (const auto& t : g.terms()) oriented.push_back(detail::oriented(t, lambda));
  const std::size_t lead = n - p;
  for (std::int64_t v = g.lo()[lead]; v <= g.hi()[lead]; ++v) {
    IntPoint lo = g.lo(), hi = g.hi();
    lo[lead] = hi[lead] = v;
    std::unordered_map<IntPoint, Rational, IntPointHash> acc;
    for (const auto& t : oriented)
      detail::expand_term(t, lambda, lo, hi, [&](const IntPoint& x, const Rational& c) { acc[x] += c; });
    std::vector<IntPoint> slab;
    for (const auto& [x, c] : acc) {
      if (c == 0) continue;
      check_set(c);
      slab.push_back(tail(x));
    }
    std::sort(slab.begin(), slab.end());
    slab.erase(std::unique(slab.begin(), slab.end()), slab.end());
    stats.peak_buffer = std::max(stats.peak_buffer, std::max(slab.size(), acc.size()));
    for (const auto& w : slab) {
      ++stats.emitted;
      if (!sink(w)) return stats;
    }
  }
  return stats;
}

inline std::vector<IntPoint> enumerate_all(const GenFun& g, std::size_t p) {
  std::vector<IntPoint> out;
  enumerate(g, p, [&](const IntPoint& w) {
    out.push_back(w);
    return true;
  });
  return out;
}

inline std::vector<IntPoint> enumerate_all(const GenFun& g) { return enumerate_all(g, g.dimension()); }

/// Hadamard product of g with the half-space slice {x : f.x >= t}: the
/// slice's generating function is never formed; its coefficient at x is the
/// half-space indicator.
inline GenFun restrict_halfspace(const GenFun& g, const IntPoint& f, std::int64_t t) {
  GenFun e = to_explicit(g);
  GenFun out(e.lo(), e.hi());
  for (const auto& term : e.terms())
    if (dot(f, term.numerator) >= t) out.add_term(term);
  return out;
}

struct Optimum {
  std::int64_t value = 0;
  IntPoint witness;
};

/// max{f.x : x in S} by binary search on the threshold t, testing
/// |S cap {f.x >= t}| > 0. The witness is the lexicographically least
/// optimal point.
inline std::optional<Optimum> linear_optimize(const GenFun& g, const IntPoint& f) {
  if (f.size() != g.dimension()) throw GenFunError("objective has wrong dimension");
  GenFun e = to_explicit(g);
  if (count(e) == 0) return std::nullopt;
  std::int64_t bound = norm1(f) * e.box();
  std::int64_t lo = -bound, hi = bound;  // invariant: nonempty at lo
  while (lo < hi) {
    std::int64_t mid = lo + (hi - lo + 1) / 2;
    if (count(restrict_halfspace(e, f, mid)) > 0)
      lo = mid;
    else
      hi = mid - 1;
  }
  Optimum opt;
  opt.value = lo;
  enumerate(restrict_halfspace(e, f, lo), e.dimension(), [&](const IntPoint& x) {
    opt.witness = x;
    return false;
  });
  return opt;
}

inline std::optional<Optimum> linear_minimize(const GenFun& g, const IntPoint& f) {
  IntPoint neg(f);
  for (auto& v : neg) v = -v;
  auto r = linear_optimize(g, neg);
  if (r) r->value = -r->value;
  return r;
}

// ---------------------------------------------------------------------------
// Debug dump: one term per line, "gamma; c; d_1 ... d_l".

inline std::string dump(const GenFun& g) {
  std::ostringstream os;
  os << "genfun dim " << g.dimension() << " lo " << to_string(g.lo()) << " hi " << to_string(g.hi()) << '\n';
  for (const auto& t : g.terms()) {
    os << to_string(t.coefficient) << "; " << to_string(t.numerator) << ';';
    for (const auto& d : t.denominators) os << ' ' << to_string(d);
    os << '\n';
  }
  return os.str();
}

inline GenFun parse_dump(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  auto parse_point = [](std::string_view s) {
    IntPoint p;
    auto l = s.find('('), r = s.find(')');
    if (l == std::string_view::npos || r == std::string_view::npos) throw GenFunError("malformed point in dump");
    std::string body(s.substr(l + 1, r - l - 1));
    std::istringstream ps(body);
    std::string tok;
    while (std::getline(ps, tok, ',')) p.push_back(std::stoll(tok));
    return p;
  };
  if (!std::getline(is, line) || line.rfind("genfun dim ", 0) != 0) throw GenFunError("missing dump header");
  auto lo_pos = line.find(" lo "), hi_pos = line.find(" hi ");
  GenFun g(parse_point(std::string_view(line).substr(lo_pos, hi_pos - lo_pos)),
           parse_point(std::string_view(line).substr(hi_pos)));
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto s1 = line.find(';'), s2 = line.find(';', s1 + 1);
    if (s1 == std::string::npos || s2 == std::string::npos) throw GenFunError("malformed term line");
    GenFunTerm t;
    t.coefficient = parse_rational(line.substr(0, s1));
    t.numerator = parse_point(std::string_view(line).substr(s1 + 1, s2 - s1 - 1));
    std::string rest = line.substr(s2 + 1);
    std::size_t pos = 0;
    while ((pos = rest.find('(', pos)) != std::string::npos) {
      auto end = rest.find(')', pos);
      t.denominators.push_back(parse_point(std::string_view(rest).substr(pos, end - pos + 1)));
      pos = end + 1;
    }
    g.add_term(std::move(t));
  }
  return g.normalize();
}

}  // namespace ipg
