#pragma once

// Dense exact linear algebra over Q and Z for the small systems that show up
// in vertex enumeration and cone decomposition.

#include "ipg/arith.hpp"

#include <numeric>
#include <optional>
#include <utility>

namespace ipg::linalg {

/// Row-reduces `m` in place; returns the pivot columns.
inline std::vector<std::size_t> row_reduce(RationalMatrix& m) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t rows = m.size();
  const std::size_t cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    Rational inv = 1 / m[r][c];
    for (std::size_t j = c; j < cols; ++j) m[r][j] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rational f = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline std::size_t rank(RationalMatrix m) { return row_reduce(m).size(); }

inline std::size_t rank(const IntMatrix& rows) {
  RationalMatrix m;
  m.reserve(rows.size());
  for (const auto& r : rows) m.push_back(to_rational(r));
  return rank(std::move(m));
}

/// Solves the square system A x = b; nullopt when A is singular.
inline std::optional<RationalVector> solve(const RationalMatrix& a, const RationalVector& b) {
  const std::size_t n = a.size();
  RationalMatrix aug(n, RationalVector(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = a[i][j];
    aug[i][n] = b[i];
  }
  auto piv = row_reduce(aug);
  if (piv.size() < n || piv.back() >= n) return std::nullopt;
  RationalVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = aug[i][n];
  return x;
}

inline std::optional<RationalMatrix> inverse(const RationalMatrix& a) {
  const std::size_t n = a.size();
  RationalMatrix aug(n, RationalVector(2 * n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = a[i][j];
    aug[i][n + i] = 1;
  }
  auto piv = row_reduce(aug);
  if (piv.size() < n || piv[n - 1] >= n) return std::nullopt;
  RationalMatrix inv(n, RationalVector(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  return inv;
}

/// Fraction-free (Bareiss) determinant.
inline Integer determinant(IntegerMatrix m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  Integer sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && m[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(m[p], m[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

inline Integer determinant(const IntMatrix& m) {
  IntegerMatrix z(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) z[i].assign(m[i].begin(), m[i].end());
  return determinant(std::move(z));
}

/// Smallest positive integer multiple of `v` with coprime entries.
inline IntPoint primitive(const RationalVector& v) {
  Integer den = 1;
  for (const auto& q : v) den = lcm(den, denominator(q));
  IntegerVector z(v.size());
  Integer g = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    z[i] = numerator(v[i]) * (den / denominator(v[i]));
    g = gcd(g, z[i]);
  }
  IntPoint out(v.size(), 0);
  if (g == 0) return out;
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = to_int64(z[i] / g);
  return out;
}

inline IntPoint primitive(const IntPoint& v) {
  std::int64_t g = 0;
  for (auto x : v) g = std::gcd(g, x < 0 ? -x : x);
  if (g <= 1) return v;
  IntPoint out(v);
  for (auto& x : out) x /= g;
  return out;
}

/// Generalized cross product: a nonzero vector orthogonal to the n-1 given
/// rows of length n, or nullopt if they are dependent.
inline std::optional<IntPoint> orthogonal_complement(const IntMatrix& rows, std::size_t n) {
  if (rows.size() + 1 != n) throw std::invalid_argument("orthogonal_complement: need n-1 rows");
  RationalVector normal(n);
  bool nonzero = false;
  for (std::size_t c = 0; c < n; ++c) {
    IntegerMatrix minor(n - 1, IntegerVector(n - 1));
    for (std::size_t i = 0; i + 1 < n; ++i) {
      std::size_t jj = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == c) continue;
        minor[i][jj++] = rows[i][j];
      }
    }
    Integer d = determinant(std::move(minor));
    normal[c] = ((c % 2) ? -d : d);
    if (d != 0) nonzero = true;
  }
  if (!nonzero) return std::nullopt;
  return primitive(normal);
}

inline RationalMatrix transpose(const RationalMatrix& a) {
  if (a.empty()) return {};
  RationalMatrix t(a[0].size(), RationalVector(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  return t;
}

/// LLL reduction (delta = 3/4) of the basis given as rows; exact arithmetic.
inline RationalMatrix lll_reduce(RationalMatrix basis) {
  const std::size_t n = basis.size();
  if (n == 0) return basis;
  const std::size_t dim = basis[0].size();
  auto inner = [dim](const RationalVector& a, const RationalVector& b) {
    Rational s = 0;
    for (std::size_t i = 0; i < dim; ++i) s += a[i] * b[i];
    return s;
  };
  RationalMatrix star(n, RationalVector(dim));
  RationalMatrix mu(n, RationalVector(n));
  RationalVector bnorm(n);
  auto gram_schmidt = [&] {
    for (std::size_t i = 0; i < n; ++i) {
      star[i] = basis[i];
      for (std::size_t j = 0; j < i; ++j) {
        mu[i][j] = bnorm[j] == 0 ? Rational(0) : inner(basis[i], star[j]) / bnorm[j];
        for (std::size_t t = 0; t < dim; ++t) star[i][t] -= mu[i][j] * star[j][t];
      }
      bnorm[i] = inner(star[i], star[i]);
    }
  };
  gram_schmidt();
  const Rational delta(3, 4);
  std::size_t k = 1;
  while (k < n) {
    for (std::size_t jj = k; jj-- > 0;) {
      Integer q = floor(mu[k][jj] + Rational(1, 2));
      if (q != 0) {
        for (std::size_t t = 0; t < dim; ++t) basis[k][t] -= Rational(q) * basis[jj][t];
        gram_schmidt();
      }
    }
    if (bnorm[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * bnorm[k - 1]) {
      ++k;
    } else {
      std::swap(basis[k], basis[k - 1]);
      gram_schmidt();
      k = k > 1 ? k - 1 : 1;
    }
  }
  return basis;
}

}  // namespace ipg::linalg
