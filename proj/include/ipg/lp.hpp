#pragma once

// Exact dense simplex for max c.x subject to A x <= b with free x.
// Only used for coordinate bounds, interior-point checks and payoff bounds,
// so sizes stay tiny and Bland's rule is plenty.

#include "ipg/arith.hpp"

namespace ipg::lp {

enum class Status { optimal, infeasible, unbounded };

struct Result {
  Status status = Status::infeasible;
  Rational value;
  RationalVector point;
};

namespace detail {

// Tableau in canonical form: rows hold [coefficients | rhs]; basis[i] is the
// basic variable of row i. `cost` is the objective to maximize over columns.
inline Status pivot_to_optimal(RationalMatrix& t, std::vector<std::size_t>& basis,
                               const RationalVector& cost, std::size_t active_cols) {
  const std::size_t m = t.size();
  const std::size_t rhs = t.empty() ? 0 : t[0].size() - 1;
  for (;;) {
    // Reduced costs: cost_j - sum_i cost_{basis_i} t_ij.
    std::size_t enter = active_cols;
    for (std::size_t j = 0; j < active_cols; ++j) {
      Rational rc = cost[j];
      for (std::size_t i = 0; i < m; ++i)
        if (t[i][j] != 0) rc -= cost[basis[i]] * t[i][j];
      if (rc > 0) {
        enter = j;
        break;
      }
    }
    if (enter == active_cols) return Status::optimal;
    std::size_t leave = m;
    Rational best;
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] <= 0) continue;
      Rational ratio = t[i][rhs] / t[i][enter];
      if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == m) return Status::unbounded;
    Rational piv = t[leave][enter];
    for (auto& v : t[leave]) v /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || t[i][enter] == 0) continue;
      Rational f = t[i][enter];
      for (std::size_t j = 0; j <= rhs; ++j)
        if (t[leave][j] != 0) t[i][j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }
}

}  // namespace detail

inline Result maximize(const RationalMatrix& a, const RationalVector& b, const RationalVector& c) {
  const std::size_t m = a.size();
  const std::size_t n = c.size();
  // Columns: x+ (n), x- (n), slack (m), artificial (m).
  const std::size_t nx = 2 * n, ns = m, na = m;
  const std::size_t cols = nx + ns + na;
  RationalMatrix t(m, RationalVector(cols + 1));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    const bool flip = b[i] < 0;
    const int s = flip ? -1 : 1;
    for (std::size_t j = 0; j < n; ++j) {
      t[i][j] = s * a[i][j];
      t[i][n + j] = -s * a[i][j];
    }
    t[i][nx + i] = s;
    t[i][cols] = s * b[i];
    if (flip) {
      t[i][nx + ns + i] = 1;
      basis[i] = nx + ns + i;
    } else {
      basis[i] = nx + i;
    }
  }
  RationalVector phase1(cols, 0);
  for (std::size_t i = 0; i < na; ++i) phase1[nx + ns + i] = -1;
  detail::pivot_to_optimal(t, basis, phase1, cols);
  Rational infeas = 0;
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] >= nx + ns) infeas += t[i][cols];
  Result res;
  if (infeas != 0) {
    res.status = Status::infeasible;
    return res;
  }
  // Drive remaining (zero-valued) artificials out of the basis where possible.
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < nx + ns) continue;
    for (std::size_t j = 0; j < nx + ns; ++j) {
      if (t[i][j] == 0) continue;
      Rational piv = t[i][j];
      for (auto& v : t[i]) v /= piv;
      for (std::size_t r = 0; r < m; ++r) {
        if (r == i || t[r][j] == 0) continue;
        Rational f = t[r][j];
        for (std::size_t k = 0; k <= cols; ++k) t[r][k] -= f * t[i][k];
      }
      basis[i] = j;
      break;
    }
  }
  RationalVector phase2(cols, 0);
  for (std::size_t j = 0; j < n; ++j) {
    phase2[j] = c[j];
    phase2[n + j] = -c[j];
  }
  // Rows whose artificial could not leave are redundant; their artificial stays
  // basic at zero and its column is excluded from entering.
  res.status = detail::pivot_to_optimal(t, basis, phase2, nx + ns);
  if (res.status == Status::unbounded) return res;
  RationalVector full(cols, 0);
  for (std::size_t i = 0; i < m; ++i) full[basis[i]] = t[i][cols];
  res.point.assign(n, 0);
  res.value = 0;
  for (std::size_t j = 0; j < n; ++j) {
    res.point[j] = full[j] - full[n + j];
    res.value += c[j] * res.point[j];
  }
  return res;
}

inline Result minimize(const RationalMatrix& a, const RationalVector& b, const RationalVector& c) {
  RationalVector neg(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) neg[i] = -c[i];
  Result r = maximize(a, b, neg);
  if (r.status == Status::optimal) r.value = -r.value;
  return r;
}

}  // namespace ipg::lp
