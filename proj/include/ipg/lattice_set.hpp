#pragma once

// A computed lattice-point set: its generating function plus a label saying
// which construction produced it.

#include "ipg/genfun.hpp"

namespace ipg {

struct EncodingOptions {
  // Full-dimensional polytopes up to this dimension go through Brion/Barvinok;
  // anything larger (or lower-dimensional) is encoded point by point.
  std::size_t barvinok_max_dimension = 4;
};

class LatticeSet {
 public:
  LatticeSet() = default;
  LatticeSet(GenFun g, std::string provenance) : genfun_(std::move(g)), provenance_(std::move(provenance)) {}

  std::size_t dimension() const { return genfun_.dimension(); }
  std::int64_t box() const { return genfun_.box(); }
  const GenFun& genfun() const { return genfun_; }
  const std::string& provenance() const { return provenance_; }

  Integer count() const { return ipg::count(genfun_); }
  bool empty() const { return count() == 0; }

  EnumerationStats for_each(const std::function<bool(const IntPoint&)>& sink) const {
    return enumerate(genfun_, dimension(), sink);
  }

  std::vector<IntPoint> points() const { return enumerate_all(genfun_); }

  std::optional<Optimum> maximize(const IntPoint& f) const { return linear_optimize(genfun_, f); }
  std::optional<Optimum> minimize(const IntPoint& f) const { return linear_minimize(genfun_, f); }

 private:
  GenFun genfun_;
  std::string provenance_;
};

/// Generating function of P cap Z^n under the encoding policy. Lower-dimensional
/// and high-dimensional polytopes fall back to explicit enumeration.
/// `box`, when given, contains every lattice point of P and replaces the
/// bounding LPs of the explicit path.
inline GenFun encode_polytope(const RationalPolytope& p, const EncodingOptions& options = {},
                              const std::optional<std::pair<IntPoint, IntPoint>>& box = std::nullopt) {
  const std::size_t n = p.dimension();
  if (n <= options.barvinok_max_dimension) {
    try {
      return genfun_of_polytope(p);
    } catch (const NotFullDimensionalError&) {
    }
  }
  auto sys = box ? std::optional<IntegerSystem>(to_integer_system(p, box->first, box->second)) : to_integer_system(p);
  if (!sys) return GenFun(n, 0);
  for (std::size_t j = 0; j < n; ++j)
    if (sys->lo[j] > sys->hi[j]) return GenFun(n, 0);
  GenFun g(sys->lo, sys->hi);
  LatticeSearch search(*sys);
  search.visit_all([&](const IntPoint& x) {
    g.add_monomial(x);
    return true;
  });
  return g.normalize();
}

}  // namespace ipg
