#pragma once

// Solution concepts over the extended game: pure Nash equilibria, fixed-action
// slices, Pareto optima, welfare ratios and the pure threat point. Every set
// is derived from S^ and the deviation sets through generating-function
// operations; `oracle` holds the direct definitions used for cross-checks.

#include "ipg/model.hpp"

#include <map>

namespace ipg {

struct WelfareReport {
  std::int64_t w_star = 0;
  std::optional<std::int64_t> w_worst;  // empty when N is empty
  std::optional<std::int64_t> w_best;
  std::optional<Rational> poa;  // empty when undefined
  std::optional<Rational> pos;
  std::string diagnostic;
};

struct ThreatPoint {
  std::vector<std::int64_t> values;
};

class EquilibriumSolver {
 public:
  explicit EquilibriumSolver(Game game, EncodingOptions options = {})
      : game_(std::move(game)), options_(options), deviation_(game_.num_players()) {}

  const Game& game() const { return game_; }

  const ExtendedPieces& pieces() {
    if (!pieces_) pieces_ = extended_pieces(game_, options_);
    return *pieces_;
  }

  const LatticeSet& extended_set() {
    if (!extended_) extended_ = ipg::extended_set(game_, pieces());
    return *extended_;
  }

  const LatticeSet& deviation_set(std::size_t i) {
    if (i >= game_.num_players()) throw ModelError("player index out of range");
    if (!deviation_[i]) deviation_[i] = ipg::deviation_set(game_, i, pieces());
    return *deviation_[i];
  }

  /// N^ = S^ minus the union of the D_i.
  const LatticeSet& extended_nash_set() {
    if (!extended_nash_) {
      std::vector<GenFun> ops{extended_set().genfun()};
      for (std::size_t i = 0; i < game_.num_players(); ++i) ops.push_back(deviation_set(i).genfun());
      extended_nash_ = LatticeSet(boolean_combine(ops, difference_table(ops.size())), "extended_nash_set");
    }
    return *extended_nash_;
  }

  /// N, the image of N^ under (s, y) -> s.
  const LatticeSet& nash_set() {
    if (!nash_) nash_ = LatticeSet(drop_payoffs(extended_nash_set().genfun()), "nash_set");
    return *nash_;
  }

  Integer count_nash() { return nash_set().count(); }

  std::optional<IntPoint> sample_nash() {
    std::optional<IntPoint> first;
    nash_set().for_each([&](const IntPoint& s) {
      first = s;
      return false;
    });
    return first;
  }

  /// Streams N in lexicographic order; the sink returns false to stop.
  EnumerationStats enumerate_nash(const std::function<bool(const IntPoint&)>& sink) {
    return nash_set().for_each(sink);
  }

  /// N intersected with {s : s_i = action}.
  LatticeSet nash_with_fixed_action(std::size_t i, const IntPoint& action) {
    if (i >= game_.num_players()) throw ModelError("player index out of range");
    const auto& p = game_.player(i);
    if (action.size() != p.dimension || !p.polytope.contains(action))
      throw ModelError("action " + to_string(action) + " is not in S_" + std::to_string(i));
    ConstraintBuilder b(game_.total_dimension());
    b.add_polytope(game_.profile_polytope(), iota_columns(0, game_.total_dimension()));
    for (std::size_t j = 0; j < p.dimension; ++j) {
      std::size_t col = game_.block_offset(i) + j;
      b.add({1}, {col}, action[j]);
      b.add({-1}, {col}, -action[j]);
    }
    auto [lo, hi] = game_.extended_box();
    lo.resize(game_.total_dimension());
    hi.resize(game_.total_dimension());
    GenFun slab = encode_polytope(b.build(), options_, std::make_pair(lo, hi));
    return LatticeSet(hadamard_product(nash_set().genfun(), slab), "nash_with_fixed_action");
  }

  /// The extended Pareto set S^ minus the union of the PD_i.
  const LatticeSet& extended_pareto_set() {
    if (!extended_pareto_) {
      std::vector<GenFun> ops{extended_set().genfun()};
      for (std::size_t i = 0; i < game_.num_players(); ++i) ops.push_back(pareto_dominated_set(i));
      extended_pareto_ = LatticeSet(boolean_combine(ops, difference_table(ops.size())), "extended_pareto_set");
    }
    return *extended_pareto_;
  }

  const LatticeSet& pareto_set() {
    if (!pareto_) pareto_ = LatticeSet(drop_payoffs(extended_pareto_set().genfun()), "pareto_set");
    return *pareto_;
  }

  LatticeSet pareto_nash_set() {
    return LatticeSet(boolean_combine({nash_set().genfun(), pareto_set().genfun()}, intersection_table(2)),
                      "pareto_nash_set");
  }

  /// PD_i: points of S^ dominated by some point of S^ that is strictly better for i.
  GenFun pareto_dominated_set(std::size_t i) {
    const std::size_t d = game_.total_dimension(), n = game_.num_players(), e = d + n;
    auto [lo, hi] = game_.extended_box();
    std::pair<IntPoint, IntPoint> box{concat(lo, lo), concat(hi, hi)};
    const auto keep = iota_columns(0, e);
    GenFun total(lo, hi);
    const auto& ks = pieces().regions;
    std::vector<GenFun> parts;
    for (const auto& k : ks) {
      auto first = game_.region_polytope(k, true);
      for (const auto& kp : ks) {
        ConstraintBuilder b(2 * e);
        b.add_polytope(first, iota_columns(0, e));
        b.add_polytope(game_.region_polytope(kp, true), iota_columns(e, e));
        for (std::size_t j = 0; j < n; ++j) b.add({1, -1}, {d + j, e + d + j}, j == i ? -1 : 0);
        parts.push_back(project_polytope(b.build(), keep, box));
      }
    }
    for (const auto& p : parts) total += p;
    // Pieces over different k' can overlap; collapse multiplicities to a set.
    if (!total.is_explicit()) total = to_explicit(total);
    GenFun set(total.lo(), total.hi());
    for (const auto& t : total.terms())
      if (t.coefficient > 0) set.add_monomial(t.numerator);
    return set.normalize();
  }

  WelfareReport welfare_report() {
    WelfareReport r;
    const std::size_t d = game_.total_dimension(), n = game_.num_players();
    IntPoint sum_y(d + n, 0);
    for (std::size_t i = 0; i < n; ++i) sum_y[d + i] = 1;
    std::int64_t total_shift = 0;
    for (std::size_t i = 0; i < n; ++i) total_shift += game_.shift(i);
    auto best = extended_set().maximize(sum_y);
    if (!best) throw ModelError("welfare is undefined for an empty action profile set");
    r.w_star = best->value - total_shift;
    auto worst_eq = extended_nash_set().minimize(sum_y);
    auto best_eq = extended_nash_set().maximize(sum_y);
    if (!worst_eq) {
      r.diagnostic = "no pure Nash equilibrium";
      return r;
    }
    r.w_worst = worst_eq->value - total_shift;
    r.w_best = best_eq->value - total_shift;
    if (*r.w_worst > 0)
      r.poa = Rational(r.w_star) / Rational(*r.w_worst);
    else
      r.diagnostic = "worst equilibrium welfare is not positive";
    if (*r.w_best > 0)
      r.pos = Rational(r.w_star) / Rational(*r.w_best);
    else
      r.diagnostic = "equilibrium welfare is not positive";
    return r;
  }

  /// G^_i = S^ minus D_i: the points where player i best-responds.
  LatticeSet best_response_set(std::size_t i) {
    return LatticeSet(boolean_combine({extended_set().genfun(), deviation_set(i).genfun()}, difference_table(2)),
                      "best_response_set");
  }

  ThreatPoint threat_point() {
    const std::size_t d = game_.total_dimension(), n = game_.num_players();
    ThreatPoint tp;
    for (std::size_t i = 0; i < n; ++i) {
      IntPoint y_i(d + n, 0);
      y_i[d + i] = 1;
      auto m = best_response_set(i).minimize(y_i);
      if (!m) throw ModelError("threat point is undefined for an empty action profile set");
      tp.values.push_back(m->value - game_.shift(i));
    }
    return tp;
  }

  /// Total number of generating-function terms across the cached sets.
  std::size_t genfun_terms() const {
    std::size_t t = 0;
    for (const auto* s : {&extended_, &extended_nash_, &nash_, &extended_pareto_, &pareto_})
      if (*s) t += (*s)->genfun().size();
    for (const auto& s : deviation_)
      if (s) t += s->genfun().size();
    return t;
  }

 private:
  GenFun drop_payoffs(const GenFun& g) const {
    return project(g, drop_last(game_.total_dimension() + game_.num_players(), game_.num_players()));
  }

  Game game_;
  EncodingOptions options_;
  std::optional<ExtendedPieces> pieces_;
  std::optional<LatticeSet> extended_, extended_nash_, nash_, extended_pareto_, pareto_;
  std::vector<std::optional<LatticeSet>> deviation_;
};

inline LatticeSet extended_nash_set(const Game& g, const EncodingOptions& o = {}) {
  return EquilibriumSolver(g, o).extended_nash_set();
}
inline LatticeSet nash_set(const Game& g, const EncodingOptions& o = {}) { return EquilibriumSolver(g, o).nash_set(); }
inline Integer count_nash(const Game& g, const EncodingOptions& o = {}) { return EquilibriumSolver(g, o).count_nash(); }
inline std::optional<IntPoint> sample_nash(const Game& g, const EncodingOptions& o = {}) {
  return EquilibriumSolver(g, o).sample_nash();
}
inline std::vector<IntPoint> enumerate_nash(const Game& g, const EncodingOptions& o = {}) {
  std::vector<IntPoint> out;
  EquilibriumSolver(g, o).enumerate_nash([&](const IntPoint& s) {
    out.push_back(s);
    return true;
  });
  return out;
}
inline LatticeSet nash_with_fixed_action(const Game& g, std::size_t i, const IntPoint& action,
                                         const EncodingOptions& o = {}) {
  return EquilibriumSolver(g, o).nash_with_fixed_action(i, action);
}
inline LatticeSet pareto_set(const Game& g, const EncodingOptions& o = {}) { return EquilibriumSolver(g, o).pareto_set(); }
inline LatticeSet pareto_nash_set(const Game& g, const EncodingOptions& o = {}) {
  return EquilibriumSolver(g, o).pareto_nash_set();
}
inline WelfareReport welfare_report(const Game& g, const EncodingOptions& o = {}) {
  return EquilibriumSolver(g, o).welfare_report();
}
inline ThreatPoint threat_point(const Game& g, const EncodingOptions& o = {}) {
  return EquilibriumSolver(g, o).threat_point();
}

// ---------------------------------------------------------------------------
// Brute force over S, straight from the definitions.

namespace oracle {

inline std::vector<std::vector<IntPoint>> action_sets(const Game& game) {
  std::vector<std::vector<IntPoint>> sets;
  for (const auto& p : game.players()) sets.push_back(enumerate_lattice_points(p.polytope));
  return sets;
}

/// S in lexicographic order.
inline std::vector<IntPoint> profiles(const Game& game) {
  auto sets = action_sets(game);
  std::vector<IntPoint> out{IntPoint{}};
  for (const auto& s : sets) {
    std::vector<IntPoint> next;
    for (const auto& prefix : out)
      for (const auto& a : s) next.push_back(concat(prefix, a));
    out = std::move(next);
  }
  return out;
}

inline IntPoint with_action(const Game& game, IntPoint s, std::size_t i, const IntPoint& a) {
  std::copy(a.begin(), a.end(), s.begin() + static_cast<std::ptrdiff_t>(game.block_offset(i)));
  return s;
}

/// max over s'_i of u_i(s_{-i}, s'_i).
inline std::int64_t best_response_value(const Game& game, const std::vector<std::vector<IntPoint>>& sets,
                                        const IntPoint& s, std::size_t i) {
  std::int64_t best = std::numeric_limits<std::int64_t>::min();
  for (const auto& a : sets[i]) best = std::max(best, game.player(i).payoff.value(with_action(game, s, i, a)));
  return best;
}

inline bool is_nash(const Game& game, const std::vector<std::vector<IntPoint>>& sets, const IntPoint& s) {
  for (std::size_t i = 0; i < game.num_players(); ++i)
    if (best_response_value(game, sets, s, i) > game.player(i).payoff.value(s)) return false;
  return true;
}

inline std::vector<IntPoint> nash_set(const Game& game) {
  auto sets = action_sets(game);
  std::vector<IntPoint> out;
  for (const auto& s : profiles(game))
    if (is_nash(game, sets, s)) out.push_back(s);
  return out;
}

inline std::vector<std::int64_t> payoff_vector(const Game& game, const IntPoint& s) {
  std::vector<std::int64_t> u;
  for (const auto& p : game.players()) u.push_back(p.payoff.value(s));
  return u;
}

inline std::vector<IntPoint> pareto_set(const Game& game) {
  auto all = profiles(game);
  std::vector<std::vector<std::int64_t>> u;
  for (const auto& s : all) u.push_back(payoff_vector(game, s));
  std::vector<IntPoint> out;
  for (std::size_t a = 0; a < all.size(); ++a) {
    bool dominated = false;
    for (std::size_t b = 0; b < all.size() && !dominated; ++b) {
      bool weakly = true, strictly = false;
      for (std::size_t i = 0; i < u[a].size(); ++i) {
        weakly &= u[b][i] >= u[a][i];
        strictly |= u[b][i] > u[a][i];
      }
      dominated = weakly && strictly;
    }
    if (!dominated) out.push_back(all[a]);
  }
  return out;
}

inline WelfareReport welfare_report(const Game& game) {
  auto all = profiles(game);
  if (all.empty()) throw ModelError("welfare is undefined for an empty action profile set");
  auto sets = action_sets(game);
  auto welfare = [&](const IntPoint& s) {
    std::int64_t w = 0;
    for (auto v : payoff_vector(game, s)) w += v;
    return w;
  };
  WelfareReport r;
  r.w_star = std::numeric_limits<std::int64_t>::min();
  for (const auto& s : all) r.w_star = std::max(r.w_star, welfare(s));
  for (const auto& s : all) {
    if (!is_nash(game, sets, s)) continue;
    std::int64_t w = welfare(s);
    r.w_worst = r.w_worst ? std::min(*r.w_worst, w) : w;
    r.w_best = r.w_best ? std::max(*r.w_best, w) : w;
  }
  if (!r.w_worst) {
    r.diagnostic = "no pure Nash equilibrium";
    return r;
  }
  if (*r.w_worst > 0)
    r.poa = Rational(r.w_star) / Rational(*r.w_worst);
  else
    r.diagnostic = "worst equilibrium welfare is not positive";
  if (*r.w_best > 0)
    r.pos = Rational(r.w_star) / Rational(*r.w_best);
  else
    r.diagnostic = "equilibrium welfare is not positive";
  return r;
}

/// min over s_{-i} of max over s_i of u_i.
inline ThreatPoint threat_point(const Game& game) {
  auto all = profiles(game);
  if (all.empty()) throw ModelError("threat point is undefined for an empty action profile set");
  auto sets = action_sets(game);
  ThreatPoint tp;
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    std::int64_t v = std::numeric_limits<std::int64_t>::max();
    for (const auto& s : all) v = std::min(v, best_response_value(game, sets, s, i));
    tp.values.push_back(v);
  }
  return tp;
}

/// |S^| = sum over s of prod_i (u_i(s) + c_i + 1).
inline Integer extended_count(const Game& game) {
  Integer total = 0;
  for (const auto& s : profiles(game)) {
    Integer prod = 1;
    for (std::size_t i = 0; i < game.num_players(); ++i)
      prod *= game.player(i).payoff.value(s) + game.shift(i) + 1;
    total += prod;
  }
  return total;
}

}  // namespace oracle

}  // namespace ipg
