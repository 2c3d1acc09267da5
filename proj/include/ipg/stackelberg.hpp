#pragma once

// Leader-followers games. The leader picks s_0 in S_0; follower i then acts in
// P_i(s_0) = {x : M_i x <= Phi_i s_0 + psi_i}, and the followers play a pure
// Nash equilibrium of their DPLC game (payoffs independent of s_0). The leader
// optimistically picks the equilibrium best for it.
//
// Joint coordinates are (s_0, s, y): leader block, follower blocks in order,
// then one payoff coordinate per follower.

#include "ipg/equilibria.hpp"

namespace ipg {

struct Follower {
  std::size_t dimension = 0;
  IntMatrix constraints;  // M_i, rows x d_i
  IntMatrix coupling;     // Phi_i, rows x d_0
  IntPoint offset;        // psi_i, one entry per row
  DPLCPayoff payoff;      // over s (dimension d)
};

struct Leader {
  std::size_t dimension = 0;
  RationalPolytope polytope;  // P_0
  DPLCPayoff payoff;          // over (s_0, s)
};

class StackelbergGame {
 public:
  StackelbergGame(std::int64_t bound, Leader leader, std::vector<Follower> followers)
      : bound_(bound), leader_(std::move(leader)), followers_(std::move(followers)) {
    validate();
    compute_shifts();
  }

  std::int64_t bound() const { return bound_; }
  const Leader& leader() const { return leader_; }
  const std::vector<Follower>& followers() const { return followers_; }
  std::size_t num_followers() const { return followers_.size(); }
  std::size_t leader_dimension() const { return leader_.dimension; }
  std::size_t follower_dimension() const { return d_; }
  /// d+ = d_0 + d.
  std::size_t profile_dimension() const { return leader_.dimension + d_; }
  std::size_t block_offset(std::size_t i) const { return offsets_.at(i); }  // within s
  std::int64_t shift(std::size_t i) const { return shifts_.at(i); }
  std::int64_t payoff_upper_bound(std::size_t i) const { return y_max_.at(i); }

  /// B+ = B (max_k (|alpha_0k|_1 + |beta_0k|) + max_l (|gamma_0l|_1 + |delta_0l|)).
  std::int64_t leader_payoff_bound() const {
    std::int64_t fk = 0, gl = 0;
    for (const auto& f : leader_.payoff.convex) fk = std::max(fk, norm1(f.gradient) + std::abs(f.offset));
    for (const auto& g : leader_.payoff.concave) gl = std::max(gl, norm1(g.gradient) + std::abs(g.offset));
    return bound_ * (fk + gl);
  }

  /// P_i(s_0).
  RationalPolytope follower_polytope(std::size_t i, const IntPoint& s0) const {
    const auto& f = followers_.at(i);
    RationalMatrix a;
    RationalVector b;
    for (std::size_t r = 0; r < f.constraints.size(); ++r) {
      a.push_back(to_rational(f.constraints[r]));
      b.push_back(dot(f.coupling[r], s0) + f.offset[r]);
    }
    return RationalPolytope(f.dimension, a, b);
  }

  /// Adds s_0 in P_0 and M_i s_i <= Phi_i s_0 + psi_i for every follower, with
  /// s_0 at columns [0, d_0) and s at [d_0, d_0 + d).
  void add_joint_rows(ConstraintBuilder& b) const {
    const std::size_t d0 = leader_.dimension;
    b.add_polytope(leader_.polytope, iota_columns(0, d0));
    for (std::size_t i = 0; i < followers_.size(); ++i) add_follower_rows(b, i, iota_columns(d0 + offsets_[i], followers_[i].dimension));
  }

  /// M_i x - Phi_i s_0 <= psi_i with x at columns `cols`.
  void add_follower_rows(ConstraintBuilder& b, std::size_t i, const std::vector<std::size_t>& cols) const {
    const std::size_t d0 = leader_.dimension;
    const auto& f = followers_[i];
    for (std::size_t r = 0; r < f.constraints.size(); ++r) {
      IntPoint coef = f.constraints[r];
      std::vector<std::size_t> c = cols;
      for (std::size_t j = 0; j < d0; ++j) {
        coef.push_back(-f.coupling[r][j]);
        c.push_back(j);
      }
      b.add(coef, c, f.offset[r]);
    }
  }

  /// J = {(s_0, s) : s_0 in P_0, s_i in P_i(s_0)}.
  RationalPolytope joint_polytope() const {
    ConstraintBuilder b(profile_dimension());
    add_joint_rows(b);
    return b.build();
  }

  /// Integer box containing the lattice points of J.
  const std::pair<IntPoint, IntPoint>& joint_box() const { return joint_box_; }

  std::pair<IntPoint, IntPoint> extended_box() const {
    auto [lo, hi] = joint_box_;
    for (auto y : y_max_) {
      lo.push_back(0);
      hi.push_back(y);
    }
    return {lo, hi};
  }

  std::vector<RegionIndexVector> region_vectors() const {
    std::vector<RegionIndexVector> out;
    RegionIndexVector k(followers_.size(), 0);
    for (;;) {
      out.push_back(k);
      std::size_t i = followers_.size();
      while (i-- > 0) {
        if (++k[i] < followers_[i].payoff.convex.size()) break;
        k[i] = 0;
        if (i == 0) return out;
      }
    }
  }

  /// Layout of the follower profile s inside the joint coordinates.
  std::vector<std::size_t> follower_layout() const { return iota_columns(leader_.dimension, d_); }

 private:
  void validate() {
    const std::string prefix = "stackelberg game: ";
    if (bound_ < 1) throw ModelError(prefix + "bound B must be at least 1");
    if (followers_.empty()) throw ModelError(prefix + "need at least one follower");
    if (leader_.dimension == 0 || leader_.polytope.dimension() != leader_.dimension)
      throw ModelError(prefix + "leader polytope dimension differs from declared dimension");
    d_ = 0;
    for (const auto& f : followers_) {
      offsets_.push_back(d_);
      d_ += f.dimension;
    }
    const std::size_t d0 = leader_.dimension;
    auto check_payoff = [&](const DPLCPayoff& p, std::size_t len, const std::string& who) {
      if (p.convex.empty()) throw ModelError(who + ": payoff needs at least one convex piece");
      if (p.concave.empty()) throw ModelError(who + ": payoff needs at least one concave piece");
      for (const auto* list : {&p.convex, &p.concave})
        for (const auto& piece : *list)
          if (piece.gradient.size() != len)
            throw ModelError(who + ": payoff gradient has length " + std::to_string(piece.gradient.size()) +
                             ", expected " + std::to_string(len));
    };
    check_payoff(leader_.payoff, d0 + d_, "leader");
    for (std::size_t i = 0; i < followers_.size(); ++i) {
      const auto& f = followers_[i];
      const std::string who = "follower " + std::to_string(i);
      if (f.dimension == 0) throw ModelError(who + ": dimension must be positive");
      if (f.coupling.size() != f.constraints.size() || f.offset.size() != f.constraints.size())
        throw ModelError(who + ": constraint, coupling and offset row counts differ");
      for (std::size_t r = 0; r < f.constraints.size(); ++r) {
        if (f.constraints[r].size() != f.dimension) throw ModelError(who + ": constraint row has wrong length");
        if (f.coupling[r].size() != d0) throw ModelError(who + ": coupling row must have the leader's dimension");
      }
      check_payoff(f.payoff, d_, who);
    }
    try {
      if (!validate_box(leader_.polytope, bound_)) throw ModelError("leader: polytope is not inside [-B, B]^d_0");
    } catch (const UnboundedError&) {
      throw ModelError("leader: polytope is unbounded");
    }
    // Every P_i(s_0) inside [-B, B]^{d_i}: LP over the joint polytope.
    auto joint = joint_polytope();
    const std::size_t n = profile_dimension();
    IntPoint lo(n, 0), hi(n, -1);
    for (std::size_t j = 0; j < n; ++j) {
      RationalVector c(n, 0);
      for (int sign : {1, -1}) {
        c[j] = sign;
        auto r = lp::maximize(joint.matrix(), joint.rhs(), c);
        if (r.status == lp::Status::infeasible) {
          joint_box_ = {IntPoint(n, 0), IntPoint(n, -1)};
          return;
        }
        if (r.status == lp::Status::unbounded)
          throw ModelError("follower polytopes are unbounded along coordinate " + std::to_string(j));
        if (r.value > bound_) {
          std::string witness;
          for (const auto& v : r.point) witness += (witness.empty() ? "" : ",") + ipg::to_string(v);
          throw ModelError("coordinate " + std::to_string(j) + " leaves [-B, B] at joint point (" + witness + ")");
        }
        if (sign > 0)
          hi[j] = to_int64(floor(r.value));
        else
          lo[j] = to_int64(ceil(-r.value));
      }
    }
    joint_box_ = {lo, hi};
  }

  void compute_shifts() {
    const std::size_t n = followers_.size();
    shifts_.assign(n, 0);
    y_max_.assign(n, 0);
    auto joint = joint_polytope();
    auto layout = follower_layout();
    for (std::size_t i = 0; i < n; ++i) {
      auto range = payoff_range(followers_[i].payoff, joint, layout);
      if (!range) continue;
      shifts_[i] = range->first < 0 ? to_int64(Integer(-range->first)) : 0;
      y_max_[i] = std::max<std::int64_t>(0, to_int64(range->second) + shifts_[i]);
    }
  }

  std::int64_t bound_;
  Leader leader_;
  std::vector<Follower> followers_;
  std::size_t d_ = 0;
  std::vector<std::size_t> offsets_;
  std::pair<IntPoint, IntPoint> joint_box_;
  std::vector<std::int64_t> shifts_, y_max_;
};

/// S^_k over (s_0, s, y): s_0 in S_0, s in S(s_0) and region k, 0 <= y_i <= f_ik - g_il.
inline RationalPolytope follower_feasible_region(const StackelbergGame& sg, const RegionIndexVector& k) {
  const std::size_t d0 = sg.leader_dimension(), d = sg.follower_dimension(), n = sg.num_followers();
  if (k.size() != n) throw ModelError("region vector has wrong length");
  ConstraintBuilder b(d0 + d + n);
  sg.add_joint_rows(b);
  auto layout = sg.follower_layout();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = sg.followers()[i].payoff;
    if (k[i] >= p.convex.size()) throw ModelError("region index out of range");
    add_region_rows(b, p, k[i], layout);
    std::size_t ycol = d0 + d + i;
    b.add({-1}, {ycol}, 0);
    b.add({1}, {ycol}, sg.payoff_upper_bound(i));
    add_payoff_rows(b, p, k[i], sg.shift(i), layout, ycol);
  }
  return b.build();
}

/// Deviation polytope over (s_0, s, y, s'_i, y'_i): s_0 stays fixed and s'_i
/// must lie in P_i(s_0).
inline RationalPolytope stackelberg_deviation_polytope(const StackelbergGame& sg, std::size_t i,
                                                       const RegionIndexVector& k, std::size_t k_prime) {
  const std::size_t d0 = sg.leader_dimension(), d = sg.follower_dimension(), n = sg.num_followers();
  const std::size_t e = d0 + d + n, di = sg.followers()[i].dimension;
  ConstraintBuilder b(e + di + 1);
  b.add_polytope(follower_feasible_region(sg, k), iota_columns(0, e));
  sg.add_follower_rows(b, i, iota_columns(e, di));
  auto layout = sg.follower_layout();
  for (std::size_t j = 0; j < di; ++j) layout[sg.block_offset(i) + j] = e + j;
  const auto& p = sg.followers()[i].payoff;
  add_region_rows(b, p, k_prime, layout);
  add_payoff_rows(b, p, k_prime, sg.shift(i), layout, e + di);
  b.add({1, -1}, {d0 + d + i, e + di}, -1);
  return b.build();
}

struct StackelbergSolution {
  std::optional<std::int64_t> leader_optimum;  // empty: no follower equilibrium for any s_0
  LatticeSet equilibria;                       // N+ over (s_0, s)
};

class StackelbergSolver {
 public:
  explicit StackelbergSolver(StackelbergGame game, EncodingOptions options = {})
      : game_(std::move(game)), options_(options) {}

  const StackelbergGame& game() const { return game_; }

  const LatticeSet& extended_set() {
    if (!extended_) {
      auto box = game_.extended_box();
      GenFun g(box.first, box.second);
      for (const auto& k : game_.region_vectors()) {
        GenFun piece = encode_polytope(follower_feasible_region(game_, k), options_, box);
        if (piece.empty() || count(piece) == 0) continue;
        regions_.push_back(k);
        g += piece;
      }
      extended_ = LatticeSet(std::move(g), "stackelberg_extended_set");
    }
    return *extended_;
  }

  LatticeSet deviation_set(std::size_t i) {
    extended_set();
    const std::size_t e = game_.profile_dimension() + game_.num_followers();
    auto [lo, hi] = game_.extended_box();
    IntPoint dlo = lo, dhi = hi;
    const std::size_t off = game_.leader_dimension() + game_.block_offset(i);
    for (std::size_t j = 0; j < game_.followers()[i].dimension; ++j) {
      dlo.push_back(lo[off + j]);
      dhi.push_back(hi[off + j]);
    }
    dlo.push_back(1);
    dhi.push_back(game_.payoff_upper_bound(i));
    std::pair<IntPoint, IntPoint> box{dlo, dhi};
    GenFun total(lo, hi);
    const auto keep = iota_columns(0, e);
    for (const auto& k : regions_) {
      std::vector<GenFun> parts;
      for (std::size_t kp = 0; kp < game_.followers()[i].payoff.convex.size(); ++kp)
        parts.push_back(project_polytope(stackelberg_deviation_polytope(game_, i, k, kp), keep, box));
      total += parts.size() == 1 ? parts[0] : boolean_combine(parts, union_table(parts.size()));
    }
    return LatticeSet(std::move(total), "stackelberg_deviation_set");
  }

  /// N = {(s_0, s) : s_0 in S_0, s in N(s_0)}.
  const LatticeSet& feasible_set() {
    if (!feasible_) {
      std::vector<GenFun> ops{extended_set().genfun()};
      for (std::size_t i = 0; i < game_.num_followers(); ++i) ops.push_back(deviation_set(i).genfun());
      GenFun nhat = boolean_combine(ops, difference_table(ops.size()));
      const std::size_t e = game_.profile_dimension() + game_.num_followers();
      feasible_ = LatticeSet(project(nhat, drop_last(e, game_.num_followers())), "stackelberg_nash_feasible");
    }
    return *feasible_;
  }

  /// N^(v): points of N where the leader gets at least v.
  LatticeSet at_least(std::int64_t v) {
    const std::size_t dp = game_.profile_dimension();
    const auto& p = game_.leader().payoff;
    std::vector<GenFun> slices;
    for (const auto& f : p.convex) {
      ConstraintBuilder b(dp);
      game_.add_joint_rows(b);
      for (const auto& g : p.concave)
        b.add(difference(g.gradient, f.gradient), iota_columns(0, dp), f.offset - g.offset - v);
      slices.push_back(encode_polytope(b.build(), options_, game_.joint_box()));
    }
    GenFun q = slices.size() == 1 ? slices[0] : boolean_combine(slices, union_table(slices.size()));
    return LatticeSet(hadamard_product(feasible_set().genfun(), q), "stackelberg_at_least");
  }

  StackelbergSolution leader_optimize() {
    StackelbergSolution sol;
    if (feasible_set().count() == 0) {
      sol.equilibria = feasible_set();
      return sol;
    }
    std::int64_t lo = -game_.leader_payoff_bound(), hi = game_.leader_payoff_bound();  // N^(lo) nonempty
    while (lo < hi) {
      std::int64_t mid = lo + (hi - lo + 1) / 2;
      if (at_least(mid).count() > 0)
        lo = mid;
      else
        hi = mid - 1;
    }
    sol.leader_optimum = lo;
    sol.equilibria = at_least(lo);
    return sol;
  }

 private:
  StackelbergGame game_;
  EncodingOptions options_;
  std::vector<RegionIndexVector> regions_;
  std::optional<LatticeSet> extended_, feasible_;
};

inline LatticeSet stackelberg_nash_feasible(const StackelbergGame& sg, const EncodingOptions& o = {}) {
  return StackelbergSolver(sg, o).feasible_set();
}

inline StackelbergSolution leader_optimize(const StackelbergGame& sg, const EncodingOptions& o = {}) {
  return StackelbergSolver(sg, o).leader_optimize();
}

/// The follower game induced by a fixed leader action.
inline Game induced_game(const StackelbergGame& sg, const IntPoint& s0) {
  std::vector<Player> players;
  for (std::size_t i = 0; i < sg.num_followers(); ++i) {
    Player p;
    p.dimension = sg.followers()[i].dimension;
    p.polytope = sg.follower_polytope(i, s0);
    p.payoff = sg.followers()[i].payoff;
    players.push_back(std::move(p));
  }
  return Game(sg.bound(), std::move(players));
}

namespace oracle {

/// Follower equilibria for every s_0 in S_0, as (s_0, s) points in lexicographic order.
inline std::vector<IntPoint> stackelberg_feasible(const StackelbergGame& sg) {
  std::vector<IntPoint> out;
  for (const auto& s0 : enumerate_lattice_points(sg.leader().polytope)) {
    std::vector<std::vector<IntPoint>> sets;
    for (std::size_t i = 0; i < sg.num_followers(); ++i)
      sets.push_back(enumerate_lattice_points(sg.follower_polytope(i, s0)));
    std::vector<IntPoint> profs{IntPoint{}};
    for (const auto& s : sets) {
      std::vector<IntPoint> next;
      for (const auto& prefix : profs)
        for (const auto& a : s) next.push_back(concat(prefix, a));
      profs = std::move(next);
    }
    for (const auto& s : profs) {
      bool nash = true;
      for (std::size_t i = 0; i < sg.num_followers() && nash; ++i) {
        const auto& f = sg.followers()[i];
        std::int64_t u = f.payoff.value(s);
        for (const auto& a : sets[i]) {
          IntPoint t = s;
          std::copy(a.begin(), a.end(), t.begin() + static_cast<std::ptrdiff_t>(sg.block_offset(i)));
          if (f.payoff.value(t) > u) {
            nash = false;
            break;
          }
        }
      }
      if (nash) out.push_back(concat(s0, s));
    }
  }
  return out;
}

/// v+ = max over s_0 and s in N(s_0) of u_0, with the maximizing pairs.
inline std::pair<std::optional<std::int64_t>, std::vector<IntPoint>> stackelberg_optimum(const StackelbergGame& sg) {
  std::optional<std::int64_t> best;
  std::vector<IntPoint> arg;
  for (const auto& x : stackelberg_feasible(sg)) {
    std::int64_t v = sg.leader().payoff.value(x);
    if (!best || v > *best) {
      best = v;
      arg.clear();
    }
    if (v == *best) arg.push_back(x);
  }
  return {best, arg};
}

}  // namespace oracle

}  // namespace ipg
