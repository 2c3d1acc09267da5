#pragma once

// Integer programming games with DPLC payoffs
//
//     u_i(s) = max_k f_ik(s) - max_l g_il(s),   f, g affine with integer data,
//
// plus the structural sets the solvers are built from: the regions S_k where a
// fixed convex piece attains the max, the extended set S^ of pairs (s, y) with
// 0 <= y_i <= u_i(s) + c_i, and the deviation sets D_i.

#include "ipg/lattice_set.hpp"
#include "ipg/lp.hpp"

#include <numeric>

namespace ipg {

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AffinePiece {
  IntPoint gradient;
  std::int64_t offset = 0;

  std::int64_t value(const IntPoint& s) const { return dot(gradient, s) + offset; }
};

struct DPLCPayoff {
  std::vector<AffinePiece> convex;
  std::vector<AffinePiece> concave;

  std::int64_t convex_value(const IntPoint& s) const {
    std::int64_t m = convex.at(0).value(s);
    for (const auto& f : convex) m = std::max(m, f.value(s));
    return m;
  }
  std::int64_t concave_value(const IntPoint& s) const {
    std::int64_t m = concave.at(0).value(s);
    for (const auto& g : concave) m = std::max(m, g.value(s));
    return m;
  }
  std::int64_t value(const IntPoint& s) const { return convex_value(s) - concave_value(s); }

  /// Least index among the maximizing convex pieces.
  std::size_t region(const IntPoint& s) const {
    std::size_t best = 0;
    std::int64_t v = convex.at(0).value(s);
    for (std::size_t k = 1; k < convex.size(); ++k) {
      std::int64_t w = convex[k].value(s);
      if (w > v) {
        v = w;
        best = k;
      }
    }
    return best;
  }
};

struct Player {
  std::size_t dimension = 0;
  RationalPolytope polytope;
  DPLCPayoff payoff;
};

/// k = (k_1, ..., k_n), one convex-piece index per player (0-based).
using RegionIndexVector = std::vector<std::size_t>;

/// Dense row builder for polytopes in a joint coordinate space.
class ConstraintBuilder {
 public:
  explicit ConstraintBuilder(std::size_t dim) : dim_(dim) {}

  std::size_t dimension() const { return dim_; }

  /// Adds sum_j coef[j] x[cols[j]] <= rhs.
  void add(const IntPoint& coef, const std::vector<std::size_t>& cols, const Rational& rhs) {
    RationalVector row(dim_, 0);
    for (std::size_t j = 0; j < coef.size(); ++j) row[cols[j]] += coef[j];
    add_row(std::move(row), rhs);
  }

  void add_row(RationalVector row, Rational rhs) {
    matrix_.push_back(std::move(row));
    rhs_.push_back(std::move(rhs));
  }

  /// Adds P's rows acting on the coordinates cols.
  void add_polytope(const RationalPolytope& p, const std::vector<std::size_t>& cols) {
    for (std::size_t r = 0; r < p.num_constraints(); ++r) {
      RationalVector row(dim_, 0);
      for (std::size_t j = 0; j < p.dimension(); ++j) row[cols[j]] += p.matrix()[r][j];
      add_row(std::move(row), p.rhs()[r]);
    }
  }

  RationalPolytope build() const { return RationalPolytope(dim_, matrix_, rhs_); }

 private:
  std::size_t dim_;
  RationalMatrix matrix_;
  RationalVector rhs_;
};

inline std::vector<std::size_t> iota_columns(std::size_t start, std::size_t count) {
  std::vector<std::size_t> c(count);
  std::iota(c.begin(), c.end(), start);
  return c;
}

inline IntPoint difference(const IntPoint& a, const IntPoint& b) {
  IntPoint d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

/// Rows placing the profile laid out at `layout` (profile coordinate j lives
/// at joint column layout[j]) in region k of the payoff: f_k >= f_j for j > k
/// and f_k >= f_j + 1 for j < k.
inline void add_region_rows(ConstraintBuilder& b, const DPLCPayoff& payoff, std::size_t k,
                            const std::vector<std::size_t>& layout) {
  const auto& pieces = payoff.convex;
  for (std::size_t j = 0; j < pieces.size(); ++j) {
    if (j == k) continue;
    std::int64_t rhs = pieces[k].offset - pieces[j].offset - (j < k ? 1 : 0);
    b.add(difference(pieces[j].gradient, pieces[k].gradient), layout, rhs);
  }
}

/// Rows y <= f_k(t) + shift - g_l(t) for every l, with y at column ycol.
inline void add_payoff_rows(ConstraintBuilder& b, const DPLCPayoff& payoff, std::size_t k, std::int64_t shift,
                            const std::vector<std::size_t>& layout, std::size_t ycol) {
  for (const auto& g : payoff.concave) {
    IntPoint coef = difference(g.gradient, payoff.convex[k].gradient);
    auto cols = layout;
    coef.push_back(1);
    cols.push_back(ycol);
    b.add(coef, cols, payoff.convex[k].offset + shift - g.offset);
  }
}

/// Integer bounds [lower, upper] of a DPLC payoff over the real points of a
/// polytope (layout maps payoff coordinates to polytope coordinates);
/// nullopt when the polytope is empty.
inline std::optional<std::pair<Integer, Integer>> payoff_range(const DPLCPayoff& payoff, const RationalPolytope& p,
                                                               const std::vector<std::size_t>& layout) {
  auto extreme = [&](const IntPoint& grad, bool up) -> std::optional<Integer> {
    RationalVector c(p.dimension(), 0);
    for (std::size_t j = 0; j < grad.size(); ++j) c[layout[j]] += up ? grad[j] : -grad[j];
    auto r = lp::maximize(p.matrix(), p.rhs(), c);
    if (r.status == lp::Status::unbounded) throw UnboundedError("payoff is unbounded over the polytope");
    if (r.status != lp::Status::optimal) return std::nullopt;
    return up ? floor(r.value) : ceil(-r.value);
  };
  std::optional<Integer> f_lo, f_hi, g_lo, g_hi;
  for (const auto& f : payoff.convex) {
    auto lo = extreme(f.gradient, false), hi = extreme(f.gradient, true);
    if (!lo || !hi) return std::nullopt;
    f_lo = f_lo ? std::max(*f_lo, *lo + f.offset) : *lo + f.offset;
    f_hi = f_hi ? std::max(*f_hi, *hi + f.offset) : *hi + f.offset;
  }
  for (const auto& g : payoff.concave) {
    auto lo = extreme(g.gradient, false), hi = extreme(g.gradient, true);
    if (!lo || !hi) return std::nullopt;
    g_lo = g_lo ? std::max(*g_lo, *lo + g.offset) : *lo + g.offset;
    g_hi = g_hi ? std::max(*g_hi, *hi + g.offset) : *hi + g.offset;
  }
  return std::make_pair(*f_lo - *g_hi, *f_hi - *g_lo);
}

class Game {
 public:
  Game() = default;

  Game(std::int64_t bound, std::vector<Player> players) : bound_(bound), players_(std::move(players)) {
    validate();
    compute_shifts();
  }

  std::int64_t bound() const { return bound_; }
  std::size_t num_players() const { return players_.size(); }
  const Player& player(std::size_t i) const { return players_.at(i); }
  const std::vector<Player>& players() const { return players_; }
  std::size_t total_dimension() const { return dimension_; }
  std::size_t block_offset(std::size_t i) const { return offsets_.at(i); }
  std::vector<std::size_t> block_columns(std::size_t i) const {
    return iota_columns(offsets_.at(i), players_.at(i).dimension);
  }

  /// Integer box containing S_i (empty, lo > hi, when P_i has no real points).
  const std::pair<IntPoint, IntPoint>& action_box(std::size_t i) const { return action_boxes_.at(i); }

  /// Integer box containing S^ (profile coordinates, then payoffs).
  std::pair<IntPoint, IntPoint> extended_box() const {
    IntPoint lo, hi;
    for (const auto& [l, h] : action_boxes_) {
      lo.insert(lo.end(), l.begin(), l.end());
      hi.insert(hi.end(), h.begin(), h.end());
    }
    for (auto y : y_max_) {
      lo.push_back(0);
      hi.push_back(y);
    }
    return {lo, hi};
  }

  /// Nonnegativity shift c_i added to every convex offset of player i.
  std::int64_t shift(std::size_t i) const { return shifts_.at(i); }
  /// Upper bound on the shifted payoff of player i over S.
  std::int64_t payoff_upper_bound(std::size_t i) const { return y_max_.at(i); }

  /// M with S^ inside [-M, M]^{d+n}: B times coefficient norms of the shifted pieces.
  std::int64_t payoff_bound() const {
    std::int64_t m = bound_;
    for (std::size_t i = 0; i < players_.size(); ++i) {
      std::int64_t fk = 0, gl = 0;
      for (const auto& f : players_[i].payoff.convex) fk = std::max(fk, norm1(f.gradient) + std::abs(f.offset + shifts_[i]));
      for (const auto& g : players_[i].payoff.concave) gl = std::max(gl, norm1(g.gradient) + std::abs(g.offset));
      m = std::max(m, bound_ * (fk + gl));
    }
    return m;
  }

  IntPoint block(const IntPoint& s, std::size_t i) const {
    auto b = s.begin() + static_cast<std::ptrdiff_t>(offsets_.at(i));
    return IntPoint(b, b + static_cast<std::ptrdiff_t>(players_[i].dimension));
  }

  bool contains(const IntPoint& s) const {
    if (s.size() != dimension_) return false;
    for (std::size_t i = 0; i < players_.size(); ++i)
      if (!players_[i].polytope.contains(block(s, i))) return false;
    return true;
  }

  void check_profile(const IntPoint& s) const {
    if (!contains(s)) throw ModelError("profile " + to_string(s) + " is not in S");
  }

  /// u_i(s) in original units.
  std::int64_t payoff(std::size_t i, const IntPoint& s) const {
    check_profile(s);
    return players_.at(i).payoff.value(s);
  }

  std::int64_t shifted_payoff(std::size_t i, const IntPoint& s) const { return payoff(i, s) + shifts_.at(i); }

  std::size_t region_index(std::size_t i, const IntPoint& s) const {
    check_profile(s);
    return players_.at(i).payoff.region(s);
  }

  /// All k in K, in lexicographic order.
  std::vector<RegionIndexVector> region_vectors() const {
    std::vector<RegionIndexVector> out;
    RegionIndexVector k(players_.size(), 0);
    for (;;) {
      out.push_back(k);
      std::size_t i = players_.size();
      while (i-- > 0) {
        if (++k[i] < players_[i].payoff.convex.size()) break;
        k[i] = 0;
        if (i == 0) return out;
      }
    }
  }

  void add_region_rows(ConstraintBuilder& b, std::size_t i, std::size_t k, const std::vector<std::size_t>& layout) const {
    ipg::add_region_rows(b, players_.at(i).payoff, k, layout);
  }

  void add_payoff_rows(ConstraintBuilder& b, std::size_t i, std::size_t k, const std::vector<std::size_t>& layout,
                       std::size_t ycol) const {
    ipg::add_payoff_rows(b, players_.at(i).payoff, k, shifts_.at(i), layout, ycol);
  }

  /// S_k (extended = false, dimension d) or S^_k (extended = true, dimension
  /// d + n, payoff coordinates after the profile).
  RationalPolytope region_polytope(const RegionIndexVector& k, bool extended) const {
    check_region_vector(k);
    const std::size_t n = players_.size();
    ConstraintBuilder b(dimension_ + (extended ? n : 0));
    auto layout = iota_columns(0, dimension_);
    for (std::size_t i = 0; i < n; ++i) b.add_polytope(players_[i].polytope, block_columns(i));
    for (std::size_t i = 0; i < n; ++i) add_region_rows(b, i, k[i], layout);
    if (extended) {
      for (std::size_t i = 0; i < n; ++i) {
        std::size_t ycol = dimension_ + i;
        b.add({-1}, {ycol}, 0);
        b.add({1}, {ycol}, y_max_[i]);
        add_payoff_rows(b, i, k[i], layout, ycol);
      }
    }
    return b.build();
  }

  /// The product polytope P_1 x ... x P_n.
  RationalPolytope profile_polytope() const {
    ConstraintBuilder b(dimension_);
    for (std::size_t i = 0; i < players_.size(); ++i) b.add_polytope(players_[i].polytope, block_columns(i));
    return b.build();
  }

  void check_region_vector(const RegionIndexVector& k) const {
    if (k.size() != players_.size()) throw ModelError("region vector has wrong length");
    for (std::size_t i = 0; i < k.size(); ++i)
      if (k[i] >= players_[i].payoff.convex.size()) throw ModelError("region index out of range");
  }

 private:
  void validate() {
    if (bound_ < 1) throw ModelError("bound B must be at least 1");
    if (players_.empty()) throw ModelError("game needs at least one player");
    dimension_ = 0;
    offsets_.clear();
    action_boxes_.clear();
    for (const auto& p : players_) {
      offsets_.push_back(dimension_);
      dimension_ += p.dimension;
    }
    for (std::size_t i = 0; i < players_.size(); ++i) {
      const auto& p = players_[i];
      const std::string who = "player " + std::to_string(i);
      if (p.dimension == 0) throw ModelError(who + ": dimension must be positive");
      if (p.polytope.dimension() != p.dimension) throw ModelError(who + ": polytope dimension differs from declared dimension");
      if (p.payoff.convex.empty()) throw ModelError(who + ": payoff needs at least one convex piece");
      if (p.payoff.concave.empty()) throw ModelError(who + ": payoff needs at least one concave piece");
      for (const auto* list : {&p.payoff.convex, &p.payoff.concave})
        for (const auto& piece : *list)
          if (piece.gradient.size() != dimension_)
            throw ModelError(who + ": payoff gradient has length " + std::to_string(piece.gradient.size()) +
                             ", expected " + std::to_string(dimension_));
      bool inside = false;
      try {
        inside = validate_box(p.polytope, bound_);
      } catch (const UnboundedError&) {
        throw ModelError(who + ": action polytope is unbounded");
      }
      if (!inside) throw ModelError(who + ": action polytope is not inside [-B, B]^d_i");
      auto bounds = coordinate_bounds(p.polytope);
      IntPoint lo(p.dimension, 0), hi(p.dimension, -1);
      if (bounds)
        for (std::size_t j = 0; j < p.dimension; ++j) {
          lo[j] = to_int64(ceil((*bounds)[j].first));
          hi[j] = to_int64(floor((*bounds)[j].second));
        }
      action_boxes_.emplace_back(std::move(lo), std::move(hi));
    }
  }

  void compute_shifts() {
    const std::size_t n = players_.size();
    shifts_.assign(n, 0);
    y_max_.assign(n, 0);
    auto prof = profile_polytope();
    auto layout = iota_columns(0, dimension_);
    for (std::size_t i = 0; i < n; ++i) {
      auto range = payoff_range(players_[i].payoff, prof, layout);
      if (!range) continue;  // S is empty; every derived set is empty too
      shifts_[i] = range->first < 0 ? to_int64(Integer(-range->first)) : 0;
      y_max_[i] = std::max<std::int64_t>(0, to_int64(range->second) + shifts_[i]);
    }
  }

  std::int64_t bound_ = 1;
  std::vector<Player> players_;
  std::size_t dimension_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<std::pair<IntPoint, IntPoint>> action_boxes_;
  std::vector<std::int64_t> shifts_, y_max_;
};

// ---------------------------------------------------------------------------
// Extended set and deviation sets

/// The nonempty pieces S^_k of the disjoint union S^, in lexicographic order of k.
struct ExtendedPieces {
  std::vector<RegionIndexVector> regions;
  std::vector<GenFun> pieces;
};

inline ExtendedPieces extended_pieces(const Game& game, const EncodingOptions& options = {}) {
  ExtendedPieces out;
  const auto box = game.extended_box();
  for (const auto& k : game.region_vectors()) {
    GenFun g = encode_polytope(game.region_polytope(k, true), options, box);
    if (g.empty() || count(g) == 0) continue;
    out.regions.push_back(k);
    out.pieces.push_back(std::move(g));
  }
  return out;
}

/// S^ as the plain sum of its disjoint pieces.
inline LatticeSet extended_set(const Game& game, const ExtendedPieces& pieces) {
  auto box = game.extended_box();
  GenFun g(box.first, box.second);
  for (const auto& piece : pieces.pieces) g += piece;
  return LatticeSet(std::move(g), "extended_set");
}

inline LatticeSet extended_set(const Game& game, const EncodingOptions& options = {}) {
  return extended_set(game, extended_pieces(game, options));
}

/// The polytope over (s, y, s'_i, y'_i) whose projection to (s, y) is the set
/// of points of S^_k where player i improves by switching to s'_i in region
/// k'_i. Only player i's own region and payoff rows are imposed at the
/// deviated profile; the other players' extended coordinates are not
/// constrained there.
inline RationalPolytope deviation_polytope(const Game& game, std::size_t i, const RegionIndexVector& k,
                                           std::size_t k_prime) {
  const std::size_t d = game.total_dimension(), n = game.num_players(), di = game.player(i).dimension;
  const std::size_t dim = d + n + di + 1;
  ConstraintBuilder b(dim);
  auto base = game.region_polytope(k, true);
  b.add_polytope(base, iota_columns(0, d + n));
  // Deviated profile: player i's block moved to the s'_i columns.
  auto layout = iota_columns(0, d);
  for (std::size_t j = 0; j < di; ++j) layout[game.block_offset(i) + j] = d + n + j;
  const std::size_t y_dev = d + n + di;
  b.add_polytope(game.player(i).polytope, iota_columns(d + n, di));
  game.add_region_rows(b, i, k_prime, layout);
  game.add_payoff_rows(b, i, k_prime, layout, y_dev);
  b.add({1, -1}, {d + i, y_dev}, -1);  // y'_i >= y_i + 1
  return b.build();
}

/// Box containing every lattice point of deviation_polytope(game, i, ...).
inline std::pair<IntPoint, IntPoint> deviation_box(const Game& game, std::size_t i) {
  auto [lo, hi] = game.extended_box();
  const auto& [alo, ahi] = game.action_box(i);
  lo.insert(lo.end(), alo.begin(), alo.end());
  hi.insert(hi.end(), ahi.begin(), ahi.end());
  lo.push_back(1);
  hi.push_back(game.payoff_upper_bound(i));
  return {lo, hi};
}

inline LatticeSet deviation_set(const Game& game, std::size_t i, const ExtendedPieces& pieces) {
  if (i >= game.num_players()) throw ModelError("player index out of range");
  const std::size_t d = game.total_dimension(), n = game.num_players();
  const auto keep = iota_columns(0, d + n);
  const auto box = deviation_box(game, i);
  auto ebox = game.extended_box();
  GenFun total(ebox.first, ebox.second);
  for (const auto& k : pieces.regions) {
    std::vector<GenFun> parts;
    for (std::size_t kp = 0; kp < game.player(i).payoff.convex.size(); ++kp)
      parts.push_back(project_polytope(deviation_polytope(game, i, k, kp), keep, box));
    total += parts.size() == 1 ? parts[0] : boolean_combine(parts, union_table(parts.size()));
  }
  return LatticeSet(std::move(total), "deviation_set");
}

inline LatticeSet deviation_set(const Game& game, std::size_t i, const EncodingOptions& options = {}) {
  return deviation_set(game, i, extended_pieces(game, options));
}

// ---------------------------------------------------------------------------
// Normal-form games

class NormalFormGame {
 public:
  NormalFormGame(std::vector<std::size_t> actions, std::vector<std::vector<std::int64_t>> payoffs)
      : actions_(std::move(actions)), payoffs_(std::move(payoffs)) {
    if (actions_.empty()) throw ModelError("normal-form game needs at least one player");
    std::size_t profiles = 1;
    for (auto m : actions_) {
      if (m == 0) throw ModelError("empty action set");
      profiles *= m;
    }
    if (payoffs_.size() != actions_.size()) throw ModelError("need one payoff table per player");
    for (const auto& t : payoffs_)
      if (t.size() != profiles) throw ModelError("payoff table has the wrong number of entries");
  }

  std::size_t num_players() const { return actions_.size(); }
  const std::vector<std::size_t>& actions() const { return actions_; }
  std::size_t num_profiles() const { return payoffs_.empty() ? 0 : payoffs_[0].size(); }

  /// Row-major index of an action profile (last player fastest).
  std::size_t index(const std::vector<std::size_t>& a) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < actions_.size(); ++i) idx = idx * actions_[i] + a.at(i);
    return idx;
  }

  std::vector<std::size_t> profile(std::size_t idx) const {
    std::vector<std::size_t> a(actions_.size());
    for (std::size_t i = actions_.size(); i-- > 0;) {
      a[i] = idx % actions_[i];
      idx /= actions_[i];
    }
    return a;
  }

  std::int64_t payoff(std::size_t i, const std::vector<std::size_t>& a) const { return payoffs_.at(i).at(index(a)); }

  /// Characteristic vector chi(a): one 0/1 block of length m_i per player.
  IntPoint characteristic(const std::vector<std::size_t>& a) const {
    IntPoint x;
    for (std::size_t i = 0; i < actions_.size(); ++i)
      for (std::size_t j = 0; j < actions_[i]; ++j) x.push_back(a[i] == j ? 1 : 0);
    return x;
  }

 private:
  std::vector<std::size_t> actions_;
  std::vector<std::vector<std::int64_t>> payoffs_;
};

/// IPG whose action sets are the vertices of standard simplices. For a
/// profile a, sigma_a(x) = sum_j x_{j,a_j} - n + 1 is 1 at chi(a) and <= 0 at
/// every other characteristic vector, so
///   u_i = max(0, max_{pi_i(a) > 0} pi_i(a) sigma_a) - max(0, max_{pi_i(a) < 0} -pi_i(a) sigma_a)
/// equals pi_i at every profile.
inline Game normal_form_to_ipg(const NormalFormGame& nf) {
  const std::size_t n = nf.num_players();
  std::size_t d = 0;
  for (auto m : nf.actions()) d += m;
  std::vector<Player> players;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t m = nf.actions()[i];
    RationalMatrix a;
    RationalVector b;
    for (std::size_t j = 0; j < m; ++j) {
      RationalVector row(m, 0);
      row[j] = -1;
      a.push_back(row);
      b.push_back(0);
    }
    a.emplace_back(m, 1);
    b.push_back(1);
    a.emplace_back(m, -1);
    b.push_back(-1);
    Player p;
    p.dimension = m;
    p.polytope = RationalPolytope(m, a, b);
    p.payoff.convex.push_back({IntPoint(d, 0), 0});
    p.payoff.concave.push_back({IntPoint(d, 0), 0});
    for (std::size_t idx = 0; idx < nf.num_profiles(); ++idx) {
      auto prof = nf.profile(idx);
      std::int64_t pi = nf.payoff(i, prof);
      if (pi == 0) continue;
      std::int64_t scale = pi > 0 ? pi : -pi;
      AffinePiece piece{IntPoint(d, 0), scale * (1 - static_cast<std::int64_t>(n))};
      IntPoint chi = nf.characteristic(prof);
      for (std::size_t c = 0; c < d; ++c) piece.gradient[c] = scale * chi[c];
      (pi > 0 ? p.payoff.convex : p.payoff.concave).push_back(std::move(piece));
    }
    players.push_back(std::move(p));
  }
  return Game(1, std::move(players));
}

}  // namespace ipg
