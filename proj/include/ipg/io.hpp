#pragma once

// JSON readers and writers for games, normal-form tables and leader-followers
// games. Rationals are "p/q" strings (plain integers are also accepted on input).

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ipg/stackelberg.hpp"

namespace ipg::io {

using json = nlohmann::ordered_json;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(where + ": missing \"" + key + "\"");
  return *it;
}

inline std::int64_t integer(const json& j, const std::string& where) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_string()) {
    Rational q;
    try {
      q = parse_rational(j.get<std::string>());
    } catch (const ArithmeticError& e) {
      throw InputError(where + ": " + e.what());
    }
    if (denominator(q) != 1 || !fits_int64(numerator(q))) throw InputError(where + ": expected an integer");
    return to_int64(numerator(q));
  }
  throw InputError(where + ": expected an integer");
}

inline Rational rational(const json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const ArithmeticError& e) {
      throw InputError(where + ": " + e.what());
    }
  }
  throw InputError(where + ": expected an integer or a \"p/q\" string");
}

inline IntPoint int_vector(const json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array");
  IntPoint v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(integer(j[i], where + "[" + std::to_string(i) + "]"));
  return v;
}

inline RationalVector rational_vector(const json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array");
  RationalVector v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(rational(j[i], where + "[" + std::to_string(i) + "]"));
  return v;
}

inline RationalMatrix rational_matrix(const json& j, std::size_t cols, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array of rows");
  RationalMatrix m;
  for (std::size_t r = 0; r < j.size(); ++r) {
    auto row = rational_vector(j[r], where + "[" + std::to_string(r) + "]");
    if (row.size() != cols)
      throw InputError(where + "[" + std::to_string(r) + "]: has " + std::to_string(row.size()) +
                       " entries, expected " + std::to_string(cols));
    m.push_back(std::move(row));
  }
  return m;
}

inline std::size_t dimension(const json& j, const std::string& where) {
  auto d = integer(field(j, "dimension", where), where + ".dimension");
  if (d <= 0) throw InputError(where + ".dimension: must be positive");
  return static_cast<std::size_t>(d);
}

inline RationalPolytope polytope(const json& j, std::size_t dim, const std::string& where) {
  const auto& c = field(j, "constraints", where);
  auto a = rational_matrix(field(c, "matrix", where + ".constraints"), dim, where + ".constraints.matrix");
  auto b = rational_vector(field(c, "rhs", where + ".constraints"), where + ".constraints.rhs");
  if (a.size() != b.size()) throw InputError(where + ".constraints: matrix and rhs row counts differ");
  return RationalPolytope(dim, std::move(a), std::move(b));
}

inline std::vector<AffinePiece> pieces(const json& j, std::size_t len, const std::string& where) {
  if (!j.is_array() || j.empty()) throw InputError(where + ": expected a nonempty array of affine pieces");
  std::vector<AffinePiece> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string w = where + "[" + std::to_string(k) + "]";
    AffinePiece p{int_vector(field(j[k], "gradient", w), w + ".gradient"), integer(field(j[k], "offset", w), w + ".offset")};
    if (p.gradient.size() != len)
      throw InputError(w + ".gradient: has " + std::to_string(p.gradient.size()) + " entries, expected " +
                       std::to_string(len));
    out.push_back(std::move(p));
  }
  return out;
}

inline DPLCPayoff payoff(const json& j, std::size_t len, const std::string& where) {
  const auto& p = field(j, "payoff", where);
  DPLCPayoff out;
  out.convex = pieces(field(p, "convex", where + ".payoff"), len, where + ".payoff.convex");
  out.concave = pieces(field(p, "concave", where + ".payoff"), len, where + ".payoff.concave");
  return out;
}

inline std::int64_t bound(const json& j) {
  auto b = integer(field(j, "bound", "game"), "game.bound");
  if (b < 1) throw InputError("game.bound: must be at least 1");
  return b;
}

inline std::size_t total_dimension(const json& players) {
  std::size_t d = 0;
  for (std::size_t i = 0; i < players.size(); ++i) d += dimension(players[i], "players[" + std::to_string(i) + "]");
  return d;
}

}  // namespace detail

inline json parse_json(std::istream& in, const std::string& name) {
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(name + ": " + e.what());
  }
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return parse_json(in, path);
}

/// Parses and validates a game document. Model violations surface as InputError.
inline Game game_from_json(const json& j) {
  const auto& ps = detail::field(j, "players", "game");
  if (!ps.is_array() || ps.empty()) throw InputError("game.players: expected a nonempty array");
  const std::size_t d = detail::total_dimension(ps);
  std::vector<Player> players;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const std::string w = "players[" + std::to_string(i) + "]";
    Player p;
    p.dimension = detail::dimension(ps[i], w);
    p.polytope = detail::polytope(ps[i], p.dimension, w);
    p.payoff = detail::payoff(ps[i], d, w);
    players.push_back(std::move(p));
  }
  try {
    return Game(detail::bound(j), std::move(players));
  } catch (const ModelError& e) {
    throw InputError(e.what());
  } catch (const PolytopeError& e) {
    throw InputError(e.what());
  }
}

namespace detail {

inline json rational_json(const Rational& q) { return to_fraction_string(q); }

inline json pieces_json(const std::vector<AffinePiece>& ps) {
  json a = json::array();
  for (const auto& p : ps) a.push_back(json{{"gradient", p.gradient}, {"offset", p.offset}});
  return a;
}

inline json payoff_json(const DPLCPayoff& p) {
  return json{{"convex", pieces_json(p.convex)}, {"concave", pieces_json(p.concave)}};
}

inline json polytope_json(const RationalPolytope& p) {
  json m = json::array(), b = json::array();
  for (std::size_t r = 0; r < p.matrix().size(); ++r) {
    json row = json::array();
    for (const auto& v : p.matrix()[r]) row.push_back(rational_json(v));
    m.push_back(row);
    b.push_back(rational_json(p.rhs()[r]));
  }
  return json{{"matrix", m}, {"rhs", b}};
}

}  // namespace detail

inline json game_to_json(const Game& g) {
  json ps = json::array();
  for (const auto& p : g.players())
    ps.push_back(json{{"dimension", p.dimension},
                      {"constraints", detail::polytope_json(p.polytope)},
                      {"payoff", detail::payoff_json(p.payoff)}});
  return json{{"bound", g.bound()}, {"players", ps}};
}

/// {"actions": [m_1, ..., m_n], "payoffs": [one m_1 x ... x m_n nested table per player]}.
inline NormalFormGame normal_form_from_json(const json& j) {
  auto acts = detail::int_vector(detail::field(j, "actions", "normal form"), "actions");
  if (acts.empty()) throw InputError("actions: need at least one player");
  std::vector<std::size_t> actions;
  for (auto m : acts) {
    if (m < 1) throw InputError("actions: every player needs at least one action");
    actions.push_back(static_cast<std::size_t>(m));
  }
  const auto& tables = detail::field(j, "payoffs", "normal form");
  if (!tables.is_array() || tables.size() != actions.size())
    throw InputError("payoffs: expected one table per player");
  std::vector<std::vector<std::int64_t>> flat(actions.size());
  for (std::size_t i = 0; i < actions.size(); ++i) {
    std::function<void(const json&, std::size_t, const std::string&)> walk = [&](const json& t, std::size_t depth,
                                                                                 const std::string& w) {
      if (depth == actions.size()) {
        flat[i].push_back(detail::integer(t, w));
        return;
      }
      if (!t.is_array() || t.size() != actions[depth])
        throw InputError(w + ": expected an array of " + std::to_string(actions[depth]) + " entries (ragged table)");
      for (std::size_t a = 0; a < t.size(); ++a) walk(t[a], depth + 1, w + "[" + std::to_string(a) + "]");
    };
    walk(tables[i], 0, "payoffs[" + std::to_string(i) + "]");
  }
  try {
    return NormalFormGame(std::move(actions), std::move(flat));
  } catch (const ModelError& e) {
    throw InputError(e.what());
  }
}

/// Game format plus "leader" and a per-follower "coupling": {"phi", "psi"}.
/// A follower's constraints are M x <= phi s_0 + psi; "rhs" is ignored when a
/// coupling is present and serves as psi (with phi = 0) otherwise. Rational
/// rows are scaled to integers.
inline StackelbergGame stackelberg_from_json(const json& j) {
  const auto& lj = detail::field(j, "leader", "game");
  const auto& ps = detail::field(j, "players", "game");
  if (!ps.is_array() || ps.empty()) throw InputError("game.players: expected a nonempty array");
  Leader leader;
  leader.dimension = detail::dimension(lj, "leader");
  leader.polytope = detail::polytope(lj, leader.dimension, "leader");
  const std::size_t d0 = leader.dimension, d = detail::total_dimension(ps);
  leader.payoff = detail::payoff(lj, d0 + d, "leader");
  std::vector<Follower> followers;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const std::string w = "players[" + std::to_string(i) + "]";
    Follower f;
    f.dimension = detail::dimension(ps[i], w);
    const auto& c = detail::field(ps[i], "constraints", w);
    auto m = detail::rational_matrix(detail::field(c, "matrix", w + ".constraints"), f.dimension, w + ".constraints.matrix");
    RationalMatrix phi;
    RationalVector psi;
    if (auto it = ps[i].find("coupling"); it != ps[i].end()) {
      phi = detail::rational_matrix(detail::field(*it, "phi", w + ".coupling"), d0, w + ".coupling.phi");
      psi = detail::rational_vector(detail::field(*it, "psi", w + ".coupling"), w + ".coupling.psi");
    } else {
      psi = detail::rational_vector(detail::field(c, "rhs", w + ".constraints"), w + ".constraints.rhs");
      phi.assign(psi.size(), RationalVector(d0, 0));
    }
    if (phi.size() != m.size() || psi.size() != m.size())
      throw InputError(w + ": constraint, phi and psi row counts differ");
    for (std::size_t r = 0; r < m.size(); ++r) {
      Integer l = 1;
      for (const auto* row : {&m[r], &phi[r]})
        for (const auto& v : *row) l = lcm(l, denominator(v));
      l = lcm(l, denominator(psi[r]));
      auto scale = [&](const RationalVector& v) {
        IntPoint out;
        for (const auto& x : v) out.push_back(to_int64(numerator(x * l)));
        return out;
      };
      f.constraints.push_back(scale(m[r]));
      f.coupling.push_back(scale(phi[r]));
      f.offset.push_back(to_int64(numerator(psi[r] * l)));
    }
    f.payoff = detail::payoff(ps[i], d, w);
    followers.push_back(std::move(f));
  }
  try {
    return StackelbergGame(detail::bound(j), std::move(leader), std::move(followers));
  } catch (const ModelError& e) {
    throw InputError(e.what());
  } catch (const PolytopeError& e) {
    throw InputError(e.what());
  }
}

/// Integers as JSON numbers when within 2^53, else decimal strings.
inline json integer_json(const Integer& v) {
  static const Integer safe = Integer(1) << 53;
  if (v < safe && v > -safe) return static_cast<std::int64_t>(v);
  return v.str();
}

inline json point_json(const IntPoint& p) {
  json a = json::array();
  for (auto v : p) a.push_back(integer_json(Integer(v)));
  return a;
}

}  // namespace ipg::io
