#pragma once

// Exhaustive reference answers for small games, written against the raw
// payoff definitions only. Kept separate from the library's own oracle so
// golden checks have a second, independent route.

#include <algorithm>
#include <limits>
#include <vector>

#include "ipg/model.hpp"

namespace ipg::brute {

struct Table {
  std::vector<std::vector<IntPoint>> actions;  // per player
  std::vector<IntPoint> profiles;              // lexicographic
  std::vector<std::vector<std::int64_t>> u;    // u[p][i]
};

inline Table tabulate(const Game& g) {
  Table t;
  for (const auto& p : g.players()) t.actions.push_back(enumerate_lattice_points(p.polytope));
  std::vector<std::size_t> idx(g.num_players(), 0);
  for (const auto& a : t.actions)
    if (a.empty()) return t;
  for (;;) {
    IntPoint s;
    for (std::size_t i = 0; i < idx.size(); ++i) s.insert(s.end(), t.actions[i][idx[i]].begin(), t.actions[i][idx[i]].end());
    std::vector<std::int64_t> u;
    for (const auto& p : g.players()) u.push_back(p.payoff.value(s));
    t.profiles.push_back(s);
    t.u.push_back(u);
    std::size_t i = idx.size();
    while (i-- > 0) {
      if (++idx[i] < t.actions[i].size()) break;
      idx[i] = 0;
      if (i == 0) return t;
    }
  }
}

/// Best payoff player i can reach from profile s by changing only its block.
inline std::int64_t best_reply(const Game& g, const Table& t, const IntPoint& s, std::size_t i) {
  std::int64_t best = std::numeric_limits<std::int64_t>::min();
  const auto off = static_cast<std::ptrdiff_t>(g.block_offset(i));
  for (const auto& a : t.actions[i]) {
    IntPoint x = s;
    std::copy(a.begin(), a.end(), x.begin() + off);
    best = std::max(best, g.player(i).payoff.value(x));
  }
  return best;
}

inline std::vector<IntPoint> nash(const Game& g) {
  auto t = tabulate(g);
  std::vector<IntPoint> out;
  for (std::size_t p = 0; p < t.profiles.size(); ++p) {
    bool stable = true;
    for (std::size_t i = 0; i < g.num_players() && stable; ++i) stable = best_reply(g, t, t.profiles[p], i) <= t.u[p][i];
    if (stable) out.push_back(t.profiles[p]);
  }
  return out;
}

inline std::vector<IntPoint> pareto(const Game& g) {
  auto t = tabulate(g);
  std::vector<IntPoint> out;
  for (std::size_t p = 0; p < t.profiles.size(); ++p) {
    bool dominated = false;
    for (std::size_t q = 0; q < t.profiles.size() && !dominated; ++q) {
      bool weak = true, strict = false;
      for (std::size_t i = 0; i < g.num_players(); ++i) {
        weak &= t.u[q][i] >= t.u[p][i];
        strict |= t.u[q][i] > t.u[p][i];
      }
      dominated = weak && strict;
    }
    if (!dominated) out.push_back(t.profiles[p]);
  }
  return out;
}

inline std::int64_t welfare(const Game& g, const IntPoint& s) {
  std::int64_t w = 0;
  for (const auto& p : g.players()) w += p.payoff.value(s);
  return w;
}

/// min over s of player i's best-reply value at s (pure minmax).
inline std::vector<std::int64_t> minmax(const Game& g) {
  auto t = tabulate(g);
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < g.num_players(); ++i) {
    std::int64_t m = std::numeric_limits<std::int64_t>::max();
    for (const auto& s : t.profiles) m = std::min(m, best_reply(g, t, s, i));
    out.push_back(m);
  }
  return out;
}

}  // namespace ipg::brute
