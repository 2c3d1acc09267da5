#pragma once

// Command dispatch for the ipg command-line tool. `run` never exits the
// process; it writes JSON to `out`, diagnostics to `err`, and returns the exit
// status.

#include <chrono>
#include <cstdlib>
#include <iostream>

#include "ipg/io.hpp"

namespace ipg::cli {

using io::InputError;
using io::json;

enum class Backend { genfun, oracle, both };

enum Exit : int { ok = 0, usage = 1, invalid_input = 2, disagreement = 3, undefined = 4 };

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"count-nash",  "sample-nash", "enumerate-nash", "nash-fixed",
                                          "pareto",      "pareto-nash", "welfare",        "threat-point",
                                          "stackelberg", "convert-normal-form"};
  return c;
}

struct RunConfig {
  std::string command;
  Backend backend = Backend::genfun;
  std::string input;
  std::optional<std::size_t> player;
  std::optional<IntPoint> action;
  std::optional<std::size_t> max_results;
  bool stats = false;
  EncodingOptions encoding;
};

inline std::string backend_name(Backend b) {
  switch (b) {
    case Backend::genfun: return "genfun";
    case Backend::oracle: return "oracle";
    case Backend::both: return "both";
  }
  return "";
}

inline std::optional<Backend> parse_backend(const std::string& s) {
  if (s == "genfun") return Backend::genfun;
  if (s == "oracle") return Backend::oracle;
  if (s == "both") return Backend::both;
  return std::nullopt;
}

/// "1,-2,3" -> {1, -2, 3}.
inline IntPoint parse_action(const std::string& text) {
  IntPoint out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto q = parse_rational(item);
    if (denominator(q) != 1) throw ArithmeticError("action entries must be integers");
    out.push_back(to_int64(numerator(q)));
  }
  if (out.empty()) throw ArithmeticError("empty action vector");
  return out;
}

/// Worker cap from IPG_THREADS; the solvers are single-threaded, so this only
/// validates the setting and reports it in the stats block.
inline std::size_t thread_cap() {
  const char* v = std::getenv("IPG_THREADS");
  if (!v) return 1;
  char* end = nullptr;
  long n = std::strtol(v, &end, 10);
  return (end && *end == '\0' && n > 0) ? static_cast<std::size_t>(n) : 1;
}

namespace detail {

inline json points_json(const std::vector<IntPoint>& pts) {
  json a = json::array();
  for (const auto& p : pts) a.push_back(io::point_json(p));
  return a;
}

inline json optional_int(const std::optional<std::int64_t>& v) { return v ? json(*v) : json(nullptr); }

inline json optional_rational(const std::optional<Rational>& v) {
  return v ? json(to_fraction_string(*v)) : json(nullptr);
}

inline json welfare_json(const WelfareReport& w) {
  return json{{"w_star", w.w_star},
              {"w_worst", optional_int(w.w_worst)},
              {"w_best", optional_int(w.w_best)},
              {"poa", optional_rational(w.poa)},
              {"pos", optional_rational(w.pos)}};
}

/// Smallest point in the symmetric difference of two sorted lists.
inline std::optional<std::pair<IntPoint, std::string>> first_difference(const std::vector<IntPoint>& a,
                                                                        const std::vector<IntPoint>& b) {
  std::vector<IntPoint> only_a, only_b;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(only_a));
  std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(only_b));
  if (only_a.empty() && only_b.empty()) return std::nullopt;
  if (only_b.empty() || (!only_a.empty() && only_a.front() < only_b.front())) return {{only_a.front(), "genfun"}};
  return {{only_b.front(), "oracle"}};
}

struct Outcome {
  json result;
  int status = Exit::ok;
  std::optional<bool> agreement;
  json counterexample;
  std::string message;
};

/// Compares two set-valued results and fills in agreement or a counterexample.
inline void compare_sets(Outcome& o, const std::vector<IntPoint>& gf, const std::vector<IntPoint>& orc) {
  if (auto diff = first_difference(gf, orc)) {
    o.agreement = false;
    o.status = Exit::disagreement;
    o.counterexample = json{{"point", io::point_json(diff->first)}, {"only_in", diff->second}};
    o.message = "backends disagree at " + to_string(diff->first);
  } else {
    o.agreement = true;
  }
}

inline void compare_values(Outcome& o, const json& gf, const json& orc) {
  if (gf == orc) {
    o.agreement = true;
  } else {
    o.agreement = false;
    o.status = Exit::disagreement;
    o.counterexample = json{{"genfun", gf}, {"oracle", orc}};
    o.message = "backends disagree";
  }
}

class Runner {
 public:
  Runner(const RunConfig& c, std::ostream& out) : c_(c), out_(out) {}

  std::size_t genfun_terms = 0;

  Outcome game_command(const Game& g) {
    const bool gf = c_.backend != Backend::oracle, orc = c_.backend != Backend::genfun;
    EquilibriumSolver solver(g, c_.encoding);
    Outcome o;
    const std::string& cmd = c_.command;
    auto finish = [&] { genfun_terms = gf ? solver.genfun_terms() : 0; };

    if (cmd == "count-nash") {
      std::optional<Integer> a, b;
      if (gf) a = solver.count_nash();
      if (orc) b = Integer(oracle::nash_set(g).size());
      o.result = io::integer_json(a ? *a : *b);
      if (a && b) compare_values(o, io::integer_json(*a), io::integer_json(*b));
    } else if (cmd == "sample-nash") {
      // Both backends return the lexicographically least equilibrium.
      std::optional<IntPoint> a, b;
      if (gf) {
        auto pts = solver.nash_set().points();
        if (!pts.empty()) a = pts.front();
      }
      if (orc) {
        auto pts = oracle::nash_set(g);
        if (!pts.empty()) b = pts.front();
      }
      auto to_json = [](const std::optional<IntPoint>& p) { return p ? io::point_json(*p) : json(nullptr); };
      o.result = gf ? to_json(a) : to_json(b);
      if (gf && orc) compare_values(o, to_json(a), to_json(b));
    } else if (cmd == "enumerate-nash") {
      std::vector<IntPoint> streamed;
      std::size_t emitted = 0;
      bool truncated = false;
      auto emit = [&](const IntPoint& s) {
        if (c_.max_results && emitted >= *c_.max_results) {
          truncated = true;
          return false;
        }
        out_ << io::point_json(s).dump() << '\n';
        ++emitted;
        if (orc) streamed.push_back(s);
        return true;
      };
      if (gf) {
        solver.enumerate_nash(emit);
      } else {
        for (const auto& s : oracle::nash_set(g))
          if (!emit(s)) break;
      }
      o.result = json{{"emitted", emitted}, {"truncated", truncated}};
      if (gf && orc) {
        auto expected = oracle::nash_set(g);
        if (c_.max_results && expected.size() > *c_.max_results) expected.resize(*c_.max_results);
        compare_sets(o, streamed, expected);
      }
    } else if (cmd == "nash-fixed") {
      if (!c_.player || !c_.action) throw InputError("nash-fixed needs --player and --action");
      std::size_t i = *c_.player;
      if (i >= g.num_players()) throw InputError("--player " + std::to_string(i) + " is out of range");
      if (c_.action->size() != g.player(i).dimension || !g.player(i).polytope.contains(*c_.action))
        throw InputError("--action " + to_string(*c_.action) + " is not a feasible action of player " +
                         std::to_string(i));
      std::vector<IntPoint> a, b;
      if (gf) a = solver.nash_with_fixed_action(i, *c_.action).points();
      if (orc)
        for (const auto& s : oracle::nash_set(g))
          if (IntPoint(s.begin() + static_cast<std::ptrdiff_t>(g.block_offset(i)),
                       s.begin() + static_cast<std::ptrdiff_t>(g.block_offset(i) + g.player(i).dimension)) ==
              *c_.action)
            b.push_back(s);
      o.result = points_json(capped(gf ? a : b));
      if (gf && orc) compare_sets(o, a, b);
    } else if (cmd == "pareto" || cmd == "pareto-nash") {
      const bool nash = cmd == "pareto-nash";
      std::vector<IntPoint> a, b;
      if (gf) a = nash ? solver.pareto_nash_set().points() : solver.pareto_set().points();
      if (orc) {
        b = oracle::pareto_set(g);
        if (nash) {
          auto n = oracle::nash_set(g);
          std::vector<IntPoint> both;
          std::set_intersection(b.begin(), b.end(), n.begin(), n.end(), std::back_inserter(both));
          b = std::move(both);
        }
      }
      o.result = points_json(capped(gf ? a : b));
      if (gf && orc) compare_sets(o, a, b);
    } else if (cmd == "welfare") {
      std::optional<WelfareReport> a, b;
      if (gf) a = solver.welfare_report();
      if (orc) b = oracle::welfare_report(g);
      const WelfareReport& w = a ? *a : *b;
      o.result = welfare_json(w);
      if (a && b) compare_values(o, welfare_json(*a), welfare_json(*b));
      if (o.status == Exit::ok && (!w.poa || !w.pos)) {
        o.status = Exit::undefined;
        o.message = "price of anarchy/stability undefined: " + (w.diagnostic.empty() ? std::string("no equilibrium") : w.diagnostic);
      }
    } else if (cmd == "threat-point") {
      json a, b;
      if (gf) a = solver.threat_point().values;
      if (orc) b = oracle::threat_point(g).values;
      o.result = gf ? a : b;
      if (gf && orc) compare_values(o, a, b);
    } else {
      throw InputError("command " + cmd + " does not take a game file");
    }
    finish();
    return o;
  }

  Outcome stackelberg_command(const StackelbergGame& sg) {
    const bool gf = c_.backend != Backend::oracle, orc = c_.backend != Backend::genfun;
    Outcome o;
    std::optional<std::int64_t> va, vb;
    std::vector<IntPoint> a, b;
    if (gf) {
      StackelbergSolver solver(sg, c_.encoding);
      auto sol = solver.leader_optimize();
      va = sol.leader_optimum;
      a = sol.equilibria.points();
      genfun_terms = sol.equilibria.genfun().size();
    }
    if (orc) std::tie(vb, b) = oracle::stackelberg_optimum(sg);
    auto v = gf ? va : vb;
    o.result = json{{"leader_optimum", optional_int(v)}, {"equilibria", points_json(capped(gf ? a : b))}};
    if (gf && orc) {
      if (va != vb)
        compare_values(o, optional_int(va), optional_int(vb));
      else
        compare_sets(o, a, b);
    }
    if (o.status == Exit::ok && !v) {
      o.status = Exit::undefined;
      o.message = "no follower equilibrium exists for any leader action";
    }
    return o;
  }

 private:
  std::vector<IntPoint> capped(std::vector<IntPoint> v) const {
    if (c_.max_results && v.size() > *c_.max_results) v.resize(*c_.max_results);
    return v;
  }

  const RunConfig& c_;
  std::ostream& out_;
};

}  // namespace detail

inline int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  if (std::find(commands().begin(), commands().end(), config.command) == commands().end()) {
    err << "error: unknown command '" << config.command << "'\n";
    return Exit::usage;
  }
  try {
    if (config.command == "convert-normal-form") {
      auto nf = io::normal_form_from_json(io::read_json_file(config.input));
      out << io::game_to_json(normal_form_to_ipg(nf)).dump(2) << '\n';
      return Exit::ok;
    }
    auto doc = io::read_json_file(config.input);
    detail::Runner runner(config, out);
    detail::Outcome o = config.command == "stackelberg" ? runner.stackelberg_command(io::stackelberg_from_json(doc))
                                                        : runner.game_command(io::game_from_json(doc));
    json report{{"command", config.command}, {"backend", backend_name(config.backend)}, {"result", o.result}};
    if (o.agreement) report["agreement"] = *o.agreement;
    if (!o.counterexample.is_null()) report["counterexample"] = o.counterexample;
    if (config.stats) {
      auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      report["stats"] = json{{"genfun_terms", runner.genfun_terms},
                             {"elapsed_ms", static_cast<std::int64_t>(ms)},
                             {"threads", thread_cap()}};
    }
    out << report.dump() << '\n';
    if (!o.message.empty()) err << (o.status == Exit::undefined ? "undefined: " : "error: ") << o.message << '\n';
    return o.status;
  } catch (const io::InputError& e) {
    err << "invalid input: " << e.what() << '\n';
    return Exit::invalid_input;
  } catch (const ModelError& e) {
    err << "invalid input: " << e.what() << '\n';
    return Exit::invalid_input;
  } catch (const PolytopeError& e) {
    err << "invalid input: " << e.what() << '\n';
    return Exit::invalid_input;
  }
}

}  // namespace ipg::cli
