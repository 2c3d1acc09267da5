// ipg: pure Nash equilibria, welfare and leader-followers optima of integer
// programming games with DPLC payoffs.

#include <CLI11.hpp>

#include "ipg/cli.hpp"

int main(int argc, char** argv) {
  using namespace ipg;
  CLI::App app{"Equilibrium computations for integer programming games"};
  cli::RunConfig config;
  std::string backend = "genfun", action;
  std::size_t player = 0, max_results = 0, threshold = config.encoding.barvinok_max_dimension;

  app.add_option("command", config.command, "Command to run")
      ->required()
      ->check(CLI::IsMember(cli::commands()));
  app.add_option("input", config.input, "Game, Stackelberg or normal-form JSON file")->required();
  app.add_option("--backend", backend, "genfun, oracle or both")->check(CLI::IsMember({"genfun", "oracle", "both"}));
  auto* player_opt = app.add_option("--player", player, "Player index (0-based) for nash-fixed");
  auto* action_opt = app.add_option("--action", action, "Comma-separated action vector for nash-fixed");
  auto* max_opt = app.add_option("--max-results", max_results, "Cap on listed or enumerated points");
  app.add_flag("--stats", config.stats, "Append term counts and timing");
  app.add_option("--barvinok-max-dim", threshold, "Largest dimension encoded with Barvinok cones");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  config.backend = *cli::parse_backend(backend);
  config.encoding.barvinok_max_dimension = threshold;
  if (*player_opt) config.player = player;
  if (*max_opt) config.max_results = max_results;
  if (*action_opt) {
    try {
      config.action = cli::parse_action(action);
    } catch (const ArithmeticError& e) {
      std::cerr << "invalid input: --action: " << e.what() << '\n';
      return cli::Exit::invalid_input;
    }
  }
  if (config.command == "nash-fixed" && (!config.player || !config.action)) {
    std::cerr << "invalid input: nash-fixed needs --player and --action\n";
    return cli::Exit::invalid_input;
  }
  return cli::run(config, std::cout, std::cerr);
}
