#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "ipg/cli.hpp"

using namespace ipg;
using io::json;

namespace {

const std::string games = IPG_GAMES_DIR;

struct Result {
  int status;
  std::string out, err;
};

Result run(const std::string& command, const std::string& file, cli::Backend backend = cli::Backend::genfun,
           std::function<void(cli::RunConfig&)> tweak = {}) {
  cli::RunConfig c;
  c.command = command;
  c.input = file.front() == '/' ? file : games + "/" + file;
  c.backend = backend;
  if (tweak) tweak(c);
  std::ostringstream out, err;
  int status = cli::run(c, out, err);
  return {status, out.str(), err.str()};
}

json last_line(const std::string& out) {
  auto trimmed = out.substr(0, out.size() - 1);
  return json::parse(trimmed.substr(trimmed.rfind('\n') == std::string::npos ? 0 : trimmed.rfind('\n') + 1));
}

}  // namespace

TEST(Cli, CountNashWithBothBackends) {
  auto r = run("count-nash", "pd.json", cli::Backend::both);
  EXPECT_EQ(r.status, 0);
  auto doc = json::parse(r.out);
  EXPECT_EQ(doc["result"], 1);
  EXPECT_EQ(doc["agreement"], true);
  EXPECT_EQ(doc["command"], "count-nash");
  EXPECT_EQ(doc["backend"], "both");
}

TEST(Cli, WelfareOfPrisonersDilemma) {
  auto r = run("welfare", "pd.json");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(json::parse(r.out)["result"],
            json::parse(R"({"w_star": 4, "w_worst": 2, "w_best": 2, "poa": "2/1", "pos": "2/1"})"));
}

TEST(Cli, UndefinedPriceOfAnarchyExitsFour) {
  EXPECT_EQ(json::parse(run("count-nash", "matching_pennies.json").out)["result"], 0);
  auto r = run("welfare", "matching_pennies.json", cli::Backend::both);
  EXPECT_EQ(r.status, cli::Exit::undefined);
  EXPECT_TRUE(json::parse(r.out)["result"]["poa"].is_null());
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, EnumerationStreamsLexicographicLines) {
  auto r = run("enumerate-nash", "coordination.json", cli::Backend::both);
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('{')), "[0,0]\n[1,1]\n");
  EXPECT_EQ(last_line(r.out)["result"]["emitted"], 2);
  auto capped = run("enumerate-nash", "coordination.json", cli::Backend::genfun,
                    [](cli::RunConfig& c) { c.max_results = 1; });
  EXPECT_EQ(capped.out.substr(0, capped.out.find('{')), "[0,0]\n");
  EXPECT_EQ(last_line(capped.out)["result"]["truncated"], true);
}

TEST(Cli, FixedActionNeedsArguments) {
  EXPECT_EQ(run("nash-fixed", "coordination.json").status, cli::Exit::invalid_input);
  auto r = run("nash-fixed", "coordination.json", cli::Backend::both, [](cli::RunConfig& c) {
    c.player = 0;
    c.action = IntPoint{1};
  });
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(json::parse(r.out)["result"], json::parse("[[1,1]]"));
  auto bad = run("nash-fixed", "coordination.json", cli::Backend::genfun, [](cli::RunConfig& c) {
    c.player = 0;
    c.action = IntPoint{4};
  });
  EXPECT_EQ(bad.status, cli::Exit::invalid_input);
}

TEST(Cli, EveryGameCommandAgreesOnFixtures) {
  for (const char* file : {"pd.json", "matching_pennies.json", "coordination.json", "cournot.json"})
    for (const char* cmd : {"count-nash", "sample-nash", "pareto", "pareto-nash", "welfare", "threat-point"}) {
      auto r = run(cmd, file, cli::Backend::both);
      EXPECT_NE(r.status, cli::Exit::disagreement) << cmd << " " << file << ": " << r.err;
      EXPECT_EQ(json::parse(r.out)["agreement"], true) << cmd << " " << file;
    }
}

TEST(Cli, StackelbergCommand) {
  auto r = run("stackelberg", "stackelberg_coordination.json", cli::Backend::both);
  EXPECT_EQ(r.status, 0);
  auto doc = json::parse(r.out);
  EXPECT_EQ(doc["result"]["leader_optimum"], 2);
  EXPECT_EQ(doc["result"]["equilibria"], json::parse("[[0,1,1],[1,1,1]]"));
  EXPECT_EQ(json::parse(run("stackelberg", "stackelberg_budget.json").out)["result"]["leader_optimum"], 2);
}

TEST(Cli, NormalFormConversionRoundTrips) {
  auto r = run("convert-normal-form", "pd_normal_form.json");
  ASSERT_EQ(r.status, 0);
  auto path = std::string(::testing::TempDir()) + "ipg_converted_pd.json";
  std::ofstream(path) << r.out;
  auto count = run("count-nash", path, cli::Backend::both);
  EXPECT_EQ(json::parse(count.out)["result"], 1);
  auto single = run("convert-normal-form", "single_profile_normal_form.json");
  std::ofstream(path) << single.out;
  EXPECT_EQ(json::parse(run("count-nash", path).out)["result"], 1);
  std::remove(path.c_str());
  EXPECT_EQ(run("convert-normal-form", "ragged_normal_form.json").status, cli::Exit::invalid_input);
}

TEST(Cli, InvalidInputExitsTwo) {
  EXPECT_EQ(run("count-nash", "missing.json").status, cli::Exit::invalid_input);
  EXPECT_EQ(run("count-nash", "pd_normal_form.json").status, cli::Exit::invalid_input);
  EXPECT_EQ(run("bogus", "pd.json").status, cli::Exit::usage);
}

TEST(Cli, OutputIsDeterministic) {
  for (const char* cmd : {"pareto", "welfare", "enumerate-nash"})
    EXPECT_EQ(run(cmd, "cournot.json").out, run(cmd, "cournot.json").out) << cmd;
}

TEST(Cli, BinaryExitCodes) {
  const std::string bin = IPG_CLI_PATH;
  auto status = [&](const std::string& args) {
    int s = std::system((bin + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(s);
  };
  EXPECT_EQ(status("count-nash " + games + "/pd.json --backend both"), 0);
  EXPECT_EQ(status("welfare " + games + "/matching_pennies.json"), 4);
  EXPECT_EQ(status("convert-normal-form " + games + "/ragged_normal_form.json"), 2);
  EXPECT_EQ(status("nash-fixed " + games + "/pd.json --player 0"), 2);
  EXPECT_EQ(status("nash-fixed " + games + "/pd.json --player 0 --action 1 --stats"), 0);
}
