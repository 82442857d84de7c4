#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>
#include <sys/wait.h>

#include "fixtures.hpp"
#include "miner/error.hpp"
#include "miner/pipeline.hpp"

using namespace miner;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string err;
};

Run cli(const std::string& args, const fs::path& dir) {
  const auto err_path = dir / "stderr.txt";
  const std::string cmd = std::string(MINER_CLI_PATH) + " " + args + " >/dev/null 2>" + err_path.string();
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(err_path);
  std::stringstream s;
  s << in.rdbuf();
  r.err = s.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path small_config(const fs::path& dir) {
  const nlohmann::json j = {
      {"seed", 3},
      {"synth", {{"users", 60}, {"moments", {20, 30}}}},
      {"cluster", {{"k_min", 14}, {"k_max", 18}, {"restarts", 1}}},
      {"characterize", {{"min_occurrence", 20}}},
      {"learn", {{"folds", 5}}},
  };
  const auto path = dir / "config.json";
  std::ofstream(path) << j.dump(2);
  return path;
}

void run_all(const fs::path& config, const fs::path& out, const fs::path& dir) {
  for (const auto name : kCommands) {
    const auto r = cli(std::string(name) + " --config " + config.string() + " --out " + out.string(), dir);
    ASSERT_EQ(r.code, 0) << name << ": " << r.err;
  }
}

}  // namespace

TEST(Pipeline, FullRunAndDeterminism) {
  const auto dir = fixtures::temp_dir("pipeline_full");
  const auto config = small_config(dir);
  run_all(config, dir / "a", dir);
  run_all(config, dir / "b", dir);
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(dir / "a")) {
    const auto name = entry.path().filename();
    EXPECT_EQ(slurp(entry.path()), slurp(dir / "b" / name)) << name;
    ++files;
  }
  EXPECT_GE(files, 20u);

  const auto report = nlohmann::json::parse(slurp(dir / "a" / "report.json"));
  EXPECT_EQ(report.at("schema_version"), kReportSchemaVersion);
  EXPECT_EQ(report.at("seed"), 3);
  for (const char* stage : {"cluster", "characterize", "correlate", "tasks", "factorize"}) {
    EXPECT_TRUE(report.contains(stage)) << stage;
  }
  EXPECT_EQ(slurp(dir / "a" / "table2.csv").substr(0, 4), "task");
}

TEST(Pipeline, DefaultConfigEndToEnd) {
  const auto dir = fixtures::temp_dir("pipeline_default");
  for (const auto name : kCommands) {
    const auto r = cli(std::string(name) + " --out " + (dir / "out").string(), dir);
    ASSERT_EQ(r.code, 0) << name << ": " << r.err;
  }
  const auto cluster = nlohmann::json::parse(slurp(dir / "out" / "cluster.json"));
  EXPECT_GE(cluster.at("truth_agreement").get<double>(), 0.9);
}

TEST(Pipeline, MissingUpstreamNamesFile) {
  const auto dir = fixtures::temp_dir("pipeline_missing");
  const auto r = cli("tasks --out " + (dir / "empty").string(), dir);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("profiles.csv"), std::string::npos) << r.err;
  const auto j = nlohmann::json::parse(r.err);
  EXPECT_EQ(j.at("exit_code"), 2);
  EXPECT_EQ(j.at("command"), "tasks");
}

TEST(Pipeline, InvalidConfigExitsThree) {
  const auto dir = fixtures::temp_dir("pipeline_config");
  std::ofstream(dir / "bad.json") << R"({"cluster": {"k_min": 9, "k_max": 3}})";
  std::ofstream(dir / "garbled.json") << "{not json";
  EXPECT_EQ(cli("cluster --config " + (dir / "bad.json").string(), dir).code, 3);
  EXPECT_EQ(cli("synth --config " + (dir / "garbled.json").string(), dir).code, 3);
  EXPECT_EQ(cli("synth --seed notanumber", dir).code, 3);
  EXPECT_EQ(cli("frobnicate", dir).code, 3);
  EXPECT_EQ(cli("synth --config " + (dir / "absent.json").string(), dir).code, 2);
}

TEST(Pipeline, ConfigJsonRoundTrip) {
  PipelineConfig c;
  c.seed = 9;
  c.k_min = 5;
  c.svm_c = 2.5;
  c.merge_map = "/tmp/map.json";
  c.synth.users = 33;
  const auto back = pipeline_config_from_json(to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
  EXPECT_THROW(pipeline_config_from_json({{"learn", {{"q", 0.9}}}}).validate(), ConfigError);
  EXPECT_THROW(pipeline_config_from_json({{"unknown_section", 1}}), ConfigError);
  EXPECT_THROW(pipeline_config_from_json({{"learn", {{"c", 1}}}}), ConfigError);
}

TEST(Pipeline, ExitCodes) {
  EXPECT_EQ(exit_code(ErrorKind::MissingInput), 2);
  EXPECT_EQ(exit_code(ErrorKind::Config), 3);
  EXPECT_EQ(exit_code(ErrorKind::UndefinedResult), 4);
  EXPECT_EQ(exit_code(ErrorKind::Parse), 1);
  EXPECT_THROW(run_command("nope", PipelineConfig{}), ArgumentError);
}
