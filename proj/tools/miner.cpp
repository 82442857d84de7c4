#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "miner/error.hpp"
#include "miner/pipeline.hpp"

namespace {

int fail(const std::string& command, const char* kind, int code, const std::string& message) {
  nlohmann::ordered_json j;
  j["error"] = kind;
  j["exit_code"] = code;
  j["command"] = command;
  j["message"] = message;
  std::cerr << j.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Selfie-behavior mining pipeline"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::optional<std::string> config_path, out, input, merge_map;
  std::optional<std::uint64_t> seed;
  std::optional<double> svm_c;
  app.add_option("--config", config_path, "Pipeline config JSON");
  app.add_option("--seed", seed, "Seed for every stochastic stage");
  app.add_option("--out", out, "Output directory");
  app.add_option("--input", input, "Dataset JSONL (default OUT/dataset.jsonl)");
  app.add_option("--merge-map", merge_map, "Cluster index to category JSON");
  app.add_option("--C", svm_c, "SVM soft-margin parameter");

  const char* help[] = {"Generate a synthetic dataset and ground truth",
                        "Cluster embeddings, select k, assign categories and selfie subcategories",
                        "Compute user profiles",
                        "Category correlation matrix",
                        "Selfie-behavior prediction tasks",
                        "NMF user typing, attribute profiles, rankings and prediction",
                        "Bundle stage outputs into report.json"};
  std::size_t i = 0;
  for (const auto name : miner::kCommands) app.add_subcommand(std::string(name), help[i++]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("", "argument_error", 3, e.what());
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    miner::PipelineConfig config = config_path ? miner::load_pipeline_config(*config_path) : miner::PipelineConfig{};
    if (seed) config.seed = *seed;
    if (out) config.out = *out;
    if (input) config.input = *input;
    if (merge_map) config.merge_map = *merge_map;
    if (svm_c) config.svm_c = *svm_c;
    config.validate();
    miner::run_command(command, config);
  } catch (const miner::Error& e) {
    return fail(command, miner::to_string(e.kind()), miner::exit_code(e.kind()), e.what());
  } catch (const std::exception& e) {
    return fail(command, "internal_error", 1, e.what());
  }
  return 0;
}
