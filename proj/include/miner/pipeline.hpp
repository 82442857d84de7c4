#pragma once

// Pipeline stages behind the command-line front end. Each stage reads the
// files written by earlier stages from the output directory and writes its
// own; all randomness derives from PipelineConfig::seed.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "miner/cluster.hpp"
#include "miner/error.hpp"
#include "miner/synth.hpp"
#include "miner/taxonomy.hpp"

namespace miner {

inline constexpr int kReportSchemaVersion = 1;

struct PipelineConfig {
  std::filesystem::path out = "out";
  std::optional<std::filesystem::path> input;         // dataset JSONL, default out/dataset.jsonl
  std::optional<std::filesystem::path> truth;         // ground truth JSONL, default out/ground_truth.jsonl
  std::optional<std::filesystem::path> merge_map;     // cluster index -> category
  std::optional<std::filesystem::path> selfie_names;  // selfie subcluster index -> subcategory
  std::optional<std::filesystem::path> attribute_schema;

  Taxonomy taxonomy = Taxonomy::synthetic();
  SynthConfig synth = SynthConfig::standard();

  Eigen::Index k_min = 8;
  Eigen::Index k_max = 24;
  Eigen::Index k_step = 1;
  int restarts = 2;
  int kmeans_max_iter = 300;
  double kmeans_tol = 1e-6;
  Eigen::Index selfie_k = 4;

  std::int64_t min_occurrence = 50;
  bool true_categories = false;  // characterize from ground truth instead of assignments

  double q = 0.25;
  int folds = 10;
  double svm_c = 1;
  double svm_tol = 1e-3;
  int svm_max_passes = 10;

  Eigen::Index rank = 5;
  int nmf_max_iter = 500;
  double nmf_tol = 1e-6;

  std::uint64_t seed = 0;

  std::filesystem::path input_path() const { return input.value_or(out / "dataset.jsonl"); }
  std::filesystem::path truth_path() const { return truth.value_or(out / "ground_truth.jsonl"); }
  void validate() const;
};

// Relative paths inside the file are resolved against `base`. Throws
// ConfigError.
PipelineConfig pipeline_config_from_json(const nlohmann::json& j, const std::filesystem::path& base = {});
PipelineConfig load_pipeline_config(const std::filesystem::path& path);
nlohmann::json to_json(const PipelineConfig& config);

// Cluster index -> majority true label; selfie subcategory truth maps to the
// Selfie label.
LabelMap majority_label_map(const Clustering<double>& clustering, const std::vector<std::string>& image_ids,
                            const GroundTruth& truth, bool subcategories, const Taxonomy& taxonomy);

void cmd_synth(const PipelineConfig& config);
void cmd_cluster(const PipelineConfig& config);
void cmd_characterize(const PipelineConfig& config);
void cmd_correlate(const PipelineConfig& config);
void cmd_tasks(const PipelineConfig& config);
void cmd_factorize(const PipelineConfig& config);
void cmd_report(const PipelineConfig& config);

inline constexpr std::string_view kCommands[] = {"synth", "cluster", "characterize", "correlate",
                                                  "tasks", "factorize",  "report"};

// Throws ArgumentError for an unknown command.
void run_command(std::string_view command, const PipelineConfig& config);

// 2 missing input, 3 invalid config, 4 undefined result, 1 otherwise.
int exit_code(ErrorKind kind) noexcept;

}  // namespace miner
