#pragma once

// Synthetic corpus generator with planted dependencies between category
// preferences and selfie behavior, plus a brute-force metric oracle.

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "miner/corpus.hpp"
#include "miner/taxonomy.hpp"

namespace miner {

using Range = std::pair<double, double>;

// Per-user behavior overrides carried by a group or rule.
struct BehaviorOverride {
  std::optional<Range> selfie_rate;
  std::optional<std::array<double, kSelfieKinds>> subcategory_weights;
  std::optional<double> multi_face_rate;

  bool operator==(const BehaviorOverride&) const = default;
};

// Mutually exclusive user group: boosts its categories' preference weights.
struct PlantedGroup {
  std::string name;
  double weight = 1;
  std::vector<std::string> categories;
  double boost = 4;
  BehaviorOverride behavior;

  bool operator==(const PlantedGroup&) const = default;
};

// Independent per-user flag drawn with `probability`. Flagged users get the
// category boost and `on`; the others get `off`.
struct PlantedRule {
  std::string name;
  double probability = 0.5;
  std::vector<std::string> categories;
  double boost = 6;
  BehaviorOverride on;
  BehaviorOverride off;

  bool operator==(const PlantedRule&) const = default;
};

struct SynthConfig {
  Taxonomy taxonomy = Taxonomy::synthetic();
  std::size_t users = 200;
  std::size_t moments_min = 40;
  std::size_t moments_max = 60;
  std::size_t max_images_per_moment = 9;
  std::size_t embedding_dim = 24;
  double blob_sigma = 1;
  double blob_separation = 10;  // center distance in units of blob_sigma

  double category_continuation = 0.35;  // another category joins the moment
  Range image_continuation{0.1, 0.6};   // per user: one more image of the same category
  double selfie_image_continuation = 0.3;
  double preference_jitter = 0.5;       // base weight uniform in [1 - j, 1 + j]

  Range selfie_rate{0.05, 0.6};
  double mixed_rate = 0.3;  // selfie moments that also hold other categories
  std::array<double, kSelfieKinds> subcategory_weights{0.45, 0.35, 0.1, 0.1};
  double multi_face_rate = 0.3;
  double missing_face_rate = 0.02;
  double zero_face_rate = 0.01;

  std::vector<PlantedGroup> groups;
  std::vector<PlantedRule> rules;
  std::uint64_t seed = 0;

  // Default taxonomy with five attribute groups and the selfie-frequency and
  // cosmetic rules.
  static SynthConfig standard();
  // No groups and no rules.
  static SynthConfig null_model();

  std::size_t blob_count() const noexcept { return taxonomy.size() + kSelfieKinds; }
  // Throws ConfigError.
  void validate() const;

  bool operator==(const SynthConfig&) const = default;
};

nlohmann::json to_json(const SynthConfig& config);
// Missing keys keep the standard() values. Throws ConfigError.
SynthConfig synth_config_from_json(const nlohmann::json& j);

struct UserTruth {
  std::string user_id;
  std::string group;               // empty when no groups are configured
  std::vector<std::string> flags;  // names of rules that fired
  double selfie_rate = 0;
  double image_continuation = 0;
  std::array<double, kSelfieKinds> subcategory_weights{};
  double multi_face_rate = 0;

  bool has_flag(std::string_view rule) const;
  bool operator==(const UserTruth&) const = default;
};

struct ImageTruth {
  std::string image_id;
  std::string category;
  std::optional<std::string> subcategory;

  bool operator==(const ImageTruth&) const = default;
};

struct GroundTruth {
  std::vector<UserTruth> users;
  std::vector<ImageTruth> images;

  const UserTruth* find_user(std::string_view user_id) const;
  bool operator==(const GroundTruth&) const = default;
};

struct Generated {
  Dataset dataset;  // uncategorized
  GroundTruth truth;
};

Generated generate(const SynthConfig& config);

// Dataset with every image carrying its true category and subcategory.
Dataset with_true_categories(const Dataset& d, const GroundTruth& truth);

void save_ground_truth(const GroundTruth& truth, const std::filesystem::path& path);
GroundTruth load_ground_truth(const std::filesystem::path& path);

// (numerator, denominator); a zero denominator means undefined.
using Fraction = std::pair<std::int64_t, std::int64_t>;

struct OracleUser {
  std::string user_id;
  std::map<std::string, std::int64_t> occurrence;  // categories that occur
  std::map<std::string, Fraction> frequency;       // taxonomy categories and Selfie, over all occurrences
  std::map<std::string, Fraction> inertia;
  std::map<std::string, Fraction> singleness;
  std::vector<Fraction> f;  // taxonomy order, selfie images removed
  bool sparse = false;
  Fraction i{0, 0};
  Fraction s{0, 0};
  std::array<Fraction, 7> measures{};  // frequency, inertia, singleness, group, outdoor, holding, facemask
};

// Metrics recomputed by direct iteration over the raw records.
std::vector<OracleUser> oracle_metrics(const Dataset& d, const Taxonomy& taxonomy);

}  // namespace miner
