#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "miner/corpus.hpp"
#include "miner/kmeans.hpp"
#include "miner/taxonomy.hpp"

namespace miner {

// Human-supplied cluster index -> label mapping.
using LabelMap = std::map<Eigen::Index, std::string>;

// Merged k-means result: centroids kept for nearest-centroid assignment and
// the label of every raw cluster.
struct CategoryModel {
  Eigen::MatrixXd centroids;            // k x D
  std::vector<std::string> merge_map;   // label per cluster index

  Eigen::Index k() const noexcept { return centroids.rows(); }
  // Sorted, unique labels in use.
  std::vector<std::string> labels() const;
};

// Embedding rows of the given images (all images when `image_ids` is empty).
Eigen::MatrixXd embedding_matrix(const Dataset& d, const std::vector<std::string>& image_ids = {});

// Throws ConfigError naming the first cluster index missing from the map.
CategoryModel apply_merge_map(const Clustering<double>& clustering, const LabelMap& merge_map);

// Member counts per merged label for the clustering's own points.
std::map<std::string, std::int64_t> label_counts(const Clustering<double>& clustering, const CategoryModel& model);

// Every merged label must be a taxonomy category or the Selfie label.
void check_labels(const CategoryModel& model, const Taxonomy& taxonomy);

// Labels every image with the merged category of its nearest centroid (ties
// toward the lower cluster index). Subcategories are cleared.
Dataset assign_categories(const Dataset& d, const CategoryModel& model);

struct SelfieSubclusters {
  Clustering<double> clustering;
  std::vector<std::string> image_ids;    // selfie images, dataset order
  std::vector<std::string> subcategory;  // named subcategory per image

  bool reseeded() const noexcept { return clustering.reseeded_clusters > 0; }
};

// k-means over the Selfie images only; `names` labels each of the k clusters
// with one of the taxonomy's selfie subcategories.
SelfieSubclusters subcluster_selfies(const Dataset& d, const Taxonomy& taxonomy, const LabelMap& names,
                                     std::uint64_t seed, Eigen::Index k = 4, int restarts = 1);

Dataset apply_subcategories(const Dataset& d, const SelfieSubclusters& subclusters);

enum class FaceTag { OneFace, MultiFace, Excluded };

const char* to_string(FaceTag tag) noexcept;
// 1 -> one-face, >= 2 -> multi-face, absent or 0 -> excluded.
FaceTag face_tag(const std::optional<int>& face_count) noexcept;

// Face-count split of the Selfie images, keyed by image id.
std::map<std::string, FaceTag> split_by_face_count(const Dataset& d, const Taxonomy& taxonomy);

// {"0": "Meal", "1": "Selfie", ...}; a wrapping {"merge_map": {...}} object
// is also accepted.
LabelMap label_map_from_json(const nlohmann::json& j);
nlohmann::json to_json(const LabelMap& map);
LabelMap load_label_map(const std::filesystem::path& path);

nlohmann::json to_json(const CategoryModel& model);
CategoryModel category_model_from_json(const nlohmann::json& j);

}  // namespace miner
