#include "miner/cluster.hpp"

#include <fstream>
#include <set>

#include "miner/error.hpp"

namespace miner {

std::vector<std::string> CategoryModel::labels() const {
  std::set<std::string> unique(merge_map.begin(), merge_map.end());
  return {unique.begin(), unique.end()};
}

Eigen::MatrixXd embedding_matrix(const Dataset& d, const std::vector<std::string>& image_ids) {
  const auto dim = static_cast<Eigen::Index>(d.embedding_dim());
  if (image_ids.empty()) {
    Eigen::MatrixXd x(static_cast<Eigen::Index>(d.images().size()), dim);
    for (std::size_t i = 0; i < d.images().size(); ++i) {
      const auto& e = d.images()[i].embedding;
      if (e.size() != dim) throw SchemaError("image " + d.images()[i].image_id + " has the wrong embedding length");
      x.row(static_cast<Eigen::Index>(i)) = e.transpose();
    }
    return x;
  }
  Eigen::MatrixXd x(static_cast<Eigen::Index>(image_ids.size()), dim);
  for (std::size_t i = 0; i < image_ids.size(); ++i) {
    const ImageRecord* img = d.find_image(image_ids[i]);
    if (img == nullptr) throw ArgumentError("unknown image " + image_ids[i]);
    if (img->embedding.size() != dim) throw SchemaError("image " + img->image_id + " has the wrong embedding length");
    x.row(static_cast<Eigen::Index>(i)) = img->embedding.transpose();
  }
  return x;
}

CategoryModel apply_merge_map(const Clustering<double>& clustering, const LabelMap& merge_map) {
  CategoryModel model;
  model.centroids = clustering.centroids;
  model.merge_map.reserve(static_cast<std::size_t>(clustering.k));
  for (Eigen::Index j = 0; j < clustering.k; ++j) {
    const auto it = merge_map.find(j);
    if (it == merge_map.end()) throw ConfigError("merge map has no label for cluster " + std::to_string(j));
    if (it->second.empty()) throw ConfigError("merge map label for cluster " + std::to_string(j) + " is empty");
    model.merge_map.push_back(it->second);
  }
  return model;
}

std::map<std::string, std::int64_t> label_counts(const Clustering<double>& clustering, const CategoryModel& model) {
  std::map<std::string, std::int64_t> counts;
  for (const auto& label : model.labels()) counts[label] = 0;
  for (const auto j : clustering.assignment) ++counts[model.merge_map.at(static_cast<std::size_t>(j))];
  return counts;
}

void check_labels(const CategoryModel& model, const Taxonomy& taxonomy) {
  for (std::size_t j = 0; j < model.merge_map.size(); ++j) {
    if (!taxonomy.contains(model.merge_map[j])) {
      throw ConfigError("merge map label '" + model.merge_map[j] + "' for cluster " + std::to_string(j) +
                        " is not in the taxonomy");
    }
  }
}

Dataset assign_categories(const Dataset& d, const CategoryModel& model) {
  if (static_cast<std::size_t>(model.centroids.cols()) != d.embedding_dim()) {
    throw SchemaError("category model dimension " + std::to_string(model.centroids.cols()) +
                      " does not match dataset embedding_dim " + std::to_string(d.embedding_dim()));
  }
  if (model.k() == 0 || static_cast<std::size_t>(model.k()) != model.merge_map.size()) {
    throw ConfigError("category model needs one label per centroid");
  }
  std::vector<ImageRecord> images = d.images();
  parallel_for(images.size(), [&](std::size_t i) {
    auto& img = images[i];
    if (static_cast<std::size_t>(img.embedding.size()) != d.embedding_dim()) {
      throw SchemaError("image " + img.image_id + " has the wrong embedding length");
    }
    const auto [j, dist] = nearest_centroid(img.embedding, model.centroids);
    (void)dist;
    img.category = model.merge_map[static_cast<std::size_t>(j)];
    img.subcategory.reset();
  });
  return d.with_images(std::move(images));
}

SelfieSubclusters subcluster_selfies(const Dataset& d, const Taxonomy& taxonomy, const LabelMap& names,
                                     std::uint64_t seed, Eigen::Index k, int restarts) {
  for (Eigen::Index j = 0; j < k; ++j) {
    const auto it = names.find(j);
    if (it == names.end()) throw ConfigError("subcategory names have no label for cluster " + std::to_string(j));
    if (!taxonomy.selfie_kind(it->second)) {
      throw ConfigError("'" + it->second + "' is not a selfie subcategory of the taxonomy");
    }
  }
  SelfieSubclusters out;
  for (const auto& img : d.images()) {
    if (!img.category) throw PreconditionError("image " + img.image_id + " is not categorized");
    if (taxonomy.is_selfie(*img.category)) out.image_ids.push_back(img.image_id);
  }
  if (static_cast<Eigen::Index>(out.image_ids.size()) < k) {
    throw ArgumentError("subcluster_selfies: " + std::to_string(out.image_ids.size()) + " selfie images, need at least " +
                        std::to_string(k));
  }
  const Eigen::MatrixXd x = embedding_matrix(d, out.image_ids);
  out.clustering = kmeans_best_of(x, k, seed, std::max(1, restarts));
  out.subcategory.reserve(out.image_ids.size());
  for (const auto j : out.clustering.assignment) out.subcategory.push_back(names.at(j));
  return out;
}

Dataset apply_subcategories(const Dataset& d, const SelfieSubclusters& subclusters) {
  std::map<std::string_view, const std::string*> lookup;
  for (std::size_t i = 0; i < subclusters.image_ids.size(); ++i) {
    lookup.emplace(subclusters.image_ids[i], &subclusters.subcategory[i]);
  }
  std::vector<ImageRecord> images = d.images();
  for (auto& img : images) {
    const auto it = lookup.find(img.image_id);
    if (it != lookup.end()) img.subcategory = *it->second;
  }
  return d.with_images(std::move(images));
}

const char* to_string(FaceTag tag) noexcept {
  switch (tag) {
    case FaceTag::OneFace: return "one-face";
    case FaceTag::MultiFace: return "multi-face";
    case FaceTag::Excluded: return "excluded";
  }
  return "excluded";
}

FaceTag face_tag(const std::optional<int>& face_count) noexcept {
  if (!face_count || *face_count <= 0) return FaceTag::Excluded;
  return *face_count == 1 ? FaceTag::OneFace : FaceTag::MultiFace;
}

std::map<std::string, FaceTag> split_by_face_count(const Dataset& d, const Taxonomy& taxonomy) {
  std::map<std::string, FaceTag> tags;
  for (const auto& img : d.images()) {
    if (img.category && taxonomy.is_selfie(*img.category)) tags.emplace(img.image_id, face_tag(img.face_count));
  }
  return tags;
}

LabelMap label_map_from_json(const nlohmann::json& j) {
  const nlohmann::json& body = (j.is_object() && j.contains("merge_map")) ? j.at("merge_map") : j;
  if (!body.is_object()) throw ConfigError("label map must be a JSON object keyed by cluster index");
  LabelMap map;
  for (const auto& [key, value] : body.items()) {
    Eigen::Index index = 0;
    try {
      std::size_t used = 0;
      index = static_cast<Eigen::Index>(std::stoll(key, &used));
      if (used != key.size() || index < 0) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw ConfigError("label map key '" + key + "' is not a cluster index");
    }
    if (!value.is_string()) throw ConfigError("label map value for cluster " + key + " must be a string");
    map[index] = value.get<std::string>();
  }
  return map;
}

nlohmann::json to_json(const LabelMap& map) {
  nlohmann::ordered_json body = nlohmann::ordered_json::object();
  for (const auto& [index, label] : map) body[std::to_string(index)] = label;
  return nlohmann::json::parse(body.dump());
}

LabelMap load_label_map(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingInput("cannot open " + path.string());
  try {
    return label_map_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

nlohmann::json to_json(const CategoryModel& model) {
  nlohmann::json centroids = nlohmann::json::array();
  for (Eigen::Index j = 0; j < model.centroids.rows(); ++j) {
    std::vector<double> row(static_cast<std::size_t>(model.centroids.cols()));
    for (Eigen::Index c = 0; c < model.centroids.cols(); ++c) row[static_cast<std::size_t>(c)] = model.centroids(j, c);
    centroids.push_back(row);
  }
  return {{"merge_map", model.merge_map}, {"centroids", centroids}};
}

CategoryModel category_model_from_json(const nlohmann::json& j) {
  CategoryModel model;
  try {
    model.merge_map = j.at("merge_map").get<std::vector<std::string>>();
    const auto rows = j.at("centroids").get<std::vector<std::vector<double>>>();
    if (rows.size() != model.merge_map.size()) throw ConfigError("category model: centroid/label count mismatch");
    const auto dim = rows.empty() ? 0 : rows.front().size();
    model.centroids.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != dim) throw ConfigError("category model: ragged centroid rows");
      for (std::size_t c = 0; c < dim; ++c) {
        model.centroids(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("category model: ") + e.what());
  }
  return model;
}

}  // namespace miner
