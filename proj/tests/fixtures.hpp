#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "miner/charmetrics.hpp"
#include "miner/corpus.hpp"
#include "miner/taxonomy.hpp"

namespace fixtures {

struct Img {
  std::string category;
  std::optional<std::string> subcategory = std::nullopt;
  std::optional<int> faces = std::nullopt;
};

// Builds categorized datasets from per-user moment lists; embeddings are
// zero unless given.
class Builder {
 public:
  explicit Builder(std::size_t dim = 2) : dim_(dim) {}

  Builder& moment(const std::string& user, const std::vector<Img>& images) {
    const std::size_t index = counts_[user]++;
    miner::Moment m;
    m.moment_id = user + "_m" + std::to_string(index);
    m.user_id = user;
    for (std::size_t i = 0; i < images.size(); ++i) {
      miner::ImageRecord r;
      r.image_id = m.moment_id + "_i" + std::to_string(i);
      r.user_id = user;
      r.moment_id = m.moment_id;
      r.embedding = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim_));
      r.face_count = images[i].faces;
      if (!images[i].category.empty()) r.category = images[i].category;
      r.subcategory = images[i].subcategory;
      m.image_ids.push_back(r.image_id);
      images_.push_back(std::move(r));
    }
    moments_.push_back(std::move(m));
    return *this;
  }

  miner::Dataset build() const { return miner::Dataset(dim_, moments_, images_); }

 private:
  std::size_t dim_;
  std::map<std::string, std::size_t> counts_;
  std::vector<miner::Moment> moments_;
  std::vector<miner::ImageRecord> images_;
};

inline miner::Taxonomy meal_flower() {
  miner::Taxonomy t;
  t.categories = {"Meal", "Flower"};
  return t;
}

// M1 = [selfie, meal], M2 = [meal, meal], M3 = [flower].
inline miner::Dataset u1() {
  return Builder()
      .moment("u1", {{"Selfie", "Indoor Ordinary Selfie", 1}, {"Meal"}})
      .moment("u1", {{"Meal"}, {"Meal"}})
      .moment("u1", {{"Flower"}})
      .build();
}

inline Img selfie(miner::SelfieKind kind, std::optional<int> faces = 1) {
  static const miner::Taxonomy tax;
  return {tax.selfie, tax.label(kind), faces};
}

inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("miner_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fixtures
