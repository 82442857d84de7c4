#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace miner {

// One posted image. `category` is filled by the cluster stage; selfie images
// additionally carry their `subcategory`.
struct ImageRecord {
  std::string image_id;
  std::string user_id;
  std::string moment_id;
  Eigen::VectorXd embedding;
  std::optional<int> face_count;
  std::optional<std::string> category;
  std::optional<std::string> subcategory;

  bool operator==(const ImageRecord& other) const;
};

// An ordered group of images posted together by one user.
struct Moment {
  std::string moment_id;
  std::string user_id;
  std::vector<std::string> image_ids;
  std::optional<std::string> timestamp;

  bool operator==(const Moment&) const = default;
};

// Immutable corpus. Construction never throws on invariant violations so that
// validate() can report them; load_dataset() rejects invalid files.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::size_t embedding_dim, std::vector<Moment> moments, std::vector<ImageRecord> images);

  std::size_t embedding_dim() const noexcept { return embedding_dim_; }
  // Sorted, unique user ids referenced by moments or images.
  const std::vector<std::string>& users() const noexcept { return users_; }
  const std::vector<Moment>& moments() const noexcept { return moments_; }
  const std::vector<ImageRecord>& images() const noexcept { return images_; }

  const ImageRecord* find_image(std::string_view image_id) const;
  const Moment* find_moment(std::string_view moment_id) const;

  // Same moments, replaced image records.
  Dataset with_images(std::vector<ImageRecord> images) const;

  bool operator==(const Dataset& other) const;

 private:
  std::size_t embedding_dim_ = 0;
  std::vector<std::string> users_;
  std::vector<Moment> moments_;
  std::vector<ImageRecord> images_;
  std::map<std::string, std::size_t, std::less<>> image_index_;
  std::map<std::string, std::size_t, std::less<>> moment_index_;
};

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;

  bool ok() const noexcept { return errors.empty(); }
};

// Reports every invariant violation, sorted by the offending id.
ValidationReport validate(const Dataset& d);

// Reads the JSONL corpus format. Throws MissingInput, ParseError (with line
// number) or SchemaError (dimension mismatch, dangling or duplicate ids).
Dataset load_dataset(const std::filesystem::path& path);
void save_dataset(const Dataset& d, const std::filesystem::path& path);

// Category sidecar: one {"kind":"assignment",...} line per categorized image.
void save_assignments(const Dataset& d, const std::filesystem::path& path);
Dataset load_assignments(const Dataset& d, const std::filesystem::path& path);

// Number of category occurrences (distinct categories per moment, summed over
// moments) for every user. Throws PreconditionError on uncategorized images.
std::map<std::string, std::int64_t> occurrence_totals(const Dataset& d);

// Removes users whose occurrence total is below `threshold`, together with
// their moments and images.
Dataset filter_users_by_min_occurrence(const Dataset& d, std::int64_t threshold = 50);

}  // namespace miner
