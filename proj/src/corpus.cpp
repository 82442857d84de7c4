#include "miner/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <utility>

#include <nlohmann/json.hpp>

#include "miner/error.hpp"

namespace miner {

using nlohmann::json;
using nlohmann::ordered_json;

bool ImageRecord::operator==(const ImageRecord& other) const {
  return image_id == other.image_id && user_id == other.user_id && moment_id == other.moment_id &&
         embedding.size() == other.embedding.size() &&
         (embedding.array() == other.embedding.array()).all() && face_count == other.face_count &&
         category == other.category && subcategory == other.subcategory;
}

Dataset::Dataset(std::size_t embedding_dim, std::vector<Moment> moments, std::vector<ImageRecord> images)
    : embedding_dim_(embedding_dim), moments_(std::move(moments)), images_(std::move(images)) {
  std::set<std::string> users;
  for (std::size_t i = 0; i < moments_.size(); ++i) {
    moment_index_.emplace(moments_[i].moment_id, i);
    users.insert(moments_[i].user_id);
  }
  for (std::size_t i = 0; i < images_.size(); ++i) {
    image_index_.emplace(images_[i].image_id, i);
    users.insert(images_[i].user_id);
  }
  users_.assign(users.begin(), users.end());
}

const ImageRecord* Dataset::find_image(std::string_view image_id) const {
  const auto it = image_index_.find(image_id);
  return it == image_index_.end() ? nullptr : &images_[it->second];
}

const Moment* Dataset::find_moment(std::string_view moment_id) const {
  const auto it = moment_index_.find(moment_id);
  return it == moment_index_.end() ? nullptr : &moments_[it->second];
}

Dataset Dataset::with_images(std::vector<ImageRecord> images) const {
  return Dataset(embedding_dim_, moments_, std::move(images));
}

bool Dataset::operator==(const Dataset& other) const {
  return embedding_dim_ == other.embedding_dim_ && moments_ == other.moments_ && images_ == other.images_;
}

ValidationReport validate(const Dataset& d) {
  std::vector<std::pair<std::string, std::string>> errors;
  std::vector<std::pair<std::string, std::string>> warnings;

  if (d.embedding_dim() == 0) errors.emplace_back("", "embedding_dim must be positive");

  std::map<std::string, int> moment_seen;
  std::map<std::string, int> owner_count;  // image id -> number of moments listing it
  for (const auto& m : d.moments()) {
    if (++moment_seen[m.moment_id] == 2) errors.emplace_back(m.moment_id, "duplicate moment id " + m.moment_id);
    if (m.image_ids.empty()) errors.emplace_back(m.moment_id, "moment " + m.moment_id + " has no images");
    if (m.image_ids.size() > 9) {
      warnings.emplace_back(m.moment_id, "moment " + m.moment_id + " has " + std::to_string(m.image_ids.size()) +
                                             " images (more than 9)");
    }
    for (const auto& id : m.image_ids) {
      ++owner_count[id];
      const ImageRecord* img = d.find_image(id);
      if (img == nullptr) {
        errors.emplace_back(m.moment_id, "moment " + m.moment_id + " references missing image " + id);
        continue;
      }
      if (img->user_id != m.user_id) {
        errors.emplace_back(id, "image " + id + " belongs to user " + img->user_id + " but moment " + m.moment_id +
                                    " belongs to user " + m.user_id);
      }
      if (img->moment_id != m.moment_id) {
        errors.emplace_back(id, "image " + id + " declares moment " + img->moment_id + " but is listed by moment " +
                                    m.moment_id);
      }
    }
  }

  std::map<std::string, int> image_seen;
  for (const auto& img : d.images()) {
    if (++image_seen[img.image_id] == 2) errors.emplace_back(img.image_id, "duplicate image id " + img.image_id);
    if (static_cast<std::size_t>(img.embedding.size()) != d.embedding_dim()) {
      errors.emplace_back(img.image_id, "image " + img.image_id + " has embedding length " +
                                            std::to_string(img.embedding.size()) + ", expected " +
                                            std::to_string(d.embedding_dim()));
    }
    if (img.face_count && *img.face_count < 0) {
      errors.emplace_back(img.image_id, "image " + img.image_id + " has negative face_count");
    }
    if (!img.face_count) warnings.emplace_back(img.image_id, "image " + img.image_id + " has no face_count");
    if (d.find_moment(img.moment_id) == nullptr) {
      errors.emplace_back(img.image_id, "image " + img.image_id + " references missing moment " + img.moment_id);
    }
    const auto owners = owner_count.find(img.image_id);
    const int n = owners == owner_count.end() ? 0 : owners->second;
    if (n != 1) {
      errors.emplace_back(img.image_id, "image " + img.image_id + " is listed by " + std::to_string(n) +
                                            " moments (expected exactly 1)");
    }
  }

  auto finish = [](std::vector<std::pair<std::string, std::string>>& items) {
    std::sort(items.begin(), items.end());
    std::vector<std::string> out;
    out.reserve(items.size());
    for (auto& [id, msg] : items) out.push_back(std::move(msg));
    return out;
  };
  return ValidationReport{finish(errors), finish(warnings)};
}

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingInput("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot write " + path.string());
  return out;
}

std::string where(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line) + ": ";
}

}  // namespace

Dataset load_dataset(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::optional<std::size_t> dim;
  std::vector<Moment> moments;
  std::vector<ImageRecord> images;

  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    json rec;
    try {
      rec = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(where(path, line) + "malformed JSON: " + e.what());
    }
    try {
      const auto kind = rec.at("kind").get<std::string>();
      if (!dim) {
        if (kind != "header") throw ParseError(where(path, line) + "first record must be the header");
        const auto value = rec.at("embedding_dim").get<long long>();
        if (value <= 0) throw SchemaError(where(path, line) + "embedding_dim must be positive");
        dim = static_cast<std::size_t>(value);
      } else if (kind == "moment") {
        Moment m;
        m.moment_id = rec.at("moment_id").get<std::string>();
        m.user_id = rec.at("user_id").get<std::string>();
        m.image_ids = rec.at("image_ids").get<std::vector<std::string>>();
        if (rec.contains("timestamp") && !rec["timestamp"].is_null()) {
          m.timestamp = rec["timestamp"].get<std::string>();
        }
        moments.push_back(std::move(m));
      } else if (kind == "image") {
        ImageRecord img;
        img.image_id = rec.at("image_id").get<std::string>();
        img.user_id = rec.at("user_id").get<std::string>();
        img.moment_id = rec.at("moment_id").get<std::string>();
        const auto values = rec.at("embedding").get<std::vector<double>>();
        if (values.size() != *dim) {
          throw SchemaError(where(path, line) + "image " + img.image_id + " has embedding length " +
                            std::to_string(values.size()) + ", header declares " + std::to_string(*dim));
        }
        img.embedding = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
        if (rec.contains("face_count") && !rec["face_count"].is_null()) {
          img.face_count = rec["face_count"].get<int>();
        }
        images.push_back(std::move(img));
      } else if (kind == "header") {
        throw ParseError(where(path, line) + "duplicate header");
      } else {
        throw ParseError(where(path, line) + "unknown record kind '" + kind + "'");
      }
    } catch (const json::exception& e) {
      throw ParseError(where(path, line) + e.what());
    }
  }
  if (!dim) throw ParseError(path.string() + ": missing header record");

  Dataset d(*dim, std::move(moments), std::move(images));
  const auto report = validate(d);
  if (!report.ok()) {
    std::string message = path.string() + ": " + std::to_string(report.errors.size()) + " invariant violation(s)";
    const std::size_t shown = std::min<std::size_t>(report.errors.size(), 10);
    for (std::size_t i = 0; i < shown; ++i) message += "; " + report.errors[i];
    throw SchemaError(message);
  }
  return d;
}

void save_dataset(const Dataset& d, const std::filesystem::path& path) {
  auto out = open_output(path);
  ordered_json header;
  header["kind"] = "header";
  header["embedding_dim"] = d.embedding_dim();
  out << header.dump() << '\n';
  for (const auto& m : d.moments()) {
    ordered_json rec;
    rec["kind"] = "moment";
    rec["moment_id"] = m.moment_id;
    rec["user_id"] = m.user_id;
    rec["image_ids"] = m.image_ids;
    if (m.timestamp) rec["timestamp"] = *m.timestamp;
    out << rec.dump() << '\n';
  }
  for (const auto& img : d.images()) {
    ordered_json rec;
    rec["kind"] = "image";
    rec["image_id"] = img.image_id;
    rec["user_id"] = img.user_id;
    rec["moment_id"] = img.moment_id;
    rec["embedding"] = std::vector<double>(img.embedding.data(), img.embedding.data() + img.embedding.size());
    if (img.face_count) rec["face_count"] = *img.face_count;
    out << rec.dump() << '\n';
  }
}

void save_assignments(const Dataset& d, const std::filesystem::path& path) {
  auto out = open_output(path);
  for (const auto& img : d.images()) {
    if (!img.category) continue;
    ordered_json rec;
    rec["kind"] = "assignment";
    rec["image_id"] = img.image_id;
    rec["category"] = *img.category;
    if (img.subcategory) rec["subcategory"] = *img.subcategory;
    out << rec.dump() << '\n';
  }
}

Dataset load_assignments(const Dataset& d, const std::filesystem::path& path) {
  auto in = open_input(path);
  std::vector<ImageRecord> images = d.images();
  std::map<std::string, std::size_t, std::less<>> index;
  for (std::size_t i = 0; i < images.size(); ++i) index.emplace(images[i].image_id, i);

  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto rec = json::parse(text);
      if (rec.at("kind").get<std::string>() != "assignment") {
        throw ParseError(where(path, line) + "expected an assignment record");
      }
      const auto id = rec.at("image_id").get<std::string>();
      const auto it = index.find(id);
      if (it == index.end()) throw SchemaError(where(path, line) + "assignment for unknown image " + id);
      auto& img = images[it->second];
      img.category = rec.at("category").get<std::string>();
      img.subcategory.reset();
      if (rec.contains("subcategory") && !rec["subcategory"].is_null()) {
        img.subcategory = rec["subcategory"].get<std::string>();
      }
    } catch (const json::exception& e) {
      throw ParseError(where(path, line) + e.what());
    }
  }
  return d.with_images(std::move(images));
}

std::map<std::string, std::int64_t> occurrence_totals(const Dataset& d) {
  std::map<std::string, std::int64_t> totals;
  for (const auto& user : d.users()) totals[user] = 0;
  for (const auto& m : d.moments()) {
    std::set<std::string_view> present;
    for (const auto& id : m.image_ids) {
      const ImageRecord* img = d.find_image(id);
      if (img == nullptr) throw PreconditionError("moment " + m.moment_id + " references missing image " + id);
      if (!img->category) throw PreconditionError("image " + id + " is not categorized");
      present.insert(*img->category);
    }
    totals[m.user_id] += static_cast<std::int64_t>(present.size());
  }
  return totals;
}

Dataset filter_users_by_min_occurrence(const Dataset& d, std::int64_t threshold) {
  for (const auto& img : d.images()) {
    if (!img.category) throw PreconditionError("image " + img.image_id + " is not categorized");
  }
  const auto totals = occurrence_totals(d);
  auto keep = [&](const std::string& user) {
    const auto it = totals.find(user);
    return it != totals.end() && it->second >= threshold;
  };
  std::vector<Moment> moments;
  for (const auto& m : d.moments()) {
    if (keep(m.user_id)) moments.push_back(m);
  }
  std::vector<ImageRecord> images;
  for (const auto& img : d.images()) {
    if (keep(img.user_id)) images.push_back(img);
  }
  return Dataset(d.embedding_dim(), std::move(moments), std::move(images));
}

}  // namespace miner
