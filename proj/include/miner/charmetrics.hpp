#pragma once

// User characterization from categorized moments: category occurrence,
// frequency, inertia and singleness, the F/I/S user features and the seven
// selfie-posting measures.
//
// Every metric is an exact integer ratio; a zero denominator is the
// explicit "undefined" value and is never folded into 0.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "miner/cluster.hpp"
#include "miner/corpus.hpp"
#include "miner/taxonomy.hpp"

namespace miner {

struct Ratio {
  std::int64_t num = 0;
  std::int64_t den = 0;

  bool defined() const noexcept { return den != 0; }
  // Throws UndefinedResult when den == 0.
  double value() const;
  std::optional<double> to_optional() const;

  bool operator==(const Ratio&) const = default;
};

// Equal as rational numbers (both undefined also compares equal).
bool same_value(const Ratio& a, const Ratio& b) noexcept;

struct PostedImage {
  std::string category;
  std::optional<SelfieKind> subcategory;
  FaceTag face = FaceTag::Excluded;
};

using PostedMoment = std::vector<PostedImage>;

// One user's moments in dataset order, images in posting order.
struct UserPosts {
  std::string user_id;
  std::vector<PostedMoment> moments;
};

// Groups categorized images by user (sorted by user id). Throws
// PreconditionError on uncategorized images or labels outside the taxonomy.
std::vector<UserPosts> user_posts(const Dataset& d, const Taxonomy& taxonomy);

// Categories present in the moment, each counted once.
std::set<std::string> occurrences(const PostedMoment& moment);

// Occurrence count per category over all of a user's moments.
std::map<std::string, std::int64_t> occurrence_counts(const UserPosts& user);

// Frequencies over the taxonomy categories (followed by Selfie when
// `include_selfie`). Without Selfie, selfie images are removed first.
// Throws UndefinedResult when no occurrence survives.
std::vector<Ratio> category_frequency(const UserPosts& user, const Taxonomy& taxonomy, bool include_selfie);

// Images of `category` per occurrence of it. Throws UndefinedResult when the
// category never occurs.
Ratio category_inertia(const UserPosts& user, std::string_view category);

// Moments holding only `category` per moment holding it. Throws
// UndefinedResult when the category never occurs.
Ratio category_singleness(const UserPosts& user, std::string_view category);

struct FFeature {
  std::vector<Ratio> freq;  // one per taxonomy category
  bool sparse = false;      // no non-selfie occurrence; freq is all zero
};

FFeature f_feature(const UserPosts& user, const Taxonomy& taxonomy);
// Non-selfie images per non-selfie occurrence.
Ratio i_feature(const UserPosts& user, const Taxonomy& taxonomy);
// Single-category fraction of the selfie-free moments.
Ratio s_feature(const UserPosts& user, const Taxonomy& taxonomy);

enum class SelfieMeasure : std::size_t {
  Frequency = 0,
  Inertia,
  Singleness,
  GroupTendency,
  OutdoorTendency,
  HoldingTendency,
  FaceMaskTendency,
};

inline constexpr std::size_t kSelfieMeasures = 7;

const char* to_string(SelfieMeasure measure) noexcept;
std::optional<SelfieMeasure> selfie_measure_from_string(std::string_view name) noexcept;

struct SelfieCounts {
  std::int64_t occurrences = 0;        // moments with a selfie
  std::int64_t images = 0;
  std::int64_t alone = 0;              // moments with only selfies
  std::int64_t all_occurrences = 0;    // occurrences of every category, Selfie included
  std::array<std::int64_t, kSelfieKinds> subcategory{};  // moment-level occurrences
  std::int64_t one_face = 0;
  std::int64_t multi_face = 0;

  bool operator==(const SelfieCounts&) const = default;
};

struct SelfieMeasures {
  std::array<Ratio, kSelfieMeasures> values;
  SelfieCounts counts;

  const Ratio& operator[](SelfieMeasure m) const { return values[static_cast<std::size_t>(m)]; }
};

SelfieMeasures selfie_measures(const UserPosts& user, const Taxonomy& taxonomy);

struct ExactProfile {
  std::string user_id;
  FFeature f;
  Ratio inertia;     // undefined for all-selfie users
  Ratio singleness;  // undefined when every moment holds a selfie
  SelfieMeasures selfie;
};

ExactProfile exact_profile(const UserPosts& user, const Taxonomy& taxonomy);

// Real-valued profile used by the learning and factorization stages.
struct UserProfile {
  std::string user_id;
  Eigen::VectorXd freq;  // F-feature, taxonomy order
  bool sparse = false;
  std::optional<double> inertia;
  std::optional<double> singleness;
  std::array<std::optional<double>, kSelfieMeasures> selfie{};
  std::int64_t total_occurrences = 0;
  std::int64_t selfie_occurrences = 0;
  std::array<std::int64_t, kSelfieKinds> subcategory_occurrences{};
  std::int64_t one_face_occurrences = 0;
  std::int64_t multi_face_occurrences = 0;

  const std::optional<double>& measure(SelfieMeasure m) const { return selfie[static_cast<std::size_t>(m)]; }
  // Frequencies over taxonomy categories plus Selfie (last), all moments.
  Eigen::VectorXd full_frequency() const;

  bool operator==(const UserProfile& other) const;
};

UserProfile to_profile(const ExactProfile& exact);

// Profiles of every user in the dataset, sorted by user id.
std::vector<UserProfile> characterize(const Dataset& d, const Taxonomy& taxonomy);

}  // namespace miner
