#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace miner {

// The four selfie subcategories, in the fixed order used by every
// per-subcategory array in the library.
enum class SelfieKind : std::size_t { Indoor = 0, Outdoor = 1, Holding = 2, FaceMask = 3 };

inline constexpr std::size_t kSelfieKinds = 4;

// Category vocabulary: the non-selfie categories (the F-feature axes, in
// order) plus the Selfie super-category and its four subcategories.
struct Taxonomy {
  std::vector<std::string> categories;
  std::string selfie = "Selfie";
  std::array<std::string, kSelfieKinds> selfie_subcategories = {
      "Indoor Ordinary Selfie", "Outdoor Selfie", "Holding Something Selfie", "Face Mask Selfie"};

  // 46 non-selfie categories of the WeChat Moment image study.
  static Taxonomy wechat();
  // Reduced 12-category vocabulary used by the synthetic generator.
  static Taxonomy synthetic();

  std::size_t size() const noexcept { return categories.size(); }
  std::optional<std::size_t> index_of(std::string_view label) const;
  bool is_selfie(std::string_view label) const noexcept { return label == selfie; }
  bool contains(std::string_view label) const { return is_selfie(label) || index_of(label).has_value(); }
  std::optional<SelfieKind> selfie_kind(std::string_view subcategory) const;
  const std::string& label(SelfieKind kind) const { return selfie_subcategories[static_cast<std::size_t>(kind)]; }

  // Throws ConfigError on duplicate or empty labels.
  void validate() const;

  bool operator==(const Taxonomy&) const = default;
};

nlohmann::json to_json(const Taxonomy& taxonomy);
Taxonomy taxonomy_from_json(const nlohmann::json& j);

}  // namespace miner
