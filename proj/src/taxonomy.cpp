#include "miner/taxonomy.hpp"

#include <algorithm>
#include <set>

#include "miner/error.hpp"

namespace miner {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Argument: return "argument_error";
    case ErrorKind::Parse: return "parse_error";
    case ErrorKind::Schema: return "schema_error";
    case ErrorKind::Precondition: return "precondition_error";
    case ErrorKind::UndefinedResult: return "undefined_result";
    case ErrorKind::Config: return "config_error";
    case ErrorKind::MissingInput: return "missing_input";
  }
  return "error";
}

Taxonomy Taxonomy::wechat() {
  Taxonomy t;
  t.categories = {
      "Pet", "Bed", "Big Word Ad", "Small Group Photo", "Poster", "Chart", "Pink Goods", "Child",
      "Flower", "Cosmetic", "Cosmetics Ad", "Activity", "Large Group Photo", "Building",
      "TV & Poster Screenshot", "Toy", "Snack", "Landscape Photo", "Tourist Photo",
      "Sunglass & Handbag", "Photoshop Photo", "Star", "Beauty Ad", "Cosmetic Tips", "Display Rack",
      "Hand & Leg", "Wallet & Accessory", "Fruit & Cake", "WeChat Moment", "Motto",
      "WeChat Expression", "QR-code", "WeChat Wallet", "Chat Screenshot", "Other Ad", "Comic",
      "Essay", "Other Goods", "Shoes", "Necklace & Bracelet", "Clothes", "Baby", "Full-Length Photo",
      "Special Effects Photo", "Very Long Picture", "Meal"};
  return t;
}

Taxonomy Taxonomy::synthetic() {
  Taxonomy t;
  // Two members of each high-level attribute.
  t.categories = {"Tourist Photo", "Building",       "Cosmetic",        "Cosmetics Ad",
                  "Child",         "Baby",           "Clothes",         "Shoes",
                  "Chat Screenshot", "WeChat Moment", "Meal",           "Snack"};
  return t;
}

std::optional<std::size_t> Taxonomy::index_of(std::string_view label) const {
  const auto it = std::find(categories.begin(), categories.end(), label);
  if (it == categories.end()) return std::nullopt;
  return static_cast<std::size_t>(it - categories.begin());
}

std::optional<SelfieKind> Taxonomy::selfie_kind(std::string_view subcategory) const {
  for (std::size_t i = 0; i < kSelfieKinds; ++i) {
    if (selfie_subcategories[i] == subcategory) return static_cast<SelfieKind>(i);
  }
  return std::nullopt;
}

void Taxonomy::validate() const {
  std::set<std::string> seen;
  auto add = [&](const std::string& label) {
    if (label.empty()) throw ConfigError("taxonomy: empty category label");
    if (!seen.insert(label).second) throw ConfigError("taxonomy: duplicate label '" + label + "'");
  };
  if (categories.empty()) throw ConfigError("taxonomy: no non-selfie categories");
  for (const auto& c : categories) add(c);
  add(selfie);
  for (const auto& s : selfie_subcategories) add(s);
}

nlohmann::json to_json(const Taxonomy& taxonomy) {
  return {{"categories", taxonomy.categories},
          {"selfie", taxonomy.selfie},
          {"selfie_subcategories", taxonomy.selfie_subcategories}};
}

Taxonomy taxonomy_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (name == "wechat") return Taxonomy::wechat();
    if (name == "synthetic") return Taxonomy::synthetic();
    throw ConfigError("unknown taxonomy preset '" + name + "'");
  }
  if (!j.is_object()) throw ConfigError("taxonomy must be an object or a preset name");
  Taxonomy t;
  try {
    t.categories = j.at("categories").get<std::vector<std::string>>();
    if (j.contains("selfie")) t.selfie = j.at("selfie").get<std::string>();
    if (j.contains("selfie_subcategories")) {
      const auto subs = j.at("selfie_subcategories").get<std::vector<std::string>>();
      if (subs.size() != kSelfieKinds) throw ConfigError("taxonomy: expected 4 selfie subcategories");
      std::copy(subs.begin(), subs.end(), t.selfie_subcategories.begin());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("taxonomy: ") + e.what());
  }
  t.validate();
  return t;
}

}  // namespace miner
