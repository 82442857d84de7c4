#pragma once

// User typing by NMF over F-features, high-level attribute scores, per-type
// attribute/selfie profiles, attribute rankings and attribute prediction from
// the seven selfie measures.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "miner/charmetrics.hpp"
#include "miner/learn.hpp"
#include "miner/nmf.hpp"
#include "miner/taxonomy.hpp"

namespace miner {

struct Attribute {
  std::string name;
  std::vector<std::string> categories;

  bool operator==(const Attribute&) const = default;
};

struct AttributeSchema {
  std::vector<Attribute> attributes;

  // Travel, Cosmetic, Children, Living Goods, WeChat, Food.
  static AttributeSchema standard();

  // Same attributes with categories absent from `taxonomy` removed.
  AttributeSchema restricted_to(const Taxonomy& taxonomy) const;
  // Throws ConfigError for unknown categories or a category listed twice.
  void validate(const Taxonomy& taxonomy) const;
  std::vector<std::string> names() const;
  std::size_t index_of(std::string_view name) const;

  bool operator==(const AttributeSchema&) const = default;
};

nlohmann::json to_json(const AttributeSchema& schema);
AttributeSchema attribute_schema_from_json(const nlohmann::json& j);

// Users x taxonomy categories matrix of F-features.
Eigen::MatrixXd frequency_matrix(const std::vector<UserProfile>& profiles);

// Per attribute, the sum of the user's frequencies over its categories.
Eigen::VectorXd attribute_values(const UserProfile& profile, const AttributeSchema& schema, const Taxonomy& taxonomy);

struct TypeAttributeProfile {
  Eigen::MatrixXd mean;        // types x attributes
  Eigen::MatrixXd normalized;  // per-attribute min-max over nonempty types; NaN where undefined
  std::vector<std::size_t> members;
  std::vector<bool> attribute_defined;  // false when all type means coincide
};

// Throws UndefinedResult when fewer than two types have members.
TypeAttributeProfile type_attribute_profile(const std::vector<Eigen::Index>& types, Eigen::Index type_count,
                                            const std::vector<UserProfile>& profiles,
                                            const AttributeSchema& schema, const Taxonomy& taxonomy);

struct TypeSelfieProfile {
  Eigen::MatrixXd mean;            // types x 7, NaN where no member has the measure
  Eigen::MatrixXi defined_count;   // members contributing to each mean
  std::vector<std::size_t> members;
};

TypeSelfieProfile type_selfie_profile(const std::vector<Eigen::Index>& types, Eigen::Index type_count,
                                      const std::vector<UserProfile>& profiles);

struct AttributeRanking {
  SelfieMeasure measure = SelfieMeasure::Frequency;
  std::vector<std::pair<std::string, double>> ranked;  // (attribute, Pearson r), r descending
  std::vector<std::string> excluded;                    // constant across the compared types
};

// Pearson correlation across types between each normalized attribute and the
// type-mean selfie measure. Types lacking the measure are skipped; at least
// three must remain. Throws UndefinedResult when the measure is constant.
AttributeRanking attribute_rank(const TypeAttributeProfile& attributes, const TypeSelfieProfile& selfie,
                                SelfieMeasure measure, const AttributeSchema& schema);

struct AttributePrediction {
  std::string attribute;
  std::size_t excluded_users = 0;  // dropped for an undefined selfie measure
  Labeled labels;
  CvResult cv;
};

// Quantile labels on the attribute value, the seven selfie measures as
// features, k-fold CV of the linear SVM.
AttributePrediction predict_attribute(const std::vector<UserProfile>& profiles, std::size_t attribute,
                                      const AttributeSchema& schema, const Taxonomy& taxonomy,
                                      const LearnOptions& options = {});

}  // namespace miner
