#include "miner/factorize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "miner/error.hpp"
#include "miner/stats.hpp"

namespace miner {

AttributeSchema AttributeSchema::standard() {
  AttributeSchema s;
  s.attributes = {
      {"Travel", {"Landscape Photo", "Tourist Photo", "Building"}},
      {"Cosmetic", {"Cosmetic", "Cosmetics Ad", "Cosmetic Tips"}},
      {"Children", {"Child", "Baby"}},
      {"Living Goods", {"Shoes", "Clothes", "Sunglass & Handbag", "Necklace & Bracelet"}},
      {"WeChat",
       {"WeChat Moment", "Motto", "WeChat Expression", "QR-code", "WeChat Wallet", "Chat Screenshot", "Other Ad",
        "Comic", "Essay"}},
      {"Food", {"Snack", "Fruit & Cake", "Meal"}},
  };
  return s;
}

AttributeSchema AttributeSchema::restricted_to(const Taxonomy& taxonomy) const {
  AttributeSchema out;
  for (const auto& a : attributes) {
    Attribute kept{a.name, {}};
    for (const auto& c : a.categories) {
      if (taxonomy.index_of(c)) kept.categories.push_back(c);
    }
    out.attributes.push_back(std::move(kept));
  }
  return out;
}

void AttributeSchema::validate(const Taxonomy& taxonomy) const {
  if (attributes.empty()) throw ConfigError("attribute schema is empty");
  std::set<std::string> names_seen, categories_seen;
  for (const auto& a : attributes) {
    if (!names_seen.insert(a.name).second) throw ConfigError("attribute '" + a.name + "' listed twice");
    for (const auto& c : a.categories) {
      if (!taxonomy.index_of(c)) {
        throw ConfigError("attribute '" + a.name + "' lists category '" + c + "' which is not in the taxonomy");
      }
      if (!categories_seen.insert(c).second) {
        throw ConfigError("category '" + c + "' belongs to more than one attribute");
      }
    }
  }
}

std::vector<std::string> AttributeSchema::names() const {
  std::vector<std::string> out;
  for (const auto& a : attributes) out.push_back(a.name);
  return out;
}

std::size_t AttributeSchema::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < attributes.size(); ++i) {
    if (attributes[i].name == name) return i;
  }
  throw ArgumentError("unknown attribute '" + std::string(name) + "'");
}

nlohmann::json to_json(const AttributeSchema& schema) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& a : schema.attributes) out.push_back({{"name", a.name}, {"categories", a.categories}});
  return {{"attributes", out}};
}

AttributeSchema attribute_schema_from_json(const nlohmann::json& j) {
  AttributeSchema schema;
  try {
    for (const auto& a : j.at("attributes")) {
      schema.attributes.push_back({a.at("name").get<std::string>(), a.at("categories").get<std::vector<std::string>>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("attribute schema: ") + e.what());
  }
  return schema;
}

Eigen::MatrixXd frequency_matrix(const std::vector<UserProfile>& profiles) {
  if (profiles.empty()) return {};
  const Eigen::Index width = profiles.front().freq.size();
  Eigen::MatrixXd v(static_cast<Eigen::Index>(profiles.size()), width);
  for (std::size_t u = 0; u < profiles.size(); ++u) {
    if (profiles[u].freq.size() != width) throw ArgumentError("profiles disagree on the frequency dimension");
    v.row(static_cast<Eigen::Index>(u)) = profiles[u].freq.transpose();
  }
  return v;
}

Eigen::VectorXd attribute_values(const UserProfile& profile, const AttributeSchema& schema, const Taxonomy& taxonomy) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(schema.attributes.size()));
  for (std::size_t a = 0; a < schema.attributes.size(); ++a) {
    for (const auto& c : schema.attributes[a].categories) {
      const auto idx = taxonomy.index_of(c);
      if (!idx) throw ConfigError("attribute category '" + c + "' is not in the taxonomy");
      out(static_cast<Eigen::Index>(a)) += profile.freq(static_cast<Eigen::Index>(*idx));
    }
  }
  return out;
}

TypeAttributeProfile type_attribute_profile(const std::vector<Eigen::Index>& types, Eigen::Index type_count,
                                            const std::vector<UserProfile>& profiles,
                                            const AttributeSchema& schema, const Taxonomy& taxonomy) {
  if (types.size() != profiles.size()) throw ArgumentError("type_attribute_profile: one type per profile required");
  const auto attrs = static_cast<Eigen::Index>(schema.attributes.size());
  TypeAttributeProfile out;
  out.mean = Eigen::MatrixXd::Zero(type_count, attrs);
  out.members.assign(static_cast<std::size_t>(type_count), 0);
  for (std::size_t u = 0; u < profiles.size(); ++u) {
    const auto t = types[u];
    if (t < 0 || t >= type_count) throw ArgumentError("type index out of range");
    out.mean.row(t) += attribute_values(profiles[u], schema, taxonomy).transpose();
    ++out.members[static_cast<std::size_t>(t)];
  }
  std::size_t nonempty = 0;
  for (Eigen::Index t = 0; t < type_count; ++t) {
    const auto n = out.members[static_cast<std::size_t>(t)];
    if (n > 0) {
      out.mean.row(t) /= static_cast<double>(n);
      ++nonempty;
    } else {
      out.mean.row(t).setConstant(std::numeric_limits<double>::quiet_NaN());
    }
  }
  if (nonempty < 2) throw UndefinedResult("attribute normalization is undefined: fewer than two nonempty user types");

  out.normalized = Eigen::MatrixXd::Constant(type_count, attrs, std::numeric_limits<double>::quiet_NaN());
  out.attribute_defined.assign(static_cast<std::size_t>(attrs), false);
  for (Eigen::Index a = 0; a < attrs; ++a) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (Eigen::Index t = 0; t < type_count; ++t) {
      if (out.members[static_cast<std::size_t>(t)] == 0) continue;
      lo = std::min(lo, out.mean(t, a));
      hi = std::max(hi, out.mean(t, a));
    }
    if (!(hi > lo)) continue;
    out.attribute_defined[static_cast<std::size_t>(a)] = true;
    for (Eigen::Index t = 0; t < type_count; ++t) {
      if (out.members[static_cast<std::size_t>(t)] == 0) continue;
      const double m = out.mean(t, a);
      // endpoints are pinned so min maps to exactly 0 and max to exactly 1
      out.normalized(t, a) = m == lo ? 0.0 : m == hi ? 1.0 : (m - lo) / (hi - lo);
    }
  }
  return out;
}

TypeSelfieProfile type_selfie_profile(const std::vector<Eigen::Index>& types, Eigen::Index type_count,
                                      const std::vector<UserProfile>& profiles) {
  if (types.size() != profiles.size()) throw ArgumentError("type_selfie_profile: one type per profile required");
  constexpr auto width = static_cast<Eigen::Index>(kSelfieMeasures);
  TypeSelfieProfile out;
  out.mean = Eigen::MatrixXd::Zero(type_count, width);
  out.defined_count = Eigen::MatrixXi::Zero(type_count, width);
  out.members.assign(static_cast<std::size_t>(type_count), 0);
  for (std::size_t u = 0; u < profiles.size(); ++u) {
    const auto t = types[u];
    if (t < 0 || t >= type_count) throw ArgumentError("type index out of range");
    ++out.members[static_cast<std::size_t>(t)];
    for (Eigen::Index m = 0; m < width; ++m) {
      if (const auto& v = profiles[u].selfie[static_cast<std::size_t>(m)]) {
        out.mean(t, m) += *v;
        ++out.defined_count(t, m);
      }
    }
  }
  for (Eigen::Index t = 0; t < type_count; ++t) {
    for (Eigen::Index m = 0; m < width; ++m) {
      const int n = out.defined_count(t, m);
      out.mean(t, m) = n > 0 ? out.mean(t, m) / n : std::numeric_limits<double>::quiet_NaN();
    }
  }
  return out;
}

AttributeRanking attribute_rank(const TypeAttributeProfile& attributes, const TypeSelfieProfile& selfie,
                                SelfieMeasure measure, const AttributeSchema& schema) {
  const auto m = static_cast<Eigen::Index>(measure);
  std::vector<Eigen::Index> rows;
  for (Eigen::Index t = 0; t < selfie.mean.rows(); ++t) {
    if (attributes.members[static_cast<std::size_t>(t)] > 0 && !std::isnan(selfie.mean(t, m))) rows.push_back(t);
  }
  if (rows.size() < 3) throw ArgumentError("attribute_rank: at least three user types with the measure are required");
  Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) y(static_cast<Eigen::Index>(i)) = selfie.mean(rows[i], m);
  if (y.minCoeff() == y.maxCoeff()) {
    throw UndefinedResult(std::string("attribute_rank: ") + to_string(measure) + " is constant across user types");
  }

  AttributeRanking out;
  out.measure = measure;
  for (std::size_t a = 0; a < schema.attributes.size(); ++a) {
    const auto& name = schema.attributes[a].name;
    Eigen::VectorXd x(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      x(static_cast<Eigen::Index>(i)) = attributes.normalized(rows[i], static_cast<Eigen::Index>(a));
    }
    if (!x.allFinite() || x.minCoeff() == x.maxCoeff()) {
      out.excluded.push_back(name);
      continue;
    }
    out.ranked.emplace_back(name, pearson(x, y));
  }
  std::sort(out.ranked.begin(), out.ranked.end(), [](const auto& l, const auto& r) {
    if (l.second != r.second) return l.second > r.second;
    return l.first < r.first;
  });
  return out;
}

AttributePrediction predict_attribute(const std::vector<UserProfile>& profiles, std::size_t attribute,
                                      const AttributeSchema& schema, const Taxonomy& taxonomy,
                                      const LearnOptions& options) {
  if (attribute >= schema.attributes.size()) throw ArgumentError("predict_attribute: attribute index out of range");
  AttributePrediction out;
  out.attribute = schema.attributes[attribute].name;

  std::vector<const UserProfile*> usable;
  for (const auto& p : profiles) {
    const bool complete = std::all_of(p.selfie.begin(), p.selfie.end(), [](const auto& v) { return v.has_value(); });
    if (complete) {
      usable.push_back(&p);
    } else {
      ++out.excluded_users;
    }
  }
  std::vector<std::string> ids;
  std::vector<std::optional<double>> value;
  for (const auto* p : usable) {
    ids.push_back(p->user_id);
    value.push_back(attribute_values(*p, schema, taxonomy)(static_cast<Eigen::Index>(attribute)));
  }
  out.labels = quantile_label(ids, value, options.q);

  std::map<std::string_view, const UserProfile*> by_id;
  for (const auto* p : usable) by_id.emplace(p->user_id, p);
  const std::size_t n = out.labels.positive.size() + out.labels.negative.size();
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(kSelfieMeasures));
  std::vector<int> y;
  y.reserve(n);
  Eigen::Index row = 0;
  auto add = [&](const std::string& id, int label) {
    const auto* p = by_id.at(id);
    for (std::size_t m = 0; m < kSelfieMeasures; ++m) x(row, static_cast<Eigen::Index>(m)) = *p->selfie[m];
    ++row;
    y.push_back(label);
  };
  for (const auto& id : out.labels.positive) add(id, 1);
  for (const auto& id : out.labels.negative) add(id, -1);
  out.cv = kfold_cv(x, y, options.folds, options.svm);
  return out;
}

}  // namespace miner
