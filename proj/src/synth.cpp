#include "miner/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <unordered_map>

#include "miner/error.hpp"

namespace miner {

namespace {

using json = nlohmann::json;

void check_probability(double p, const std::string& what) {
  if (!(p >= 0 && p <= 1)) throw ConfigError(what + " must lie in [0, 1]");
}

void check_range(const Range& r, const std::string& what, double hi = 1) {
  if (!(r.first >= 0 && r.first <= r.second && r.second <= hi)) {
    throw ConfigError(what + " must satisfy 0 <= lo <= hi <= " + std::to_string(hi));
  }
}

void check_weights(const std::array<double, kSelfieKinds>& w, const std::string& what) {
  double sum = 0;
  for (double x : w) {
    if (!(x >= 0) || !std::isfinite(x)) throw ConfigError(what + " must be non-negative");
    sum += x;
  }
  if (!(sum > 0)) throw ConfigError(what + " must not be all zero");
}

void check_categories(const std::vector<std::string>& categories, const Taxonomy& taxonomy, const std::string& what) {
  for (const auto& c : categories) {
    if (!taxonomy.index_of(c)) throw ConfigError(what + " names category '" + c + "' which is not in the taxonomy");
  }
}

void check_behavior(const BehaviorOverride& b, const std::string& what) {
  if (b.selfie_rate) check_range(*b.selfie_rate, what + ".selfie_rate");
  if (b.subcategory_weights) check_weights(*b.subcategory_weights, what + ".subcategory_weights");
  if (b.multi_face_rate) check_probability(*b.multi_face_rate, what + ".multi_face_rate");
}

json range_json(const Range& r) { return json::array({r.first, r.second}); }

Range range_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ConfigError("range must be a two-element array");
  return {j[0].get<double>(), j[1].get<double>()};
}

json behavior_json(const BehaviorOverride& b) {
  json out = json::object();
  if (b.selfie_rate) out["selfie_rate"] = range_json(*b.selfie_rate);
  if (b.subcategory_weights) out["subcategory_weights"] = *b.subcategory_weights;
  if (b.multi_face_rate) out["multi_face_rate"] = *b.multi_face_rate;
  return out;
}

BehaviorOverride behavior_from(const json& j) {
  BehaviorOverride b;
  if (j.contains("selfie_rate")) b.selfie_rate = range_from(j["selfie_rate"]);
  if (j.contains("subcategory_weights")) {
    b.subcategory_weights = j["subcategory_weights"].get<std::array<double, kSelfieKinds>>();
  }
  if (j.contains("multi_face_rate")) b.multi_face_rate = j["multi_face_rate"].get<double>();
  return b;
}

void apply(const BehaviorOverride& b, UserTruth& u, Range& rate) {
  if (b.selfie_rate) rate = *b.selfie_rate;
  if (b.subcategory_weights) u.subcategory_weights = *b.subcategory_weights;
  if (b.multi_face_rate) u.multi_face_rate = *b.multi_face_rate;
}

std::string padded(std::size_t value, std::size_t width) {
  std::string s = std::to_string(value);
  if (s.size() < width) s.insert(0, width - s.size(), '0');
  return s;
}

std::size_t digits(std::size_t n) { return std::max<std::size_t>(3, std::to_string(n).size()); }

}  // namespace

SynthConfig SynthConfig::standard() {
  SynthConfig c;
  c.groups = {
      {"Travel", 1, {"Tourist Photo", "Building"}, 3, {}},
      {"Children", 1, {"Child", "Baby"}, 3, {}},
      {"Living Goods", 1, {"Clothes", "Shoes"}, 3, {}},
      {"WeChat", 1, {"Chat Screenshot", "WeChat Moment"}, 3, {}},
      {"Food", 1, {"Meal", "Snack"}, 3, {}},
  };
  PlantedRule addict;
  addict.name = "selfie_addict";
  addict.categories = {"Tourist Photo", "Child", "Meal"};
  addict.boost = 5;
  addict.on.selfie_rate = Range{0.45, 0.7};
  addict.off.selfie_rate = Range{0.05, 0.2};
  PlantedRule cosmetic;
  cosmetic.name = "cosmetic_lover";
  cosmetic.categories = {"Cosmetic", "Cosmetics Ad"};
  cosmetic.boost = 6;
  cosmetic.on.subcategory_weights = std::array<double, kSelfieKinds>{0.2, 0.1, 0.35, 0.35};
  cosmetic.off.subcategory_weights = std::array<double, kSelfieKinds>{0.55, 0.35, 0.05, 0.05};
  c.rules = {addict, cosmetic};
  return c;
}

SynthConfig SynthConfig::null_model() {
  SynthConfig c;
  c.groups.clear();
  c.rules.clear();
  return c;
}

void SynthConfig::validate() const {
  taxonomy.validate();
  if (users == 0) throw ConfigError("users must be positive");
  if (moments_min == 0 || moments_min > moments_max) throw ConfigError("moments range must satisfy 1 <= min <= max");
  if (max_images_per_moment < 1 || max_images_per_moment > 9) {
    throw ConfigError("max_images_per_moment must lie in [1, 9]");
  }
  if (embedding_dim < blob_count()) {
    throw ConfigError("embedding_dim " + std::to_string(embedding_dim) + " is smaller than the blob count " +
                      std::to_string(blob_count()));
  }
  if (!(blob_sigma > 0) || !std::isfinite(blob_sigma)) throw ConfigError("blob_sigma must be positive");
  if (!(blob_separation > 0) || !std::isfinite(blob_separation)) throw ConfigError("blob_separation must be positive");
  check_probability(category_continuation, "category_continuation");
  check_range(image_continuation, "image_continuation", 0.99);
  if (!(selfie_image_continuation >= 0 && selfie_image_continuation <= 0.99)) {
    throw ConfigError("selfie_image_continuation must lie in [0, 0.99]");
  }
  if (!(preference_jitter >= 0 && preference_jitter < 1)) throw ConfigError("preference_jitter must lie in [0, 1)");
  check_range(selfie_rate, "selfie_rate");
  check_probability(mixed_rate, "mixed_rate");
  check_weights(subcategory_weights, "subcategory_weights");
  check_probability(multi_face_rate, "multi_face_rate");
  check_probability(missing_face_rate, "missing_face_rate");
  check_probability(zero_face_rate, "zero_face_rate");
  std::set<std::string> names;
  for (const auto& g : groups) {
    const std::string what = "group '" + g.name + "'";
    if (!names.insert(g.name).second) throw ConfigError(what + " is defined twice");
    if (!(g.weight > 0) || !std::isfinite(g.weight)) throw ConfigError(what + " weight must be positive");
    if (!(g.boost > 0) || !std::isfinite(g.boost)) throw ConfigError(what + " boost must be positive");
    check_categories(g.categories, taxonomy, what);
    check_behavior(g.behavior, what);
  }
  names.clear();
  for (const auto& r : rules) {
    const std::string what = "rule '" + r.name + "'";
    if (!names.insert(r.name).second) throw ConfigError(what + " is defined twice");
    check_probability(r.probability, what + ".probability");
    if (!(r.boost > 0) || !std::isfinite(r.boost)) throw ConfigError(what + " boost must be positive");
    check_categories(r.categories, taxonomy, what);
    check_behavior(r.on, what + ".on");
    check_behavior(r.off, what + ".off");
  }
}

nlohmann::json to_json(const SynthConfig& c) {
  json groups = json::array();
  for (const auto& g : c.groups) {
    groups.push_back({{"name", g.name},
                      {"weight", g.weight},
                      {"categories", g.categories},
                      {"boost", g.boost},
                      {"behavior", behavior_json(g.behavior)}});
  }
  json rules = json::array();
  for (const auto& r : c.rules) {
    rules.push_back({{"name", r.name},
                     {"probability", r.probability},
                     {"categories", r.categories},
                     {"boost", r.boost},
                     {"on", behavior_json(r.on)},
                     {"off", behavior_json(r.off)}});
  }
  return {{"taxonomy", to_json(c.taxonomy)},
          {"users", c.users},
          {"moments", json::array({c.moments_min, c.moments_max})},
          {"max_images_per_moment", c.max_images_per_moment},
          {"embedding_dim", c.embedding_dim},
          {"blob_sigma", c.blob_sigma},
          {"blob_separation", c.blob_separation},
          {"category_continuation", c.category_continuation},
          {"image_continuation", range_json(c.image_continuation)},
          {"selfie_image_continuation", c.selfie_image_continuation},
          {"preference_jitter", c.preference_jitter},
          {"selfie_rate", range_json(c.selfie_rate)},
          {"mixed_rate", c.mixed_rate},
          {"subcategory_weights", c.subcategory_weights},
          {"multi_face_rate", c.multi_face_rate},
          {"missing_face_rate", c.missing_face_rate},
          {"zero_face_rate", c.zero_face_rate},
          {"groups", groups},
          {"rules", rules},
          {"seed", c.seed}};
}

SynthConfig synth_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("synth config must be a JSON object");
  const json known = to_json(SynthConfig::standard());
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw ConfigError("synth config: unknown key '" + key + "'");
  }
  SynthConfig c = SynthConfig::standard();
  try {
    if (j.contains("taxonomy")) c.taxonomy = taxonomy_from_json(j["taxonomy"]);
    if (j.contains("users")) c.users = j["users"].get<std::size_t>();
    if (j.contains("moments")) {
      const auto m = j["moments"].get<std::vector<std::size_t>>();
      if (m.size() != 2) throw ConfigError("moments must be [min, max]");
      c.moments_min = m[0];
      c.moments_max = m[1];
    }
    if (j.contains("max_images_per_moment")) c.max_images_per_moment = j["max_images_per_moment"].get<std::size_t>();
    if (j.contains("embedding_dim")) c.embedding_dim = j["embedding_dim"].get<std::size_t>();
    if (j.contains("blob_sigma")) c.blob_sigma = j["blob_sigma"].get<double>();
    if (j.contains("blob_separation")) c.blob_separation = j["blob_separation"].get<double>();
    if (j.contains("category_continuation")) c.category_continuation = j["category_continuation"].get<double>();
    if (j.contains("image_continuation")) c.image_continuation = range_from(j["image_continuation"]);
    if (j.contains("selfie_image_continuation")) {
      c.selfie_image_continuation = j["selfie_image_continuation"].get<double>();
    }
    if (j.contains("preference_jitter")) c.preference_jitter = j["preference_jitter"].get<double>();
    if (j.contains("selfie_rate")) c.selfie_rate = range_from(j["selfie_rate"]);
    if (j.contains("mixed_rate")) c.mixed_rate = j["mixed_rate"].get<double>();
    if (j.contains("subcategory_weights")) {
      c.subcategory_weights = j["subcategory_weights"].get<std::array<double, kSelfieKinds>>();
    }
    if (j.contains("multi_face_rate")) c.multi_face_rate = j["multi_face_rate"].get<double>();
    if (j.contains("missing_face_rate")) c.missing_face_rate = j["missing_face_rate"].get<double>();
    if (j.contains("zero_face_rate")) c.zero_face_rate = j["zero_face_rate"].get<double>();
    if (j.contains("groups")) {
      c.groups.clear();
      for (const auto& g : j["groups"]) {
        PlantedGroup group;
        group.name = g.at("name").get<std::string>();
        group.weight = g.value("weight", group.weight);
        group.categories = g.value("categories", std::vector<std::string>{});
        group.boost = g.value("boost", group.boost);
        if (g.contains("behavior")) group.behavior = behavior_from(g["behavior"]);
        c.groups.push_back(std::move(group));
      }
    }
    if (j.contains("rules")) {
      c.rules.clear();
      for (const auto& r : j["rules"]) {
        PlantedRule rule;
        rule.name = r.at("name").get<std::string>();
        rule.probability = r.value("probability", rule.probability);
        rule.categories = r.value("categories", std::vector<std::string>{});
        rule.boost = r.value("boost", rule.boost);
        if (r.contains("on")) rule.on = behavior_from(r["on"]);
        if (r.contains("off")) rule.off = behavior_from(r["off"]);
        c.rules.push_back(std::move(rule));
      }
    }
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("synth config: ") + e.what());
  }
  c.validate();
  return c;
}

bool UserTruth::has_flag(std::string_view rule) const {
  return std::find(flags.begin(), flags.end(), rule) != flags.end();
}

const UserTruth* GroundTruth::find_user(std::string_view user_id) const {
  for (const auto& u : users) {
    if (u.user_id == user_id) return &u;
  }
  return nullptr;
}

Generated generate(const SynthConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto coin = [&](double p) { return unit(rng) < p; };
  auto in_range = [&](const Range& r) { return r.first + (r.second - r.first) * unit(rng); };

  const Taxonomy& tax = config.taxonomy;
  const std::size_t categories = tax.size();
  const auto dim = static_cast<Eigen::Index>(config.embedding_dim);
  const double radius = config.blob_separation * config.blob_sigma / std::sqrt(2.0);
  auto embed = [&](std::size_t blob) {
    Eigen::VectorXd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = config.blob_sigma * normal(rng);
    v(static_cast<Eigen::Index>(blob)) += radius;
    return v;
  };

  std::vector<double> group_weights;
  for (const auto& g : config.groups) group_weights.push_back(g.weight);

  Generated out;
  std::vector<Moment> moments;
  std::vector<ImageRecord> images;
  const std::size_t user_width = digits(config.users - 1);
  const std::size_t moment_width = digits(config.moments_max - 1);

  for (std::size_t u = 0; u < config.users; ++u) {
    UserTruth truth;
    truth.user_id = "u" + padded(u, user_width);
    truth.subcategory_weights = config.subcategory_weights;
    truth.multi_face_rate = config.multi_face_rate;
    Range rate = config.selfie_rate;

    std::vector<double> pref(categories);
    for (auto& w : pref) w = 1 - config.preference_jitter + 2 * config.preference_jitter * unit(rng);
    auto boost = [&](const std::vector<std::string>& cats, double factor) {
      for (const auto& c : cats) pref[*tax.index_of(c)] *= factor;
    };
    if (!config.groups.empty()) {
      std::discrete_distribution<std::size_t> pick(group_weights.begin(), group_weights.end());
      const auto& g = config.groups[pick(rng)];
      truth.group = g.name;
      boost(g.categories, g.boost);
      apply(g.behavior, truth, rate);
    }
    for (const auto& r : config.rules) {
      if (coin(r.probability)) {
        truth.flags.push_back(r.name);
        boost(r.categories, r.boost);
        apply(r.on, truth, rate);
      } else {
        apply(r.off, truth, rate);
      }
    }
    truth.selfie_rate = in_range(rate);
    truth.image_continuation = in_range(config.image_continuation);

    std::discrete_distribution<std::size_t> pick_category(pref.begin(), pref.end());
    std::discrete_distribution<std::size_t> pick_kind(truth.subcategory_weights.begin(),
                                                      truth.subcategory_weights.end());
    const auto moment_count =
        std::uniform_int_distribution<std::size_t>(config.moments_min, config.moments_max)(rng);

    for (std::size_t m = 0; m < moment_count; ++m) {
      Moment moment;
      moment.moment_id = truth.user_id + "_m" + padded(m, moment_width);
      moment.user_id = truth.user_id;
      const std::size_t cap = config.max_images_per_moment;
      auto add_image = [&](std::size_t blob, const std::string& category, std::optional<SelfieKind> kind) {
        ImageRecord img;
        img.image_id = moment.moment_id + "_i" + std::to_string(moment.image_ids.size());
        img.user_id = truth.user_id;
        img.moment_id = moment.moment_id;
        img.embedding = embed(blob);
        ImageTruth it{img.image_id, category, std::nullopt};
        if (kind) {
          it.subcategory = tax.label(*kind);
          if (coin(config.missing_face_rate)) {
            img.face_count = std::nullopt;
          } else if (coin(config.zero_face_rate)) {
            img.face_count = 0;
          } else if (coin(truth.multi_face_rate)) {
            img.face_count = 2 + static_cast<int>(std::uniform_int_distribution<int>(0, 2)(rng));
          } else {
            img.face_count = 1;
          }
        } else {
          img.face_count = 0;
        }
        moment.image_ids.push_back(img.image_id);
        images.push_back(std::move(img));
        out.truth.images.push_back(std::move(it));
      };
      auto add_others = [&] {
        do {
          const std::size_t c = pick_category(rng);
          std::size_t n = 1;
          while (coin(truth.image_continuation)) ++n;
          n = std::min(n, cap - moment.image_ids.size());
          for (std::size_t i = 0; i < n; ++i) add_image(c, tax.categories[c], std::nullopt);
        } while (moment.image_ids.size() < cap && coin(config.category_continuation));
      };

      if (coin(truth.selfie_rate)) {
        std::size_t n = 1;
        while (n < cap && coin(config.selfie_image_continuation)) ++n;
        for (std::size_t i = 0; i < n; ++i) {
          const auto kind = static_cast<SelfieKind>(pick_kind(rng));
          add_image(categories + static_cast<std::size_t>(kind), tax.selfie, kind);
        }
        if (moment.image_ids.size() < cap && coin(config.mixed_rate)) add_others();
      } else {
        add_others();
      }
      moments.push_back(std::move(moment));
    }
    out.truth.users.push_back(std::move(truth));
  }
  out.dataset = Dataset(config.embedding_dim, std::move(moments), std::move(images));
  return out;
}

Dataset with_true_categories(const Dataset& d, const GroundTruth& truth) {
  std::unordered_map<std::string, const ImageTruth*> by_id;
  for (const auto& t : truth.images) by_id.emplace(t.image_id, &t);
  std::vector<ImageRecord> images = d.images();
  for (auto& img : images) {
    const auto it = by_id.find(img.image_id);
    if (it == by_id.end()) throw SchemaError("ground truth has no entry for image " + img.image_id);
    img.category = it->second->category;
    img.subcategory = it->second->subcategory;
  }
  return d.with_images(std::move(images));
}

void save_ground_truth(const GroundTruth& truth, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MissingInput("cannot write " + path.string());
  for (const auto& u : truth.users) {
    nlohmann::ordered_json j;
    j["kind"] = "user_truth";
    j["user_id"] = u.user_id;
    j["group"] = u.group;
    j["flags"] = u.flags;
    j["selfie_rate"] = u.selfie_rate;
    j["image_continuation"] = u.image_continuation;
    j["subcategory_weights"] = u.subcategory_weights;
    j["multi_face_rate"] = u.multi_face_rate;
    out << j.dump() << '\n';
  }
  for (const auto& t : truth.images) {
    nlohmann::ordered_json j;
    j["kind"] = "image_truth";
    j["image_id"] = t.image_id;
    j["category"] = t.category;
    if (t.subcategory) j["subcategory"] = *t.subcategory;
    out << j.dump() << '\n';
  }
}

GroundTruth load_ground_truth(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingInput("cannot read ground truth file " + path.string());
  GroundTruth truth;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no) + ": ";
    try {
      const auto j = json::parse(line);
      const auto kind = j.at("kind").get<std::string>();
      if (kind == "user_truth") {
        UserTruth u;
        u.user_id = j.at("user_id").get<std::string>();
        u.group = j.at("group").get<std::string>();
        u.flags = j.at("flags").get<std::vector<std::string>>();
        u.selfie_rate = j.at("selfie_rate").get<double>();
        u.image_continuation = j.at("image_continuation").get<double>();
        u.subcategory_weights = j.at("subcategory_weights").get<std::array<double, kSelfieKinds>>();
        u.multi_face_rate = j.at("multi_face_rate").get<double>();
        truth.users.push_back(std::move(u));
      } else if (kind == "image_truth") {
        ImageTruth t;
        t.image_id = j.at("image_id").get<std::string>();
        t.category = j.at("category").get<std::string>();
        if (j.contains("subcategory")) t.subcategory = j["subcategory"].get<std::string>();
        truth.images.push_back(std::move(t));
      } else {
        throw ParseError(where + "unknown record kind '" + kind + "'");
      }
    } catch (const json::exception& e) {
      throw ParseError(where + e.what());
    }
  }
  return truth;
}

std::vector<OracleUser> oracle_metrics(const Dataset& d, const Taxonomy& taxonomy) {
  struct Raw {
    std::string category;
    std::string subcategory;
    int faces;  // -1 when absent
  };
  std::unordered_map<std::string, Raw> raw;
  for (const auto& img : d.images()) {
    raw[img.image_id] = Raw{img.category.value_or(""), img.subcategory.value_or(""), img.face_count.value_or(-1)};
  }

  std::vector<std::string> labels = taxonomy.categories;
  labels.push_back(taxonomy.selfie);

  std::vector<OracleUser> result;
  for (const auto& user : d.users()) {
    std::vector<std::vector<Raw>> posts;
    for (const auto& m : d.moments()) {
      if (m.user_id != user) continue;
      std::vector<Raw> moment;
      for (const auto& id : m.image_ids) moment.push_back(raw.at(id));
      posts.push_back(moment);
    }

    OracleUser o;
    o.user_id = user;
    std::map<std::string, std::int64_t> occ, imgs, alone;
    std::int64_t total = 0;
    for (const auto& c : labels) {
      for (const auto& moment : posts) {
        std::int64_t n = 0;
        for (const auto& r : moment) n += r.category == c ? 1 : 0;
        if (n == 0) continue;
        occ[c] += 1;
        imgs[c] += n;
        if (n == static_cast<std::int64_t>(moment.size())) alone[c] += 1;
      }
      total += occ[c];
    }
    for (const auto& c : labels) {
      if (occ[c] > 0) o.occurrence[c] = occ[c];
      o.frequency[c] = {occ[c], total};
      o.inertia[c] = {imgs[c], occ[c]};
      o.singleness[c] = {alone[c], occ[c]};
    }

    std::int64_t other_occ = 0, other_imgs = 0;
    for (const auto& c : taxonomy.categories) {
      other_occ += occ[c];
      other_imgs += imgs[c];
    }
    o.sparse = other_occ == 0;
    for (const auto& c : taxonomy.categories) o.f.push_back(o.sparse ? Fraction{0, 1} : Fraction{occ[c], other_occ});
    o.i = {other_imgs, other_occ};

    std::int64_t free_moments = 0, single = 0;
    std::int64_t one = 0, multi = 0;
    std::array<std::int64_t, kSelfieKinds> kind{};
    for (const auto& moment : posts) {
      bool has_selfie = false;
      for (const auto& r : moment) has_selfie = has_selfie || r.category == taxonomy.selfie;
      if (!has_selfie) {
        ++free_moments;
        bool uniform = true;
        for (const auto& r : moment) uniform = uniform && r.category == moment.front().category;
        if (uniform) ++single;
        continue;
      }
      bool saw_one = false, saw_multi = false;
      for (const auto& r : moment) {
        if (r.category != taxonomy.selfie) continue;
        if (r.faces == 1) saw_one = true;
        if (r.faces > 1) saw_multi = true;
      }
      one += saw_one ? 1 : 0;
      multi += saw_multi ? 1 : 0;
      for (std::size_t k = 0; k < kSelfieKinds; ++k) {
        bool present = false;
        for (const auto& r : moment) {
          present = present || (r.category == taxonomy.selfie && r.subcategory == taxonomy.selfie_subcategories[k]);
        }
        kind[k] += present ? 1 : 0;
      }
    }
    o.s = {single, free_moments};

    const std::string& s = taxonomy.selfie;
    const std::int64_t indoor = kind[0];
    o.measures = {Fraction{occ[s], total},
                  Fraction{imgs[s], occ[s]},
                  Fraction{alone[s], occ[s]},
                  Fraction{multi, one + multi},
                  Fraction{kind[1], kind[1] + indoor},
                  Fraction{kind[2], kind[2] + indoor},
                  Fraction{kind[3], kind[3] + indoor}};
    result.push_back(std::move(o));
  }
  return result;
}

}  // namespace miner
