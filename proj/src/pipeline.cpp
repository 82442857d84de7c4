#include "miner/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <unordered_map>

#include "miner/charmetrics.hpp"
#include "miner/csv.hpp"
#include "miner/factorize.hpp"
#include "miner/learn.hpp"
#include "miner/nmf.hpp"
#include "miner/profile_io.hpp"
#include "miner/stats.hpp"

namespace miner {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

void write_json(const fs::path& path, const ojson& j) { csv::write_file(path, j.dump(2) + "\n"); }

ojson read_json(const fs::path& path) {
  if (!fs::exists(path)) throw MissingInput("missing input file " + path.string());
  try {
    return ojson::parse(csv::read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void require(const fs::path& path, const std::string& produced_by) {
  if (!fs::exists(path)) {
    throw MissingInput("missing input file " + path.string() + " (run '" + produced_by + "' first)");
  }
}

std::vector<std::string> with_prefix(std::string prefix, const std::vector<std::string>& names) {
  std::vector<std::string> out{std::move(prefix)};
  out.insert(out.end(), names.begin(), names.end());
  return out;
}

LearnOptions learn_options(const PipelineConfig& c) {
  LearnOptions o;
  o.q = c.q;
  o.folds = c.folds;
  o.svm.C = c.svm_c;
  o.svm.tol = c.svm_tol;
  o.svm.max_passes = c.svm_max_passes;
  o.svm.seed = c.seed;
  return o;
}

ojson cv_json(const CvResult& cv) {
  return {{"mean_accuracy", cv.mean_accuracy}, {"fold_accuracy", cv.fold_accuracy}, {"fold_of", cv.fold_of},
          {"seed", cv.seed}};
}

std::vector<UserProfile> load_stage_profiles(const PipelineConfig& c) {
  const auto path = c.out / "profiles.csv";
  require(path, "characterize");
  return load_profiles(path, c.taxonomy);
}

AttributeSchema resolve_schema(const PipelineConfig& c) {
  AttributeSchema schema = c.attribute_schema ? attribute_schema_from_json(read_json(*c.attribute_schema))
                                              : AttributeSchema::standard().restricted_to(c.taxonomy);
  schema.validate(c.taxonomy);
  return schema;
}

}  // namespace

void PipelineConfig::validate() const {
  taxonomy.validate();
  if (k_min < 2 || k_min > k_max || k_step < 1) throw ConfigError("cluster k range must satisfy 2 <= k_min <= k_max");
  if (restarts < 1) throw ConfigError("cluster restarts must be positive");
  if (kmeans_max_iter < 1) throw ConfigError("cluster max_iter must be positive");
  if (selfie_k < 1) throw ConfigError("cluster selfie_k must be positive");
  if (min_occurrence < 0) throw ConfigError("characterize min_occurrence must be non-negative");
  if (!(q > 0 && q <= 0.5)) throw ConfigError("learn q must lie in (0, 0.5]");
  if (folds < 2) throw ConfigError("learn folds must be at least 2");
  if (!(svm_c > 0)) throw ConfigError("learn C must be positive");
  if (!(svm_tol > 0)) throw ConfigError("learn tol must be positive");
  if (svm_max_passes < 1) throw ConfigError("learn max_passes must be positive");
  if (rank < 1) throw ConfigError("factorize rank must be positive");
  if (nmf_max_iter < 1) throw ConfigError("factorize max_iter must be positive");
}

namespace {

void check_keys(const nlohmann::json& j, std::initializer_list<std::string_view> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
  }
}

}  // namespace

PipelineConfig pipeline_config_from_json(const nlohmann::json& j, const fs::path& base) {
  check_keys(j, {"seed", "out", "taxonomy", "paths", "synth", "cluster", "characterize", "learn", "factorize"},
             "pipeline config");
  if (j.contains("paths")) {
    check_keys(j["paths"], {"input", "truth", "merge_map", "selfie_names", "attribute_schema"}, "paths");
  }
  if (j.contains("cluster")) {
    check_keys(j["cluster"], {"k_min", "k_max", "k_step", "restarts", "max_iter", "tol", "selfie_k"}, "cluster");
  }
  if (j.contains("characterize")) check_keys(j["characterize"], {"min_occurrence", "true_categories"}, "characterize");
  if (j.contains("learn")) check_keys(j["learn"], {"q", "folds", "C", "tol", "max_passes"}, "learn");
  if (j.contains("factorize")) check_keys(j["factorize"], {"rank", "max_iter", "tol"}, "factorize");
  PipelineConfig c;
  auto path_of = [&](const nlohmann::json& v) {
    fs::path p = v.get<std::string>();
    return p.is_relative() && !base.empty() ? base / p : p;
  };
  try {
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("out")) c.out = path_of(j["out"]);
    if (j.contains("taxonomy")) c.taxonomy = taxonomy_from_json(j["taxonomy"]);
    if (j.contains("paths")) {
      const auto& p = j["paths"];
      if (p.contains("input")) c.input = path_of(p["input"]);
      if (p.contains("truth")) c.truth = path_of(p["truth"]);
      if (p.contains("merge_map")) c.merge_map = path_of(p["merge_map"]);
      if (p.contains("selfie_names")) c.selfie_names = path_of(p["selfie_names"]);
      if (p.contains("attribute_schema")) c.attribute_schema = path_of(p["attribute_schema"]);
    }
    if (j.contains("synth")) {
      auto s = j["synth"];
      if (!s.contains("taxonomy")) s["taxonomy"] = to_json(c.taxonomy);
      c.synth = synth_config_from_json(s);
    } else {
      c.synth.taxonomy = c.taxonomy;
    }
    if (j.contains("cluster")) {
      const auto& s = j["cluster"];
      c.k_min = s.value("k_min", c.k_min);
      c.k_max = s.value("k_max", c.k_max);
      c.k_step = s.value("k_step", c.k_step);
      c.restarts = s.value("restarts", c.restarts);
      c.kmeans_max_iter = s.value("max_iter", c.kmeans_max_iter);
      c.kmeans_tol = s.value("tol", c.kmeans_tol);
      c.selfie_k = s.value("selfie_k", c.selfie_k);
    }
    if (j.contains("characterize")) {
      const auto& s = j["characterize"];
      c.min_occurrence = s.value("min_occurrence", c.min_occurrence);
      c.true_categories = s.value("true_categories", c.true_categories);
    }
    if (j.contains("learn")) {
      const auto& s = j["learn"];
      c.q = s.value("q", c.q);
      c.folds = s.value("folds", c.folds);
      c.svm_c = s.value("C", c.svm_c);
      c.svm_tol = s.value("tol", c.svm_tol);
      c.svm_max_passes = s.value("max_passes", c.svm_max_passes);
    }
    if (j.contains("factorize")) {
      const auto& s = j["factorize"];
      c.rank = s.value("rank", c.rank);
      c.nmf_max_iter = s.value("max_iter", c.nmf_max_iter);
      c.nmf_tol = s.value("tol", c.nmf_tol);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("pipeline config: ") + e.what());
  }
  if (c.synth.taxonomy != c.taxonomy) throw ConfigError("synth taxonomy differs from the pipeline taxonomy");
  c.validate();
  return c;
}

PipelineConfig load_pipeline_config(const fs::path& path) {
  if (!fs::exists(path)) throw MissingInput("missing config file " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(csv::read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return pipeline_config_from_json(j, path.parent_path());
}

nlohmann::json to_json(const PipelineConfig& c) {
  nlohmann::json paths = nlohmann::json::object();
  if (c.input) paths["input"] = c.input->string();
  if (c.truth) paths["truth"] = c.truth->string();
  if (c.merge_map) paths["merge_map"] = c.merge_map->string();
  if (c.selfie_names) paths["selfie_names"] = c.selfie_names->string();
  if (c.attribute_schema) paths["attribute_schema"] = c.attribute_schema->string();
  return {{"seed", c.seed},
          {"out", c.out.string()},
          {"taxonomy", to_json(c.taxonomy)},
          {"paths", paths},
          {"synth", to_json(c.synth)},
          {"cluster",
           {{"k_min", c.k_min},
            {"k_max", c.k_max},
            {"k_step", c.k_step},
            {"restarts", c.restarts},
            {"max_iter", c.kmeans_max_iter},
            {"tol", c.kmeans_tol},
            {"selfie_k", c.selfie_k}}},
          {"characterize", {{"min_occurrence", c.min_occurrence}, {"true_categories", c.true_categories}}},
          {"learn",
           {{"q", c.q}, {"folds", c.folds}, {"C", c.svm_c}, {"tol", c.svm_tol}, {"max_passes", c.svm_max_passes}}},
          {"factorize", {{"rank", c.rank}, {"max_iter", c.nmf_max_iter}, {"tol", c.nmf_tol}}}};
}

LabelMap majority_label_map(const Clustering<double>& clustering, const std::vector<std::string>& image_ids,
                            const GroundTruth& truth, bool subcategories, const Taxonomy& taxonomy) {
  if (image_ids.size() != clustering.assignment.size()) {
    throw ArgumentError("majority_label_map: one image id per clustered point required");
  }
  std::unordered_map<std::string, const ImageTruth*> by_id;
  for (const auto& t : truth.images) by_id.emplace(t.image_id, &t);
  std::vector<std::map<std::string, std::size_t>> votes(static_cast<std::size_t>(clustering.k));
  for (std::size_t i = 0; i < image_ids.size(); ++i) {
    const auto it = by_id.find(image_ids[i]);
    if (it == by_id.end()) throw SchemaError("ground truth has no entry for image " + image_ids[i]);
    const ImageTruth& t = *it->second;
    std::string label = t.category;
    if (subcategories) {
      if (!t.subcategory) throw SchemaError("ground truth image " + t.image_id + " has no selfie subcategory");
      label = *t.subcategory;
    } else if (t.subcategory || taxonomy.is_selfie(t.category)) {
      label = taxonomy.selfie;
    }
    ++votes[static_cast<std::size_t>(clustering.assignment[i])][label];
  }
  LabelMap map;
  for (std::size_t j = 0; j < votes.size(); ++j) {
    std::string best;
    std::size_t count = 0;
    for (const auto& [label, n] : votes[j]) {
      if (n > count) {
        best = label;
        count = n;
      }
    }
    if (count == 0) best = subcategories ? taxonomy.selfie_subcategories.front() : taxonomy.categories.front();
    map[static_cast<Eigen::Index>(j)] = best;
  }
  return map;
}

void cmd_synth(const PipelineConfig& c) {
  SynthConfig cfg = c.synth;
  cfg.seed = c.seed;
  const Generated g = generate(cfg);
  save_dataset(g.dataset, c.out / "dataset.jsonl");
  save_ground_truth(g.truth, c.out / "ground_truth.jsonl");
  write_json(c.out / "synth_config.json", ojson(to_json(cfg)));
}

void cmd_cluster(const PipelineConfig& c) {
  require(c.input_path(), "synth");
  const Dataset d = load_dataset(c.input_path());
  const ValidationReport report = validate(d);
  const Eigen::MatrixXd x = embedding_matrix(d);
  const KSelection selection =
      select_k(x, c.k_min, std::min<Eigen::Index>(c.k_max, x.rows() - 1), c.k_step, c.seed, c.restarts,
               c.kmeans_max_iter, c.kmeans_tol);
  const auto clustering =
      kmeans_best_of(x, selection.k_selected, c.seed, c.restarts, c.kmeans_max_iter, c.kmeans_tol);

  std::vector<std::string> ids;
  ids.reserve(d.images().size());
  for (const auto& img : d.images()) ids.push_back(img.image_id);

  std::optional<GroundTruth> truth;
  auto need_truth = [&]() -> const GroundTruth& {
    if (!truth) {
      if (!fs::exists(c.truth_path())) {
        throw ConfigError("no merge map configured and no ground truth at " + c.truth_path().string());
      }
      truth = load_ground_truth(c.truth_path());
    }
    return *truth;
  };

  const LabelMap merge = c.merge_map ? load_label_map(*c.merge_map)
                                     : majority_label_map(clustering, ids, need_truth(), false, c.taxonomy);
  const CategoryModel model = apply_merge_map(clustering, merge);
  check_labels(model, c.taxonomy);
  const Dataset categorized = assign_categories(d, model);

  const LabelMap names = [&] {
    if (c.selfie_names) return load_label_map(*c.selfie_names);
    // provisional names only fix the cluster count; replaced by majority vote below
    LabelMap provisional;
    for (Eigen::Index j = 0; j < c.selfie_k; ++j) {
      provisional[j] = c.taxonomy.selfie_subcategories[static_cast<std::size_t>(j) % kSelfieKinds];
    }
    return provisional;
  }();
  SelfieSubclusters sub = subcluster_selfies(categorized, c.taxonomy, names, c.seed, c.selfie_k, c.restarts);
  LabelMap final_names = names;
  if (!c.selfie_names) {
    final_names = majority_label_map(sub.clustering, sub.image_ids, need_truth(), true, c.taxonomy);
    for (std::size_t i = 0; i < sub.image_ids.size(); ++i) {
      sub.subcategory[i] = final_names.at(sub.clustering.assignment[i]);
    }
  }
  const Dataset labeled = apply_subcategories(categorized, sub);

  save_assignments(labeled, c.out / "assignments.jsonl");
  write_json(c.out / "category_model.json", ojson(to_json(model)));
  write_json(c.out / "merge_map.json", ojson(to_json(merge)));
  write_json(c.out / "selfie_names.json", ojson(to_json(final_names)));

  csv::Table curve{{"k", "silhouette"}, {}};
  for (const auto& p : selection.curve) curve.rows.push_back({std::to_string(p.k), csv::number(p.score)});
  csv::write(c.out / "silhouette.csv", curve);

  const auto counts = label_counts(clustering, model);
  ojson label_images = ojson::object();
  for (const auto& [label, n] : counts) label_images[label] = n;
  ojson sub_counts = ojson::object();
  for (const auto& s : sub.subcategory) sub_counts[s] = sub_counts.value(s, 0) + 1;

  std::size_t correct = 0, scored = 0;
  if (truth) {
    std::unordered_map<std::string, const ImageTruth*> by_id;
    for (const auto& t : truth->images) by_id.emplace(t.image_id, &t);
    for (const auto& img : labeled.images()) {
      const auto it = by_id.find(img.image_id);
      if (it == by_id.end()) continue;
      ++scored;
      correct += img.category == it->second->category && img.subcategory == it->second->subcategory ? 1 : 0;
    }
  }

  ojson curve_json = ojson::array();
  for (const auto& p : selection.curve) curve_json.push_back({{"k", p.k}, {"silhouette", p.score}});
  ojson out;
  out["images"] = d.images().size();
  out["validation_warnings"] = report.warnings.size();
  out["silhouette"] = curve_json;
  out["k_selected"] = selection.k_selected;
  out["objective"] = clustering.objective;
  out["iterations"] = clustering.iterations_run;
  out["converged"] = clustering.converged;
  out["reseeded_clusters"] = clustering.reseeded_clusters;
  out["category_images"] = label_images;
  out["selfie_images"] = sub.image_ids.size();
  out["selfie_subcategory_images"] = sub_counts;
  out["selfie_reseeded"] = sub.reseeded();
  out["truth_agreement"] = scored > 0 ? ojson(static_cast<double>(correct) / static_cast<double>(scored)) : ojson();
  write_json(c.out / "cluster.json", out);
}

void cmd_characterize(const PipelineConfig& c) {
  require(c.input_path(), "synth");
  const Dataset d = load_dataset(c.input_path());
  Dataset categorized;
  if (c.true_categories) {
    require(c.truth_path(), "synth");
    categorized = with_true_categories(d, load_ground_truth(c.truth_path()));
  } else {
    require(c.out / "assignments.jsonl", "cluster");
    categorized = load_assignments(d, c.out / "assignments.jsonl");
  }
  const Dataset kept = filter_users_by_min_occurrence(categorized, c.min_occurrence);
  const auto profiles = characterize(kept, c.taxonomy);
  save_profiles(profiles, c.taxonomy, c.out / "profiles.csv");

  std::size_t sparse = 0;
  std::array<std::size_t, kSelfieMeasures> undefined{};
  for (const auto& p : profiles) {
    sparse += p.sparse ? 1 : 0;
    for (std::size_t m = 0; m < kSelfieMeasures; ++m) undefined[m] += p.selfie[m] ? 0 : 1;
  }
  ojson undefined_json = ojson::object();
  for (std::size_t m = 0; m < kSelfieMeasures; ++m) {
    undefined_json[to_string(static_cast<SelfieMeasure>(m))] = undefined[m];
  }
  ojson out;
  out["categories_from"] = c.true_categories ? "ground_truth" : "assignments";
  out["min_occurrence"] = c.min_occurrence;
  out["users_total"] = categorized.users().size();
  out["users_retained"] = kept.users().size();
  out["images_total"] = categorized.images().size();
  out["images_retained"] = kept.images().size();
  out["sparse_users"] = sparse;
  out["undefined_measures"] = undefined_json;
  write_json(c.out / "characterize.json", out);
}

void cmd_correlate(const PipelineConfig& c) {
  const auto profiles = load_stage_profiles(c);
  const CorrelationMatrix m = pearson_matrix(profiles, c.taxonomy);
  csv::Table table{with_prefix("category", m.labels), {}};
  for (Eigen::Index i = 0; i < m.values.rows(); ++i) {
    std::vector<std::string> row{m.labels[static_cast<std::size_t>(i)]};
    for (Eigen::Index j = 0; j < m.values.cols(); ++j) row.push_back(csv::number(m.values(i, j)));
    table.rows.push_back(std::move(row));
  }
  csv::write(c.out / "correlation.csv", table);

  ojson values = ojson::array();
  for (Eigen::Index i = 0; i < m.values.rows(); ++i) {
    ojson row = ojson::array();
    for (Eigen::Index j = 0; j < m.values.cols(); ++j) row.push_back(m.values(i, j));
    values.push_back(row);
  }
  ojson out;
  out["users"] = profiles.size();
  out["labels"] = m.labels;
  out["excluded"] = m.excluded;
  out["values"] = values;
  write_json(c.out / "correlate.json", out);
}

void cmd_tasks(const PipelineConfig& c) {
  const auto profiles = load_stage_profiles(c);
  const LearnOptions options = learn_options(c);
  std::map<std::string_view, const UserProfile*> by_id;
  for (const auto& p : profiles) by_id.emplace(p.user_id, &p);

  std::vector<std::string> fusion_names;
  for (const auto& f : kAllFusions) fusion_names.push_back(to_string(f));
  csv::Table grid{with_prefix("task", fusion_names), {}};
  csv::Table tendencies{{"task", "measure", "accuracy"}, {}};
  csv::Table groups{{"task", "category", "mean_positive", "mean_negative", "difference"}, {}};
  ojson details = ojson::array();

  auto run = [&](Task task, const Fusion& fusion) -> std::optional<TaskResult> {
    ojson entry;
    entry["task"] = to_string(task);
    entry["fusion"] = to_string(fusion);
    entry["measure"] = to_string(task_measure(task));
    try {
      TaskResult r = run_task(task, fusion, profiles, options);
      entry["filtered_users"] = r.filtered_users;
      entry["excluded_users"] = r.excluded_users;
      entry["positive"] = r.labels.positive;
      entry["negative"] = r.labels.negative;
      entry["cv"] = cv_json(r.cv);
      details.push_back(entry);
      return r;
    } catch (const Error& e) {
      entry["error"] = {{"kind", to_string(e.kind())}, {"message", e.what()}};
      details.push_back(entry);
      return std::nullopt;
    }
  };
  auto compare = [&](const TaskResult& r) {
    std::vector<UserProfile> pos, neg;
    for (const auto& id : r.labels.positive) pos.push_back(*by_id.at(id));
    for (const auto& id : r.labels.negative) neg.push_back(*by_id.at(id));
    const GroupComparison g = compare_groups(pos, neg, c.taxonomy);
    for (std::size_t i = 0; i < g.labels.size(); ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      groups.rows.push_back({to_string(r.task), g.labels[i], csv::number(g.mean_a(k)), csv::number(g.mean_b(k)),
                             csv::number(g.difference(k))});
    }
    groups.rows.push_back({to_string(r.task), "I", csv::number(g.inertia_a), csv::number(g.inertia_b),
                           g.inertia_a && g.inertia_b ? csv::number(*g.inertia_a - *g.inertia_b) : ""});
    groups.rows.push_back({to_string(r.task), "S", csv::number(g.singleness_a), csv::number(g.singleness_b),
                           g.singleness_a && g.singleness_b ? csv::number(*g.singleness_a - *g.singleness_b) : ""});
  };

  for (const Task task : {Task::R1, Task::R2, Task::R3}) {
    std::vector<std::string> row{to_string(task)};
    for (const auto& fusion : kAllFusions) {
      const auto r = run(task, fusion);
      row.push_back(r ? csv::number(r->cv.mean_accuracy) : "");
      if (r && fusion == Fusion{}) compare(*r);
    }
    grid.rows.push_back(std::move(row));
  }
  for (const Task task : {Task::R4, Task::R5, Task::R6a, Task::R6b}) {
    const auto r = run(task, Fusion{});
    tendencies.rows.push_back(
        {to_string(task), to_string(task_measure(task)), r ? csv::number(r->cv.mean_accuracy) : ""});
    if (r) compare(*r);
  }
  csv::write(c.out / "table2.csv", grid);
  csv::write(c.out / "table4.csv", tendencies);
  csv::write(c.out / "group_comparisons.csv", groups);

  ojson out;
  out["users"] = profiles.size();
  out["q"] = c.q;
  out["folds"] = c.folds;
  out["C"] = c.svm_c;
  out["runs"] = details;
  write_json(c.out / "tasks.json", out);
}

void cmd_factorize(const PipelineConfig& c) {
  const auto profiles = load_stage_profiles(c);
  const AttributeSchema schema = resolve_schema(c);
  const Eigen::MatrixXd v = frequency_matrix(profiles);
  NmfOptions nmf_options;
  nmf_options.rank = c.rank;
  nmf_options.max_iter = c.nmf_max_iter;
  nmf_options.tol = c.nmf_tol;
  nmf_options.seed = c.seed;
  const auto model = nmf(v, nmf_options);
  const auto types = assign_user_types(model);

  csv::Table type_table{{"user_id", "type"}, {}};
  for (Eigen::Index t = 0; t < model.rank; ++t) type_table.header.push_back("w" + std::to_string(t));
  for (std::size_t u = 0; u < profiles.size(); ++u) {
    std::vector<std::string> row{profiles[u].user_id, std::to_string(types[u])};
    for (Eigen::Index t = 0; t < model.rank; ++t) row.push_back(csv::number(model.W(static_cast<Eigen::Index>(u), t)));
    type_table.rows.push_back(std::move(row));
  }
  csv::write(c.out / "types.csv", type_table);

  const auto attrs = type_attribute_profile(types, model.rank, profiles, schema, c.taxonomy);
  const auto selfie = type_selfie_profile(types, model.rank, profiles);
  const auto names = schema.names();

  csv::Table radar{{"type", "members"}, {}};
  radar.header.insert(radar.header.end(), names.begin(), names.end());
  for (Eigen::Index t = 0; t < model.rank; ++t) {
    std::vector<std::string> row{std::to_string(t), std::to_string(attrs.members[static_cast<std::size_t>(t)])};
    for (Eigen::Index a = 0; a < attrs.normalized.cols(); ++a) row.push_back(csv::number(attrs.normalized(t, a)));
    radar.rows.push_back(std::move(row));
  }
  csv::write(c.out / "radar.csv", radar);

  csv::Table selfie_table{{"type", "members"}, {}};
  for (std::size_t m = 0; m < kSelfieMeasures; ++m) selfie_table.header.push_back(to_string(static_cast<SelfieMeasure>(m)));
  for (std::size_t m = 0; m < kSelfieMeasures; ++m) {
    selfie_table.header.push_back(std::string(to_string(static_cast<SelfieMeasure>(m))) + "_count");
  }
  for (Eigen::Index t = 0; t < model.rank; ++t) {
    std::vector<std::string> row{std::to_string(t), std::to_string(selfie.members[static_cast<std::size_t>(t)])};
    for (Eigen::Index m = 0; m < selfie.mean.cols(); ++m) row.push_back(csv::number(selfie.mean(t, m)));
    for (Eigen::Index m = 0; m < selfie.mean.cols(); ++m) row.push_back(std::to_string(selfie.defined_count(t, m)));
    selfie_table.rows.push_back(std::move(row));
  }
  csv::write(c.out / "type_selfie.csv", selfie_table);

  csv::Table ranking{{"measure", "rank", "attribute", "pearson"}, {}};
  ojson rankings = ojson::array();
  for (std::size_t m = 0; m < kSelfieMeasures; ++m) {
    const auto measure = static_cast<SelfieMeasure>(m);
    ojson entry;
    entry["measure"] = to_string(measure);
    try {
      const auto r = attribute_rank(attrs, selfie, measure, schema);
      ojson ranked = ojson::array();
      for (std::size_t i = 0; i < r.ranked.size(); ++i) {
        ranking.rows.push_back(
            {to_string(measure), std::to_string(i + 1), r.ranked[i].first, csv::number(r.ranked[i].second)});
        ranked.push_back({{"attribute", r.ranked[i].first}, {"pearson", r.ranked[i].second}});
      }
      entry["ranked"] = ranked;
      entry["excluded"] = r.excluded;
    } catch (const Error& e) {
      entry["error"] = {{"kind", to_string(e.kind())}, {"message", e.what()}};
    }
    rankings.push_back(entry);
  }
  csv::write(c.out / "attribute_ranking.csv", ranking);

  csv::Table table6{{"attribute", "accuracy", "labeled_users", "excluded_users"}, {}};
  ojson predictions = ojson::array();
  const LearnOptions options = learn_options(c);
  for (std::size_t a = 0; a < schema.attributes.size(); ++a) {
    ojson entry;
    entry["attribute"] = names[a];
    try {
      const auto p = predict_attribute(profiles, a, schema, c.taxonomy, options);
      table6.rows.push_back({names[a], csv::number(p.cv.mean_accuracy),
                             std::to_string(p.labels.positive.size() + p.labels.negative.size()),
                             std::to_string(p.excluded_users)});
      entry["excluded_users"] = p.excluded_users;
      entry["positive"] = p.labels.positive;
      entry["negative"] = p.labels.negative;
      entry["cv"] = cv_json(p.cv);
    } catch (const Error& e) {
      table6.rows.push_back({names[a], "", "", ""});
      entry["error"] = {{"kind", to_string(e.kind())}, {"message", e.what()}};
    }
    predictions.push_back(entry);
  }
  csv::write(c.out / "table6.csv", table6);

  ojson means = ojson::array();
  for (Eigen::Index t = 0; t < model.rank; ++t) {
    ojson row = ojson::object();
    for (Eigen::Index a = 0; a < attrs.mean.cols(); ++a) {
      row[names[static_cast<std::size_t>(a)]] = attrs.mean(t, a);
    }
    means.push_back(row);
  }
  ojson undefined_attrs = ojson::array();
  for (std::size_t a = 0; a < names.size(); ++a) {
    if (!attrs.attribute_defined[a]) undefined_attrs.push_back(names[a]);
  }
  ojson out;
  out["schema"] = ojson(to_json(schema));
  out["rank"] = model.rank;
  out["iterations"] = model.iterations;
  out["converged"] = model.converged;
  out["initial_error"] = model.initial_error;
  out["error"] = model.error;
  out["type_members"] = attrs.members;
  out["type_attribute_means"] = means;
  out["unnormalized_attributes"] = undefined_attrs;
  out["rankings"] = rankings;
  out["predictions"] = predictions;
  write_json(c.out / "factorize.json", out);
}

void cmd_report(const PipelineConfig& c) {
  ojson report;
  report["schema_version"] = kReportSchemaVersion;
  report["seed"] = c.seed;
  ojson config = ojson(to_json(c));
  config.erase("out");
  report["config"] = config;
  for (const char* stage : {"cluster", "characterize", "correlate", "tasks", "factorize"}) {
    const fs::path path = c.out / (std::string(stage) + ".json");
    require(path, stage);
    report[stage] = read_json(path);
  }
  write_json(c.out / "report.json", report);
}

void run_command(std::string_view command, const PipelineConfig& config) {
  if (command == "synth") return cmd_synth(config);
  if (command == "cluster") return cmd_cluster(config);
  if (command == "characterize") return cmd_characterize(config);
  if (command == "correlate") return cmd_correlate(config);
  if (command == "tasks") return cmd_tasks(config);
  if (command == "factorize") return cmd_factorize(config);
  if (command == "report") return cmd_report(config);
  throw ArgumentError("unknown command '" + std::string(command) + "'");
}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::MissingInput: return 2;
    case ErrorKind::Config: return 3;
    case ErrorKind::UndefinedResult: return 4;
    default: return 1;
  }
}

}  // namespace miner
