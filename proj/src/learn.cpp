#include "miner/learn.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "miner/error.hpp"
#include "miner/parallel.hpp"

namespace miner {

const char* to_string(Task task) noexcept {
  switch (task) {
    case Task::R1: return "R1";
    case Task::R2: return "R2";
    case Task::R3: return "R3";
    case Task::R4: return "R4";
    case Task::R5: return "R5";
    case Task::R6a: return "R6a";
    case Task::R6b: return "R6b";
  }
  return "";
}

std::optional<Task> task_from_string(std::string_view name) noexcept {
  for (const Task t : kAllTasks) {
    if (name == to_string(t)) return t;
  }
  return std::nullopt;
}

SelfieMeasure task_measure(Task task) noexcept {
  switch (task) {
    case Task::R1: return SelfieMeasure::Frequency;
    case Task::R2: return SelfieMeasure::Inertia;
    case Task::R3: return SelfieMeasure::Singleness;
    case Task::R4: return SelfieMeasure::GroupTendency;
    case Task::R5: return SelfieMeasure::OutdoorTendency;
    case Task::R6a: return SelfieMeasure::HoldingTendency;
    case Task::R6b: return SelfieMeasure::FaceMaskTendency;
  }
  return SelfieMeasure::Frequency;
}

std::string to_string(const Fusion& fusion) {
  std::string out;
  auto add = [&](bool on, const char* name) {
    if (!on) return;
    if (!out.empty()) out += '+';
    out += name;
  };
  add(fusion.f, "F");
  add(fusion.s, "S");
  add(fusion.i, "I");
  return out;
}

std::optional<Fusion> fusion_from_string(std::string_view name) noexcept {
  for (const auto& f : kAllFusions) {
    if (name == to_string(f)) return f;
  }
  if (name == "F+I+S") return Fusion{true, true, true};
  if (name == "I+S") return Fusion{false, true, true};
  return std::nullopt;
}

Labeled quantile_label(const std::vector<std::string>& users, const std::vector<std::optional<double>>& measure,
                       double q) {
  if (users.size() != measure.size()) throw ArgumentError("quantile_label: one measure per user required");
  if (!(q > 0 && q <= 0.5)) throw ArgumentError("quantile_label: q must lie in (0, 0.5]");
  for (std::size_t i = 0; i < users.size(); ++i) {
    if (!measure[i]) throw PreconditionError("quantile_label: measure undefined for user " + users[i]);
  }
  std::vector<std::size_t> order(users.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (*measure[a] != *measure[b]) return *measure[a] > *measure[b];
    return users[a] < users[b];
  });
  const auto n = static_cast<std::size_t>(std::floor(q * static_cast<double>(users.size())));
  Labeled out;
  for (std::size_t i = 0; i < n; ++i) out.positive.push_back(users[order[i]]);
  for (std::size_t i = users.size() - n; i < users.size(); ++i) out.negative.push_back(users[order[i]]);
  return out;
}

std::int64_t task_filter_count(Task task, const UserProfile& p) noexcept {
  const auto& sub = p.subcategory_occurrences;
  const auto indoor = sub[static_cast<std::size_t>(SelfieKind::Indoor)];
  switch (task) {
    case Task::R1: return p.total_occurrences;
    case Task::R2:
    case Task::R3: return p.selfie_occurrences;
    case Task::R4: return p.one_face_occurrences + p.multi_face_occurrences;
    case Task::R5: return sub[static_cast<std::size_t>(SelfieKind::Outdoor)] + indoor;
    case Task::R6a: return sub[static_cast<std::size_t>(SelfieKind::Holding)] + indoor;
    case Task::R6b: return sub[static_cast<std::size_t>(SelfieKind::FaceMask)] + indoor;
  }
  return 0;
}

std::vector<UserProfile> filter_for_task(Task task, const std::vector<UserProfile>& profiles) {
  if (task == Task::R1) return profiles;
  const std::size_t n = profiles.size();
  const std::size_t drop = (task == Task::R2 || task == Task::R3) ? n / 3 : n / 4;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto ca = task_filter_count(task, profiles[a]);
    const auto cb = task_filter_count(task, profiles[b]);
    if (ca != cb) return ca < cb;
    return profiles[a].user_id < profiles[b].user_id;
  });
  std::vector<bool> dropped(n, false);
  for (std::size_t i = 0; i < drop; ++i) dropped[order[i]] = true;
  std::vector<UserProfile> out;
  out.reserve(n - drop);
  for (std::size_t i = 0; i < n; ++i) {
    if (!dropped[i]) out.push_back(profiles[i]);
  }
  return out;
}

std::vector<int> stratified_folds(const std::vector<int>& y, int folds, std::uint64_t seed) {
  if (folds < 2) throw ArgumentError("kfold_cv: at least two folds are required");
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < y.size(); ++i) (y[i] > 0 ? pos : neg).push_back(i);
  std::mt19937_64 rng(seed);
  std::shuffle(pos.begin(), pos.end(), rng);
  std::shuffle(neg.begin(), neg.end(), rng);
  std::vector<int> fold_of(y.size(), 0);
  int next = 0;
  for (const auto i : pos) {
    fold_of[i] = next;
    next = (next + 1) % folds;
  }
  for (const auto i : neg) {
    fold_of[i] = next;
    next = (next + 1) % folds;
  }
  return fold_of;
}

CvResult kfold_cv(const Eigen::MatrixXd& x, const std::vector<int>& y, int folds, const SvmOptions& svm) {
  const auto n = static_cast<std::size_t>(x.rows());
  if (y.size() != n) throw ArgumentError("kfold_cv: one label per row required");
  if (folds < 2) throw ArgumentError("kfold_cv: at least two folds are required");
  if (n < static_cast<std::size_t>(folds)) {
    throw ArgumentError("kfold_cv: " + std::to_string(n) + " samples cannot fill " + std::to_string(folds) + " folds");
  }
  const bool has_pos = std::find(y.begin(), y.end(), 1) != y.end();
  const bool has_neg = std::find(y.begin(), y.end(), -1) != y.end();
  if (!has_pos || !has_neg) throw ArgumentError("kfold_cv: both classes must be present");

  CvResult out;
  out.seed = svm.seed;
  out.fold_of = stratified_folds(y, folds, svm.seed);
  out.fold_accuracy.assign(static_cast<std::size_t>(folds), 0.0);

  parallel_for(static_cast<std::size_t>(folds), [&](std::size_t fold) {
    std::vector<Eigen::Index> train, test;
    for (std::size_t i = 0; i < n; ++i) {
      (out.fold_of[i] == static_cast<int>(fold) ? test : train).push_back(static_cast<Eigen::Index>(i));
    }
    Eigen::MatrixXd x_train = x(train, Eigen::all);
    Eigen::MatrixXd x_test = x(test, Eigen::all);
    std::vector<int> y_train, y_test;
    for (const auto i : train) y_train.push_back(y[static_cast<std::size_t>(i)]);
    for (const auto i : test) y_test.push_back(y[static_cast<std::size_t>(i)]);

    // z-score with training statistics only
    const Eigen::RowVectorXd mean = x_train.colwise().mean();
    Eigen::RowVectorXd scale =
        ((x_train.rowwise() - mean).array().square().colwise().sum() / static_cast<double>(x_train.rows())).sqrt();
    for (Eigen::Index c = 0; c < scale.size(); ++c) {
      if (!(scale(c) > 0)) scale(c) = 1.0;
    }
    x_train = (x_train.rowwise() - mean).array().rowwise() / scale.array();
    x_test = (x_test.rowwise() - mean).array().rowwise() / scale.array();

    SvmOptions opts = svm;
    opts.seed = svm.seed + fold;
    const auto model = train_svm(x_train, y_train, opts);
    out.fold_accuracy[fold] = accuracy(model, x_test, y_test);
  });
  out.mean_accuracy =
      std::accumulate(out.fold_accuracy.begin(), out.fold_accuracy.end(), 0.0) / static_cast<double>(folds);
  return out;
}

std::optional<Eigen::VectorXd> fused_row(const UserProfile& p, const Fusion& fusion) {
  if ((fusion.i && !p.inertia) || (fusion.s && !p.singleness)) return std::nullopt;
  const Eigen::Index width = (fusion.f ? p.freq.size() : 0) + (fusion.i ? 1 : 0) + (fusion.s ? 1 : 0);
  if (width == 0) throw ArgumentError("fusion selects no features");
  Eigen::VectorXd row(width);
  Eigen::Index at = 0;
  if (fusion.f) {
    row.segment(0, p.freq.size()) = p.freq;
    at = p.freq.size();
  }
  if (fusion.i) row(at++) = *p.inertia;
  if (fusion.s) row(at++) = *p.singleness;
  return row;
}

void labeled_rows(const std::vector<UserProfile>& profiles, const Labeled& labels, const Fusion& fusion,
                  Eigen::MatrixXd& x, std::vector<int>& y) {
  std::map<std::string_view, const UserProfile*> by_id;
  for (const auto& p : profiles) by_id.emplace(p.user_id, &p);
  std::vector<Eigen::VectorXd> rows;
  y.clear();
  auto add = [&](const std::string& id, int label) {
    const auto it = by_id.find(id);
    if (it == by_id.end()) throw ArgumentError("unknown user " + id);
    auto row = fused_row(*it->second, fusion);
    if (!row) throw PreconditionError("user " + id + " lacks a feature required by fusion " + to_string(fusion));
    rows.push_back(std::move(*row));
    y.push_back(label);
  };
  for (const auto& id : labels.positive) add(id, 1);
  for (const auto& id : labels.negative) add(id, -1);
  const Eigen::Index width = rows.empty() ? 0 : rows.front().size();
  x.resize(static_cast<Eigen::Index>(rows.size()), width);
  for (std::size_t i = 0; i < rows.size(); ++i) x.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
}

TaskResult run_task(Task task, const Fusion& fusion, const std::vector<UserProfile>& profiles,
                    const LearnOptions& options) {
  TaskResult result;
  result.task = task;
  result.fusion = fusion;
  result.measure = task_measure(task);

  const auto filtered = filter_for_task(task, profiles);
  result.filtered_users = filtered.size();
  std::vector<UserProfile> usable;
  usable.reserve(filtered.size());
  for (const auto& p : filtered) {
    if (fused_row(p, fusion)) {
      usable.push_back(p);
    } else {
      ++result.excluded_users;
    }
  }

  std::vector<std::string> ids;
  std::vector<std::optional<double>> measure;
  for (const auto& p : usable) {
    ids.push_back(p.user_id);
    measure.push_back(p.measure(result.measure));
  }
  try {
    result.labels = quantile_label(ids, measure, options.q);
  } catch (const PreconditionError& e) {
    throw UndefinedResult(std::string("task ") + to_string(task) + ": " + e.what());
  }

  Eigen::MatrixXd x;
  std::vector<int> y;
  labeled_rows(usable, result.labels, fusion, x, y);
  result.cv = kfold_cv(x, y, options.folds, options.svm);
  return result;
}

}  // namespace miner
