#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "miner/charmetrics.hpp"
#include "miner/svm.hpp"

namespace miner {

// Selfie-behavior prediction tasks: R1-R3 (frequency, inertia, singleness)
// and the tendency tasks R4 (group), R5 (outdoor), R6a (holding), R6b (mask).
enum class Task { R1, R2, R3, R4, R5, R6a, R6b };

inline constexpr Task kAllTasks[] = {Task::R1, Task::R2, Task::R3, Task::R4, Task::R5, Task::R6a, Task::R6b};

const char* to_string(Task task) noexcept;
std::optional<Task> task_from_string(std::string_view name) noexcept;
SelfieMeasure task_measure(Task task) noexcept;

// Which user-feature blocks are concatenated into a row.
struct Fusion {
  bool f = true;
  bool i = false;
  bool s = false;

  bool operator==(const Fusion&) const = default;
};

// F, I, S, F+I, F+S, S+I, F+S+I.
inline constexpr Fusion kAllFusions[] = {{true, false, false}, {false, true, false}, {false, false, true},
                                         {true, true, false},  {true, false, true},  {false, true, true},
                                         {true, true, true}};

std::string to_string(const Fusion& fusion);
std::optional<Fusion> fusion_from_string(std::string_view name) noexcept;

struct Labeled {
  std::vector<std::string> positive;
  std::vector<std::string> negative;
};

// Sorts descending by measure (ties by user id ascending); the first
// floor(qN) users are positive, the last floor(qN) negative. Throws
// PreconditionError on an undefined measure and ArgumentError for q outside
// (0, 0.5].
Labeled quantile_label(const std::vector<std::string>& users, const std::vector<std::optional<double>>& measure,
                       double q = 0.25);

// R1 keeps everyone; R2/R3 drop the bottom floor(N/3) users by selfie
// occurrences; R4-R6 drop the bottom floor(N/4) by the task's two-subcategory
// occurrence sum. Ties are broken by user id.
std::vector<UserProfile> filter_for_task(Task task, const std::vector<UserProfile>& profiles);

// Occurrence total the task filter ranks by.
std::int64_t task_filter_count(Task task, const UserProfile& profile) noexcept;

struct CvResult {
  std::vector<double> fold_accuracy;
  double mean_accuracy = 0;
  std::uint64_t seed = 0;
  std::vector<int> fold_of;  // fold index per sample
};

// Stratified assignment: each class is shuffled and dealt round-robin, so
// fold sizes and per-fold class counts differ by at most one.
std::vector<int> stratified_folds(const std::vector<int>& y, int folds, std::uint64_t seed);

// Stratified k-fold CV of the linear SVM. Columns are z-scored with
// training-fold statistics. Throws ArgumentError when N < folds or a class
// is missing.
CvResult kfold_cv(const Eigen::MatrixXd& x, const std::vector<int>& y, int folds, const SvmOptions& svm);

struct LearnOptions {
  double q = 0.25;
  int folds = 10;
  SvmOptions svm;
};

// Feature row of one profile for the given fusion (F block, then I, then S).
// Returns nullopt when a requested scalar feature is undefined.
std::optional<Eigen::VectorXd> fused_row(const UserProfile& profile, const Fusion& fusion);

struct TaskResult {
  Task task = Task::R1;
  Fusion fusion;
  SelfieMeasure measure = SelfieMeasure::Frequency;
  std::size_t filtered_users = 0;  // users surviving the task filter
  std::size_t excluded_users = 0;  // dropped for an undefined fused feature
  Labeled labels;
  CvResult cv;
};

TaskResult run_task(Task task, const Fusion& fusion, const std::vector<UserProfile>& profiles,
                    const LearnOptions& options = {});

// Labeled rows for a set of positive and negative users in `profiles`.
void labeled_rows(const std::vector<UserProfile>& profiles, const Labeled& labels, const Fusion& fusion,
                  Eigen::MatrixXd& x, std::vector<int>& y);

}  // namespace miner
