#include "miner/stats.hpp"

namespace miner {

CorrelationMatrix pearson_matrix(const Eigen::MatrixXd& data, const std::vector<std::string>& labels) {
  if (static_cast<std::size_t>(data.cols()) != labels.size()) {
    throw ArgumentError("pearson_matrix: one label per column required");
  }
  if (data.rows() < 2) throw ArgumentError("pearson_matrix: at least two observations are required");
  CorrelationMatrix out;
  std::vector<Eigen::Index> kept;
  for (Eigen::Index c = 0; c < data.cols(); ++c) {
    if (data.col(c).minCoeff() == data.col(c).maxCoeff()) {
      out.excluded.push_back(labels[static_cast<std::size_t>(c)]);
    } else {
      kept.push_back(c);
      out.labels.push_back(labels[static_cast<std::size_t>(c)]);
    }
  }
  const auto n = static_cast<Eigen::Index>(kept.size());
  out.values = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double r = pearson(data.col(kept[i]), data.col(kept[j]));
      out.values(i, j) = r;
      out.values(j, i) = r;
    }
  }
  return out;
}

CorrelationMatrix pearson_matrix(const std::vector<UserProfile>& profiles, const Taxonomy& taxonomy) {
  if (profiles.size() < 2) throw ArgumentError("pearson_matrix: at least two users are required");
  const auto width = static_cast<Eigen::Index>(taxonomy.size() + 1);
  Eigen::MatrixXd data(static_cast<Eigen::Index>(profiles.size()), width);
  for (std::size_t u = 0; u < profiles.size(); ++u) {
    const auto full = profiles[u].full_frequency();
    if (full.size() != width) throw ArgumentError("profile " + profiles[u].user_id + " does not match the taxonomy");
    data.row(static_cast<Eigen::Index>(u)) = full.transpose();
  }
  std::vector<std::string> labels = taxonomy.categories;
  labels.push_back(taxonomy.selfie);
  return pearson_matrix(data, labels);
}

namespace {

std::optional<double> mean_defined(const std::vector<UserProfile>& group,
                                   std::optional<double> UserProfile::*field) {
  double sum = 0;
  std::size_t n = 0;
  for (const auto& p : group) {
    if (const auto& v = p.*field) {
      sum += *v;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

Eigen::VectorXd mean_frequency(const std::vector<UserProfile>& group, std::size_t width) {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(width));
  for (const auto& p : group) {
    if (static_cast<std::size_t>(p.freq.size()) != width) {
      throw ArgumentError("profile " + p.user_id + " does not match the taxonomy");
    }
    sum += p.freq;
  }
  return sum / static_cast<double>(group.size());
}

}  // namespace

GroupComparison compare_groups(const std::vector<UserProfile>& a, const std::vector<UserProfile>& b,
                               const Taxonomy& taxonomy) {
  if (a.empty() || b.empty()) throw ArgumentError("compare_groups: both groups must be nonempty");
  GroupComparison out;
  out.labels = taxonomy.categories;
  out.mean_a = mean_frequency(a, taxonomy.size());
  out.mean_b = mean_frequency(b, taxonomy.size());
  out.difference = out.mean_a - out.mean_b;
  out.inertia_a = mean_defined(a, &UserProfile::inertia);
  out.inertia_b = mean_defined(b, &UserProfile::inertia);
  out.singleness_a = mean_defined(a, &UserProfile::singleness);
  out.singleness_b = mean_defined(b, &UserProfile::singleness);
  return out;
}

}  // namespace miner
