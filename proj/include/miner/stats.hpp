#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "miner/charmetrics.hpp"
#include "miner/error.hpp"
#include "miner/taxonomy.hpp"

namespace miner {

// Sample Pearson correlation of two equally long vectors. Throws
// ArgumentError on length mismatch or fewer than two entries, and
// UndefinedResult when either vector is constant.
template <typename DX, typename DY>
typename DX::Scalar pearson(const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DY>& y) {
  using Scalar = typename DX::Scalar;
  if (x.size() != y.size()) throw ArgumentError("pearson: vectors differ in length");
  if (x.size() < 2) throw ArgumentError("pearson: at least two observations are required");
  if (x.minCoeff() == x.maxCoeff() || y.minCoeff() == y.maxCoeff()) {
    throw UndefinedResult("pearson: zero variance");
  }
  const auto xc = (x.array() - x.mean()).matrix().eval();
  const auto yc = (y.array() - y.mean()).matrix().eval();
  const Scalar r = xc.dot(yc) / std::sqrt(xc.squaredNorm() * yc.squaredNorm());
  return std::clamp(r, Scalar(-1), Scalar(1));
}

struct CorrelationMatrix {
  std::vector<std::string> labels;    // retained variables
  Eigen::MatrixXd values;             // symmetric, unit diagonal
  std::vector<std::string> excluded;  // zero-variance variables
};

// Correlation between the columns of `data` (rows are observations).
// Zero-variance columns are dropped and listed in `excluded`.
CorrelationMatrix pearson_matrix(const Eigen::MatrixXd& data, const std::vector<std::string>& labels);

// Category-by-category correlation of the users' full frequency vectors
// (taxonomy categories plus Selfie). Throws ArgumentError for fewer than two
// users.
CorrelationMatrix pearson_matrix(const std::vector<UserProfile>& profiles, const Taxonomy& taxonomy);

struct GroupComparison {
  std::vector<std::string> labels;
  Eigen::VectorXd mean_a;
  Eigen::VectorXd mean_b;
  Eigen::VectorXd difference;  // mean_a - mean_b
  std::optional<double> inertia_a, inertia_b;
  std::optional<double> singleness_a, singleness_b;
};

// Componentwise mean F-feature of each group and their difference, plus the
// mean I/S features over members where defined.
GroupComparison compare_groups(const std::vector<UserProfile>& a, const std::vector<UserProfile>& b,
                               const Taxonomy& taxonomy);

}  // namespace miner
