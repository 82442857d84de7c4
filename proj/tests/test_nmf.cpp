#include <algorithm>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "miner/error.hpp"
#include "miner/nmf.hpp"

using namespace miner;

namespace {

// Users in `groups` blocks, each loading on its own disjoint column block.
Eigen::MatrixXd block_matrix(int groups, int per_group, int cols_per_group, std::uint64_t seed,
                             std::vector<Eigen::Index>& truth) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> noise(0.0, 0.05), strength(0.5, 1.5);
  Eigen::MatrixXd v(groups * per_group, groups * cols_per_group);
  truth.clear();
  for (int g = 0; g < groups; ++g) {
    for (int u = 0; u < per_group; ++u) {
      const Eigen::Index row = g * per_group + u;
      const double s = strength(rng);
      for (Eigen::Index c = 0; c < v.cols(); ++c) {
        v(row, c) = noise(rng) + (c / cols_per_group == g ? s : 0.0);
      }
      truth.push_back(g);
    }
  }
  return v;
}

double best_agreement(const std::vector<Eigen::Index>& got, const std::vector<Eigen::Index>& truth, int r) {
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(r));
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t best = 0;
  do {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < got.size(); ++i) hits += perm[static_cast<std::size_t>(got[i])] == truth[i] ? 1 : 0;
    best = std::max(best, hits);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / static_cast<double>(got.size());
}

}  // namespace

TEST(Nmf, RankOneOuterProduct) {
  Eigen::VectorXd a(6), b(4);
  a << 1, 2, 0.5, 3, 0, 1.5;
  b << 0.2, 1, 2, 0.7;
  const Eigen::MatrixXd v = a * b.transpose();
  NmfOptions o;
  o.rank = 1;
  o.tol = 0;
  const auto m = nmf(v, o);
  EXPECT_LE(m.error / v.norm(), 1e-4);
}

TEST(Nmf, DiagonalExact) {
  const Eigen::MatrixXd v = 2 * Eigen::MatrixXd::Identity(2, 2);
  NmfOptions o;
  o.rank = 2;
  o.tol = 0;
  o.max_iter = 5000;
  EXPECT_LE(nmf(v, o).error, 1e-6);
}

TEST(Nmf, RankTwoExact) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Eigen::MatrixXd w = Eigen::MatrixXd::NullaryExpr(12, 2, [&] { return u(rng); });
  const Eigen::MatrixXd h = Eigen::MatrixXd::NullaryExpr(2, 9, [&] { return u(rng); });
  const Eigen::MatrixXd v = w * h;
  NmfOptions o;
  o.rank = 2;
  o.max_iter = 500;
  o.tol = 0;
  const auto m = nmf(v, o);
  EXPECT_LE(m.error / v.norm(), 1e-2);
  EXPECT_LE(m.iterations, 500);
}

TEST(Nmf, MonotoneAndNonNegative) {
  std::vector<Eigen::Index> truth;
  const Eigen::MatrixXd v = block_matrix(4, 10, 3, 2, truth);
  NmfOptions o;
  o.rank = 4;
  o.tol = 0;
  o.max_iter = 300;
  double last = std::numeric_limits<double>::infinity();
  int steps = 0;
  bool negative = false, increased = false;
  const auto m = nmf(v, o, [&](const NmfStep<double>& s) {
    ++steps;
    negative = negative || (s.W.array() < 0).any() || (s.H.array() < 0).any();
    increased = increased || s.error > last + 1e-9;
    last = s.error;
  });
  EXPECT_EQ(steps, 600);
  EXPECT_FALSE(negative);
  EXPECT_FALSE(increased);
  ASSERT_EQ(m.error_history.size(), 300u);
  EXPECT_LE(m.error_history.front(), m.initial_error + 1e-9);
  for (std::size_t i = 1; i < m.error_history.size(); ++i) {
    EXPECT_LE(m.error_history[i], m.error_history[i - 1] + 1e-9);
  }
}

TEST(Nmf, StopsOnTolerance) {
  std::vector<Eigen::Index> truth;
  const Eigen::MatrixXd v = block_matrix(3, 5, 2, 4, truth);
  NmfOptions o;
  o.rank = 3;
  o.tol = 1e-3;
  const auto m = nmf(v, o);
  EXPECT_TRUE(m.converged);
  EXPECT_LT(m.iterations, o.max_iter);
}

TEST(Nmf, Deterministic) {
  std::vector<Eigen::Index> truth;
  const Eigen::MatrixXd v = block_matrix(3, 6, 2, 5, truth);
  NmfOptions o;
  o.rank = 3;
  o.seed = 77;
  const auto a = nmf(v, o), b = nmf(v, o);
  EXPECT_EQ(a.W, b.W);
  EXPECT_EQ(a.H, b.H);
}

TEST(Nmf, Errors) {
  Eigen::MatrixXd v = Eigen::MatrixXd::Ones(3, 2);
  NmfOptions o;
  o.rank = 3;
  EXPECT_THROW(nmf(v, o), ArgumentError);
  o.rank = 0;
  EXPECT_THROW(nmf(v, o), ArgumentError);
  o.rank = 1;
  v(1, 1) = -0.1;
  EXPECT_THROW(nmf(v, o), ArgumentError);
  EXPECT_THROW(nmf(Eigen::MatrixXd(0, 0), o), ArgumentError);
}

TEST(Nmf, FloatScalar) {
  const Eigen::MatrixXf v = 2 * Eigen::MatrixXf::Identity(3, 3);
  NmfOptions o;
  o.rank = 3;
  const auto m = nmf(v, o);
  EXPECT_LT(m.error, m.initial_error);
}

TEST(AssignTypes, ArgmaxAndTies) {
  NmfModel<double> m;
  m.W.resize(3, 5);
  m.W << 0.9, 0.1, 0, 0, 0,  //
      0.2, 0.2, 0.2, 0.2, 0.2,  //
      0, 0.1, 0.3, 0.3, 0.1;
  EXPECT_EQ(assign_user_types(m), (std::vector<Eigen::Index>{0, 0, 2}));
}

TEST(AssignTypes, RowRescalingInvariance) {
  std::vector<Eigen::Index> truth;
  const Eigen::MatrixXd v = block_matrix(5, 8, 3, 1, truth);
  auto m = nmf(v, NmfOptions{});
  const auto before = assign_user_types(m);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  for (Eigen::Index u = 0; u < m.W.rows(); ++u) m.W.row(u) *= scale(rng);
  EXPECT_EQ(assign_user_types(m), before);
}

TEST(AssignTypes, RecoversPlantedBlocks) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    std::vector<Eigen::Index> truth;
    const Eigen::MatrixXd v = block_matrix(5, 20, 4, seed, truth);
    NmfOptions o;
    o.seed = seed;
    const auto types = assign_user_types(nmf(v, o));
    EXPECT_GE(best_agreement(types, truth, 5), 0.95) << "seed " << seed;
  }
}
