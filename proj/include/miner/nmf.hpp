#pragma once

// Non-negative matrix factorization V ~ W H under the Frobenius objective,
// solved with Lee-Seung multiplicative updates.

#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "miner/error.hpp"

namespace miner {

template <typename Scalar>
struct NmfModel {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Matrix W;  // rows x r, per-row type weights
  Matrix H;  // r x cols, per-type column loadings
  Eigen::Index rank = 0;
  int iterations = 0;
  bool converged = false;
  Scalar initial_error = 0;
  Scalar error = 0;                  // ||V - W H||_F
  std::vector<Scalar> error_history;  // after every full iteration
};

struct NmfOptions {
  Eigen::Index rank = 5;
  int max_iter = 500;
  double tol = 1e-6;
  std::uint64_t seed = 0;
};

// Snapshot handed to an observer after each half-update.
template <typename Scalar>
struct NmfStep {
  int iteration = 0;
  bool updated_w = false;  // false: H was just updated
  const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& W;
  const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& H;
  Scalar error = 0;
};

template <typename Scalar>
using NmfObserver = std::function<void(const NmfStep<Scalar>&)>;

// W and H start uniform in (0, 1] under `seed`. Iterates H then W updates
// until the relative error improvement drops below tol or max_iter is
// reached. Throws ArgumentError for negative entries or rank outside
// [1, min(rows, cols)].
template <typename Derived>
NmfModel<typename Derived::Scalar> nmf(const Eigen::MatrixBase<Derived>& v, const NmfOptions& options = {},
                                       const NmfObserver<typename Derived::Scalar>& observer = {}) {
  using Scalar = typename Derived::Scalar;
  using Matrix = typename NmfModel<Scalar>::Matrix;
  const Eigen::Index rows = v.rows(), cols = v.cols(), r = options.rank;
  if (rows == 0 || cols == 0) throw ArgumentError("nmf: empty matrix");
  if (r < 1 || r > std::min(rows, cols)) throw ArgumentError("nmf: rank must lie in [1, min(rows, cols)]");
  if ((v.array() < 0).any()) throw ArgumentError("nmf: input has a negative entry");
  if (!v.allFinite()) throw ArgumentError("nmf: input has a non-finite entry");

  const Matrix V = v;
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw = [&] { return static_cast<Scalar>(1.0 - unit(rng)); };  // (0, 1]

  NmfModel<Scalar> model;
  model.rank = r;
  model.W = Matrix::NullaryExpr(rows, r, draw);
  model.H = Matrix::NullaryExpr(r, cols, draw);
  const Scalar floor = std::numeric_limits<Scalar>::min();
  auto frob = [&] { return static_cast<Scalar>((V - model.W * model.H).norm()); };

  model.initial_error = frob();
  model.error = model.initial_error;
  Scalar previous = model.initial_error;
  for (int it = 1; it <= options.max_iter; ++it) {
    {
      const Matrix num = model.W.transpose() * V;
      const Matrix den = (model.W.transpose() * model.W) * model.H;
      model.H = model.H.cwiseProduct(num.cwiseQuotient(den.cwiseMax(floor)));
    }
    if (observer) observer(NmfStep<Scalar>{it, false, model.W, model.H, frob()});
    {
      const Matrix num = V * model.H.transpose();
      const Matrix den = model.W * (model.H * model.H.transpose());
      model.W = model.W.cwiseProduct(num.cwiseQuotient(den.cwiseMax(floor)));
    }
    model.error = frob();
    model.error_history.push_back(model.error);
    model.iterations = it;
    if (observer) observer(NmfStep<Scalar>{it, true, model.W, model.H, model.error});
    if (model.error == 0 || previous - model.error < static_cast<Scalar>(options.tol) * previous) {
      model.converged = true;
      break;
    }
    previous = model.error;
  }
  return model;
}

// Argmax over each row of W; ties go to the lower type index.
template <typename Scalar>
std::vector<Eigen::Index> assign_user_types(const NmfModel<Scalar>& model) {
  std::vector<Eigen::Index> types(static_cast<std::size_t>(model.W.rows()));
  for (Eigen::Index u = 0; u < model.W.rows(); ++u) {
    Eigen::Index best = 0;
    for (Eigen::Index t = 1; t < model.W.cols(); ++t) {
      if (model.W(u, t) > model.W(u, best)) best = t;
    }
    types[static_cast<std::size_t>(u)] = best;
  }
  return types;
}

}  // namespace miner
