#pragma once

// Linear soft-margin SVM trained with Platt's sequential minimal
// optimization: the two-multiplier analytic step, the max |E1 - E2| second
// choice heuristic, and alternating full / non-bound sweeps.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "miner/error.hpp"

namespace miner {

struct SvmOptions {
  double C = 1.0;
  double tol = 1e-3;
  int max_passes = 10;  // cap on full sweeps over the training set
  std::uint64_t seed = 0;
};

template <typename Scalar>
struct SvmModel {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> w;
  Scalar b = 0;
  SvmOptions options;
  std::vector<Scalar> alpha;
  Eigen::Index support_vectors = 0;
  int full_sweeps = 0;
  bool converged = false;

  template <typename Derived>
  Scalar decision(const Eigen::MatrixBase<Derived>& x) const {
    return w.dot(x) + b;
  }

  // +1 / -1 per row; a zero decision value maps to +1.
  template <typename Derived>
  std::vector<int> predict(const Eigen::MatrixBase<Derived>& rows) const {
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> f = (rows * w).array() + b;
    std::vector<int> out(static_cast<std::size_t>(f.size()));
    for (Eigen::Index i = 0; i < f.size(); ++i) out[static_cast<std::size_t>(i)] = f(i) >= 0 ? 1 : -1;
    return out;
  }
};

// Fraction of rows whose predicted sign equals the label.
template <typename Scalar, typename Derived>
double accuracy(const SvmModel<Scalar>& model, const Eigen::MatrixBase<Derived>& rows, const std::vector<int>& y) {
  if (y.empty()) return 0.0;
  const auto predicted = model.predict(rows);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < y.size(); ++i) hits += predicted[i] == y[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(y.size());
}

namespace detail {

template <typename Scalar>
class SmoSolver {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  SmoSolver(const Matrix& x, const std::vector<int>& y, const SvmOptions& options)
      : x_(x), y_(y), opt_(options), C_(static_cast<Scalar>(options.C)), tol_(static_cast<Scalar>(options.tol)),
        n_(x.rows()), rng_(options.seed) {
    gram_ = x_ * x_.transpose();
    alpha_ = Vector::Zero(n_);
    f_ = Vector::Zero(n_);
  }

  SvmModel<Scalar> solve() {
    SvmModel<Scalar> model;
    model.options = opt_;
    int changed = 0;
    bool examine_all = true;
    int nonbound_sweeps = 0;
    bool converged = false;
    while (true) {
      if (examine_all) {
        if (model.full_sweeps >= opt_.max_passes) break;
        ++model.full_sweeps;
        changed = 0;
        for (Eigen::Index i = 0; i < n_; ++i) changed += examine(i);
        if (changed == 0) {
          converged = true;
          break;
        }
        examine_all = false;
      } else {
        if (++nonbound_sweeps > kMaxNonboundSweeps) break;
        changed = 0;
        for (Eigen::Index i = 0; i < n_; ++i) {
          if (nonbound(i)) changed += examine(i);
        }
        if (changed == 0) examine_all = true;
      }
    }
    model.converged = converged;
    model.w = x_.transpose() * (alpha_.array() * label_vector().array()).matrix();
    model.b = b_;
    model.alpha.assign(alpha_.data(), alpha_.data() + n_);
    model.support_vectors = (alpha_.array() > 0).count();
    return model;
  }

 private:
  static constexpr int kMaxNonboundSweeps = 100000;
  static constexpr Scalar kEps = Scalar(1e-8);

  Vector label_vector() const {
    Vector v(n_);
    for (Eigen::Index i = 0; i < n_; ++i) v(i) = static_cast<Scalar>(y_[static_cast<std::size_t>(i)]);
    return v;
  }

  Scalar label(Eigen::Index i) const { return static_cast<Scalar>(y_[static_cast<std::size_t>(i)]); }
  Scalar error(Eigen::Index i) const { return f_(i) + b_ - label(i); }
  bool nonbound(Eigen::Index i) const { return alpha_(i) > 0 && alpha_(i) < C_; }

  int examine(Eigen::Index i2) {
    const Scalar y2 = label(i2);
    const Scalar a2 = alpha_(i2);
    const Scalar e2 = error(i2);
    const Scalar r2 = e2 * y2;
    if (!((r2 < -tol_ && a2 < C_) || (r2 > tol_ && a2 > 0))) return 0;

    Eigen::Index best = -1;
    Scalar best_gap = -1;
    Eigen::Index nonbound_count = 0;
    for (Eigen::Index i = 0; i < n_; ++i) {
      if (!nonbound(i)) continue;
      ++nonbound_count;
      const Scalar gap = std::abs(error(i) - e2);
      if (gap > best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    if (nonbound_count > 1 && best >= 0 && step(best, i2)) return 1;

    std::uniform_int_distribution<Eigen::Index> start_dist(0, n_ - 1);
    Eigen::Index start = start_dist(rng_);
    for (Eigen::Index k = 0; k < n_; ++k) {
      const Eigen::Index i1 = (start + k) % n_;
      if (nonbound(i1) && step(i1, i2)) return 1;
    }
    start = start_dist(rng_);
    for (Eigen::Index k = 0; k < n_; ++k) {
      const Eigen::Index i1 = (start + k) % n_;
      if (step(i1, i2)) return 1;
    }
    return 0;
  }

  bool step(Eigen::Index i1, Eigen::Index i2) {
    if (i1 == i2) return false;
    const Scalar a1 = alpha_(i1), a2 = alpha_(i2);
    const Scalar y1 = label(i1), y2 = label(i2);
    const Scalar e1 = error(i1), e2 = error(i2);
    const Scalar s = y1 * y2;
    Scalar lo, hi;
    if (y1 != y2) {
      lo = std::max(Scalar(0), a2 - a1);
      hi = std::min(C_, C_ + a2 - a1);
    } else {
      lo = std::max(Scalar(0), a1 + a2 - C_);
      hi = std::min(C_, a1 + a2);
    }
    if (lo >= hi) return false;

    const Scalar k11 = gram_(i1, i1), k12 = gram_(i1, i2), k22 = gram_(i2, i2);
    const Scalar eta = k11 + k22 - 2 * k12;
    Scalar a2_new;
    if (eta > 0) {
      a2_new = std::clamp(a2 + y2 * (e1 - e2) / eta, lo, hi);
    } else {
      // Objective at both ends of the feasible segment.
      const Scalar f1 = y1 * (e1 - b_) - a1 * k11 - s * a2 * k12;
      const Scalar f2 = y2 * (e2 - b_) - s * a1 * k12 - a2 * k22;
      const Scalar l1 = a1 + s * (a2 - lo);
      const Scalar h1 = a1 + s * (a2 - hi);
      const Scalar lobj = l1 * f1 + lo * f2 + l1 * l1 * k11 / 2 + lo * lo * k22 / 2 + s * lo * l1 * k12;
      const Scalar hobj = h1 * f1 + hi * f2 + h1 * h1 * k11 / 2 + hi * hi * k22 / 2 + s * hi * h1 * k12;
      if (lobj < hobj - kEps) {
        a2_new = lo;
      } else if (lobj > hobj + kEps) {
        a2_new = hi;
      } else {
        a2_new = a2;
      }
    }
    if (a2_new < kEps * C_) a2_new = 0;
    if (a2_new > C_ * (1 - kEps)) a2_new = C_;
    if (std::abs(a2_new - a2) < kEps * (a2_new + a2 + kEps)) return false;

    Scalar a1_new = a1 + s * (a2 - a2_new);
    if (a1_new < kEps * C_) a1_new = 0;
    if (a1_new > C_ * (1 - kEps)) a1_new = C_;

    const Scalar d1 = y1 * (a1_new - a1);
    const Scalar d2 = y2 * (a2_new - a2);
    const Scalar b1 = b_ - e1 - d1 * k11 - d2 * k12;
    const Scalar b2 = b_ - e2 - d1 * k12 - d2 * k22;
    if (a1_new > 0 && a1_new < C_) {
      b_ = b1;
    } else if (a2_new > 0 && a2_new < C_) {
      b_ = b2;
    } else {
      b_ = (b1 + b2) / 2;
    }
    f_ += d1 * gram_.col(i1) + d2 * gram_.col(i2);
    alpha_(i1) = a1_new;
    alpha_(i2) = a2_new;
    return true;
  }

  const Matrix& x_;
  const std::vector<int>& y_;
  SvmOptions opt_;
  Scalar C_;
  Scalar tol_;
  Eigen::Index n_;
  std::mt19937_64 rng_;
  Matrix gram_;
  Vector alpha_;
  Vector f_;  // w . x_i without the bias
  Scalar b_ = 0;
};

}  // namespace detail

// Trains on the rows of `x` with labels in {-1, +1}. Throws ArgumentError on
// single-class input, label/row mismatch or non-finite rows.
template <typename Derived>
SvmModel<typename Derived::Scalar> train_svm(const Eigen::MatrixBase<Derived>& x, const std::vector<int>& y,
                                             const SvmOptions& options = {}) {
  using Scalar = typename Derived::Scalar;
  if (static_cast<Eigen::Index>(y.size()) != x.rows()) throw ArgumentError("train_svm: one label per row required");
  if (options.C <= 0) throw ArgumentError("train_svm: C must be positive");
  bool has_pos = false, has_neg = false;
  for (const int label : y) {
    if (label == 1) {
      has_pos = true;
    } else if (label == -1) {
      has_neg = true;
    } else {
      throw ArgumentError("train_svm: labels must be +1 or -1");
    }
  }
  if (!has_pos || !has_neg) throw ArgumentError("train_svm: both classes must be present");
  if (!x.allFinite()) throw ArgumentError("train_svm: non-finite feature value");
  const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> rows = x;
  return detail::SmoSolver<Scalar>(rows, y, options).solve();
}

}  // namespace miner
