#pragma once

// Lloyd's k-means with k-means++ seeding, the centroid-based (simplified)
// silhouette coefficient, and silhouette-curve model selection.
//
// Points are the rows of a dense matrix. All kernels are templated on the
// scalar type of the input expression.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "miner/error.hpp"
#include "miner/parallel.hpp"

namespace miner {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
struct Clustering {
  Eigen::Index k = 0;
  DenseMatrix<Scalar> centroids;         // k x D
  std::vector<Eigen::Index> assignment;  // cluster index per point row
  Scalar objective = 0;                  // sum of squared distances to assigned centroids
  int iterations_run = 0;
  bool converged = false;
  std::vector<Scalar> objective_history;  // one entry per assignment step
  int reseeded_clusters = 0;              // empty-cluster repairs performed
};

// Index of the nearest row of `centroids` to the column vector `point`; ties
// go to the lower index.
template <typename PointDerived, typename CentroidDerived>
std::pair<Eigen::Index, typename PointDerived::Scalar> nearest_centroid(
    const Eigen::MatrixBase<PointDerived>& point, const Eigen::MatrixBase<CentroidDerived>& centroids) {
  using Scalar = typename PointDerived::Scalar;
  Eigen::Index best = 0;
  Scalar best_d2 = std::numeric_limits<Scalar>::infinity();
  for (Eigen::Index j = 0; j < centroids.rows(); ++j) {
    const Scalar d2 = (centroids.row(j).transpose() - point).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = j;
    }
  }
  return {best, best_d2};
}

namespace detail {

template <typename Scalar, typename Derived>
DenseMatrix<Scalar> kmeanspp_seed(const Eigen::MatrixBase<Derived>& x, Eigen::Index k, std::mt19937_64& rng) {
  const Eigen::Index n = x.rows();
  DenseMatrix<Scalar> centroids(k, x.cols());
  std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
  centroids.row(0) = x.row(pick(rng));
  std::vector<Scalar> d2(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) d2[i] = (x.row(i) - centroids.row(0)).squaredNorm();

  for (Eigen::Index j = 1; j < k; ++j) {
    Scalar total = 0;
    for (const Scalar v : d2) total += v;
    Eigen::Index chosen = -1;
    if (total > 0) {
      std::uniform_real_distribution<double> u(0.0, static_cast<double>(total));
      const Scalar r = static_cast<Scalar>(u(rng));
      Scalar cumulative = 0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (d2[i] <= 0) continue;
        cumulative += d2[i];
        chosen = i;
        if (cumulative > r) break;
      }
    } else {
      chosen = pick(rng);
    }
    centroids.row(j) = x.row(chosen);
    for (Eigen::Index i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], static_cast<Scalar>((x.row(i) - centroids.row(j)).squaredNorm()));
    }
  }
  return centroids;
}

// Nearest-centroid assignment of every row; returns the squared distances.
template <typename Scalar, typename Derived>
std::vector<Scalar> assign_rows(const Eigen::MatrixBase<Derived>& x, const DenseMatrix<Scalar>& centroids,
                                std::vector<Eigen::Index>& assignment) {
  const auto n = static_cast<std::size_t>(x.rows());
  std::vector<Scalar> d2(n);
  assignment.resize(n);
  parallel_for(n, [&](std::size_t i) {
    const auto [j, dist] = nearest_centroid(x.row(static_cast<Eigen::Index>(i)).transpose(), centroids);
    assignment[i] = j;
    d2[i] = dist;
  });
  return d2;
}

}  // namespace detail

// Lloyd iterations until the relative objective improvement drops below
// `tol`, the assignment stops changing, or `max_iter` steps have run.
// An empty cluster is re-seeded at the point farthest from its assigned
// centroid. Deterministic for a fixed seed.
template <typename Derived>
Clustering<typename Derived::Scalar> kmeans(const Eigen::MatrixBase<Derived>& points, Eigen::Index k,
                                            std::uint64_t seed, int max_iter = 300, double tol = 1e-6) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = points.rows();
  if (k < 1) throw ArgumentError("kmeans: k must be at least 1");
  if (k > n) {
    throw ArgumentError("kmeans: k=" + std::to_string(k) + " exceeds the number of points (" + std::to_string(n) +
                        ")");
  }
  if (max_iter < 1) throw ArgumentError("kmeans: max_iter must be positive");

  std::mt19937_64 rng(seed);
  Clustering<Scalar> out;
  out.k = k;
  out.centroids = detail::kmeanspp_seed<Scalar>(points, k, rng);

  std::vector<Eigen::Index> previous;
  Scalar previous_objective = 0;
  for (int it = 0; it < max_iter; ++it) {
    const auto d2 = detail::assign_rows(points, out.centroids, out.assignment);
    Scalar objective = 0;
    for (const Scalar v : d2) objective += v;
    out.objective = objective;
    out.objective_history.push_back(objective);
    out.iterations_run = it + 1;

    if (out.assignment == previous) {
      out.converged = true;
      break;
    }
    if (it > 0 && previous_objective - objective <= static_cast<Scalar>(tol) * previous_objective) {
      out.converged = true;
      break;
    }

    if (it + 1 == max_iter) break;

    // Update step: centroids become the means of their members.
    DenseMatrix<Scalar> sums = DenseMatrix<Scalar>::Zero(k, points.cols());
    std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(out.assignment[i]) += points.row(i);
      ++counts[out.assignment[i]];
    }
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    for (Eigen::Index j = 0; j < k; ++j) {
      if (counts[j] > 0) {
        out.centroids.row(j) = sums.row(j) / static_cast<Scalar>(counts[j]);
        continue;
      }
      Eigen::Index far = -1;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (used[i]) continue;
        if (far < 0 || d2[i] > d2[far]) far = i;
      }
      if (far < 0) far = 0;
      used[far] = true;
      out.centroids.row(j) = points.row(far);
      ++out.reseeded_clusters;
    }
    previous = out.assignment;
    previous_objective = objective;
  }
  return out;
}

// Restarts k-means with seeds seed, seed+1, ... and keeps the lowest
// objective (first one on ties).
template <typename Derived>
Clustering<typename Derived::Scalar> kmeans_best_of(const Eigen::MatrixBase<Derived>& points, Eigen::Index k,
                                                    std::uint64_t seed, int restarts, int max_iter = 300,
                                                    double tol = 1e-6) {
  auto best = kmeans(points, k, seed, max_iter, tol);
  for (int r = 1; r < restarts; ++r) {
    auto candidate = kmeans(points, k, seed + static_cast<std::uint64_t>(r), max_iter, tol);
    if (candidate.objective < best.objective) best = std::move(candidate);
  }
  return best;
}

// Builds a Clustering whose centroids are the member means of the given
// labels (empty clusters keep a zero centroid).
template <typename Derived>
Clustering<typename Derived::Scalar> clustering_from_labels(const Eigen::MatrixBase<Derived>& points,
                                                            const std::vector<Eigen::Index>& labels,
                                                            Eigen::Index k) {
  using Scalar = typename Derived::Scalar;
  if (static_cast<Eigen::Index>(labels.size()) != points.rows()) {
    throw ArgumentError("clustering_from_labels: one label per point required");
  }
  Clustering<Scalar> out;
  out.k = k;
  out.assignment = labels;
  out.centroids = DenseMatrix<Scalar>::Zero(k, points.cols());
  std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    if (labels[i] < 0 || labels[i] >= k) throw ArgumentError("clustering_from_labels: label out of range");
    out.centroids.row(labels[i]) += points.row(i);
    ++counts[labels[i]];
  }
  for (Eigen::Index j = 0; j < k; ++j) {
    if (counts[j] > 0) out.centroids.row(j) /= static_cast<Scalar>(counts[j]);
  }
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    out.objective += (points.row(i) - out.centroids.row(labels[i])).squaredNorm();
  }
  out.converged = true;
  return out;
}

// Silhouette with mean intra/inter-cluster distances replaced by distances to
// centroids: a(i) = |x_i - c_own|, b(i) = min over other centroids,
// s(i) = (b - a) / max(a, b) (0 when both vanish). Returns the mean s(i).
template <typename Derived>
typename Derived::Scalar simplified_silhouette(const Eigen::MatrixBase<Derived>& points,
                                               const Clustering<typename Derived::Scalar>& clustering) {
  using Scalar = typename Derived::Scalar;
  if (clustering.k < 2) throw ArgumentError("simplified_silhouette: k must be at least 2");
  const auto n = static_cast<std::size_t>(points.rows());
  if (clustering.assignment.size() != n) throw ArgumentError("simplified_silhouette: clustering does not cover points");
  if (n == 0) throw ArgumentError("simplified_silhouette: no points");

  std::vector<Scalar> s(n);
  parallel_for(n, [&](std::size_t i) {
    const auto row = points.row(static_cast<Eigen::Index>(i));
    const Eigen::Index own = clustering.assignment[i];
    const Scalar a = (row - clustering.centroids.row(own)).norm();
    Scalar b = std::numeric_limits<Scalar>::infinity();
    for (Eigen::Index j = 0; j < clustering.k; ++j) {
      if (j == own) continue;
      b = std::min(b, static_cast<Scalar>((row - clustering.centroids.row(j)).norm()));
    }
    const Scalar denom = std::max(a, b);
    s[i] = denom > 0 ? (b - a) / denom : Scalar(0);
  });
  Scalar total = 0;
  for (const Scalar v : s) total += v;
  return total / static_cast<Scalar>(n);
}

struct SilhouettePoint {
  Eigen::Index k = 0;
  double score = 0;
  bool operator==(const SilhouettePoint&) const = default;
};

using SilhouetteCurve = std::vector<SilhouettePoint>;

// k immediately preceding the largest consecutive drop s(k) - s(k_next);
// ties go to the smaller k.
inline Eigen::Index select_k_from_curve(const SilhouetteCurve& curve) {
  if (curve.size() < 2) throw ArgumentError("select_k: at least two scanned k values are required");
  Eigen::Index best_k = curve.front().k;
  double best_drop = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
    const double drop = curve[i].score - curve[i + 1].score;
    if (drop > best_drop) {
      best_drop = drop;
      best_k = curve[i].k;
    }
  }
  return best_k;
}

struct KSelection {
  Eigen::Index k_selected = 0;
  SilhouetteCurve curve;
};

// Scans k = k_min, k_min + step, ... <= k_max, clustering each with the same
// seed, and applies the largest-drop rule to the silhouette curve.
template <typename Derived>
KSelection select_k(const Eigen::MatrixBase<Derived>& points, Eigen::Index k_min, Eigen::Index k_max,
                    Eigen::Index step, std::uint64_t seed, int restarts = 1, int max_iter = 300, double tol = 1e-6) {
  if (step < 1) throw ArgumentError("select_k: step must be positive");
  if (k_min < 2 || k_max > points.rows() - 1 || k_min > k_max) {
    throw ArgumentError("select_k: k range must lie within [2, points - 1]");
  }
  KSelection out;
  for (Eigen::Index k = k_min; k <= k_max; k += step) {
    const auto clustering = kmeans_best_of(points, k, seed, std::max(1, restarts), max_iter, tol);
    out.curve.push_back({k, static_cast<double>(simplified_silhouette(points, clustering))});
  }
  out.k_selected = select_k_from_curve(out.curve);
  return out;
}

}  // namespace miner
