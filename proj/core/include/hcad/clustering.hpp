#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hcad/matrix.hpp"

namespace hcad {

// Per-feature z-score scaling. Constant features get stddev 1 so they map
// to zero instead of dividing by zero.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> stddev;

  static Standardizer fit(const Matrix& m);
  // An identity transform (mean 0, stddev 1) for pipelines run with scaling
  // disabled.
  static Standardizer identity(std::size_t n_features);

  Matrix transform(const Matrix& m) const;
  void transform_row(std::span<const double> in, std::span<double> out) const;
  std::size_t n_features() const { return mean.size(); }
};

// One k-means fit on a fixed matrix (already standardized by the caller).
struct KMeansResult {
  Matrix centroids;                       // k x d
  std::vector<int> assignments;           // per input row
  double wcss = 0.0;                      // at the final assignment
  int iterations_run = 0;
  std::vector<double> wcss_per_iteration; // non-increasing
};

// Lloyd's algorithm with k-means++ seeding. Runs until the assignments
// stop changing, the max centroid shift drops below tol, or max_iter.
// Requires at least k distinct rows. Ties in assignment go to the lowest
// centroid id.
KMeansResult kmeans_fit(const Matrix& m, int k, std::uint64_t seed,
                        int max_iter = 300, double tol = 1e-6);

struct WcssPoint {
  int k = 0;
  double wcss = 0.0;
};

// Fits k = 1..k_max (each with a seed derived from `seed` and k) and
// returns the wcss curve. If fits is non-null it receives the k results.
std::vector<WcssPoint> wcss_curve(const Matrix& m, int k_max,
                                  std::uint64_t seed,
                                  std::vector<KMeansResult>* fits = nullptr,
                                  int max_iter = 300, double tol = 1e-6);

// Elbow selection: the interior point of the curve furthest (perpendicular
// distance) from the chord joining the first and last points. Ties go to
// the smaller k. Needs at least 3 points.
int select_k_elbow(const std::vector<WcssPoint>& curve);

struct ClusterFitOptions {
  int k_override = 0;   // 0 means: pick k by the elbow rule
  int k_max = 10;
  int max_iter = 300;
  double tol = 1e-6;
  bool standardize = true;
  std::uint64_t seed = 0;
};

// The trained partitioner: scaling parameters plus centroids. Centroids
// live in standardized space; assign() takes raw (encoded, unscaled) rows.
struct ClusterModel {
  int k = 0;
  Standardizer standardizer;
  Matrix centroids;                 // k x d, standardized space
  double wcss = 0.0;
  int iterations_run = 0;
  std::vector<WcssPoint> curve;     // empty when k was forced

  int assign(std::span<const double> raw_row) const;
  int assign_standardized(std::span<const double> z_row) const;
  std::vector<int> assign_all(const Matrix& raw_rows) const;
};

ClusterModel fit_cluster_model(const Matrix& raw_features,
                               const ClusterFitOptions& options);

}  // namespace hcad
