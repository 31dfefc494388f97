#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hcad/flowdata.hpp"
#include "hcad/matrix.hpp"

namespace hcad {

// Where class rebalancing happens relative to clustering.
enum class Strategy {
  kNoResample,   // train on the data as-is
  kPerCluster,   // rebalance each cluster's rows independently
  kGlobal,       // rebalance the pooled training data once
};

std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& s);

struct ResampleConfig {
  int smote_k = 5;            // neighbours considered per synthetic sample
  double target_ratio = 1.0;  // minority/majority ratio to aim for
  std::uint64_t seed = 0;

  void validate() const;
};

// Provenance of one synthetic row, for verification.
struct SmoteTrace {
  std::size_t base;      // row index into the minority matrix
  std::size_t neighbor;  // row index of the chosen neighbour
  double lambda;         // interpolation position in [0, 1)
};

// Linear interpolation base + lambda * (neighbor - base), per coordinate.
std::vector<double> smote_interpolate(std::span<const double> base,
                                      std::span<const double> neighbor,
                                      double lambda);

// Generates n_synthetic rows by interpolating each randomly chosen minority
// row towards one of its k nearest minority neighbours. Requires
// n_synthetic >= 0 and at least 2 minority rows; when fewer than k + 1 rows
// are available the effective k shrinks to rows - 1. If trace is non-null it
// receives one entry per synthetic row.
Matrix smote(const Matrix& minority, int k, long long n_synthetic,
             std::uint64_t seed, std::vector<SmoteTrace>* trace = nullptr);

// Keeps target_count rows of the majority matrix, chosen uniformly without
// replacement. target_count must be in [1, rows].
Matrix random_undersample(const Matrix& majority, std::size_t target_count,
                          std::uint64_t seed);

// Combined SMOTE + undersampling toward config.target_ratio. The total row
// count is conserved (up to rounding): with majority M and minority m and
// ratio r, the majority is cut to M' = round((M + m) / (1 + r)) and the
// minority is grown to round(r * M'). Already-balanced data (m >= r * M)
// comes back unchanged. All original minority rows are kept; synthetic rows
// are appended after them. Requires at least 2 minority rows.
EncodedDataset rebalance(const EncodedDataset& data,
                         const ResampleConfig& config);

// Result of applying a strategy ahead of specialist training.
struct StrategyResult {
  Strategy strategy = Strategy::kNoResample;
  // kNoResample / kGlobal: the (possibly rebalanced) pooled data.
  EncodedDataset pooled;
  // kPerCluster: one dataset per cluster id.
  std::vector<EncodedDataset> per_cluster;
  // Clusters whose rows were single-class and therefore passed through
  // untouched (SMOTE needs both classes).
  std::vector<int> single_class_clusters;
};

// cluster_assignments is required (and only used) for kPerCluster; it maps
// each row of data to a cluster id in [0, n_clusters).
StrategyResult apply_strategy(Strategy strategy, const EncodedDataset& data,
                              const std::vector<int>* cluster_assignments,
                              int n_clusters, const ResampleConfig& config);

}  // namespace hcad
