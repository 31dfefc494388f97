#include "hcad/resample.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hcad/rng.hpp"

namespace hcad {

namespace {

constexpr std::uint64_t kSmoteSalt = 0x736d6f7465ULL;  // "smote"
constexpr std::uint64_t kUnderSalt = 0x756e646572ULL;  // "under"

}  // namespace

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::kNoResample: return "none";
    case Strategy::kPerCluster: return "per-cluster";
    case Strategy::kGlobal: return "global";
  }
  throw std::invalid_argument("unknown strategy");
}

Strategy strategy_from_string(const std::string& s) {
  if (s == "none") return Strategy::kNoResample;
  if (s == "per-cluster") return Strategy::kPerCluster;
  if (s == "global") return Strategy::kGlobal;
  throw std::invalid_argument(
      "unknown strategy '" + s + "' (expected none, per-cluster or global)");
}

void ResampleConfig::validate() const {
  if (smote_k < 1) {
    throw std::invalid_argument("smote_k must be at least 1");
  }
  if (!(target_ratio > 0.0) || target_ratio > 1e6) {
    throw std::invalid_argument("target_ratio must be positive and sane");
  }
}

std::vector<double> smote_interpolate(std::span<const double> base,
                                      std::span<const double> neighbor,
                                      double lambda) {
  if (base.size() != neighbor.size()) {
    throw std::invalid_argument("smote_interpolate: dimension mismatch");
  }
  std::vector<double> out(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    out[i] = base[i] + lambda * (neighbor[i] - base[i]);
  }
  return out;
}

Matrix smote(const Matrix& minority, int k, long long n_synthetic,
             std::uint64_t seed, std::vector<SmoteTrace>* trace) {
  if (n_synthetic < 0) {
    throw std::invalid_argument("smote: n_synthetic must be non-negative");
  }
  if (k < 1) throw std::invalid_argument("smote: k must be at least 1");
  if (minority.rows < 2) {
    throw std::invalid_argument("smote: need at least 2 minority rows, got " +
                                std::to_string(minority.rows));
  }
  // With fewer than k+1 rows there are not k distinct neighbours to choose
  // from; shrink k to what the data supports instead of failing, so small
  // minority pockets (e.g. inside one cluster) can still be oversampled.
  if (minority.rows < static_cast<std::size_t>(k) + 1) {
    k = static_cast<int>(minority.rows) - 1;
  }

  Matrix out(0, minority.cols);
  if (n_synthetic == 0) return out;
  out.data.reserve(static_cast<std::size_t>(n_synthetic) * minority.cols);

  // Neighbour lists are fixed up front: for each minority row, the k nearest
  // other minority rows ordered by (distance^2, index).
  const std::size_t n = minority.rows;
  std::vector<std::size_t> neighbors(n * static_cast<std::size_t>(k));
  {
    std::vector<std::pair<double, std::size_t>> dist;
    dist.reserve(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      dist.clear();
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        dist.emplace_back(squared_distance(minority.row(i), minority.row(j)),
                          j);
      }
      std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
      for (int m = 0; m < k; ++m) {
        neighbors[i * static_cast<std::size_t>(k) +
                  static_cast<std::size_t>(m)] = dist[m].second;
      }
    }
  }

  // Per synthetic row the draw order is: base row, neighbour slot, lambda.
  Rng rng(seed);
  for (long long s = 0; s < n_synthetic; ++s) {
    const std::size_t base = rng.next_index(n);
    const std::size_t slot = rng.next_index(static_cast<std::size_t>(k));
    const std::size_t neighbor =
        neighbors[base * static_cast<std::size_t>(k) + slot];
    const double lambda = rng.next_unit();
    const std::vector<double> row =
        smote_interpolate(minority.row(base), minority.row(neighbor), lambda);
    out.append_row(row);
    if (trace) trace->push_back({base, neighbor, lambda});
  }
  return out;
}

Matrix random_undersample(const Matrix& majority, std::size_t target_count,
                          std::uint64_t seed) {
  if (target_count < 1 || target_count > majority.rows) {
    throw std::invalid_argument(
        "random_undersample: target_count must be in [1, " +
        std::to_string(majority.rows) + "], got " +
        std::to_string(target_count));
  }
  Rng rng(seed);
  // Ascending sample keeps the surviving rows in their original order.
  const std::vector<std::size_t> keep =
      rng.sample_without_replacement(majority.rows, target_count);
  return majority.select_rows(keep);
}

EncodedDataset rebalance(const EncodedDataset& data,
                         const ResampleConfig& config) {
  config.validate();
  if (data.labels.size() != data.features.rows) {
    throw std::invalid_argument("rebalance: dataset is unlabeled");
  }
  const auto [normal, attack] = data.class_counts();
  if (normal == 0 || attack == 0) {
    throw std::invalid_argument("rebalance: both classes must be present");
  }

  const int minority_label = (attack < normal) ? 1 : 0;
  const std::size_t m = std::min(normal, attack);
  const std::size_t big = std::max(normal, attack);
  const double r = config.target_ratio;

  // Already at or past the target ratio: nothing to do.
  if (static_cast<double>(m) >= r * static_cast<double>(big)) return data;

  // Conserve the total row count: majority shrinks to M', minority grows to
  // r * M', with M' + r*M' ~= M + m.
  auto majority_target = static_cast<std::size_t>(
      std::llround(static_cast<double>(big + m) / (1.0 + r)));
  majority_target = std::clamp<std::size_t>(majority_target, 1, big);
  auto minority_target = static_cast<std::size_t>(
      std::llround(r * static_cast<double>(majority_target)));
  minority_target = std::max(minority_target, m);

  std::vector<std::size_t> minority_rows, majority_rows;
  for (std::size_t i = 0; i < data.labels.size(); ++i) {
    if (data.labels[i] == minority_label) minority_rows.push_back(i);
    else majority_rows.push_back(i);
  }

  const Matrix minority = data.features.select_rows(minority_rows);
  const Matrix majority = data.features.select_rows(majority_rows);

  const Matrix kept_majority =
      (majority_target < big)
          ? random_undersample(majority, majority_target,
                               derive_seed(config.seed, kUnderSalt))
          : majority;
  const Matrix synthetic =
      smote(minority, config.smote_k,
            static_cast<long long>(minority_target - m),
            derive_seed(config.seed, kSmoteSalt));

  EncodedDataset out;
  out.feature_names = data.feature_names;
  out.encoders = data.encoders;
  out.features = Matrix(0, data.features.cols);
  out.features.data.reserve(
      (kept_majority.rows + minority.rows + synthetic.rows) *
      data.features.cols);
  for (std::size_t i = 0; i < kept_majority.rows; ++i) {
    out.features.append_row(kept_majority.row(i));
    out.labels.push_back(1 - minority_label);
  }
  for (std::size_t i = 0; i < minority.rows; ++i) {
    out.features.append_row(minority.row(i));
    out.labels.push_back(minority_label);
  }
  for (std::size_t i = 0; i < synthetic.rows; ++i) {
    out.features.append_row(synthetic.row(i));
    out.labels.push_back(minority_label);
  }
  return out;
}

StrategyResult apply_strategy(Strategy strategy, const EncodedDataset& data,
                              const std::vector<int>* cluster_assignments,
                              int n_clusters, const ResampleConfig& config) {
  config.validate();
  StrategyResult result;
  result.strategy = strategy;

  switch (strategy) {
    case Strategy::kNoResample:
      result.pooled = data;
      return result;

    case Strategy::kGlobal:
      result.pooled = rebalance(data, config);
      return result;

    case Strategy::kPerCluster: {
      if (cluster_assignments == nullptr) {
        throw std::invalid_argument(
            "apply_strategy: per-cluster resampling needs cluster "
            "assignments");
      }
      if (cluster_assignments->size() != data.size()) {
        throw std::invalid_argument(
            "apply_strategy: assignment count does not match row count");
      }
      if (n_clusters < 1) {
        throw std::invalid_argument("apply_strategy: n_clusters must be >= 1");
      }
      std::vector<std::vector<std::size_t>> rows_of(
          static_cast<std::size_t>(n_clusters));
      for (std::size_t i = 0; i < cluster_assignments->size(); ++i) {
        const int c = (*cluster_assignments)[i];
        if (c < 0 || c >= n_clusters) {
          throw std::invalid_argument(
              "apply_strategy: cluster id out of range");
        }
        rows_of[static_cast<std::size_t>(c)].push_back(i);
      }
      result.per_cluster.reserve(static_cast<std::size_t>(n_clusters));
      for (int c = 0; c < n_clusters; ++c) {
        EncodedDataset subset =
            data.select_rows(rows_of[static_cast<std::size_t>(c)]);
        const auto [normal, attack] = subset.class_counts();
        if (normal == 0 || attack == 0) {
          // SMOTE is impossible without both classes; the cluster's
          // specialist will have to live with what is there.
          result.single_class_clusters.push_back(c);
          result.per_cluster.push_back(std::move(subset));
          continue;
        }
        ResampleConfig cluster_config = config;
        cluster_config.seed = config.seed + static_cast<std::uint64_t>(c);
        result.per_cluster.push_back(rebalance(subset, cluster_config));
      }
      return result;
    }
  }
  throw std::invalid_argument("apply_strategy: unknown strategy");
}

}  // namespace hcad
