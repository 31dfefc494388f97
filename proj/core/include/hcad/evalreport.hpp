#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "hcad/flowdata.hpp"
#include "hcad/hybrid.hpp"

namespace hcad {

// counts[true_class][predicted_class], class 0 = normal, 1 = attack.
struct ConfusionMatrix {
  std::array<std::array<long long, 2>, 2> counts{};

  long long total() const;
  long long correct() const;  // main diagonal
};

ConfusionMatrix confusion_matrix(const std::vector<int>& y_true,
                                 const std::vector<int>& y_pred);

double accuracy(const ConfusionMatrix& cm);
// Per-class precision/recall; NaN when the denominator is zero.
double precision(const ConfusionMatrix& cm, int cls);
double recall(const ConfusionMatrix& cm, int cls);

struct ClusterEvaluation {
  int cluster_id = 0;
  ClassifierKind winner = ClassifierKind::kConstant;
  std::size_t sample_count = 0;
  ConfusionMatrix matrix;
  double accuracy = 0.0;  // NaN when the cluster saw no test rows
};

struct EvaluationReport {
  ConfusionMatrix overall;
  double overall_accuracy = 0.0;
  std::vector<ClusterEvaluation> per_cluster;
};

// Routes every test row through the ensemble and tallies results overall
// and per cluster. The test set must be labeled and non-empty.
EvaluationReport evaluate_ensemble(const SpecialistEnsemble& ensemble,
                                   const EncodedDataset& test);

// Writes report.txt (human-readable), report.csv (one row per cluster plus
// an overall row) and confusion_cluster<i>.csv into out_dir, creating it if
// needed. Identical reports produce byte-identical files.
void write_report(const EvaluationReport& report, const std::string& out_dir);

// One row of the strategy comparison: test accuracy of one classifier kind
// on one cluster under each resampling strategy, in the order
// none / per-cluster / global.
struct StrategyTableRow {
  ClassifierKind model = ClassifierKind::kDtGini;
  int cluster = 0;
  std::array<double, 3> accuracy{};
};

struct StrategyTableConfig {
  int k = 3;
  ResampleConfig resample;
  int max_iter = 300;
  double tol = 1e-6;
  bool standardize = true;
  std::uint64_t seed = 0;
};

// Trains every kind on every cluster under all three strategies and scores
// them on the test rows routed to each cluster. Rows are ordered by kind,
// then cluster (6 * k rows). Single-class cluster slices fall back to a
// constant model; clusters with no test rows score NaN.
std::vector<StrategyTableRow> strategy_table(const EncodedDataset& train,
                                             const EncodedDataset& test,
                                             const StrategyTableConfig& config);

void write_strategy_table(const std::vector<StrategyTableRow>& rows,
                          const std::string& path);

}  // namespace hcad
