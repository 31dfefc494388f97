#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hcad/classifiers.hpp"
#include "hcad/clustering.hpp"
#include "hcad/flowdata.hpp"
#include "hcad/resample.hpp"

namespace hcad {

// When several kinds reach the same validation accuracy, the earliest one
// in this order wins. knn leads: distance voting on balanced data proved
// the steadiest of the six, and the simplest to reason about.
std::vector<ClassifierKind> default_preference_order();

// Picks the accuracy argmax; exact ties resolve by preference order. Every
// kind appearing in accuracies must appear in preference_order. tie_broken
// (optional) reports whether the preference order had to decide.
ClassifierKind select_model(const std::map<ClassifierKind, double>& accuracies,
                            const std::vector<ClassifierKind>& preference_order,
                            bool* tie_broken = nullptr);

// What happened when one cluster picked its specialist.
struct SelectionRecord {
  int cluster_id = 0;
  // Validation accuracy per candidate kind. Empty for degenerate clusters
  // that got a constant specialist without a contest.
  std::map<ClassifierKind, double> accuracies;
  ClassifierKind winner = ClassifierKind::kConstant;
  bool tie_broken = false;
  std::size_t validation_row_count = 0;
  // Class balance of the cluster's rows before any resampling.
  std::size_t normal_count = 0;
  std::size_t attack_count = 0;
};

struct HybridOptions {
  Strategy strategy = Strategy::kPerCluster;
  ResampleConfig resample;
  int k_override = 3;  // 0: choose k by the elbow rule
  int k_max = 10;
  int max_iter = 300;
  double tol = 1e-6;
  bool standardize = true;
  // Fraction of each cluster's data used to fit the candidate models; the
  // rest scores them.
  double validation_train_fraction = 0.8;
  std::vector<ClassifierKind> preference_order = default_preference_order();
  std::uint64_t seed = 0;
};

// The full trained pipeline: route a sample to its nearest cluster, then ask
// that cluster's specialist.
struct SpecialistEnsemble {
  ClusterModel clusters;
  std::vector<TrainedClassifier> specialists;  // one per cluster
  std::vector<SelectionRecord> selections;     // one per cluster
  SchemaConfig schema;
  std::vector<CategoryEncoder> encoders;

  struct Routed {
    int label = 0;
    int cluster = 0;
  };

  // raw_row is encoded but unscaled, exactly as EncodedDataset stores rows.
  Routed predict_routed(std::span<const double> raw_row) const;
  std::vector<Routed> predict_routed(const Matrix& raw_rows) const;
  std::vector<int> predict(const Matrix& raw_rows) const;
};

// Clusters the training data, rebalances according to the strategy, runs a
// per-cluster contest between the six classifier kinds on an internal
// train/validation split, and retrains each winner on its cluster's full
// (rebalanced) data. Single-class clusters get a constant specialist.
SpecialistEnsemble fit_hybrid(const EncodedDataset& train,
                              const SchemaConfig& schema,
                              const HybridOptions& options);

// A single model chosen by the same contest protocol, without clustering.
// This is the non-hybrid baseline: options.strategy still controls the
// rebalancing applied to the pooled training data. Equivalent to running
// fit_hybrid with k_override = 1 and keeping the lone specialist.
struct GlobalChampion {
  Standardizer standardizer;
  TrainedClassifier model;
  SelectionRecord record;

  int predict(std::span<const double> raw_row) const {
    std::vector<double> z(raw_row.size());
    standardizer.transform_row(raw_row, z);
    return model.predict(z);
  }
};

GlobalChampion select_global_champion(const EncodedDataset& train,
                                      const HybridOptions& options);

// Versioned, checksummed plain-text serialization. Loading verifies the
// checksum and rejects unknown format versions; predictions from a loaded
// ensemble are bit-identical to the saved one.
void save_ensemble(const SpecialistEnsemble& ensemble,
                   const std::string& path);
SpecialistEnsemble load_ensemble(const std::string& path);

}  // namespace hcad
