#include "hcad/hybrid.hpp"

#include <algorithm>
#include <stdexcept>

#include "hcad/rng.hpp"

namespace hcad {

namespace {

constexpr std::uint64_t kClusterSalt = 0x636c7573ULL;   // "clus"
constexpr std::uint64_t kResampleSalt = 0x72657361ULL;  // "resa"
constexpr std::uint64_t kValSplitSalt = 0x76616c73ULL;  // "vals"
constexpr std::uint64_t kModelSalt = 0x6d6f64656cULL;   // "model"

void check_options(const HybridOptions& options) {
  options.resample.validate();
  if (options.k_override < 0) {
    throw std::invalid_argument("k_override must be >= 0");
  }
  if (!(options.validation_train_fraction > 0.0 &&
        options.validation_train_fraction < 1.0)) {
    throw std::invalid_argument(
        "validation_train_fraction must be in (0, 1)");
  }
  if (options.preference_order.empty()) {
    throw std::invalid_argument("preference order must not be empty");
  }
}

ResampleConfig derived_resample_config(const HybridOptions& options) {
  ResampleConfig rc = options.resample;
  rc.seed = derive_seed(options.seed, kResampleSalt);
  return rc;
}

std::uint64_t model_seed(const HybridOptions& options, int cluster_id,
                         std::size_t kind_index) {
  return derive_seed(options.seed, kModelSalt,
                     static_cast<std::uint64_t>(cluster_id) * 16 +
                         kind_index);
}

// Runs the six-way contest on one cluster's (already standardized, already
// resampled) rows and retrains the winner on all of them. record must
// arrive with cluster_id and the class counts filled in.
TrainedClassifier run_contest(const Matrix& z, const std::vector<int>& labels,
                              const HybridOptions& options,
                              SelectionRecord& record) {
  const int c = record.cluster_id;

  long long c0 = 0, c1 = 0;
  for (const int y : labels) (y == 1 ? c1 : c0)++;

  // Degenerate clusters cannot hold a contest. Empty ones default to
  // attack (the overwhelming base rate in this domain); single-class ones
  // echo their class; a lone minority row cannot be split into train and
  // validation, so the majority label stands in.
  if (labels.empty()) {
    record.winner = ClassifierKind::kConstant;
    return make_constant_classifier(1, z.cols);
  }
  if (c0 == 0 || c1 == 0 || std::min(c0, c1) == 1) {
    record.winner = ClassifierKind::kConstant;
    return make_constant_classifier(c1 >= c0 ? 1 : 0, z.cols);
  }

  const auto [train_idx, val_idx] = stratified_split_indices(
      labels, options.validation_train_fraction,
      derive_seed(options.seed, kValSplitSalt,
                  static_cast<std::uint64_t>(c)));
  const Matrix z_train = z.select_rows(train_idx);
  const Matrix z_val = z.select_rows(val_idx);
  std::vector<int> y_train, y_val;
  y_train.reserve(train_idx.size());
  y_val.reserve(val_idx.size());
  for (const std::size_t i : train_idx) y_train.push_back(labels[i]);
  for (const std::size_t i : val_idx) y_val.push_back(labels[i]);

  record.validation_row_count = val_idx.size();
  for (std::size_t ki = 0; ki < kAllClassifierKinds.size(); ++ki) {
    const ClassifierKind kind = kAllClassifierKinds[ki];
    ClassifierSpec spec =
        ClassifierSpec::defaults(kind, model_seed(options, c, ki));
    try {
      const TrainedClassifier candidate =
          train_classifier(spec, z_train, y_train);
      record.accuracies[kind] = accuracy_on(candidate, z_val, y_val);
    } catch (const std::invalid_argument&) {
      // A kind that cannot fit this cluster (e.g. knn with k larger than
      // the contest's training side) simply sits the contest out.
    }
  }
  if (record.accuracies.empty()) {
    record.winner = ClassifierKind::kConstant;
    return make_constant_classifier(c1 >= c0 ? 1 : 0, z.cols);
  }

  record.winner = select_model(record.accuracies, options.preference_order,
                               &record.tie_broken);
  std::size_t winner_index = 0;
  for (std::size_t ki = 0; ki < kAllClassifierKinds.size(); ++ki) {
    if (kAllClassifierKinds[ki] == record.winner) winner_index = ki;
  }
  const ClassifierSpec winner_spec = ClassifierSpec::defaults(
      record.winner, model_seed(options, c, winner_index));
  return train_classifier(winner_spec, z, labels);
}

}  // namespace

std::vector<ClassifierKind> default_preference_order() {
  return {ClassifierKind::kKnn, ClassifierKind::kDtEntropy,
          ClassifierKind::kDtGini, ClassifierKind::kGnb, ClassifierKind::kRf,
          ClassifierKind::kGbt};
}

ClassifierKind select_model(const std::map<ClassifierKind, double>& accuracies,
                            const std::vector<ClassifierKind>& preference_order,
                            bool* tie_broken) {
  if (accuracies.empty()) {
    throw std::invalid_argument("select_model: no candidates");
  }
  for (const auto& [kind, acc] : accuracies) {
    if (std::find(preference_order.begin(), preference_order.end(), kind) ==
        preference_order.end()) {
      throw std::invalid_argument(
          "select_model: preference order does not cover '" +
          to_string(kind) + "'");
    }
  }
  double best = accuracies.begin()->second;
  for (const auto& [kind, acc] : accuracies) best = std::max(best, acc);

  std::size_t at_best = 0;
  for (const auto& [kind, acc] : accuracies) {
    if (acc == best) ++at_best;
  }
  if (tie_broken) *tie_broken = at_best > 1;

  for (const ClassifierKind kind : preference_order) {
    const auto it = accuracies.find(kind);
    if (it != accuracies.end() && it->second == best) return kind;
  }
  throw std::logic_error("select_model: unreachable");
}

SpecialistEnsemble fit_hybrid(const EncodedDataset& train,
                              const SchemaConfig& schema,
                              const HybridOptions& options) {
  check_options(options);
  if (train.size() == 0) {
    throw std::invalid_argument("fit_hybrid: empty training data");
  }
  if (train.labels.size() != train.size()) {
    throw std::invalid_argument("fit_hybrid: training data must be labeled");
  }

  const ResampleConfig rc = derived_resample_config(options);

  // Scaling is part of preprocessing: the scaler is fit on the raw training
  // rows and everything downstream (rebalancing, clustering, specialists)
  // works in standardized space. Resampling in particular must interpolate
  // under the standardized metric, or wide raw columns would dominate the
  // neighbour search.
  const Standardizer standardizer =
      options.standardize ? Standardizer::fit(train.features)
                          : Standardizer::identity(train.features.cols);
  EncodedDataset z_train = train;
  z_train.features = standardizer.transform(train.features);

  // The global strategy rebalances the pool before clustering sees it; the
  // other two cluster the training rows as they are.
  EncodedDataset pre;
  if (options.strategy == Strategy::kGlobal) {
    pre = apply_strategy(Strategy::kGlobal, z_train, nullptr, 0, rc).pooled;
  } else {
    pre = std::move(z_train);
  }

  ClusterFitOptions cluster_options;
  cluster_options.k_override = options.k_override;
  cluster_options.k_max = options.k_max;
  cluster_options.max_iter = options.max_iter;
  cluster_options.tol = options.tol;
  cluster_options.standardize = false;  // already standardized above
  cluster_options.seed = derive_seed(options.seed, kClusterSalt);

  SpecialistEnsemble ensemble;
  ensemble.schema = schema;
  ensemble.encoders = train.encoders;
  ensemble.clusters = fit_cluster_model(pre.features, cluster_options);
  ensemble.clusters.standardizer = standardizer;
  const int k = ensemble.clusters.k;

  std::vector<int> assignments(pre.size());
  for (std::size_t i = 0; i < pre.size(); ++i) {
    assignments[i] = ensemble.clusters.assign_standardized(pre.features.row(i));
  }

  // Per-cluster class balance before any per-cluster resampling.
  std::vector<SelectionRecord> records(static_cast<std::size_t>(k));
  for (int c = 0; c < k; ++c) {
    records[static_cast<std::size_t>(c)].cluster_id = c;
  }
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    auto& rec = records[static_cast<std::size_t>(assignments[i])];
    if (pre.labels[i] == 1) ++rec.attack_count;
    else ++rec.normal_count;
  }

  std::vector<EncodedDataset> cluster_data;
  if (options.strategy == Strategy::kPerCluster) {
    cluster_data =
        apply_strategy(Strategy::kPerCluster, pre, &assignments, k, rc)
            .per_cluster;
  } else {
    std::vector<std::vector<std::size_t>> rows_of(
        static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < assignments.size(); ++i) {
      rows_of[static_cast<std::size_t>(assignments[i])].push_back(i);
    }
    cluster_data.reserve(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c) {
      cluster_data.push_back(
          pre.select_rows(rows_of[static_cast<std::size_t>(c)]));
    }
  }

  ensemble.specialists.reserve(static_cast<std::size_t>(k));
  for (int c = 0; c < k; ++c) {
    const EncodedDataset& data = cluster_data[static_cast<std::size_t>(c)];
    ensemble.specialists.push_back(
        run_contest(data.features, data.labels, options,
                    records[static_cast<std::size_t>(c)]));
  }
  ensemble.selections = std::move(records);
  return ensemble;
}

GlobalChampion select_global_champion(const EncodedDataset& train,
                                      const HybridOptions& options) {
  check_options(options);
  if (train.size() == 0 || train.labels.size() != train.size()) {
    throw std::invalid_argument(
        "select_global_champion: labeled training data required");
  }
  const ResampleConfig rc = derived_resample_config(options);

  // Mirror fit_hybrid: the scaler is fit on the raw training rows and the
  // rebalancing strategies run in standardized space.
  GlobalChampion champion;
  champion.standardizer =
      options.standardize ? Standardizer::fit(train.features)
                          : Standardizer::identity(train.features.cols);
  EncodedDataset z_train = train;
  z_train.features = champion.standardizer.transform(train.features);

  EncodedDataset data;
  switch (options.strategy) {
    case Strategy::kGlobal:
      data =
          apply_strategy(Strategy::kGlobal, z_train, nullptr, 0, rc).pooled;
      break;
    case Strategy::kPerCluster: {
      // One cluster holding everything; this reuses the per-cluster path so
      // the seed handling and single-class pass-through match fit_hybrid
      // with k_override = 1 exactly.
      const std::vector<int> one_cluster(train.size(), 0);
      data = std::move(
          apply_strategy(Strategy::kPerCluster, z_train, &one_cluster, 1, rc)
              .per_cluster[0]);
      break;
    }
    case Strategy::kNoResample:
      data = std::move(z_train);
      break;
  }

  champion.record.cluster_id = 0;
  const auto [normal, attack] =
      (options.strategy == Strategy::kGlobal ? data : train).class_counts();
  champion.record.normal_count = normal;
  champion.record.attack_count = attack;

  champion.model = run_contest(data.features, data.labels, options,
                               champion.record);
  return champion;
}

SpecialistEnsemble::Routed SpecialistEnsemble::predict_routed(
    std::span<const double> raw_row) const {
  std::vector<double> z(raw_row.size());
  clusters.standardizer.transform_row(raw_row, z);
  const int c = clusters.assign_standardized(z);
  Routed r;
  r.cluster = c;
  r.label = specialists[static_cast<std::size_t>(c)].predict(z);
  return r;
}

std::vector<SpecialistEnsemble::Routed> SpecialistEnsemble::predict_routed(
    const Matrix& raw_rows) const {
  std::vector<Routed> out;
  out.reserve(raw_rows.rows);
  for (std::size_t i = 0; i < raw_rows.rows; ++i) {
    out.push_back(predict_routed(raw_rows.row(i)));
  }
  return out;
}

std::vector<int> SpecialistEnsemble::predict(const Matrix& raw_rows) const {
  std::vector<int> out;
  out.reserve(raw_rows.rows);
  for (std::size_t i = 0; i < raw_rows.rows; ++i) {
    out.push_back(predict_routed(raw_rows.row(i)).label);
  }
  return out;
}

}  // namespace hcad
