#include "hcad/evalreport.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "hcad/resample.hpp"
#include "hcad/rng.hpp"

namespace hcad {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Seeds for the deterministic pieces of the strategy comparison.
constexpr std::uint64_t kTableClusterSalt = 0x74636c75ULL;   // "tclu"
constexpr std::uint64_t kTableResampleSalt = 0x74726573ULL;  // "tres"
constexpr std::uint64_t kTableModelSalt = 0x746d6f64ULL;     // "tmod"

// Shortest exact decimal form; reading it back yields the same double.
std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open '" + path.string() +
                             "' for writing");
  }
  return out;
}

void write_confusion_csv(const ConfusionMatrix& cm,
                         const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << ",pred_normal,pred_attack\n";
  out << "true_normal," << cm.counts[0][0] << ',' << cm.counts[0][1] << '\n';
  out << "true_attack," << cm.counts[1][0] << ',' << cm.counts[1][1] << '\n';
}

void append_metrics_csv(std::ofstream& out, const ConfusionMatrix& cm,
                        double acc) {
  out << format_double(acc) << ',' << cm.counts[0][0] << ','
      << cm.counts[0][1] << ',' << cm.counts[1][0] << ',' << cm.counts[1][1]
      << ',' << format_double(precision(cm, 0)) << ','
      << format_double(recall(cm, 0)) << ','
      << format_double(precision(cm, 1)) << ','
      << format_double(recall(cm, 1)) << '\n';
}

void append_confusion_txt(std::ofstream& out, const ConfusionMatrix& cm) {
  char buf[128];
  out << "                pred_normal  pred_attack\n";
  std::snprintf(buf, sizeof(buf), "  true_normal  %12lld %12lld\n",
                cm.counts[0][0], cm.counts[0][1]);
  out << buf;
  std::snprintf(buf, sizeof(buf), "  true_attack  %12lld %12lld\n",
                cm.counts[1][0], cm.counts[1][1]);
  out << buf;
}

std::vector<int> assign_standardized_rows(const ClusterModel& model,
                                          const Matrix& z) {
  std::vector<int> assign(z.rows);
  for (std::size_t i = 0; i < z.rows; ++i) {
    assign[i] = model.assign_standardized(z.row(i));
  }
  return assign;
}

std::vector<EncodedDataset> slice_by_cluster(const EncodedDataset& data,
                                             const std::vector<int>& assign,
                                             int k) {
  std::vector<std::vector<std::size_t>> rows_of(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < assign.size(); ++i) {
    rows_of[static_cast<std::size_t>(assign[i])].push_back(i);
  }
  std::vector<EncodedDataset> slices;
  slices.reserve(static_cast<std::size_t>(k));
  for (int c = 0; c < k; ++c) {
    slices.push_back(data.select_rows(rows_of[static_cast<std::size_t>(c)]));
  }
  return slices;
}

// Trains the requested kind on a full cluster slice; slices the kind cannot
// handle (single class, or too small for its hyperparameters) fall back to
// a constant majority model so the table stays total.
TrainedClassifier train_or_fallback(ClassifierKind kind, std::uint64_t seed,
                                    const Matrix& z,
                                    const std::vector<int>& labels) {
  long long c0 = 0, c1 = 0;
  for (const int y : labels) (y == 1 ? c1 : c0)++;
  if (labels.empty()) return make_constant_classifier(1, z.cols);
  if (c0 == 0 || c1 == 0) {
    return make_constant_classifier(c1 >= c0 ? 1 : 0, z.cols);
  }
  try {
    return train_classifier(ClassifierSpec::defaults(kind, seed), z, labels);
  } catch (const std::invalid_argument&) {
    return make_constant_classifier(c1 >= c0 ? 1 : 0, z.cols);
  }
}

}  // namespace

long long ConfusionMatrix::total() const {
  return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1];
}

long long ConfusionMatrix::correct() const {
  return counts[0][0] + counts[1][1];
}

ConfusionMatrix confusion_matrix(const std::vector<int>& y_true,
                                 const std::vector<int>& y_pred) {
  if (y_true.size() != y_pred.size()) {
    throw std::invalid_argument(
        "confusion_matrix: label vectors differ in length");
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if ((y_true[i] != 0 && y_true[i] != 1) ||
        (y_pred[i] != 0 && y_pred[i] != 1)) {
      throw std::invalid_argument("confusion_matrix: labels must be 0 or 1");
    }
    ++cm.counts[static_cast<std::size_t>(y_true[i])]
               [static_cast<std::size_t>(y_pred[i])];
  }
  return cm;
}

double accuracy(const ConfusionMatrix& cm) {
  const long long total = cm.total();
  if (total == 0) return kNaN;
  return static_cast<double>(cm.correct()) / static_cast<double>(total);
}

double precision(const ConfusionMatrix& cm, int cls) {
  if (cls != 0 && cls != 1) {
    throw std::invalid_argument("precision: class must be 0 or 1");
  }
  const auto c = static_cast<std::size_t>(cls);
  const long long predicted = cm.counts[0][c] + cm.counts[1][c];
  if (predicted == 0) return kNaN;
  return static_cast<double>(cm.counts[c][c]) /
         static_cast<double>(predicted);
}

double recall(const ConfusionMatrix& cm, int cls) {
  if (cls != 0 && cls != 1) {
    throw std::invalid_argument("recall: class must be 0 or 1");
  }
  const auto c = static_cast<std::size_t>(cls);
  const long long actual = cm.counts[c][0] + cm.counts[c][1];
  if (actual == 0) return kNaN;
  return static_cast<double>(cm.counts[c][c]) / static_cast<double>(actual);
}

EvaluationReport evaluate_ensemble(const SpecialistEnsemble& ensemble,
                                   const EncodedDataset& test) {
  if (test.size() == 0 || test.labels.size() != test.size()) {
    throw std::invalid_argument(
        "evaluate_ensemble: labeled test data required");
  }
  const int k = ensemble.clusters.k;
  EvaluationReport report;
  report.per_cluster.resize(static_cast<std::size_t>(k));
  for (int c = 0; c < k; ++c) {
    auto& ce = report.per_cluster[static_cast<std::size_t>(c)];
    ce.cluster_id = c;
    ce.winner = ensemble.selections[static_cast<std::size_t>(c)].winner;
  }

  const auto routed = ensemble.predict_routed(test.features);
  for (std::size_t i = 0; i < routed.size(); ++i) {
    const auto t = static_cast<std::size_t>(test.labels[i]);
    const auto p = static_cast<std::size_t>(routed[i].label);
    if (t > 1) {
      throw std::invalid_argument("evaluate_ensemble: labels must be 0 or 1");
    }
    report.overall.counts[t][p]++;
    auto& ce = report.per_cluster[static_cast<std::size_t>(routed[i].cluster)];
    ce.matrix.counts[t][p]++;
    ce.sample_count++;
  }

  report.overall_accuracy = accuracy(report.overall);
  for (auto& ce : report.per_cluster) ce.accuracy = accuracy(ce.matrix);
  return report;
}

void write_report(const EvaluationReport& report, const std::string& out_dir) {
  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);

  {
    std::ofstream csv = open_out(dir / "report.csv");
    csv << "cluster,winner,samples,accuracy,true_normal_pred_normal,"
           "true_normal_pred_attack,true_attack_pred_normal,"
           "true_attack_pred_attack,precision_normal,recall_normal,"
           "precision_attack,recall_attack\n";
    for (const ClusterEvaluation& ce : report.per_cluster) {
      csv << ce.cluster_id << ',' << to_string(ce.winner) << ','
          << ce.sample_count << ',';
      append_metrics_csv(csv, ce.matrix, ce.accuracy);
    }
    csv << "overall,-," << report.overall.total() << ',';
    append_metrics_csv(csv, report.overall, report.overall_accuracy);
  }

  {
    std::ofstream txt = open_out(dir / "report.txt");
    txt << "Hybrid ensemble evaluation\n";
    txt << "==========================\n\n";
    txt << "Test rows:        " << report.overall.total() << '\n';
    txt << "Overall accuracy: " << fixed6(report.overall_accuracy) << "\n\n";
    txt << "Overall confusion (rows: truth, columns: prediction)\n";
    append_confusion_txt(txt, report.overall);
    for (const ClusterEvaluation& ce : report.per_cluster) {
      txt << "\nCluster " << ce.cluster_id << ": specialist "
          << to_string(ce.winner) << ", " << ce.sample_count
          << " test rows, accuracy " << fixed6(ce.accuracy) << '\n';
      append_confusion_txt(txt, ce.matrix);
      txt << "  precision: normal " << fixed6(precision(ce.matrix, 0))
          << ", attack " << fixed6(precision(ce.matrix, 1)) << '\n';
      txt << "  recall:    normal " << fixed6(recall(ce.matrix, 0))
          << ", attack " << fixed6(recall(ce.matrix, 1)) << '\n';
    }
  }

  for (const ClusterEvaluation& ce : report.per_cluster) {
    write_confusion_csv(ce.matrix,
                        dir / ("confusion_cluster" +
                               std::to_string(ce.cluster_id) + ".csv"));
  }
}

std::vector<StrategyTableRow> strategy_table(const EncodedDataset& train,
                                             const EncodedDataset& test,
                                             const StrategyTableConfig& config) {
  if (train.size() == 0 || train.labels.size() != train.size()) {
    throw std::invalid_argument(
        "strategy_table: labeled training data required");
  }
  if (test.size() == 0 || test.labels.size() != test.size()) {
    throw std::invalid_argument("strategy_table: labeled test data required");
  }
  if (config.k < 1) {
    throw std::invalid_argument("strategy_table: k must be >= 1");
  }
  config.resample.validate();

  ClusterFitOptions co;
  co.k_override = config.k;
  co.max_iter = config.max_iter;
  co.tol = config.tol;
  co.standardize = false;  // inputs are standardized up front below
  co.seed = derive_seed(config.seed, kTableClusterSalt);

  ResampleConfig rc = config.resample;
  rc.seed = derive_seed(config.seed, kTableResampleSalt);

  // Scaling is preprocessing: one scaler fit on the training rows, with the
  // rebalancing strategies and clusterings all run in standardized space.
  const Standardizer standardizer =
      config.standardize ? Standardizer::fit(train.features)
                         : Standardizer::identity(train.features.cols);
  EncodedDataset z_train = train;
  z_train.features = standardizer.transform(train.features);

  // Approaches 1 and 2 share one clustering of the training data as it is;
  // approach 3 rebalances the pool first and clusters the result.
  const ClusterModel raw_model = fit_cluster_model(z_train.features, co);
  const std::vector<int> raw_assign =
      assign_standardized_rows(raw_model, z_train.features);

  const EncodedDataset rebalanced = rebalance(z_train, rc);
  const ClusterModel global_model =
      fit_cluster_model(rebalanced.features, co);
  const std::vector<int> global_assign =
      assign_standardized_rows(global_model, rebalanced.features);

  const int k = config.k;
  const std::array<const ClusterModel*, 3> models = {&raw_model, &raw_model,
                                                     &global_model};
  std::array<std::vector<EncodedDataset>, 3> slices;
  slices[0] = slice_by_cluster(z_train, raw_assign, k);
  slices[1] =
      apply_strategy(Strategy::kPerCluster, z_train, &raw_assign, k, rc)
          .per_cluster;
  slices[2] = slice_by_cluster(rebalanced, global_assign, k);

  const Matrix z_test_all = standardizer.transform(test.features);

  std::vector<StrategyTableRow> rows(kAllClassifierKinds.size() *
                                     static_cast<std::size_t>(k));
  for (std::size_t ki = 0; ki < kAllClassifierKinds.size(); ++ki) {
    for (int c = 0; c < k; ++c) {
      auto& row = rows[ki * static_cast<std::size_t>(k) +
                       static_cast<std::size_t>(c)];
      row.model = kAllClassifierKinds[ki];
      row.cluster = c;
      row.accuracy = {kNaN, kNaN, kNaN};
    }
  }

  for (std::size_t a = 0; a < 3; ++a) {
    const ClusterModel& model = *models[a];
    const std::vector<int> test_assign =
        assign_standardized_rows(model, z_test_all);
    std::vector<std::vector<std::size_t>> test_rows_of(
        static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < test_assign.size(); ++i) {
      test_rows_of[static_cast<std::size_t>(test_assign[i])].push_back(i);
    }

    for (int c = 0; c < k; ++c) {
      const EncodedDataset& slice = slices[a][static_cast<std::size_t>(c)];
      const Matrix& z_slice = slice.features;
      const auto& test_idx = test_rows_of[static_cast<std::size_t>(c)];
      const Matrix z_routed = z_test_all.select_rows(test_idx);
      std::vector<int> y_routed;
      y_routed.reserve(test_idx.size());
      for (const std::size_t i : test_idx) y_routed.push_back(test.labels[i]);

      for (std::size_t ki = 0; ki < kAllClassifierKinds.size(); ++ki) {
        const std::uint64_t seed = derive_seed(
            config.seed, kTableModelSalt,
            (a * static_cast<std::size_t>(k) + static_cast<std::size_t>(c)) *
                    16 +
                ki);
        const TrainedClassifier m = train_or_fallback(
            kAllClassifierKinds[ki], seed, z_slice, slice.labels);
        if (!test_idx.empty()) {
          rows[ki * static_cast<std::size_t>(k) + static_cast<std::size_t>(c)]
              .accuracy[a] = accuracy_on(m, z_routed, y_routed);
        }
      }
    }
  }
  return rows;
}

void write_strategy_table(const std::vector<StrategyTableRow>& rows,
                          const std::string& path) {
  std::ofstream out = open_out(path);
  out << "model,cluster,approach1_none,approach2_per_cluster,"
         "approach3_global\n";
  for (const StrategyTableRow& row : rows) {
    out << to_string(row.model) << ',' << row.cluster << ','
        << format_double(row.accuracy[0]) << ','
        << format_double(row.accuracy[1]) << ','
        << format_double(row.accuracy[2]) << '\n';
  }
}

}  // namespace hcad
