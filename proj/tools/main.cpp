// hcad - cluster-specialist anomaly detection for network flow records.
//
// Subcommands cover the full pipeline: generate synthetic traffic, inspect
// preprocessing, split data, explore the clustering, train an ensemble,
// evaluate it, compare resampling strategies, and predict on new flows.
//
// Exit codes: 0 success, 1 usage error, 2 data or processing error.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hcad/csv.hpp"
#include "hcad/evalreport.hpp"
#include "hcad/flowdata.hpp"
#include "hcad/hybrid.hpp"
#include "hcad/synthgen.hpp"

namespace {

// One seed drives every stochastic stage; the library derives independent
// streams from it per stage. 7 is just the documented default.
constexpr std::uint64_t kDefaultSeed = 7;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  return out;
}

// Writes the header plus the selected raw rows, preserving the input cells.
void write_raw_subset(const hcad::RawTable& table,
                      const std::vector<std::size_t>& indices,
                      const std::string& path) {
  std::ofstream out = open_out(path);
  hcad::csv::write_record(out, table.column_names);
  for (const std::size_t i : indices) {
    hcad::csv::write_record(out, table.rows[i]);
  }
}

std::vector<hcad::ClassifierKind> parse_preference(const std::string& spec) {
  std::vector<hcad::ClassifierKind> order;
  std::stringstream in(spec);
  std::string token;
  while (std::getline(in, token, ',')) {
    order.push_back(hcad::classifier_kind_from_string(token));
  }
  if (order.size() != hcad::kAllClassifierKinds.size()) {
    throw std::invalid_argument(
        "--prefer must list all six model kinds exactly once");
  }
  for (const hcad::ClassifierKind kind : hcad::kAllClassifierKinds) {
    if (std::count(order.begin(), order.end(), kind) != 1) {
      throw std::invalid_argument(
          "--prefer must list all six model kinds exactly once");
    }
  }
  return order;
}

void print_selection(const hcad::SelectionRecord& rec) {
  std::cout << "cluster " << rec.cluster_id << ": winner "
            << hcad::to_string(rec.winner) << " (normal " << rec.normal_count
            << ", attack " << rec.attack_count << ")";
  if (!rec.accuracies.empty()) {
    std::cout << ", validation rows " << rec.validation_row_count
              << (rec.tie_broken ? ", tie broken" : "") << "\n ";
    for (const auto& [kind, acc] : rec.accuracies) {
      std::cout << "  " << hcad::to_string(kind) << "="
                << format_double(acc);
    }
  } else {
    std::cout << ", no contest (degenerate cluster)";
  }
  std::cout << '\n';
}

// ---- synth ---------------------------------------------------------------

struct SynthArgs {
  std::string out;
  std::string preset = "hetero3";
  std::size_t rows = 50000;
  double normal_fraction = 0.005;
  double label_noise = 0.0;
  std::uint64_t seed = kDefaultSeed;
};

void run_synth(const SynthArgs& args) {
  hcad::SynthConfig config =
      args.preset == "botiot-imbalance"
          ? hcad::SynthConfig::botiot_imbalance(args.rows, args.seed)
          : hcad::SynthConfig::hetero3(args.rows, args.normal_fraction,
                                       args.seed);
  config.label_noise = args.label_noise;

  const hcad::SynthResult result = hcad::generate(config);
  hcad::write_rows_csv(result.table, args.out);
  hcad::synth_schema().save(args.out + ".schema");
  hcad::write_profile_sidecar(result.profile_ids, args.out + ".profiles");

  std::size_t normals = 0;
  for (const int y : result.labels) normals += (y == 0);
  std::cout << "wrote " << result.table.row_count() << " rows to " << args.out
            << " (" << normals << " normal, "
            << result.table.row_count() - normals << " attack)\n";
  std::cout << "schema: " << args.out << ".schema\n";
  std::cout << "profiles: " << args.out << ".profiles\n";
}

// ---- preprocess ------------------------------------------------------------

struct PreprocessArgs {
  std::string input;
  std::string schema;
  std::string out;
};

void run_preprocess(const PreprocessArgs& args) {
  const hcad::SchemaConfig schema = hcad::SchemaConfig::from_file(args.schema);
  const hcad::RawTable raw = hcad::load_table(args.input, schema);
  const hcad::EncodedDataset data = hcad::encode_table(raw, schema);

  std::ofstream out = open_out(args.out);
  std::vector<std::string> header = data.feature_names;
  header.push_back("label");
  hcad::csv::write_record(out, header);
  std::vector<std::string> cells(data.feature_names.size() + 1);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto row = data.features.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      cells[j] = format_double(row[j]);
    }
    cells.back() = std::to_string(data.labels[i]);
    hcad::csv::write_record(out, cells);
  }

  const auto [normal, attack] = data.class_counts();
  std::cout << "encoded " << data.size() << " rows, "
            << data.feature_names.size() << " features (" << normal
            << " normal, " << attack << " attack) to " << args.out << '\n';
}

// ---- split -----------------------------------------------------------------

struct SplitArgs {
  std::string input;
  std::string schema;
  std::string train_out;
  std::string test_out;
  double fraction = 0.7;
  std::uint64_t seed = kDefaultSeed;
};

void run_split(const SplitArgs& args) {
  const hcad::SchemaConfig schema = hcad::SchemaConfig::from_file(args.schema);
  const hcad::RawTable raw = hcad::load_table(args.input, schema);
  const hcad::EncodedDataset data = hcad::encode_table(raw, schema);

  const auto [train_idx, test_idx] =
      hcad::stratified_split_indices(data.labels, args.fraction, args.seed);
  write_raw_subset(raw, train_idx, args.train_out);
  write_raw_subset(raw, test_idx, args.test_out);
  std::cout << "train: " << train_idx.size() << " rows -> " << args.train_out
            << '\n';
  std::cout << "test:  " << test_idx.size() << " rows -> " << args.test_out
            << '\n';
}

// ---- cluster ---------------------------------------------------------------

struct ClusterArgs {
  std::string input;
  std::string schema;
  int k = 0;  // 0: elbow rule
  int k_max = 10;
  int max_iter = 300;
  double tol = 1e-6;
  bool no_scale = false;
  std::uint64_t seed = kDefaultSeed;
  std::string assignments_out;
  std::string curve_out;
};

void run_cluster(const ClusterArgs& args) {
  const hcad::SchemaConfig schema = hcad::SchemaConfig::from_file(args.schema);
  const hcad::RawTable raw = hcad::load_table(args.input, schema);
  const hcad::EncodedDataset data = hcad::encode_table(raw, schema);

  hcad::ClusterFitOptions options;
  options.k_override = args.k;
  options.k_max = args.k_max;
  options.max_iter = args.max_iter;
  options.tol = args.tol;
  options.standardize = !args.no_scale;
  options.seed = args.seed;

  const hcad::ClusterModel model =
      hcad::fit_cluster_model(data.features, options);
  std::cout << "k=" << model.k << " wcss=" << format_double(model.wcss)
            << " iterations=" << model.iterations_run << '\n';
  for (const hcad::WcssPoint& p : model.curve) {
    std::cout << "  curve k=" << p.k << " wcss=" << format_double(p.wcss)
              << '\n';
  }

  if (!args.curve_out.empty()) {
    std::ofstream out = open_out(args.curve_out);
    out << "k,wcss\n";
    for (const hcad::WcssPoint& p : model.curve) {
      out << p.k << ',' << format_double(p.wcss) << '\n';
    }
  }
  if (!args.assignments_out.empty()) {
    const std::vector<int> assign = model.assign_all(data.features);
    std::ofstream out = open_out(args.assignments_out);
    out << "row,cluster\n";
    for (std::size_t i = 0; i < assign.size(); ++i) {
      out << i << ',' << assign[i] << '\n';
    }
  }
}

// ---- train -----------------------------------------------------------------

struct TrainArgs {
  std::string input;
  std::string schema;
  std::string out;
  std::string strategy = "per-cluster";
  int k = 3;  // 0: elbow rule
  int k_max = 10;
  std::uint64_t seed = kDefaultSeed;
  int smote_k = 5;
  double target_ratio = 1.0;
  std::string prefer;
  double train_fraction = 0.7;
  bool no_split = false;
  std::string holdout_out;
  bool no_scale = false;
  int max_iter = 300;
  double tol = 1e-6;
};

void run_train(const TrainArgs& args) {
  const hcad::SchemaConfig schema = hcad::SchemaConfig::from_file(args.schema);
  const hcad::RawTable raw = hcad::load_table(args.input, schema);
  const hcad::EncodedDataset full = hcad::encode_table(raw, schema);

  hcad::HybridOptions options;
  options.strategy = hcad::strategy_from_string(args.strategy);
  options.resample.smote_k = args.smote_k;
  options.resample.target_ratio = args.target_ratio;
  options.k_override = args.k;
  options.k_max = args.k_max;
  options.max_iter = args.max_iter;
  options.tol = args.tol;
  options.standardize = !args.no_scale;
  options.seed = args.seed;
  if (!args.prefer.empty()) {
    options.preference_order = parse_preference(args.prefer);
  }

  hcad::EncodedDataset train;
  if (args.no_split) {
    train = full;
  } else {
    const auto [train_idx, test_idx] = hcad::stratified_split_indices(
        full.labels, args.train_fraction, args.seed);
    train = full.select_rows(train_idx);
    if (!args.holdout_out.empty()) {
      write_raw_subset(raw, test_idx, args.holdout_out);
      std::cout << "holdout: " << test_idx.size() << " rows -> "
                << args.holdout_out << '\n';
    }
  }

  const hcad::SpecialistEnsemble ensemble =
      hcad::fit_hybrid(train, schema, options);
  hcad::save_ensemble(ensemble, args.out);

  std::cout << "trained on " << train.size() << " rows, k="
            << ensemble.clusters.k << ", strategy "
            << hcad::to_string(options.strategy) << '\n';
  for (const hcad::SelectionRecord& rec : ensemble.selections) {
    print_selection(rec);
  }
  std::cout << "model: " << args.out << '\n';
}

// ---- evaluate --------------------------------------------------------------

struct EvaluateArgs {
  std::string model;
  std::string input;
  std::string report_dir;
};

void run_evaluate(const EvaluateArgs& args) {
  const hcad::SpecialistEnsemble ensemble = hcad::load_ensemble(args.model);
  const hcad::RawTable raw = hcad::load_table(args.input, ensemble.schema);
  const hcad::EncodedDataset test =
      hcad::encode_table_with(raw, ensemble.schema, ensemble.encoders);

  const hcad::EvaluationReport report =
      hcad::evaluate_ensemble(ensemble, test);
  hcad::write_report(report, args.report_dir);

  std::cout << "rows " << report.overall.total() << ", overall accuracy "
            << format_double(report.overall_accuracy) << '\n';
  for (const hcad::ClusterEvaluation& ce : report.per_cluster) {
    std::cout << "cluster " << ce.cluster_id << " ("
              << hcad::to_string(ce.winner) << "): " << ce.sample_count
              << " rows, accuracy " << format_double(ce.accuracy) << '\n';
  }
  std::cout << "reports: " << args.report_dir << '\n';
}

// ---- compare-strategies ------------------------------------------------------

struct CompareArgs {
  std::string input;
  std::string schema;
  std::string out;
  int k = 3;
  double train_fraction = 0.7;
  std::uint64_t seed = kDefaultSeed;
  int smote_k = 5;
  double target_ratio = 1.0;
  bool no_scale = false;
  int max_iter = 300;
  double tol = 1e-6;
};

void run_compare(const CompareArgs& args) {
  const hcad::SchemaConfig schema = hcad::SchemaConfig::from_file(args.schema);
  const hcad::RawTable raw = hcad::load_table(args.input, schema);
  const hcad::EncodedDataset full = hcad::encode_table(raw, schema);
  const auto [train, test] =
      hcad::stratified_split(full, args.train_fraction, args.seed);

  hcad::StrategyTableConfig config;
  config.k = args.k;
  config.resample.smote_k = args.smote_k;
  config.resample.target_ratio = args.target_ratio;
  config.max_iter = args.max_iter;
  config.tol = args.tol;
  config.standardize = !args.no_scale;
  config.seed = args.seed;

  const auto rows = hcad::strategy_table(train, test, config);
  hcad::write_strategy_table(rows, args.out);

  const auto pad = [](std::string s, std::size_t width) {
    if (s.size() < width) s.resize(width, ' ');
    return s;
  };
  std::cout << pad("model", 11) << pad("cluster", 9) << pad("none", 10)
            << pad("per-cluster", 13) << "global\n";
  for (const hcad::StrategyTableRow& row : rows) {
    std::cout << pad(hcad::to_string(row.model), 11)
              << pad(std::to_string(row.cluster), 9)
              << pad(format_double(row.accuracy[0]), 10)
              << pad(format_double(row.accuracy[1]), 13)
              << format_double(row.accuracy[2]) << '\n';
  }
  std::cout << "table: " << args.out << '\n';
}

// ---- predict ---------------------------------------------------------------

struct PredictArgs {
  std::string model;
  std::string input;
  std::string out;
};

void run_predict(const PredictArgs& args) {
  const hcad::SpecialistEnsemble ensemble = hcad::load_ensemble(args.model);
  const hcad::RawTable raw =
      hcad::load_table(args.input, ensemble.schema, /*require_label=*/false);
  const hcad::EncodedDataset data =
      hcad::encode_table_with(raw, ensemble.schema, ensemble.encoders);

  const auto routed = ensemble.predict_routed(data.features);
  std::ofstream out = open_out(args.out);
  out << "row,cluster,label\n";
  for (std::size_t i = 0; i < routed.size(); ++i) {
    out << i << ',' << routed[i].cluster << ',' << routed[i].label << '\n';
  }
  std::cout << "predicted " << routed.size() << " rows -> " << args.out
            << '\n';

  if (!data.labels.empty()) {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < routed.size(); ++i) {
      correct += (routed[i].label == data.labels[i]);
    }
    std::cout << "labeled input: accuracy "
              << format_double(static_cast<double>(correct) /
                               static_cast<double>(routed.size()))
              << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Cluster-specialist anomaly detection for network flow records"};
  app.require_subcommand(1);

  SynthArgs synth_args;
  CLI::App* synth = app.add_subcommand(
      "synth", "Generate a synthetic labeled flow CSV plus schema sidecars");
  synth->add_option("--out", synth_args.out, "Output CSV path")->required();
  synth->add_option("--preset", synth_args.preset,
                    "Data preset: hetero3 or botiot-imbalance")
      ->check(CLI::IsMember({"hetero3", "botiot-imbalance"}));
  synth->add_option("--rows", synth_args.rows, "Rows to generate");
  synth->add_option("--normal-fraction,--normal-frac", synth_args.normal_fraction,
                    "Fraction of rows labeled normal (hetero3 preset)");
  synth->add_option("--label-noise", synth_args.label_noise,
                    "Probability of flipping each label");
  synth->add_option("--seed", synth_args.seed, "Random seed");
  synth->callback([&] { run_synth(synth_args); });

  PreprocessArgs preprocess_args;
  CLI::App* preprocess = app.add_subcommand(
      "preprocess", "Encode a raw flow CSV into numeric features");
  preprocess->add_option("--input", preprocess_args.input, "Raw CSV")
      ->required();
  preprocess->add_option("--schema", preprocess_args.schema, "Schema file")
      ->required();
  preprocess->add_option("--out", preprocess_args.out, "Encoded CSV path")
      ->required();
  preprocess->callback([&] { run_preprocess(preprocess_args); });

  SplitArgs split_args;
  CLI::App* split = app.add_subcommand(
      "split", "Stratified train/test split of a labeled CSV");
  split->add_option("--input", split_args.input, "Raw CSV")->required();
  split->add_option("--schema", split_args.schema, "Schema file")->required();
  split->add_option("--train-out", split_args.train_out, "Training CSV path")
      ->required();
  split->add_option("--test-out", split_args.test_out, "Test CSV path")
      ->required();
  split->add_option("--fraction", split_args.fraction,
                    "Fraction of each class placed in the training side");
  split->add_option("--seed", split_args.seed, "Random seed");
  split->callback([&] { run_split(split_args); });

  ClusterArgs cluster_args;
  CLI::App* cluster = app.add_subcommand(
      "cluster", "Fit the k-means partition and report the wcss curve");
  cluster->add_option("--input", cluster_args.input, "Raw CSV")->required();
  cluster->add_option("--schema", cluster_args.schema, "Schema file")
      ->required();
  cluster->add_option("--k", cluster_args.k,
                      "Cluster count; 0 picks k by the elbow rule");
  cluster->add_option("--k-max", cluster_args.k_max,
                      "Largest k tried by the elbow rule");
  cluster->add_option("--max-iter", cluster_args.max_iter,
                      "Iteration cap per fit");
  cluster->add_option("--tol", cluster_args.tol,
                      "Centroid shift tolerance");
  cluster->add_flag("--no-scale", cluster_args.no_scale,
                    "Skip z-score standardization");
  cluster->add_option("--seed", cluster_args.seed, "Random seed");
  cluster->add_option("--assignments-out", cluster_args.assignments_out,
                      "Optional CSV of row,cluster assignments");
  cluster->add_option("--curve-out", cluster_args.curve_out,
                      "Optional CSV of the k,wcss curve");
  cluster->callback([&] { run_cluster(cluster_args); });

  TrainArgs train_args;
  CLI::App* train = app.add_subcommand(
      "train", "Train the cluster-specialist ensemble and save it");
  train->add_option("--input", train_args.input, "Raw labeled CSV")
      ->required();
  train->add_option("--schema", train_args.schema, "Schema file")->required();
  train->add_option("--out", train_args.out, "Model output path")->required();
  train->add_option("--strategy", train_args.strategy,
                    "Resampling strategy: none, per-cluster or global");
  train->add_option("--k", train_args.k,
                    "Cluster count; 0 picks k by the elbow rule");
  train->add_option("--k-max", train_args.k_max,
                    "Largest k tried by the elbow rule");
  train->add_option("--seed", train_args.seed, "Random seed");
  train->add_option("--smote-k", train_args.smote_k,
                    "Neighbours per synthetic minority sample");
  train->add_option("--target-ratio", train_args.target_ratio,
                    "Minority/majority ratio the resampler aims for");
  train->add_option("--prefer", train_args.prefer,
                    "Comma-separated tie-break order over all six kinds");
  train->add_option("--train-fraction", train_args.train_fraction,
                    "Share of rows used for training (rest held out)");
  train->add_flag("--no-split", train_args.no_split,
                  "Train on every input row");
  train->add_option("--holdout-out", train_args.holdout_out,
                    "Write the held-out rows to this CSV");
  train->add_flag("--no-scale", train_args.no_scale,
                  "Skip z-score standardization");
  train->add_option("--max-iter", train_args.max_iter,
                    "k-means iteration cap");
  train->add_option("--tol", train_args.tol,
                    "k-means centroid shift tolerance");
  train->callback([&] { run_train(train_args); });

  EvaluateArgs evaluate_args;
  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "Score a saved ensemble on labeled data and write reports");
  evaluate->add_option("--model", evaluate_args.model, "Saved model path")
      ->required();
  evaluate->add_option("--input,--test", evaluate_args.input, "Labeled CSV")
      ->required();
  evaluate->add_option("--report-dir,--out", evaluate_args.report_dir,
                       "Directory for report.txt/report.csv/confusion files")
      ->required();
  evaluate->callback([&] { run_evaluate(evaluate_args); });

  CompareArgs compare_args;
  CLI::App* compare = app.add_subcommand(
      "compare-strategies",
      "Per-cluster test accuracy of every kind under all three strategies");
  compare->add_option("--input", compare_args.input, "Raw labeled CSV")
      ->required();
  compare->add_option("--schema", compare_args.schema, "Schema file")
      ->required();
  compare->add_option("--out", compare_args.out, "Output CSV path")
      ->required();
  compare->add_option("--k", compare_args.k, "Cluster count");
  compare->add_option("--train-fraction", compare_args.train_fraction,
                      "Share of rows used for training");
  compare->add_option("--seed", compare_args.seed, "Random seed");
  compare->add_option("--smote-k", compare_args.smote_k,
                      "Neighbours per synthetic minority sample");
  compare->add_option("--target-ratio", compare_args.target_ratio,
                      "Minority/majority ratio the resampler aims for");
  compare->add_flag("--no-scale", compare_args.no_scale,
                    "Skip z-score standardization");
  compare->add_option("--max-iter", compare_args.max_iter,
                      "k-means iteration cap");
  compare->add_option("--tol", compare_args.tol,
                      "k-means centroid shift tolerance");
  compare->callback([&] { run_compare(compare_args); });

  PredictArgs predict_args;
  CLI::App* predict = app.add_subcommand(
      "predict", "Route new flows through a saved ensemble");
  predict->add_option("--model", predict_args.model, "Saved model path")
      ->required();
  predict->add_option("--input", predict_args.input,
                      "CSV to classify (label column optional)")
      ->required();
  predict->add_option("--out", predict_args.out,
                      "Output CSV of row,cluster,label")
      ->required();
  predict->callback([&] { run_predict(predict_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
