#include "hcad/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "hcad/rng.hpp"
#include "tree_internal.hpp"

namespace hcad {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void check_training_data(const Matrix& features,
                         const std::vector<int>& labels) {
  if (features.rows == 0) {
    throw std::invalid_argument("train: empty dataset");
  }
  if (features.rows != labels.size()) {
    throw std::invalid_argument("train: feature/label size mismatch");
  }
  for (const int y : labels) {
    if (y != 0 && y != 1) {
      throw std::invalid_argument("train: labels must be 0 or 1");
    }
  }
}

std::pair<long long, long long> tally(const std::vector<int>& labels) {
  long long c0 = 0, c1 = 0;
  for (const int y : labels) {
    if (y == 1) ++c1;
    else ++c0;
  }
  return {c0, c1};
}

DecisionTree train_tree(const ClassifierSpec& spec, const Matrix& features,
                        const std::vector<int>& labels,
                        SplitCriterion criterion) {
  std::vector<std::size_t> rows(features.rows);
  std::iota(rows.begin(), rows.end(), 0);
  return detail::build_classification_tree(
      features, labels, std::move(rows), criterion, spec.max_depth,
      spec.min_samples_split, features.cols, nullptr);
}

ForestModel train_forest(const ClassifierSpec& spec, const Matrix& features,
                         const std::vector<int>& labels) {
  const std::size_t d = features.cols;
  std::size_t fps = spec.features_per_split > 0
                        ? static_cast<std::size_t>(spec.features_per_split)
                        : static_cast<std::size_t>(
                              std::floor(std::sqrt(static_cast<double>(d))));
  fps = std::clamp<std::size_t>(fps, 1, d);

  Rng rng(spec.seed);
  ForestModel forest;
  forest.trees.reserve(static_cast<std::size_t>(spec.n_trees));
  std::vector<std::size_t> rows(features.rows);
  for (int t = 0; t < spec.n_trees; ++t) {
    if (spec.bootstrap) {
      for (auto& r : rows) r = rng.next_index(features.rows);
    } else {
      std::iota(rows.begin(), rows.end(), 0);
    }
    // With all features in play every node scans everything and the rng is
    // never consumed, so a 1-tree, no-bootstrap forest is exactly the plain
    // decision tree.
    Rng* node_rng = (fps < d) ? &rng : nullptr;
    forest.trees.push_back(detail::build_classification_tree(
        features, labels, rows, SplitCriterion::kGini, spec.max_depth,
        spec.min_samples_split, fps, node_rng));
  }
  return forest;
}

GnbModel train_gnb(const ClassifierSpec& spec, const Matrix& features,
                   const std::vector<int>& labels) {
  const std::size_t d = features.cols;
  const std::size_t n = features.rows;
  const auto [c0, c1] = tally(labels);

  GnbModel model;
  model.mean = Matrix(2, d);
  model.variance = Matrix(2, d);
  model.log_prior = {
      std::log(static_cast<double>(c0) / static_cast<double>(n)),
      std::log(static_cast<double>(c1) / static_cast<double>(n))};

  for (std::size_t i = 0; i < n; ++i) {
    const auto row = features.row(i);
    const auto cls = static_cast<std::size_t>(labels[i]);
    for (std::size_t j = 0; j < d; ++j) model.mean.at(cls, j) += row[j];
  }
  const std::array<double, 2> counts = {static_cast<double>(c0),
                                        static_cast<double>(c1)};
  for (std::size_t cls = 0; cls < 2; ++cls) {
    for (std::size_t j = 0; j < d; ++j) model.mean.at(cls, j) /= counts[cls];
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = features.row(i);
    const auto cls = static_cast<std::size_t>(labels[i]);
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = row[j] - model.mean.at(cls, j);
      model.variance.at(cls, j) += diff * diff;
    }
  }
  for (std::size_t cls = 0; cls < 2; ++cls) {
    for (std::size_t j = 0; j < d; ++j) model.variance.at(cls, j) /= counts[cls];
  }

  // Variance floor, scaled by the data: smoothing times the largest
  // per-feature variance over the pooled training rows.
  double max_var = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += features.at(i, j);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double diff = features.at(i, j) - mean;
      var += diff * diff;
    }
    max_var = std::max(max_var, var / static_cast<double>(n));
  }
  double eps = spec.variance_smoothing * max_var;
  if (eps <= 0.0) eps = spec.variance_smoothing;  // all-constant features
  for (std::size_t cls = 0; cls < 2; ++cls) {
    for (std::size_t j = 0; j < d; ++j) model.variance.at(cls, j) += eps;
  }
  return model;
}

GbtModel train_gbt(const ClassifierSpec& spec, const Matrix& features,
                   const std::vector<int>& labels) {
  const std::size_t n = features.rows;
  const auto [c0, c1] = tally(labels);

  GbtModel model;
  model.learning_rate = spec.learning_rate;
  const double base_rate = std::clamp(
      static_cast<double>(c1) / static_cast<double>(n), 1e-6, 1.0 - 1e-6);
  model.initial_score = std::log(base_rate / (1.0 - base_rate));
  model.trees.reserve(static_cast<std::size_t>(spec.n_rounds));
  model.training_loss.reserve(static_cast<std::size_t>(spec.n_rounds));

  std::vector<double> score(n, model.initial_score);
  std::vector<double> grad(n), hess(n);
  for (int round = 0; round < spec.n_rounds; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = sigmoid(score[i]);
      grad[i] = static_cast<double>(labels[i]) - p;
      hess[i] = p * (1.0 - p);
    }
    RegressionTree tree = detail::build_regression_tree(
        features, grad, hess, spec.gbt_depth, spec.min_samples_split);
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      score[i] += spec.learning_rate * tree.predict(features.row(i));
      const double p =
          std::clamp(sigmoid(score[i]), 1e-12, 1.0 - 1e-12);
      loss -= labels[i] == 1 ? std::log(p) : std::log(1.0 - p);
    }
    model.trees.push_back(std::move(tree));
    model.training_loss.push_back(loss / static_cast<double>(n));
  }
  return model;
}

KnnModel train_knn(const ClassifierSpec& spec, const Matrix& features,
                   const std::vector<int>& labels) {
  if (static_cast<std::size_t>(spec.knn_k) > features.rows) {
    throw std::invalid_argument(
        "knn: k=" + std::to_string(spec.knn_k) + " exceeds the " +
        std::to_string(features.rows) + " training rows");
  }
  KnnModel model;
  model.k = spec.knn_k;
  model.train = features;
  model.labels = labels;
  return model;
}

}  // namespace

std::string to_string(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::kDtGini: return "dtGini";
    case ClassifierKind::kDtEntropy: return "dtEntropy";
    case ClassifierKind::kRf: return "rf";
    case ClassifierKind::kGnb: return "gnb";
    case ClassifierKind::kGbt: return "gbt";
    case ClassifierKind::kKnn: return "knn";
    case ClassifierKind::kConstant: return "constant";
  }
  throw std::invalid_argument("unknown classifier kind");
}

ClassifierKind classifier_kind_from_string(const std::string& name) {
  if (name == "dtGini") return ClassifierKind::kDtGini;
  if (name == "dtEntropy") return ClassifierKind::kDtEntropy;
  if (name == "rf") return ClassifierKind::kRf;
  if (name == "gnb") return ClassifierKind::kGnb;
  if (name == "gbt") return ClassifierKind::kGbt;
  if (name == "knn") return ClassifierKind::kKnn;
  if (name == "constant") return ClassifierKind::kConstant;
  throw std::invalid_argument("unknown classifier kind '" + name + "'");
}

ClassifierSpec ClassifierSpec::defaults(ClassifierKind kind,
                                        std::uint64_t seed) {
  ClassifierSpec spec;
  spec.kind = kind;
  spec.seed = seed;
  return spec;
}

void ClassifierSpec::validate() const {
  if (max_depth < 1) throw std::invalid_argument("max_depth must be >= 1");
  if (min_samples_split < 2) {
    throw std::invalid_argument("min_samples_split must be >= 2");
  }
  if (n_trees < 1) throw std::invalid_argument("n_trees must be >= 1");
  if (features_per_split < 0) {
    throw std::invalid_argument("features_per_split must be >= 0");
  }
  if (n_rounds < 1) throw std::invalid_argument("n_rounds must be >= 1");
  if (gbt_depth < 1) throw std::invalid_argument("gbt_depth must be >= 1");
  if (!(learning_rate > 0.0)) {
    throw std::invalid_argument("learning_rate must be positive");
  }
  if (knn_k < 1) throw std::invalid_argument("knn_k must be >= 1");
  if (variance_smoothing < 0.0) {
    throw std::invalid_argument("variance_smoothing must be >= 0");
  }
}

int ForestModel::predict(std::span<const double> x) const {
  long long votes1 = 0;
  for (const auto& tree : trees) votes1 += tree.predict(x);
  const long long votes0 = static_cast<long long>(trees.size()) - votes1;
  return votes1 >= votes0 ? 1 : 0;
}

std::array<double, 2> GnbModel::log_joint(std::span<const double> x) const {
  std::array<double, 2> joint{};
  for (std::size_t cls = 0; cls < 2; ++cls) {
    double sum = log_prior[cls];
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double var = variance.at(cls, j);
      const double diff = x[j] - mean.at(cls, j);
      sum += -0.5 * std::log(2.0 * std::numbers::pi * var) -
             diff * diff / (2.0 * var);
    }
    joint[cls] = sum;
  }
  return joint;
}

int GnbModel::predict(std::span<const double> x) const {
  const auto joint = log_joint(x);
  return joint[1] >= joint[0] ? 1 : 0;  // tie goes to attack
}

double GbtModel::score(std::span<const double> x) const {
  double s = initial_score;
  for (const auto& tree : trees) s += learning_rate * tree.predict(x);
  return s;
}

int GbtModel::predict(std::span<const double> x) const {
  return score(x) >= 0.0 ? 1 : 0;
}

int KnnModel::predict(std::span<const double> x) const {
  const std::size_t n = train.rows;
  std::vector<std::pair<double, std::size_t>> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    dist[i] = {squared_distance(x, train.row(i)), i};
  }
  const auto kk = static_cast<std::size_t>(k);
  if (kk < n) {
    std::nth_element(dist.begin(), dist.begin() + static_cast<long>(kk) - 1,
                     dist.end());
  }
  long long votes1 = 0;
  std::pair<double, std::size_t> nearest = dist[0];
  for (std::size_t i = 0; i < kk; ++i) {
    if (dist[i] < nearest) nearest = dist[i];
    votes1 += labels[dist[i].second];
  }
  const long long votes0 = static_cast<long long>(kk) - votes1;
  if (votes1 > votes0) return 1;
  if (votes0 > votes1) return 0;
  return labels[nearest.second];  // split vote: side with the closest row
}

int TrainedClassifier::predict(std::span<const double> x) const {
  if (x.size() != n_features_) {
    throw std::invalid_argument(
        "predict: expected " + std::to_string(n_features_) +
        " features, got " + std::to_string(x.size()));
  }
  return std::visit(
      [&](const auto& m) -> int {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ConstantModel>) {
          return m.label;
        } else {
          return m.predict(x);
        }
      },
      model_);
}

std::vector<int> TrainedClassifier::predict(const Matrix& rows) const {
  std::vector<int> out(rows.rows);
  for (std::size_t i = 0; i < rows.rows; ++i) out[i] = predict(rows.row(i));
  return out;
}

TrainedClassifier train_classifier(const ClassifierSpec& spec,
                                   const Matrix& features,
                                   const std::vector<int>& labels) {
  spec.validate();
  check_training_data(features, labels);

  if (spec.kind == ClassifierKind::kConstant) {
    const auto [c0, c1] = tally(labels);
    return make_constant_classifier(c1 >= c0 ? 1 : 0, features.cols);
  }

  const auto [c0, c1] = tally(labels);
  if (c0 == 0 || c1 == 0) {
    throw std::invalid_argument(
        "train: both classes must be present (use a constant classifier "
        "for single-class data)");
  }

  switch (spec.kind) {
    case ClassifierKind::kDtGini:
      return {spec, features.cols,
              train_tree(spec, features, labels, SplitCriterion::kGini)};
    case ClassifierKind::kDtEntropy:
      return {spec, features.cols,
              train_tree(spec, features, labels, SplitCriterion::kEntropy)};
    case ClassifierKind::kRf:
      return {spec, features.cols, train_forest(spec, features, labels)};
    case ClassifierKind::kGnb:
      return {spec, features.cols, train_gnb(spec, features, labels)};
    case ClassifierKind::kGbt:
      return {spec, features.cols, train_gbt(spec, features, labels)};
    case ClassifierKind::kKnn:
      return {spec, features.cols, train_knn(spec, features, labels)};
    case ClassifierKind::kConstant:
      break;  // handled above
  }
  throw std::invalid_argument("train: unknown classifier kind");
}

TrainedClassifier make_constant_classifier(int label,
                                           std::size_t n_features) {
  if (label != 0 && label != 1) {
    throw std::invalid_argument("constant classifier label must be 0 or 1");
  }
  ClassifierSpec spec = ClassifierSpec::defaults(ClassifierKind::kConstant);
  return {spec, n_features, ConstantModel{label}};
}

double accuracy_on(const TrainedClassifier& model, const Matrix& features,
                   const std::vector<int>& labels) {
  if (features.rows == 0 || features.rows != labels.size()) {
    throw std::invalid_argument("accuracy_on: bad evaluation data");
  }
  std::size_t correct = 0;
  for (std::size_t i = 0; i < features.rows; ++i) {
    if (model.predict(features.row(i)) == labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(features.rows);
}

}  // namespace hcad
