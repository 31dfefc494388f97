#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hcad/matrix.hpp"

namespace hcad {

// The trainable model kinds. kConstant is the degenerate fallback used for
// single-class clusters; it never takes part in model selection.
enum class ClassifierKind {
  kDtGini,
  kDtEntropy,
  kRf,
  kGnb,
  kGbt,
  kKnn,
  kConstant,
};

inline constexpr std::array<ClassifierKind, 6> kAllClassifierKinds = {
    ClassifierKind::kDtGini, ClassifierKind::kDtEntropy, ClassifierKind::kRf,
    ClassifierKind::kGnb,    ClassifierKind::kGbt,       ClassifierKind::kKnn,
};

std::string to_string(ClassifierKind kind);
ClassifierKind classifier_kind_from_string(const std::string& name);

enum class SplitCriterion { kGini, kEntropy };

inline constexpr int kUnlimitedDepth = std::numeric_limits<int>::max();

// Hyperparameters for every kind in one bag; each kind reads its own slice.
struct ClassifierSpec {
  ClassifierKind kind = ClassifierKind::kDtGini;
  std::uint64_t seed = 0;

  // decision trees
  int max_depth = kUnlimitedDepth;
  int min_samples_split = 2;

  // random forest
  int n_trees = 100;
  int features_per_split = 0;  // 0: floor(sqrt(n_features)), min 1
  bool bootstrap = true;

  // gradient-boosted trees
  int n_rounds = 100;
  int gbt_depth = 3;
  double learning_rate = 0.1;

  // k-nearest-neighbours
  int knn_k = 5;

  // gaussian naive bayes: variance floor, relative to the largest feature
  // variance in the training data
  double variance_smoothing = 1e-9;

  static ClassifierSpec defaults(ClassifierKind kind, std::uint64_t seed = 0);
  void validate() const;
};

// Impurity of a node holding count0 normals and count1 attacks.
// Gini in [0, 0.5], entropy (base 2) in [0, 1]. Empty nodes are an error.
double impurity(long long count0, long long count1, SplitCriterion criterion);

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double decrease = 0.0;  // impurity decrease, weighted by child sizes
};

// Exhaustive best split: every feature, midpoints between consecutive
// distinct sorted values. Rows with value <= threshold go left. Midpoints
// that collapse onto a value (float rounding) are skipped. Ties are broken
// toward the lower feature index, then the lower threshold. Returns nullopt
// when no split yields a positive decrease.
std::optional<Split> best_split(const Matrix& features,
                                const std::vector<int>& labels,
                                SplitCriterion criterion);

// --- trained model representations -------------------------------------

struct TreeNode {
  int feature = -1;  // -1: leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  long long count0 = 0;  // training class counts in this node
  long long count1 = 0;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  int predict(std::span<const double> x) const;  // leaf majority, tie -> 1
};

struct ForestModel {
  std::vector<DecisionTree> trees;
  int predict(std::span<const double> x) const;  // majority vote, tie -> 1
};

struct GnbModel {
  // index 0: normal, 1: attack
  std::array<double, 2> log_prior{};
  Matrix mean;      // 2 x d
  Matrix variance;  // 2 x d, smoothing already added
  // log p(class) + sum_j log N(x_j; mean, variance)
  std::array<double, 2> log_joint(std::span<const double> x) const;
  int predict(std::span<const double> x) const;  // tie -> 1
};

struct RegressionTreeNode {
  int feature = -1;  // -1: leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;
};

struct RegressionTree {
  std::vector<RegressionTreeNode> nodes;
  double predict(std::span<const double> x) const;
};

struct GbtModel {
  double initial_score = 0.0;  // log-odds of the base rate
  double learning_rate = 0.1;
  std::vector<RegressionTree> trees;
  std::vector<double> training_loss;  // mean logistic loss after each round

  double score(std::span<const double> x) const;  // additive log-odds
  int predict(std::span<const double> x) const;   // score >= 0 -> attack
};

struct KnnModel {
  int k = 5;
  Matrix train;             // retained training rows
  std::vector<int> labels;  // per training row
  // Majority vote among the k nearest by (distance^2, row index); a split
  // vote goes to the label of the single nearest neighbour.
  int predict(std::span<const double> x) const;
};

struct ConstantModel {
  int label = 0;
};

class TrainedClassifier {
 public:
  TrainedClassifier() = default;
  TrainedClassifier(ClassifierSpec spec, std::size_t n_features,
                    std::variant<DecisionTree, ForestModel, GnbModel, GbtModel,
                                 KnnModel, ConstantModel>
                        model)
      : spec_(spec), n_features_(n_features), model_(std::move(model)) {}

  int predict(std::span<const double> x) const;
  std::vector<int> predict(const Matrix& rows) const;

  const ClassifierSpec& spec() const { return spec_; }
  std::size_t n_features() const { return n_features_; }
  const auto& model() const { return model_; }

 private:
  ClassifierSpec spec_;
  std::size_t n_features_ = 0;
  std::variant<DecisionTree, ForestModel, GnbModel, GbtModel, KnnModel,
               ConstantModel>
      model_;
};

// Trains one classifier. Requires a non-empty labeled dataset; every kind
// except kConstant requires both classes present. All randomized kinds draw
// exclusively from spec.seed.
TrainedClassifier train_classifier(const ClassifierSpec& spec,
                                   const Matrix& features,
                                   const std::vector<int>& labels);

TrainedClassifier make_constant_classifier(int label, std::size_t n_features);

// Fraction of rows whose prediction matches the label.
double accuracy_on(const TrainedClassifier& model, const Matrix& features,
                   const std::vector<int>& labels);

}  // namespace hcad
