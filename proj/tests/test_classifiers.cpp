#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <variant>
#include <vector>

#include <hcad/classifiers.hpp>
#include <hcad/rng.hpp>

#include "oracles.hpp"
#include "testutil.hpp"

using namespace hcad;

namespace {

// Random features drawn from a small discrete grid so exact ties between
// candidate splits actually occur.
Matrix grid_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      m.at(i, j) = static_cast<double>(rng.next_index(5));
    }
  }
  return m;
}

std::vector<int> random_labels(std::size_t rows, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<int> y(rows);
  bool saw0 = false, saw1 = false;
  for (std::size_t i = 0; i < rows; ++i) {
    y[i] = rng.next_unit() < 0.5 ? 0 : 1;
    (y[i] == 1 ? saw1 : saw0) = true;
  }
  if (!saw0) y[0] = 0;
  if (!saw1) y[rows - 1] = 1;
  return y;
}

// Jittered XOR corners. No single feature separates the classes, but the
// jitter keeps greedy split gains strictly positive; exact duplicates would
// give every root candidate an exactly-zero first-order gain, which the
// positive-gain split rule rightly refuses.
void xor_data(std::size_t copies, Matrix& x, std::vector<int>& y) {
  x = Matrix(0, 2);
  y.clear();
  const double pts[4][2] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  const int labels[4] = {0, 1, 1, 0};
  Rng rng(20240 + copies);
  for (std::size_t c = 0; c < copies; ++c) {
    for (int p = 0; p < 4; ++p) {
      const std::vector<double> row = {
          pts[p][0] + 0.05 * (rng.next_unit() - 0.5),
          pts[p][1] + 0.05 * (rng.next_unit() - 0.5)};
      x.append_row(row);
      y.push_back(labels[p]);
    }
  }
}

}  // namespace

TEST_CASE("classifier kind names round-trip") {
  for (const ClassifierKind kind : kAllClassifierKinds) {
    CHECK(classifier_kind_from_string(to_string(kind)) == kind);
  }
  CHECK(to_string(ClassifierKind::kConstant) == "constant");
  CHECK_THROWS_AS(classifier_kind_from_string("svm"), std::invalid_argument);
}

TEST_CASE("impurity matches closed forms") {
  CHECK(impurity(1, 1, SplitCriterion::kGini) == doctest::Approx(0.5));
  CHECK(impurity(1, 1, SplitCriterion::kEntropy) == doctest::Approx(1.0));
  CHECK(impurity(4, 0, SplitCriterion::kGini) == 0.0);
  CHECK(impurity(0, 9, SplitCriterion::kEntropy) == 0.0);
  CHECK(impurity(3, 1, SplitCriterion::kGini) ==
        doctest::Approx(0.375).epsilon(1e-12));
  const double h = -(0.75 * std::log2(0.75) + 0.25 * std::log2(0.25));
  CHECK(impurity(3, 1, SplitCriterion::kEntropy) ==
        doctest::Approx(h).epsilon(1e-12));
  CHECK_THROWS_AS(impurity(0, 0, SplitCriterion::kGini),
                  std::invalid_argument);
}

TEST_CASE("best_split agrees with the exhaustive oracle") {
  int found = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const std::size_t rows = 2 + seed % 38;
    const std::size_t cols = 1 + seed % 5;
    const Matrix x = grid_matrix(rows, cols, seed);
    const std::vector<int> y = random_labels(rows, seed * 31);

    for (const SplitCriterion crit :
         {SplitCriterion::kGini, SplitCriterion::kEntropy}) {
      const auto got = best_split(x, y, crit);
      const oracle::SplitChoice want = oracle::exhaustive_best_split(
          x, y, crit == SplitCriterion::kEntropy);
      REQUIRE(got.has_value() == want.found);
      if (!want.found) continue;
      ++found;
      CHECK(got->feature == want.feature);
      CHECK(got->threshold == want.threshold);
      CHECK(got->decrease == doctest::Approx(want.decrease).epsilon(1e-9));
    }
  }
  CHECK(found > 30);  // the comparison must actually exercise real splits
}

TEST_CASE("best_split ties break toward the lower feature and threshold") {
  // Feature 1 mirrors feature 0, so both yield identical decreases.
  Matrix x(4, 2);
  const double v[4] = {0.0, 1.0, 2.0, 3.0};
  for (std::size_t i = 0; i < 4; ++i) {
    x.at(i, 0) = v[i];
    x.at(i, 1) = v[i];
  }
  const std::vector<int> y = {0, 0, 1, 1};
  const auto split = best_split(x, y, SplitCriterion::kGini);
  REQUIRE(split.has_value());
  CHECK(split->feature == 0);
  CHECK(split->threshold == 1.5);
}

TEST_CASE("best_split returns nothing without usable structure") {
  Matrix x(4, 1);
  for (std::size_t i = 0; i < 4; ++i) x.at(i, 0) = static_cast<double>(i);
  CHECK_FALSE(best_split(x, {1, 1, 1, 1}, SplitCriterion::kGini).has_value());

  Matrix constant(4, 2, 3.0);
  CHECK_FALSE(
      best_split(constant, {0, 1, 0, 1}, SplitCriterion::kGini).has_value());
}

TEST_CASE("decision tree separates separable data") {
  const Matrix x = testutil::random_matrix(80, 3, 10);
  const std::vector<int> y = testutil::threshold_labels(x);
  for (const ClassifierKind kind :
       {ClassifierKind::kDtGini, ClassifierKind::kDtEntropy}) {
    const TrainedClassifier model =
        train_classifier(ClassifierSpec::defaults(kind), x, y);
    CHECK(accuracy_on(model, x, y) == 1.0);  // unlimited depth memorizes
    CHECK(model.n_features() == 3);
    CHECK(model.spec().kind == kind);
  }
}

TEST_CASE("tree leaves with split votes predict attack") {
  // Two identical rows with opposite labels cannot be split apart.
  Matrix x(2, 1, 4.0);
  const std::vector<int> y = {0, 1};
  const TrainedClassifier model =
      train_classifier(ClassifierSpec::defaults(ClassifierKind::kDtGini), x, y);
  const std::vector<double> q = {4.0};
  CHECK(model.predict(q) == 1);
}

TEST_CASE("max_depth=1 produces a stump") {
  const Matrix x = testutil::random_matrix(60, 2, 3);
  const std::vector<int> y = testutil::threshold_labels(x);
  ClassifierSpec spec = ClassifierSpec::defaults(ClassifierKind::kDtGini);
  spec.max_depth = 1;
  const TrainedClassifier model = train_classifier(spec, x, y);
  const auto& tree = std::get<DecisionTree>(model.model());
  REQUIRE(tree.nodes.size() <= 3);  // root plus two leaves
  for (const TreeNode& node : tree.nodes) {
    if (node.feature >= 0) {
      CHECK(tree.nodes[static_cast<std::size_t>(node.left)].feature == -1);
      CHECK(tree.nodes[static_cast<std::size_t>(node.right)].feature == -1);
    }
  }
}

TEST_CASE("min_samples_split stops early") {
  const Matrix x = testutil::random_matrix(40, 2, 5);
  const std::vector<int> y = random_labels(40, 8);
  ClassifierSpec spec = ClassifierSpec::defaults(ClassifierKind::kDtGini);
  spec.min_samples_split = 1000;  // nothing may split
  const TrainedClassifier model = train_classifier(spec, x, y);
  const auto& tree = std::get<DecisionTree>(model.model());
  CHECK(tree.nodes.size() == 1);
  CHECK(tree.nodes[0].feature == -1);
}

TEST_CASE("single-tree forest without bootstrap equals the tree") {
  const Matrix x = testutil::random_matrix(100, 4, 17);
  const std::vector<int> y = testutil::threshold_labels(x);

  ClassifierSpec forest_spec = ClassifierSpec::defaults(ClassifierKind::kRf);
  forest_spec.n_trees = 1;
  forest_spec.bootstrap = false;
  forest_spec.features_per_split = 4;  // all features, no sampling
  const TrainedClassifier forest = train_classifier(forest_spec, x, y);

  const TrainedClassifier tree = train_classifier(
      ClassifierSpec::defaults(ClassifierKind::kDtGini), x, y);

  const Matrix queries = testutil::random_matrix(200, 4, 18);
  CHECK(forest.predict(queries) == tree.predict(queries));
}

TEST_CASE("forest is deterministic in the seed and learns the data") {
  const Matrix x = testutil::random_matrix(120, 3, 20);
  const std::vector<int> clean = testutil::threshold_labels(x);
  ClassifierSpec spec = ClassifierSpec::defaults(ClassifierKind::kRf, 7);
  spec.n_trees = 15;
  const TrainedClassifier learned = train_classifier(spec, x, clean);
  CHECK(accuracy_on(learned, x, clean) > 0.95);

  // Label noise makes the fit seed-sensitive, which separates "same seed,
  // same model" from "different seed, different model".
  const std::vector<int> noisy = random_labels(120, 29);
  const TrainedClassifier a = train_classifier(spec, x, noisy);
  const TrainedClassifier b = train_classifier(spec, x, noisy);
  const Matrix queries = testutil::random_matrix(150, 3, 21);
  CHECK(a.predict(queries) == b.predict(queries));

  spec.seed = 8;
  const TrainedClassifier c = train_classifier(spec, x, noisy);
  CHECK(a.predict(queries) != c.predict(queries));  // bootstrap reshuffles
}

TEST_CASE("gnb log joints match the closed form") {
  const Matrix x = testutil::random_matrix(60, 5, 30, 2.0);
  const std::vector<int> y = random_labels(60, 33);
  const ClassifierSpec spec = ClassifierSpec::defaults(ClassifierKind::kGnb);
  const TrainedClassifier model = train_classifier(spec, x, y);
  const auto& gnb = std::get<GnbModel>(model.model());

  const Matrix queries = testutil::random_matrix(40, 5, 34, 2.0);
  for (std::size_t i = 0; i < queries.rows; ++i) {
    const auto got = gnb.log_joint(queries.row(i));
    const auto want = oracle::gnb_log_joint(x, y, spec.variance_smoothing,
                                            queries.row(i));
    CHECK(got[0] == doctest::Approx(want.first).epsilon(1e-9));
    CHECK(got[1] == doctest::Approx(want.second).epsilon(1e-9));
    const int expected = want.second >= want.first ? 1 : 0;
    CHECK(model.predict(queries.row(i)) == expected);
  }
}

TEST_CASE("gnb survives zero-variance features") {
  Matrix x(10, 2);
  std::vector<int> y;
  for (std::size_t i = 0; i < 10; ++i) {
    x.at(i, 0) = 42.0;  // constant everywhere
    x.at(i, 1) = static_cast<double>(i);
    y.push_back(i < 5 ? 0 : 1);
  }
  const TrainedClassifier model =
      train_classifier(ClassifierSpec::defaults(ClassifierKind::kGnb), x, y);
  const std::vector<double> q = {42.0, 7.5};
  const auto& gnb = std::get<GnbModel>(model.model());
  const auto joint = gnb.log_joint(q);
  CHECK(std::isfinite(joint[0]));
  CHECK(std::isfinite(joint[1]));
  CHECK(model.predict(q) == 1);
}

TEST_CASE("gbt training loss never increases") {
  const Matrix x = testutil::random_matrix(200, 5, 40);
  const std::vector<int> y = testutil::threshold_labels(x);
  ClassifierSpec spec = ClassifierSpec::defaults(ClassifierKind::kGbt);
  spec.n_rounds = 100;
  const TrainedClassifier model = train_classifier(spec, x, y);
  const auto& gbt = std::get<GbtModel>(model.model());
  REQUIRE(gbt.training_loss.size() == 100);
  for (std::size_t r = 1; r < gbt.training_loss.size(); ++r) {
    CHECK(gbt.training_loss[r] <= gbt.training_loss[r - 1] + 1e-12);
  }
  CHECK(gbt.training_loss.back() < gbt.training_loss.front());
  CHECK(accuracy_on(model, x, y) > 0.95);
}

TEST_CASE("gbt learns xor, which stumps marginal splits") {
  Matrix x;
  std::vector<int> y;
  xor_data(25, x, y);
  ClassifierSpec spec = ClassifierSpec::defaults(ClassifierKind::kGbt);
  spec.n_rounds = 50;
  const TrainedClassifier model = train_classifier(spec, x, y);
  CHECK(accuracy_on(model, x, y) == 1.0);
}

TEST_CASE("gbt score sign drives the prediction") {
  const Matrix x = testutil::random_matrix(50, 2, 44);
  const std::vector<int> y = testutil::threshold_labels(x);
  const TrainedClassifier model =
      train_classifier(ClassifierSpec::defaults(ClassifierKind::kGbt), x, y);
  const auto& gbt = std::get<GbtModel>(model.model());
  const Matrix queries = testutil::random_matrix(60, 2, 45);
  for (std::size_t i = 0; i < queries.rows; ++i) {
    const double s = gbt.score(queries.row(i));
    CHECK(model.predict(queries.row(i)) == (s >= 0.0 ? 1 : 0));
  }
}

TEST_CASE("knn matches the brute-force oracle") {
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const std::size_t rows = 200;
    const std::size_t cols = 3 + seed;
    // A coarse grid makes duplicate distances common, so the (distance,
    // index) tie rule is really exercised.
    const Matrix x = grid_matrix(rows, cols, seed * 100);
    const std::vector<int> y = random_labels(rows, seed * 7);

    for (const int k : {1, 4, 5}) {
      ClassifierSpec spec = ClassifierSpec::defaults(ClassifierKind::kKnn);
      spec.knn_k = k;
      const TrainedClassifier model = train_classifier(spec, x, y);
      const Matrix queries = grid_matrix(50, cols, seed * 100 + 1);
      for (std::size_t q = 0; q < queries.rows; ++q) {
        CHECK(model.predict(queries.row(q)) ==
              oracle::knn_predict(x, y, k, queries.row(q)));
        ++checked;
      }
    }
  }
  CHECK(checked == 4 * 3 * 50);
}

TEST_CASE("knn keeps its training data verbatim") {
  const Matrix x = testutil::random_matrix(20, 2, 50);
  const std::vector<int> y = random_labels(20, 51);
  const TrainedClassifier model =
      train_classifier(ClassifierSpec::defaults(ClassifierKind::kKnn), x, y);
  const auto& knn = std::get<KnnModel>(model.model());
  CHECK(knn.train.data == x.data);
  CHECK(knn.labels == y);
  CHECK(knn.k == 5);
}

TEST_CASE("knn rejects k larger than the training set") {
  const Matrix x = testutil::random_matrix(4, 2, 60);
  const std::vector<int> y = {0, 1, 0, 1};
  ClassifierSpec spec = ClassifierSpec::defaults(ClassifierKind::kKnn);
  spec.knn_k = 5;
  CHECK_THROWS_AS(train_classifier(spec, x, y), std::invalid_argument);
}

TEST_CASE("train_classifier validates its inputs") {
  const Matrix x = testutil::random_matrix(10, 2, 70);
  const std::vector<int> ones(10, 1);
  for (const ClassifierKind kind : kAllClassifierKinds) {
    CHECK_THROWS_AS(
        train_classifier(ClassifierSpec::defaults(kind), x, ones),
        std::invalid_argument);
    CHECK_THROWS_AS(
        train_classifier(ClassifierSpec::defaults(kind), Matrix{}, {}),
        std::invalid_argument);
  }
  std::vector<int> short_labels(9, 0);
  CHECK_THROWS_AS(
      train_classifier(ClassifierSpec::defaults(ClassifierKind::kDtGini), x,
                       short_labels),
      std::invalid_argument);
}

TEST_CASE("spec validation catches nonsense hyperparameters") {
  ClassifierSpec spec = ClassifierSpec::defaults(ClassifierKind::kRf);
  spec.n_trees = 0;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

  spec = ClassifierSpec::defaults(ClassifierKind::kGbt);
  spec.learning_rate = 0.0;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

  spec = ClassifierSpec::defaults(ClassifierKind::kKnn);
  spec.knn_k = 0;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

  spec = ClassifierSpec::defaults(ClassifierKind::kDtGini);
  spec.max_depth = 0;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

  spec = ClassifierSpec::defaults(ClassifierKind::kGnb);
  spec.variance_smoothing = -1.0;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("constant classifier always answers the same") {
  const TrainedClassifier c0 = make_constant_classifier(0, 3);
  const TrainedClassifier c1 = make_constant_classifier(1, 3);
  const Matrix queries = testutil::random_matrix(20, 3, 80);
  for (std::size_t i = 0; i < queries.rows; ++i) {
    CHECK(c0.predict(queries.row(i)) == 0);
    CHECK(c1.predict(queries.row(i)) == 1);
  }
  CHECK(c0.spec().kind == ClassifierKind::kConstant);
}

TEST_CASE("accuracy_on counts matches") {
  Matrix x(4, 1);
  for (std::size_t i = 0; i < 4; ++i) x.at(i, 0) = static_cast<double>(i);
  const TrainedClassifier c1 = make_constant_classifier(1, 1);
  CHECK(accuracy_on(c1, x, {1, 1, 0, 0}) == 0.5);
  CHECK(accuracy_on(c1, x, {1, 1, 1, 1}) == 1.0);
}
