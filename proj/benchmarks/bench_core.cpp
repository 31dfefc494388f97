#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include <hcad/classifiers.hpp>
#include <hcad/clustering.hpp>
#include <hcad/matrix.hpp>
#include <hcad/resample.hpp>
#include <hcad/rng.hpp>

using namespace hcad;

namespace {

// Two gaussian blobs per class, well separated, in `cols` dimensions.
// Returns the feature matrix; labels alternate in blocks of `rows / 2`.
Matrix two_class_blobs(std::size_t rows, std::size_t cols, std::uint64_t seed,
                       std::vector<int>* labels = nullptr) {
  Rng rng(seed);
  Matrix m(rows, cols);
  if (labels != nullptr) labels->assign(rows, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    const int label = r < rows / 2 ? 0 : 1;
    const double center = label == 0 ? 0.0 : 6.0;
    for (std::size_t c = 0; c < cols; ++c) {
      m.at(r, c) = center + rng.next_normal();
    }
    if (labels != nullptr) (*labels)[r] = label;
  }
  return m;
}

// Three separated blobs, unlabeled, for the clustering benchmarks.
Matrix three_blobs(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const double center = 8.0 * static_cast<double>(r % 3);
    for (std::size_t c = 0; c < cols; ++c) {
      m.at(r, c) = center + rng.next_normal();
    }
  }
  return m;
}

void BM_KMeansFit(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  const Matrix data = three_blobs(rows, 8, 42);
  for (auto _ : state) {
    KMeansResult result = kmeans_fit(data, 3, 7);
    benchmark::DoNotOptimize(result.wcss);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(rows));
}
BENCHMARK(BM_KMeansFit)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_Smote(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  const Matrix minority = two_class_blobs(rows, 8, 43);
  const auto n_synthetic = static_cast<long long>(rows);
  for (auto _ : state) {
    Matrix synthetic = smote(minority, 5, n_synthetic, 7);
    benchmark::DoNotOptimize(synthetic.data.data());
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(n_synthetic));
}
BENCHMARK(BM_Smote)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_KnnPredict(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  std::vector<int> labels;
  const Matrix train = two_class_blobs(rows, 8, 44, &labels);
  const Matrix queries = two_class_blobs(200, 8, 45);
  const TrainedClassifier model = train_classifier(
      ClassifierSpec::defaults(ClassifierKind::kKnn, 7), train, labels);
  for (auto _ : state) {
    std::vector<int> predicted = model.predict(queries);
    benchmark::DoNotOptimize(predicted.data());
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(queries.rows));
}
BENCHMARK(BM_KnnPredict)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_TreeTrain(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  std::vector<int> labels;
  const Matrix train = two_class_blobs(rows, 8, 46, &labels);
  const ClassifierSpec spec =
      ClassifierSpec::defaults(ClassifierKind::kDtGini, 7);
  for (auto _ : state) {
    TrainedClassifier model = train_classifier(spec, train, labels);
    benchmark::DoNotOptimize(model.n_features());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(rows));
}
BENCHMARK(BM_TreeTrain)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
