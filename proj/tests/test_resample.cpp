#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <hcad/resample.hpp>

#include "oracles.hpp"
#include "testutil.hpp"

using namespace hcad;

namespace {

EncodedDataset imbalanced_dataset(std::size_t minority, std::size_t majority,
                                  std::uint64_t seed) {
  EncodedDataset ds;
  ds.feature_names = {"f0", "f1", "f2"};
  ds.features = Matrix(0, 3);
  Rng rng(seed);
  for (std::size_t i = 0; i < minority; ++i) {
    const std::vector<double> row = {rng.next_normal(), rng.next_normal(),
                                     5.0 + rng.next_normal()};
    ds.features.append_row(row);
    ds.labels.push_back(0);
  }
  for (std::size_t i = 0; i < majority; ++i) {
    const std::vector<double> row = {3.0 + rng.next_normal(),
                                     rng.next_normal(), rng.next_normal()};
    ds.features.append_row(row);
    ds.labels.push_back(1);
  }
  return ds;
}

}  // namespace

TEST_CASE("strategy names round-trip") {
  for (const Strategy s :
       {Strategy::kNoResample, Strategy::kPerCluster, Strategy::kGlobal}) {
    CHECK(strategy_from_string(to_string(s)) == s);
  }
  CHECK(to_string(Strategy::kPerCluster) == "per-cluster");
  CHECK_THROWS_AS(strategy_from_string("bogus"), std::invalid_argument);
}

TEST_CASE("resample config validation") {
  ResampleConfig ok;
  CHECK_NOTHROW(ok.validate());
  ResampleConfig bad_k;
  bad_k.smote_k = 0;
  CHECK_THROWS_AS(bad_k.validate(), std::invalid_argument);
  ResampleConfig bad_ratio;
  bad_ratio.target_ratio = 0.0;
  CHECK_THROWS_AS(bad_ratio.validate(), std::invalid_argument);
  ResampleConfig negative_ratio;
  negative_ratio.target_ratio = -1.0;
  CHECK_THROWS_AS(negative_ratio.validate(), std::invalid_argument);
  ResampleConfig huge_ratio;
  huge_ratio.target_ratio = 1e7;
  CHECK_THROWS_AS(huge_ratio.validate(), std::invalid_argument);
}

TEST_CASE("smote_interpolate is exact per coordinate") {
  const std::vector<double> base = {0.0, 10.0, -4.0};
  const std::vector<double> nb = {1.0, 20.0, -2.0};
  const auto mid = smote_interpolate(base, nb, 0.25);
  CHECK(mid == std::vector<double>{0.25, 12.5, -3.5});
  CHECK(smote_interpolate(base, nb, 0.0) == base);
}

TEST_CASE("smote output lies on segments toward true nearest neighbours") {
  const Matrix minority = testutil::random_matrix(25, 4, 99);
  std::vector<SmoteTrace> trace;
  const Matrix synth = smote(minority, 5, 200, 31, &trace);
  REQUIRE(synth.rows == 200);
  REQUIRE(synth.cols == 4);
  REQUIRE(trace.size() == 200);

  for (std::size_t s = 0; s < synth.rows; ++s) {
    const SmoteTrace& t = trace[s];
    REQUIRE(t.base < minority.rows);
    REQUIRE(t.neighbor < minority.rows);
    CHECK(t.neighbor != t.base);
    CHECK(t.lambda >= 0.0);
    CHECK(t.lambda < 1.0);

    // Segment property, recomputed coordinate by coordinate.
    for (std::size_t j = 0; j < synth.cols; ++j) {
      const double expected =
          minority.at(t.base, j) +
          t.lambda * (minority.at(t.neighbor, j) - minority.at(t.base, j));
      CHECK(synth.at(s, j) == doctest::Approx(expected).epsilon(1e-12));
    }

    // The chosen neighbour is one of the k nearest by brute force.
    const double bound = oracle::kth_neighbor_d2(minority, t.base, 5);
    const double got =
        oracle::d2(minority.row(t.base), minority.row(t.neighbor));
    CHECK(got <= bound + 1e-12);
  }
}

TEST_CASE("smote is deterministic in the seed") {
  const Matrix minority = testutil::random_matrix(10, 3, 5);
  const Matrix a = smote(minority, 3, 50, 17);
  const Matrix b = smote(minority, 3, 50, 17);
  const Matrix c = smote(minority, 3, 50, 18);
  CHECK(a.data == b.data);
  CHECK(a.data != c.data);
}

TEST_CASE("smote rejects impossible requests") {
  const Matrix minority = testutil::random_matrix(4, 2, 1);
  CHECK_THROWS_AS(smote(minority, 0, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(smote(minority, 1, -1, 1), std::invalid_argument);
  const Matrix one_row = testutil::random_matrix(1, 2, 1);
  CHECK_THROWS_AS(smote(one_row, 1, 1, 1), std::invalid_argument);
  CHECK(smote(minority, 2, 0, 1).rows == 0);
}

TEST_CASE("smote shrinks k when the minority set is smaller than k + 1") {
  // Three rows, k = 7: every base only has two possible neighbours, so each
  // synthetic row must sit on a segment between two of the three points.
  Matrix minority(0, 2);
  minority.append_row(std::vector<double>{0.0, 0.0});
  minority.append_row(std::vector<double>{10.0, 0.0});
  minority.append_row(std::vector<double>{0.0, 10.0});

  std::vector<SmoteTrace> trace;
  const Matrix synth = smote(minority, 7, 60, 11, &trace);
  REQUIRE(synth.rows == 60);
  REQUIRE(trace.size() == 60);
  for (std::size_t s = 0; s < synth.rows; ++s) {
    const SmoteTrace& t = trace[s];
    CHECK(t.base != t.neighbor);
    CHECK(t.base < 3);
    CHECK(t.neighbor < 3);
    const std::vector<double> expect = smote_interpolate(
        minority.row(t.base), minority.row(t.neighbor), t.lambda);
    for (std::size_t d = 0; d < 2; ++d) {
      CHECK(synth.at(s, d) == doctest::Approx(expect[d]).epsilon(1e-12));
    }
  }

  // Clamped k = rows - 1 must behave exactly like asking for that k directly.
  const Matrix direct = smote(minority, 2, 60, 11);
  REQUIRE(direct.rows == synth.rows);
  CHECK(direct.data == synth.data);

  // Two rows is the documented minimum: the lone neighbour is the other row.
  Matrix pair(0, 1);
  pair.append_row(std::vector<double>{0.0});
  pair.append_row(std::vector<double>{4.0});
  const Matrix from_pair = smote(pair, 5, 20, 3);
  for (std::size_t s = 0; s < from_pair.rows; ++s) {
    CHECK(from_pair.at(s, 0) >= 0.0);
    CHECK(from_pair.at(s, 0) < 4.0);
  }
}

TEST_CASE("random_undersample keeps a uniform subset in original order") {
  const Matrix majority = testutil::random_matrix(30, 2, 8);
  const Matrix kept = random_undersample(majority, 12, 4);
  REQUIRE(kept.rows == 12);

  // Every kept row appears in the source, and the kept sequence respects the
  // original order (sampling without replacement yields ascending indices).
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < kept.rows; ++i) {
    bool found = false;
    for (; cursor < majority.rows; ++cursor) {
      if (std::equal(kept.row(i).begin(), kept.row(i).end(),
                     majority.row(cursor).begin())) {
        found = true;
        ++cursor;
        break;
      }
    }
    CHECK(found);
  }

  CHECK(random_undersample(majority, 30, 4).rows == 30);
  CHECK_THROWS_AS(random_undersample(majority, 0, 4), std::invalid_argument);
  CHECK_THROWS_AS(random_undersample(majority, 31, 4), std::invalid_argument);
}

TEST_CASE("rebalance conserves the row total and hits the target ratio") {
  const EncodedDataset ds = imbalanced_dataset(12, 188, 21);
  ResampleConfig cfg;
  cfg.seed = 9;
  const EncodedDataset out = rebalance(ds, cfg);

  // M=188, m=12, r=1: majority' = round(200/2) = 100, minority' = 100.
  const auto [normal, attack] = out.class_counts();
  CHECK(normal == 100);
  CHECK(attack == 100);
  CHECK(out.size() == 200);
  CHECK(out.feature_names == ds.feature_names);

  // Layout: kept majority rows first, then the original minority rows, then
  // the synthetics.
  for (std::size_t i = 0; i < 100; ++i) CHECK(out.labels[i] == 1);
  for (std::size_t i = 100; i < 200; ++i) CHECK(out.labels[i] == 0);
  for (std::size_t i = 0; i < 12; ++i) {
    CHECK(std::equal(out.features.row(100 + i).begin(),
                     out.features.row(100 + i).end(),
                     ds.features.row(i).begin()));
  }
}

TEST_CASE("rebalance respects fractional target ratios") {
  const EncodedDataset ds = imbalanced_dataset(10, 190, 3);
  ResampleConfig cfg;
  cfg.target_ratio = 0.5;
  const EncodedDataset out = rebalance(ds, cfg);
  // majority' = round(200 / 1.5) = 133, minority' = round(66.5) = 67.
  const auto [normal, attack] = out.class_counts();
  CHECK(attack == 133);
  CHECK(normal == 67);
}

TEST_CASE("rebalance leaves balanced data untouched") {
  const EncodedDataset ds = imbalanced_dataset(50, 50, 2);
  ResampleConfig cfg;
  const EncodedDataset out = rebalance(ds, cfg);
  CHECK(out.features.data == ds.features.data);
  CHECK(out.labels == ds.labels);
}

TEST_CASE("rebalance can grow the attack class too") {
  // Minority is whichever class is smaller; here attacks are the minority.
  const EncodedDataset flipped = [] {
    EncodedDataset ds = imbalanced_dataset(150, 8, 14);
    for (auto& y : ds.labels) y = 1 - y;
    return ds;
  }();
  ResampleConfig cfg;
  const EncodedDataset out = rebalance(flipped, cfg);
  const auto [normal, attack] = out.class_counts();
  CHECK(normal == attack);
}

TEST_CASE("rebalance rejects unusable data") {
  ResampleConfig cfg;
  EncodedDataset unlabeled;
  unlabeled.features = testutil::random_matrix(4, 2, 1);
  CHECK_THROWS_AS(rebalance(unlabeled, cfg), std::invalid_argument);

  EncodedDataset single;
  single.features = testutil::random_matrix(4, 2, 1);
  single.labels = {1, 1, 1, 1};
  CHECK_THROWS_AS(rebalance(single, cfg), std::invalid_argument);
}

TEST_CASE("apply_strategy none passes data through unchanged") {
  const EncodedDataset ds = imbalanced_dataset(5, 45, 6);
  const StrategyResult res =
      apply_strategy(Strategy::kNoResample, ds, nullptr, 0, ResampleConfig{});
  CHECK(res.strategy == Strategy::kNoResample);
  CHECK(res.pooled.features.data == ds.features.data);
  CHECK(res.pooled.labels == ds.labels);
  CHECK(res.per_cluster.empty());
}

TEST_CASE("apply_strategy global equals one pooled rebalance") {
  const EncodedDataset ds = imbalanced_dataset(8, 92, 10);
  ResampleConfig cfg;
  cfg.seed = 33;
  const StrategyResult res =
      apply_strategy(Strategy::kGlobal, ds, nullptr, 0, cfg);
  const EncodedDataset direct = rebalance(ds, cfg);
  CHECK(res.pooled.features.data == direct.features.data);
  CHECK(res.pooled.labels == direct.labels);
}

TEST_CASE("apply_strategy per-cluster rebalances each slice independently") {
  // Cluster 0: both classes, imbalanced. Cluster 1: attacks only.
  const EncodedDataset mixed = imbalanced_dataset(6, 44, 11);
  EncodedDataset ds = mixed;
  std::vector<int> assign(ds.size(), 0);
  // Rows 30..49 (attacks) form cluster 1.
  for (std::size_t i = 30; i < 50; ++i) assign[i] = 1;

  ResampleConfig cfg;
  cfg.smote_k = 3;
  cfg.seed = 77;
  const StrategyResult res =
      apply_strategy(Strategy::kPerCluster, ds, &assign, 2, cfg);
  REQUIRE(res.per_cluster.size() == 2);

  const auto [n0, a0] = res.per_cluster[0].class_counts();
  CHECK(n0 == a0);  // rebalanced to ratio 1
  CHECK(n0 + a0 == 30);

  // The single-class cluster passes through untouched and is reported.
  const auto [n1, a1] = res.per_cluster[1].class_counts();
  CHECK(n1 == 0);
  CHECK(a1 == 20);
  CHECK(res.single_class_clusters == std::vector<int>{1});

  // Deterministic end to end.
  const StrategyResult again =
      apply_strategy(Strategy::kPerCluster, ds, &assign, 2, cfg);
  for (int c = 0; c < 2; ++c) {
    CHECK(res.per_cluster[static_cast<std::size_t>(c)].features.data ==
          again.per_cluster[static_cast<std::size_t>(c)].features.data);
  }
}

TEST_CASE("apply_strategy per-cluster validates its inputs") {
  const EncodedDataset ds = imbalanced_dataset(5, 15, 2);
  ResampleConfig cfg;
  CHECK_THROWS_AS(apply_strategy(Strategy::kPerCluster, ds, nullptr, 2, cfg),
                  std::invalid_argument);
  std::vector<int> short_assign(3, 0);
  CHECK_THROWS_AS(
      apply_strategy(Strategy::kPerCluster, ds, &short_assign, 2, cfg),
      std::invalid_argument);
  std::vector<int> bad_id(ds.size(), 5);
  CHECK_THROWS_AS(apply_strategy(Strategy::kPerCluster, ds, &bad_id, 2, cfg),
                  std::invalid_argument);
  std::vector<int> ok(ds.size(), 0);
  CHECK_THROWS_AS(apply_strategy(Strategy::kPerCluster, ds, &ok, 0, cfg),
                  std::invalid_argument);
}
