#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "tree_internal.hpp"

namespace hcad {

double impurity(long long count0, long long count1, SplitCriterion criterion) {
  if (count0 < 0 || count1 < 0) {
    throw std::invalid_argument("impurity: negative class count");
  }
  const long long total = count0 + count1;
  if (total == 0) {
    throw std::invalid_argument("impurity: empty node");
  }
  const double p0 = static_cast<double>(count0) / static_cast<double>(total);
  const double p1 = static_cast<double>(count1) / static_cast<double>(total);
  if (criterion == SplitCriterion::kGini) {
    return 1.0 - p0 * p0 - p1 * p1;
  }
  double h = 0.0;
  if (p0 > 0.0) h -= p0 * std::log2(p0);
  if (p1 > 0.0) h -= p1 * std::log2(p1);
  return h;
}

namespace detail {

namespace {

struct ValueLabel {
  double value;
  int label;
};

struct ValueGrad {
  double value;
  double grad;
};

}  // namespace

std::optional<Split> find_best_split(const Matrix& features,
                                     const std::vector<int>& labels,
                                     std::span<const std::size_t> rows,
                                     std::span<const std::size_t> candidates,
                                     SplitCriterion criterion) {
  const long long n = static_cast<long long>(rows.size());
  if (n < 2) return std::nullopt;

  long long total0 = 0, total1 = 0;
  for (const std::size_t r : rows) {
    if (labels[r] == 1) ++total1;
    else ++total0;
  }
  if (total0 == 0 || total1 == 0) return std::nullopt;
  const double parent = impurity(total0, total1, criterion);
  const double total = static_cast<double>(n);

  std::optional<Split> best;
  std::vector<ValueLabel> sorted(rows.size());
  for (const std::size_t f : candidates) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      sorted[i] = {features.at(rows[i], f), labels[rows[i]]};
    }
    std::sort(sorted.begin(), sorted.end(),
              [](const ValueLabel& a, const ValueLabel& b) {
                return a.value < b.value;
              });

    long long left0 = 0, left1 = 0;
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
      if (sorted[i].label == 1) ++left1;
      else ++left0;
      const double a = sorted[i].value;
      const double b = sorted[i + 1].value;
      if (a == b) continue;
      const double mid = (a + b) / 2.0;
      // Rounding can collapse the midpoint onto a boundary value, which
      // would make the split a no-op on one side; skip those.
      if (!(mid > a && mid < b)) continue;

      const long long nl = left0 + left1;
      const long long nr = n - nl;
      const long long right0 = total0 - left0;
      const long long right1 = total1 - left1;
      const double weighted =
          (static_cast<double>(nl) * impurity(left0, left1, criterion) +
           static_cast<double>(nr) * impurity(right0, right1, criterion)) /
          total;
      const double decrease = parent - weighted;
      if (decrease <= 0.0) continue;
      // Strictly-greater keeps the first candidate on ties; features are
      // scanned in ascending index order and thresholds ascending within a
      // feature, which is exactly the documented tie-break.
      if (!best || decrease > best->decrease) {
        best = Split{static_cast<int>(f), mid, decrease};
      }
    }
  }
  return best;
}

DecisionTree build_classification_tree(const Matrix& features,
                                       const std::vector<int>& labels,
                                       std::vector<std::size_t> rows,
                                       SplitCriterion criterion, int max_depth,
                                       int min_samples_split,
                                       std::size_t features_per_split,
                                       Rng* rng) {
  if (rows.empty()) {
    throw std::invalid_argument("tree builder: no rows");
  }
  const std::size_t d = features.cols;
  if (features_per_split < 1 || features_per_split > d) {
    throw std::invalid_argument("tree builder: bad features_per_split");
  }
  if (features_per_split < d && rng == nullptr) {
    throw std::invalid_argument(
        "tree builder: feature sampling needs an rng");
  }

  std::vector<std::size_t> all_features(d);
  std::iota(all_features.begin(), all_features.end(), 0);

  DecisionTree tree;
  tree.nodes.emplace_back();

  struct Frame {
    std::size_t node;
    std::size_t begin;
    std::size_t end;
    int depth;
  };
  std::vector<Frame> stack;
  stack.push_back({0, 0, rows.size(), 0});

  while (!stack.empty()) {
    const Frame frame = stack.back();
    stack.pop_back();

    long long c0 = 0, c1 = 0;
    for (std::size_t i = frame.begin; i < frame.end; ++i) {
      if (labels[rows[i]] == 1) ++c1;
      else ++c0;
    }
    tree.nodes[frame.node].count0 = c0;
    tree.nodes[frame.node].count1 = c1;

    const std::size_t n = frame.end - frame.begin;
    const bool splittable =
        c0 > 0 && c1 > 0 && frame.depth < max_depth &&
        n >= static_cast<std::size_t>(min_samples_split);
    if (!splittable) continue;

    std::optional<Split> split;
    const std::span<const std::size_t> node_rows{rows.data() + frame.begin,
                                                 n};
    if (features_per_split == d) {
      split = find_best_split(features, labels, node_rows, all_features,
                              criterion);
    } else {
      const std::vector<std::size_t> sampled =
          rng->sample_without_replacement(d, features_per_split);
      split = find_best_split(features, labels, node_rows, sampled, criterion);
    }
    if (!split) continue;

    const auto f = static_cast<std::size_t>(split->feature);
    const double thr = split->threshold;
    auto* mid_it = std::partition(
        rows.data() + frame.begin, rows.data() + frame.end,
        [&](std::size_t r) { return features.at(r, f) <= thr; });
    const std::size_t mid =
        static_cast<std::size_t>(mid_it - rows.data());
    // The midpoint rule guarantees both sides are non-empty.

    const std::size_t left = tree.nodes.size();
    tree.nodes.emplace_back();
    const std::size_t right = tree.nodes.size();
    tree.nodes.emplace_back();
    tree.nodes[frame.node].feature = split->feature;
    tree.nodes[frame.node].threshold = thr;
    tree.nodes[frame.node].left = static_cast<int>(left);
    tree.nodes[frame.node].right = static_cast<int>(right);

    // Left child is processed first (rng draw order must be stable).
    stack.push_back({right, mid, frame.end, frame.depth + 1});
    stack.push_back({left, frame.begin, mid, frame.depth + 1});
  }
  return tree;
}

RegressionTree build_regression_tree(const Matrix& features,
                                     const std::vector<double>& grad,
                                     const std::vector<double>& hess,
                                     int max_depth, int min_samples_split) {
  if (features.rows == 0) {
    throw std::invalid_argument("regression tree: no rows");
  }
  std::vector<std::size_t> rows(features.rows);
  std::iota(rows.begin(), rows.end(), 0);

  RegressionTree tree;
  tree.nodes.emplace_back();

  struct Frame {
    std::size_t node;
    std::size_t begin;
    std::size_t end;
    int depth;
  };
  std::vector<Frame> stack;
  stack.push_back({0, 0, rows.size(), 0});

  std::vector<ValueGrad> sorted;

  while (!stack.empty()) {
    const Frame frame = stack.back();
    stack.pop_back();

    double g_sum = 0.0, h_sum = 0.0;
    for (std::size_t i = frame.begin; i < frame.end; ++i) {
      g_sum += grad[rows[i]];
      h_sum += hess[rows[i]];
    }
    // Newton step for the leaf; the guard keeps saturated nodes finite.
    tree.nodes[frame.node].value = g_sum / std::max(h_sum, 1e-12);

    const std::size_t n = frame.end - frame.begin;
    if (frame.depth >= max_depth ||
        n < static_cast<std::size_t>(min_samples_split)) {
      continue;
    }

    // Best squared-error split on the gradients:
    // gain = S_l^2/n_l + S_r^2/n_r - S^2/n, from prefix sums.
    const double base = g_sum * g_sum / static_cast<double>(n);
    int best_feature = -1;
    double best_threshold = 0.0;
    double best_gain = 0.0;
    sorted.resize(n);
    for (std::size_t f = 0; f < features.cols; ++f) {
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = rows[frame.begin + i];
        sorted[i] = {features.at(r, f), grad[r]};
      }
      std::sort(sorted.begin(), sorted.end(),
                [](const ValueGrad& a, const ValueGrad& b) {
                  return a.value < b.value;
                });
      double left_sum = 0.0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        left_sum += sorted[i].grad;
        const double a = sorted[i].value;
        const double b = sorted[i + 1].value;
        if (a == b) continue;
        const double mid = (a + b) / 2.0;
        if (!(mid > a && mid < b)) continue;
        const double nl = static_cast<double>(i + 1);
        const double nr = static_cast<double>(n - i - 1);
        const double right_sum = g_sum - left_sum;
        const double gain = left_sum * left_sum / nl +
                            right_sum * right_sum / nr - base;
        if (gain > best_gain) {
          best_gain = gain;
          best_feature = static_cast<int>(f);
          best_threshold = mid;
        }
      }
    }
    if (best_feature < 0) continue;

    const auto f = static_cast<std::size_t>(best_feature);
    auto* mid_it = std::partition(
        rows.data() + frame.begin, rows.data() + frame.end,
        [&](std::size_t r) { return features.at(r, f) <= best_threshold; });
    const std::size_t mid = static_cast<std::size_t>(mid_it - rows.data());

    const std::size_t left = tree.nodes.size();
    tree.nodes.emplace_back();
    const std::size_t right = tree.nodes.size();
    tree.nodes.emplace_back();
    tree.nodes[frame.node].feature = best_feature;
    tree.nodes[frame.node].threshold = best_threshold;
    tree.nodes[frame.node].left = static_cast<int>(left);
    tree.nodes[frame.node].right = static_cast<int>(right);

    stack.push_back({right, mid, frame.end, frame.depth + 1});
    stack.push_back({left, frame.begin, mid, frame.depth + 1});
  }
  return tree;
}

}  // namespace detail

std::optional<Split> best_split(const Matrix& features,
                                const std::vector<int>& labels,
                                SplitCriterion criterion) {
  if (features.rows == 0 || features.rows != labels.size()) {
    throw std::invalid_argument(
        "best_split: feature and label sizes must match and be non-empty");
  }
  std::vector<std::size_t> rows(features.rows);
  std::iota(rows.begin(), rows.end(), 0);
  std::vector<std::size_t> candidates(features.cols);
  std::iota(candidates.begin(), candidates.end(), 0);
  return detail::find_best_split(features, labels, rows, candidates,
                                 criterion);
}

int DecisionTree::predict(std::span<const double> x) const {
  std::size_t node = 0;
  while (nodes[node].feature >= 0) {
    const auto& nd = nodes[node];
    node = static_cast<std::size_t>(
        x[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left
                                                                : nd.right);
  }
  return nodes[node].count1 >= nodes[node].count0 ? 1 : 0;
}

double RegressionTree::predict(std::span<const double> x) const {
  std::size_t node = 0;
  while (nodes[node].feature >= 0) {
    const auto& nd = nodes[node];
    node = static_cast<std::size_t>(
        x[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left
                                                                : nd.right);
  }
  return nodes[node].value;
}

}  // namespace hcad
