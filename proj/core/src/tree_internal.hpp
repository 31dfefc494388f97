#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hcad/classifiers.hpp"
#include "hcad/rng.hpp"

namespace hcad::detail {

// Best split over a row subset and an explicit candidate feature list.
// This is the single split-search routine used by the public best_split(),
// the decision tree builder and the forest builder, so all of them share
// the same midpoint, tie-break and impurity arithmetic.
std::optional<Split> find_best_split(const Matrix& features,
                                     const std::vector<int>& labels,
                                     std::span<const std::size_t> rows,
                                     std::span<const std::size_t> candidates,
                                     SplitCriterion criterion);

// Greedy top-down induction over the given rows. features_per_split == d
// scans every feature without touching the rng; smaller values sample that
// many distinct features per node (requires rng). Uses an explicit stack,
// left child first, so rng consumption order is well-defined.
DecisionTree build_classification_tree(const Matrix& features,
                                       const std::vector<int>& labels,
                                       std::vector<std::size_t> rows,
                                       SplitCriterion criterion, int max_depth,
                                       int min_samples_split,
                                       std::size_t features_per_split,
                                       Rng* rng);

// Squared-error regression tree on gradients with Newton leaf values
// sum(grad) / sum(hess). Used by the boosting loop.
RegressionTree build_regression_tree(const Matrix& features,
                                     const std::vector<double>& grad,
                                     const std::vector<double>& hess,
                                     int max_depth, int min_samples_split);

}  // namespace hcad::detail
