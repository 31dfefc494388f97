#include "hcad/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "hcad/rng.hpp"

namespace hcad {

namespace {

constexpr std::uint64_t kCurveSalt = 0x6b6d65616e73ULL;  // "kmeans"

std::size_t count_distinct_rows(const Matrix& m) {
  std::vector<std::size_t> order(m.rows);
  std::iota(order.begin(), order.end(), 0);
  auto row_less = [&](std::size_t a, std::size_t b) {
    const auto ra = m.row(a), rb = m.row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(),
                                        rb.end());
  };
  std::sort(order.begin(), order.end(), row_less);
  std::size_t distinct = m.rows == 0 ? 0 : 1;
  for (std::size_t i = 1; i < m.rows; ++i) {
    const auto prev = m.row(order[i - 1]), cur = m.row(order[i]);
    if (!std::equal(prev.begin(), prev.end(), cur.begin())) ++distinct;
  }
  return distinct;
}

struct AssignPass {
  std::vector<int> assignments;
  std::vector<double> dist2;  // to the assigned centroid
  double wcss = 0.0;
};

AssignPass assign_pass(const Matrix& m, const Matrix& centroids) {
  AssignPass out;
  out.assignments.resize(m.rows);
  out.dist2.resize(m.rows);
  for (std::size_t i = 0; i < m.rows; ++i) {
    const auto row = m.row(i);
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.rows; ++c) {
      const double d = squared_distance(row, centroids.row(c));
      if (d < best_d) {  // ties keep the lowest centroid id
        best_d = d;
        best = static_cast<int>(c);
      }
    }
    out.assignments[i] = best;
    out.dist2[i] = best_d;
    out.wcss += best_d;
  }
  return out;
}

// Mean update; clusters that lost every member are re-seeded on the row
// currently furthest from its centroid.
void update_means(const Matrix& m, const AssignPass& pass, Matrix& centroids) {
  const std::size_t k = centroids.rows;
  const std::size_t d = centroids.cols;
  std::vector<double> sums(k * d, 0.0);
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t i = 0; i < m.rows; ++i) {
    const auto c = static_cast<std::size_t>(pass.assignments[i]);
    const auto row = m.row(i);
    double* s = sums.data() + c * d;
    for (std::size_t j = 0; j < d; ++j) s[j] += row[j];
    ++counts[c];
  }
  std::vector<double> donor_dist = pass.dist2;
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] == 0) {
      const std::size_t far = static_cast<std::size_t>(
          std::max_element(donor_dist.begin(), donor_dist.end()) -
          donor_dist.begin());
      const auto row = m.row(far);
      for (std::size_t j = 0; j < d; ++j) centroids.at(c, j) = row[j];
      donor_dist[far] = -1.0;  // not available for the next empty cluster
      continue;
    }
    for (std::size_t j = 0; j < d; ++j) {
      centroids.at(c, j) = sums[c * d + j] / static_cast<double>(counts[c]);
    }
  }
}

Matrix kmeanspp_seed(const Matrix& m, int k, Rng& rng) {
  const std::size_t n = m.rows;
  Matrix centroids(0, m.cols);
  centroids.append_row(m.row(rng.next_index(n)));

  std::vector<double> best_d(n);
  while (centroids.rows < static_cast<std::size_t>(k)) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = m.row(i);
      double d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < centroids.rows; ++c) {
        d = std::min(d, squared_distance(row, centroids.row(c)));
      }
      best_d[i] = d;
      total += d;
    }
    // total > 0 is guaranteed: there are at least k distinct rows, so some
    // row differs from every chosen centroid.
    const double r = rng.next_unit() * total;
    double cum = 0.0;
    std::size_t pick = n - 1;
    for (std::size_t i = 0; i < n; ++i) {
      cum += best_d[i];
      if (cum > r) {
        pick = i;
        break;
      }
    }
    centroids.append_row(m.row(pick));
  }
  return centroids;
}

}  // namespace

Standardizer Standardizer::fit(const Matrix& m) {
  if (m.rows == 0) {
    throw std::invalid_argument("standardizer: cannot fit on empty data");
  }
  Standardizer s;
  s.mean.assign(m.cols, 0.0);
  s.stddev.assign(m.cols, 0.0);
  for (std::size_t i = 0; i < m.rows; ++i) {
    const auto row = m.row(i);
    for (std::size_t j = 0; j < m.cols; ++j) s.mean[j] += row[j];
  }
  for (std::size_t j = 0; j < m.cols; ++j) {
    s.mean[j] /= static_cast<double>(m.rows);
  }
  for (std::size_t i = 0; i < m.rows; ++i) {
    const auto row = m.row(i);
    for (std::size_t j = 0; j < m.cols; ++j) {
      const double d = row[j] - s.mean[j];
      s.stddev[j] += d * d;
    }
  }
  for (std::size_t j = 0; j < m.cols; ++j) {
    s.stddev[j] = std::sqrt(s.stddev[j] / static_cast<double>(m.rows));
    if (s.stddev[j] == 0.0) s.stddev[j] = 1.0;  // constant feature
  }
  return s;
}

Standardizer Standardizer::identity(std::size_t n_features) {
  Standardizer s;
  s.mean.assign(n_features, 0.0);
  s.stddev.assign(n_features, 1.0);
  return s;
}

Matrix Standardizer::transform(const Matrix& m) const {
  if (m.cols != mean.size()) {
    throw std::invalid_argument("standardizer: dimension mismatch");
  }
  Matrix out(m.rows, m.cols);
  for (std::size_t i = 0; i < m.rows; ++i) {
    transform_row(m.row(i), out.row(i));
  }
  return out;
}

void Standardizer::transform_row(std::span<const double> in,
                                 std::span<double> out) const {
  if (in.size() != mean.size() || out.size() != mean.size()) {
    throw std::invalid_argument("standardizer: dimension mismatch");
  }
  for (std::size_t j = 0; j < in.size(); ++j) {
    out[j] = (in[j] - mean[j]) / stddev[j];
  }
}

KMeansResult kmeans_fit(const Matrix& m, int k, std::uint64_t seed,
                        int max_iter, double tol) {
  if (k < 1) throw std::invalid_argument("kmeans: k must be at least 1");
  if (max_iter < 1) throw std::invalid_argument("kmeans: max_iter must be >= 1");
  if (tol < 0.0) throw std::invalid_argument("kmeans: tol must be >= 0");
  if (m.rows == 0) throw std::invalid_argument("kmeans: empty data");
  if (count_distinct_rows(m) < static_cast<std::size_t>(k)) {
    throw std::invalid_argument(
        "kmeans: need at least k distinct rows (k=" + std::to_string(k) +
        ")");
  }

  Rng rng(seed);
  KMeansResult result;
  result.centroids = kmeanspp_seed(m, k, rng);

  AssignPass pass = assign_pass(m, result.centroids);
  result.wcss_per_iteration.push_back(pass.wcss);

  bool finishing = false;
  int iter = 0;
  while (iter < max_iter) {
    ++iter;
    Matrix previous = result.centroids;
    update_means(m, pass, result.centroids);

    double max_shift2 = 0.0;
    for (std::size_t c = 0; c < result.centroids.rows; ++c) {
      max_shift2 = std::max(
          max_shift2,
          squared_distance(previous.row(c), result.centroids.row(c)));
    }

    AssignPass next = assign_pass(m, result.centroids);
    result.wcss_per_iteration.push_back(next.wcss);
    const bool stable = next.assignments == pass.assignments;
    pass = std::move(next);
    if (stable || finishing) break;
    // Once the centroids have effectively stopped moving, run one more
    // update+assign round and stop.
    if (max_shift2 < tol * tol) finishing = true;
  }

  result.iterations_run = iter;
  result.assignments = std::move(pass.assignments);
  result.wcss = pass.wcss;
  return result;
}

std::vector<WcssPoint> wcss_curve(const Matrix& m, int k_max,
                                  std::uint64_t seed,
                                  std::vector<KMeansResult>* fits,
                                  int max_iter, double tol) {
  if (k_max < 2) throw std::invalid_argument("wcss_curve: k_max must be >= 2");
  if (count_distinct_rows(m) < static_cast<std::size_t>(k_max)) {
    throw std::invalid_argument(
        "wcss_curve: need at least k_max distinct rows");
  }
  std::vector<WcssPoint> curve;
  curve.reserve(static_cast<std::size_t>(k_max));
  for (int k = 1; k <= k_max; ++k) {
    KMeansResult fit =
        kmeans_fit(m, k, derive_seed(seed, kCurveSalt, static_cast<std::uint64_t>(k)),
                   max_iter, tol);
    curve.push_back({k, fit.wcss});
    if (fits) fits->push_back(std::move(fit));
  }
  return curve;
}

int select_k_elbow(const std::vector<WcssPoint>& curve) {
  if (curve.size() < 3) {
    throw std::invalid_argument("elbow selection needs at least 3 points");
  }
  const double x1 = curve.front().k, y1 = curve.front().wcss;
  const double x2 = curve.back().k, y2 = curve.back().wcss;
  int best_k = curve[1].k;
  double best_cross = -1.0;
  for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
    const double xi = curve[i].k, yi = curve[i].wcss;
    // |cross product| is proportional to the distance from the chord.
    const double cross =
        std::abs((x2 - x1) * (yi - y1) - (y2 - y1) * (xi - x1));
    if (cross > best_cross) {  // ties keep the smaller k
      best_cross = cross;
      best_k = curve[i].k;
    }
  }
  return best_k;
}

int ClusterModel::assign(std::span<const double> raw_row) const {
  std::vector<double> z(raw_row.size());
  standardizer.transform_row(raw_row, z);
  return assign_standardized(z);
}

int ClusterModel::assign_standardized(std::span<const double> z_row) const {
  if (z_row.size() != centroids.cols) {
    throw std::invalid_argument("assign: dimension mismatch");
  }
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.rows; ++c) {
    const double d = squared_distance(z_row, centroids.row(c));
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(c);
    }
  }
  return best;
}

std::vector<int> ClusterModel::assign_all(const Matrix& raw_rows) const {
  const Matrix z = standardizer.transform(raw_rows);
  std::vector<int> out(z.rows);
  for (std::size_t i = 0; i < z.rows; ++i) {
    out[i] = assign_standardized(z.row(i));
  }
  return out;
}

ClusterModel fit_cluster_model(const Matrix& raw_features,
                               const ClusterFitOptions& options) {
  if (options.k_override < 0) {
    throw std::invalid_argument("k_override must be >= 0");
  }
  ClusterModel model;
  model.standardizer = options.standardize
                           ? Standardizer::fit(raw_features)
                           : Standardizer::identity(raw_features.cols);
  const Matrix z = model.standardizer.transform(raw_features);

  // Seeds are derived per k the same way wcss_curve derives them, so a
  // forced k reproduces exactly the fit the elbow path would have chosen.
  if (options.k_override > 0) {
    const KMeansResult fit = kmeans_fit(
        z, options.k_override,
        derive_seed(options.seed, kCurveSalt,
                    static_cast<std::uint64_t>(options.k_override)),
        options.max_iter, options.tol);
    model.k = options.k_override;
    model.centroids = fit.centroids;
    model.wcss = fit.wcss;
    model.iterations_run = fit.iterations_run;
    return model;
  }

  std::vector<KMeansResult> fits;
  model.curve = wcss_curve(z, options.k_max, options.seed, &fits,
                           options.max_iter, options.tol);
  const int k = select_k_elbow(model.curve);
  const KMeansResult& fit = fits[static_cast<std::size_t>(k - 1)];
  model.k = k;
  model.centroids = fit.centroids;
  model.wcss = fit.wcss;
  model.iterations_run = fit.iterations_run;
  return model;
}

}  // namespace hcad
