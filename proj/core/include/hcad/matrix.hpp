#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hcad {

// Dense row-major matrix of doubles. Rows are samples, columns are features.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  std::span<double> row(std::size_t r) {
    return {data.data() + r * cols, cols};
  }
  std::span<const double> row(std::size_t r) const {
    return {data.data() + r * cols, cols};
  }

  bool empty() const { return rows == 0; }

  // Appends a row; sets the column count on the first append.
  void append_row(std::span<const double> values);

  // New matrix holding the given rows, in the given order.
  Matrix select_rows(const std::vector<std::size_t>& indices) const;
};

// Squared Euclidean distance. Spans must have equal length.
double squared_distance(std::span<const double> a, std::span<const double> b);

}  // namespace hcad
