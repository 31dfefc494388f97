#include "hcad/matrix.hpp"

#include <stdexcept>

namespace hcad {

void Matrix::append_row(std::span<const double> values) {
  if (rows == 0 && cols == 0) {
    cols = values.size();
  }
  if (values.size() != cols) {
    throw std::invalid_argument("append_row: expected " +
                                std::to_string(cols) + " values, got " +
                                std::to_string(values.size()));
  }
  data.insert(data.end(), values.begin(), values.end());
  ++rows;
}

Matrix Matrix::select_rows(const std::vector<std::size_t>& indices) const {
  Matrix out(indices.size(), cols);
  double* dst = out.data.data();
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= rows) {
      throw std::invalid_argument("select_rows: index out of range");
    }
    const double* src = data.data() + indices[i] * cols;
    for (std::size_t c = 0; c < cols; ++c) dst[c] = src[c];
    dst += cols;
  }
  return out;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace hcad
