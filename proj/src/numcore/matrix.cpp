#include "morphoseq/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "morphoseq/errors.hpp"
#include "morphoseq/kernels.hpp"

namespace morphoseq {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw DimensionError("matrix data has " + std::to_string(data_.size()) +
                         " values, expected " + shape_string());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<double> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw DimensionError("ragged matrix literal");
    data.insert(data.end(), row.begin(), row.end());
  }
  return Matrix(r, c, std::move(data));
}

void Matrix::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

bool Matrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

std::string Matrix::shape_string() const {
  return "(" + std::to_string(rows_) + "x" + std::to_string(cols_) + ")";
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: cannot multiply " + a.shape_string() + " by " +
                         b.shape_string());
  }
  Matrix out(a.rows(), b.cols());
  // out[i,:] = sum_k a[i,k] * b[k,:]
  for (std::size_t i = 0; i < a.rows(); ++i) {
    kernels::gemv_t(b.data(), b.rows(), b.cols(), a.row(i).data(), out.row(i).data());
  }
  return out;
}

void softmax_inplace(std::span<double> v) {
  const double mx = *std::max_element(v.begin(), v.end());
  double sum = 0.0;
  for (double& x : v) {
    x = std::exp(x - mx);
    sum += x;
  }
  const double inv = 1.0 / sum;
  for (double& x : v) x *= inv;
}

std::vector<double> softmax(std::span<const double> v) {
  if (v.empty()) throw ArgumentError("softmax: empty input");
  std::vector<double> out(v.begin(), v.end());
  softmax_inplace(out);
  return out;
}

}  // namespace morphoseq
