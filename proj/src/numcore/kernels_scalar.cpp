#include "kernels_impl.hpp"

namespace morphoseq::kernels::detail {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void gemv_scalar(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] += dot_scalar(a + r * cols, x, cols);
}

void gemv_t_scalar(const double* a, std::size_t rows, std::size_t cols, const double* x,
                   double* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    if (x[r] != 0.0) axpy_scalar(x[r], a + r * cols, y, cols);
  }
}

void ger_scalar(double* a, std::size_t rows, std::size_t cols, const double* u, const double* v) {
  for (std::size_t r = 0; r < rows; ++r) {
    if (u[r] != 0.0) axpy_scalar(u[r], v, a + r * cols, cols);
  }
}

}  // namespace

const KernelTable kScalarTable{"scalar", dot_scalar, axpy_scalar, gemv_scalar, gemv_t_scalar,
                               ger_scalar};

}  // namespace morphoseq::kernels::detail
