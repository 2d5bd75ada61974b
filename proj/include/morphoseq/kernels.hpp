#pragma once

#include <cstddef>
#include <string_view>

namespace morphoseq::kernels {

// Inner loops used by the model. Every variant computes the same quantities;
// the vector variants may differ from the scalar reference in the last few
// ulps because they reassociate sums.

using DotFn = double (*)(const double* a, const double* b, std::size_t n);
/// y += alpha * x
using AxpyFn = void (*)(double alpha, const double* x, double* y, std::size_t n);
/// y += A x, A is rows x cols row-major.
using GemvFn = void (*)(const double* a, std::size_t rows, std::size_t cols, const double* x,
                        double* y);
/// y += A^T x, A is rows x cols row-major, x has `rows` entries.
using GemvTFn = void (*)(const double* a, std::size_t rows, std::size_t cols, const double* x,
                         double* y);
/// A += u v^T, A is rows x cols row-major.
using Ger = void (*)(double* a, std::size_t rows, std::size_t cols, const double* u,
                     const double* v);

struct KernelTable {
  std::string_view name;
  DotFn dot;
  AxpyFn axpy;
  GemvFn gemv;
  GemvTFn gemv_t;
  Ger ger;
};

const KernelTable& scalar_table();

/// Null when the binary or the CPU lacks AVX2+FMA.
const KernelTable* avx2_table();

/// Table chosen once per process: the best variant the CPU supports, unless
/// MORPHOSEQ_SIMD=scalar forces the reference kernels.
const KernelTable& active();

inline double dot(const double* a, const double* b, std::size_t n) { return active().dot(a, b, n); }
inline void axpy(double alpha, const double* x, double* y, std::size_t n) {
  active().axpy(alpha, x, y, n);
}
inline void gemv(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
  active().gemv(a, rows, cols, x, y);
}
inline void gemv_t(const double* a, std::size_t rows, std::size_t cols, const double* x,
                   double* y) {
  active().gemv_t(a, rows, cols, x, y);
}
inline void ger(double* a, std::size_t rows, std::size_t cols, const double* u, const double* v) {
  active().ger(a, rows, cols, u, v);
}

}  // namespace morphoseq::kernels
