#include "kernels_impl.hpp"

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#include <immintrin.h>
#define MORPHOSEQ_HAVE_AVX2 1
#endif

namespace morphoseq::kernels::detail {

#ifdef MORPHOSEQ_HAVE_AVX2
namespace {

#define MORPHOSEQ_AVX2 __attribute__((target("avx2,fma")))

MORPHOSEQ_AVX2 inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

MORPHOSEQ_AVX2 double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

MORPHOSEQ_AVX2 void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

MORPHOSEQ_AVX2 void gemv_avx2(const double* a, std::size_t rows, std::size_t cols,
                              const double* x, double* y) {
  std::size_t r = 0;
  // Four rows at a time share each load of x.
  for (; r + 4 <= rows; r += 4) {
    const double* a0 = a + r * cols;
    const double* a1 = a0 + cols;
    const double* a2 = a1 + cols;
    const double* a3 = a2 + cols;
    __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
    __m256d s2 = _mm256_setzero_pd(), s3 = _mm256_setzero_pd();
    std::size_t c = 0;
    for (; c + 4 <= cols; c += 4) {
      const __m256d xv = _mm256_loadu_pd(x + c);
      s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a0 + c), xv, s0);
      s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a1 + c), xv, s1);
      s2 = _mm256_fmadd_pd(_mm256_loadu_pd(a2 + c), xv, s2);
      s3 = _mm256_fmadd_pd(_mm256_loadu_pd(a3 + c), xv, s3);
    }
    double t0 = hsum(s0), t1 = hsum(s1), t2 = hsum(s2), t3 = hsum(s3);
    for (; c < cols; ++c) {
      t0 += a0[c] * x[c];
      t1 += a1[c] * x[c];
      t2 += a2[c] * x[c];
      t3 += a3[c] * x[c];
    }
    y[r] += t0;
    y[r + 1] += t1;
    y[r + 2] += t2;
    y[r + 3] += t3;
  }
  for (; r < rows; ++r) y[r] += dot_avx2(a + r * cols, x, cols);
}

MORPHOSEQ_AVX2 void gemv_t_avx2(const double* a, std::size_t rows, std::size_t cols,
                                const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    if (x[r] != 0.0) axpy_avx2(x[r], a + r * cols, y, cols);
  }
}

MORPHOSEQ_AVX2 void ger_avx2(double* a, std::size_t rows, std::size_t cols, const double* u,
                             const double* v) {
  for (std::size_t r = 0; r < rows; ++r) {
    if (u[r] != 0.0) axpy_avx2(u[r], v, a + r * cols, cols);
  }
}

#undef MORPHOSEQ_AVX2

const KernelTable kAvx2Table{"avx2", dot_avx2, axpy_avx2, gemv_avx2, gemv_t_avx2, ger_avx2};

}  // namespace

const KernelTable* avx2_table_if_compiled() { return &kAvx2Table; }

#else

const KernelTable* avx2_table_if_compiled() { return nullptr; }

#endif

}  // namespace morphoseq::kernels::detail
