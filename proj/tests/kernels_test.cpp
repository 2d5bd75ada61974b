#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "morphoseq/kernels.hpp"
#include "morphoseq/rng.hpp"

using namespace morphoseq;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = 2.0 * rng.uniform() - 1.0;
  return v;
}

// Sizes straddle the 4-wide vector lanes and the unrolled tails.
const std::size_t kSizes[] = {0, 1, 3, 4, 5, 7, 8, 15, 16, 17, 31, 100, 301};

void expect_close(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(a[i], b[i], tol * (1.0 + std::abs(a[i]))) << "index " << i;
  }
}

class Avx2Equivalence : public ::testing::Test {
protected:
  void SetUp() override {
    simd_ = kernels::avx2_table();
    if (!simd_) GTEST_SKIP() << "AVX2+FMA not available";
  }
  const kernels::KernelTable& ref_ = kernels::scalar_table();
  const kernels::KernelTable* simd_ = nullptr;
  Rng rng_{2024};
};

}  // namespace

TEST(Kernels, ScalarDotMatchesDefinition) {
  const double a[] = {1, 2, 3}, b[] = {4, -5, 6};
  EXPECT_EQ(kernels::scalar_table().dot(a, b, 3), 12.0);
}

TEST(Kernels, ScalarGemvAndTranspose) {
  const double a[] = {1, 2, 3, 4, 5, 6};  // 2x3
  const double x3[] = {1, 0, -1}, x2[] = {1, 2};
  double y2[] = {10, 20}, y3[] = {0, 0, 0};
  kernels::scalar_table().gemv(a, 2, 3, x3, y2);
  EXPECT_EQ(y2[0], 8.0);
  EXPECT_EQ(y2[1], 18.0);
  kernels::scalar_table().gemv_t(a, 2, 3, x2, y3);
  EXPECT_EQ(y3[0], 9.0);
  EXPECT_EQ(y3[1], 12.0);
  EXPECT_EQ(y3[2], 15.0);
}

TEST(Kernels, ScalarGerAndAxpy) {
  double a[] = {0, 0, 0, 0};
  const double u[] = {1, 2}, v[] = {3, 4};
  kernels::scalar_table().ger(a, 2, 2, u, v);
  EXPECT_EQ(a[0], 3.0);
  EXPECT_EQ(a[3], 8.0);
  double y[] = {1, 1};
  kernels::scalar_table().axpy(2.0, u, y, 2);
  EXPECT_EQ(y[0], 3.0);
  EXPECT_EQ(y[1], 5.0);
}

TEST(Kernels, ActiveTableIsOneOfTheVariants) {
  const auto& t = kernels::active();
  EXPECT_TRUE(&t == &kernels::scalar_table() || &t == kernels::avx2_table());
}

TEST_F(Avx2Equivalence, Dot) {
  for (std::size_t n : kSizes) {
    const auto a = random_vec(rng_, n), b = random_vec(rng_, n);
    const double r = ref_.dot(a.data(), b.data(), n);
    EXPECT_NEAR(simd_->dot(a.data(), b.data(), n), r, 1e-13 * (1.0 + n)) << "n=" << n;
  }
}

TEST_F(Avx2Equivalence, Axpy) {
  for (std::size_t n : kSizes) {
    const auto x = random_vec(rng_, n);
    auto y1 = random_vec(rng_, n);
    auto y2 = y1;
    ref_.axpy(0.7, x.data(), y1.data(), n);
    simd_->axpy(0.7, x.data(), y2.data(), n);
    expect_close(y1, y2, 1e-15);
  }
}

TEST_F(Avx2Equivalence, GemvAndTranspose) {
  for (std::size_t rows : {1, 3, 6, 100}) {
    for (std::size_t cols : kSizes) {
      const auto a = random_vec(rng_, rows * cols);
      const auto x = random_vec(rng_, cols), xt = random_vec(rng_, rows);
      auto y1 = random_vec(rng_, rows);
      auto y2 = y1;
      ref_.gemv(a.data(), rows, cols, x.data(), y1.data());
      simd_->gemv(a.data(), rows, cols, x.data(), y2.data());
      expect_close(y1, y2, 1e-12);

      auto z1 = random_vec(rng_, cols);
      auto z2 = z1;
      ref_.gemv_t(a.data(), rows, cols, xt.data(), z1.data());
      simd_->gemv_t(a.data(), rows, cols, xt.data(), z2.data());
      expect_close(z1, z2, 1e-12);
    }
  }
}

TEST_F(Avx2Equivalence, Ger) {
  for (std::size_t rows : {1, 5, 100}) {
    for (std::size_t cols : kSizes) {
      const auto u = random_vec(rng_, rows), v = random_vec(rng_, cols);
      auto a1 = random_vec(rng_, rows * cols);
      auto a2 = a1;
      ref_.ger(a1.data(), rows, cols, u.data(), v.data());
      simd_->ger(a2.data(), rows, cols, u.data(), v.data());
      expect_close(a1, a2, 1e-15);
    }
  }
}
