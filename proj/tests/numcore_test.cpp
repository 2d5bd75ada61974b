#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "morphoseq/errors.hpp"
#include "morphoseq/matrix.hpp"
#include "morphoseq/optim.hpp"
#include "morphoseq/rng.hpp"
#include "morphoseq/utf8.hpp"

using namespace morphoseq;

TEST(Matmul, IdentityLeavesMatrixUnchanged) {
  const Matrix b = Matrix::from_rows({{5, 6}, {7, 8}});
  EXPECT_EQ(matmul(Matrix::identity(2), b), b);
}

TEST(Matmul, HandComputedProduct) {
  const Matrix a = Matrix::from_rows({{1, 2}, {3, 4}});
  const Matrix b = Matrix::from_rows({{5, 6}, {7, 8}});
  EXPECT_EQ(matmul(a, b), Matrix::from_rows({{19, 22}, {43, 50}}));
}

TEST(Matmul, RowTimesColumnOfOnes) {
  const Matrix r(1, 3, 1.0), c(3, 1, 1.0);
  const Matrix p = matmul(r, c);
  ASSERT_EQ(p.rows(), 1u);
  ASSERT_EQ(p.cols(), 1u);
  EXPECT_EQ(p(0, 0), 3.0);
}

TEST(Matmul, MismatchNamesBothShapes) {
  try {
    matmul(Matrix(2, 3), Matrix(2, 3));
    FAIL() << "expected DimensionError";
  } catch (const DimensionError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("2x3"), std::string::npos) << msg;
  }
}

TEST(Matmul, MatchesNaiveTripleLoop) {
  Rng rng(5);
  Matrix a(7, 13), b(13, 5);
  for (double& v : a.values()) v = rng.uniform() - 0.5;
  for (double& v : b.values()) v = rng.uniform() - 0.5;
  const Matrix p = matmul(a, b);
  for (std::size_t i = 0; i < 7; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      double s = 0;
      for (std::size_t k = 0; k < 13; ++k) s += a(i, k) * b(k, j);
      EXPECT_NEAR(p(i, j), s, 1e-13);
    }
  }
}

TEST(Softmax, EqualLogitsAreUniform) {
  const std::vector<double> v{2.5, 2.5, 2.5};
  for (double p : softmax(v)) EXPECT_NEAR(p, 1.0 / 3.0, 1e-15);
}

TEST(Softmax, LogTwo) {
  const std::vector<double> v{0.0, std::log(2.0)};
  const auto p = softmax(v);
  EXPECT_NEAR(p[0], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(p[1], 2.0 / 3.0, 1e-15);
}

TEST(Softmax, LargeLogitsDoNotOverflow) {
  const std::vector<double> v{1000.0, 1000.0};
  const auto p = softmax(v);
  EXPECT_EQ(p[0], 0.5);
  EXPECT_EQ(p[1], 0.5);
}

TEST(Softmax, EmptyInputThrows) {
  EXPECT_THROW(softmax(std::vector<double>{}), ArgumentError);
}

TEST(Softmax, SumsToOneAndPermutationEquivariant) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(1 + rng.below(30));
    for (double& x : v) x = 40.0 * (rng.uniform() - 0.5);
    const auto p = softmax(v);
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-12);
    for (double x : p) EXPECT_GT(x, 0.0);

    std::vector<std::size_t> perm(v.size());
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);
    std::vector<double> w(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) w[i] = v[perm[i]];
    const auto q = softmax(w);
    for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(q[i], p[perm[i]], 1e-15);
  }
}

TEST(Adadelta, ZeroGradientIsFixedPoint) {
  Matrix p = Matrix::from_rows({{1.5, -2.0}});
  AdadeltaState st = AdadeltaState::fresh(p);
  st.acc_grad.fill(0.4);
  st.acc_update.fill(0.2);
  adadelta_step(p, Matrix(1, 2), st);
  EXPECT_EQ(p, Matrix::from_rows({{1.5, -2.0}}));
  EXPECT_DOUBLE_EQ(st.acc_grad(0, 0), 0.95 * 0.4);
  EXPECT_DOUBLE_EQ(st.acc_update(0, 1), 0.95 * 0.2);
}

TEST(Adadelta, FirstStepClosedForm) {
  Matrix p(1, 1, 0.0);
  AdadeltaState st = AdadeltaState::fresh(p, {0.95, 1e-6});
  adadelta_step(p, Matrix(1, 1, 1.0), st);
  EXPECT_NEAR(p(0, 0), -std::sqrt(1e-6 / (0.05 + 1e-6)), 1e-15);
}

TEST(Adadelta, AccumulatedGradientGrowsUnderConstantGradient) {
  Matrix p(1, 1, 0.0);
  AdadeltaState st = AdadeltaState::fresh(p);
  const Matrix g(1, 1, 0.3);
  adadelta_step(p, g, st);
  const double first = st.acc_grad(0, 0);
  adadelta_step(p, g, st);
  EXPECT_GT(st.acc_grad(0, 0), first);
}

TEST(Adadelta, ShapeMismatchThrows) {
  Matrix p(2, 2);
  AdadeltaState st = AdadeltaState::fresh(p);
  EXPECT_THROW(adadelta_step(p, Matrix(2, 3), st), DimensionError);
}

TEST(FiniteDiff, QuadraticAtThree) {
  const std::vector<double> theta{3.0};
  const auto g = finite_diff_grad([](std::span<const double> t) { return t[0] * t[0]; }, theta);
  EXPECT_NEAR(g[0], 6.0, 1e-8);
}

TEST(FiniteDiff, ConstantLossGivesZero) {
  const std::vector<double> theta{1.0, -4.0, 0.5};
  const auto g = finite_diff_grad([](std::span<const double>) { return 7.0; }, theta);
  for (double v : g) EXPECT_EQ(v, 0.0);
}

TEST(FiniteDiff, NonFiniteLossThrows) {
  const std::vector<double> theta{0.0};
  EXPECT_THROW(finite_diff_grad([](std::span<const double> t) { return std::log(t[0]); }, theta),
               NumericError);
}

TEST(FiniteDiff, NonPositiveStepThrows) {
  const std::vector<double> theta{0.0};
  EXPECT_THROW(finite_diff_grad([](std::span<const double>) { return 0.0; }, theta, 0.0),
               ArgumentError);
}

TEST(Rng, SameSeedSameStream) {
  Rng a(99), b(99), c(100);
  bool differs = false;
  for (int i = 0; i < 50; ++i) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    differs |= x != c.next_u64();
  }
  EXPECT_TRUE(differs);
}

TEST(Rng, BelowStaysInRangeAndCoversIt) {
  Rng r(3);
  std::vector<int> hits(7);
  for (int i = 0; i < 7000; ++i) {
    const auto v = r.below(7);
    ASSERT_LT(v, 7u);
    ++hits[v];
  }
  for (int h : hits) EXPECT_GT(h, 800);
}

TEST(Rng, SampleIndicesAreSortedAndDistinct) {
  Rng r(8);
  const auto s = r.sample_indices(50, 20);
  ASSERT_EQ(s.size(), 20u);
  EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
  EXPECT_EQ(std::adjacent_find(s.begin(), s.end()), s.end());
  EXPECT_LT(s.back(), 50u);
  EXPECT_EQ(r.sample_indices(5, 9).size(), 5u);
}

TEST(Rng, DerivedSeedsDependOnLabel) {
  EXPECT_EQ(derive_seed(1, "split"), derive_seed(1, "split"));
  EXPECT_NE(derive_seed(1, "split"), derive_seed(1, "init"));
  EXPECT_NE(derive_seed(1, "split"), derive_seed(2, "split"));
}

TEST(Utf8, SplitsMultibyteCodePoints) {
  const auto parts = utf8::split_code_points("Häus∅");
  ASSERT_EQ(parts.size(), 5u);
  EXPECT_EQ(parts[1], "ä");
  EXPECT_EQ(parts[4], "∅");
  EXPECT_EQ(utf8::decode("Häus").size(), 4u);
}

TEST(Utf8, RejectsInvalidSequences) {
  EXPECT_FALSE(utf8::is_valid("\xC3"));
  EXPECT_FALSE(utf8::is_valid("\xFF"));
  EXPECT_THROW(utf8::split_code_points("a\x80"), ArgumentError);
  EXPECT_TRUE(utf8::is_valid(""));
}
