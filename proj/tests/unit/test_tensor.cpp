#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "graphpae/errors.hpp"
#include "graphpae/rng.hpp"
#include "graphpae/tensor.hpp"

using namespace graphpae;

TEST(Tensor, ShapeAndValues) {
  const Tensor t = Tensor::from_rows({{1, 2, 3}, {4, 5, 6}});
  EXPECT_EQ(t.rows(), 2u);
  EXPECT_EQ(t.cols(), 3u);
  EXPECT_EQ(t.size(), 6u);
  EXPECT_EQ(t(1, 2), 6.0);
  EXPECT_EQ(t.row(1)[0], 4.0);
  EXPECT_EQ(Tensor::scalar(2.5).item(), 2.5);
  EXPECT_THROW(t.item(), ShapeError);
}

TEST(Tensor, RejectsMismatchedShape) {
  EXPECT_THROW(Tensor({2, 2}, {1.0, 2.0, 3.0}), ShapeError);
}

TEST(Tensor, BitwiseEqualDistinguishesSignedZero) {
  EXPECT_TRUE(Tensor::scalar(0.0) == Tensor::scalar(-0.0));
  EXPECT_FALSE(bitwise_equal(Tensor::scalar(0.0), Tensor::scalar(-0.0)));
}

TEST(Tensor, FiniteCheck) {
  Tensor t(2, 2, 1.0);
  EXPECT_TRUE(t.all_finite());
  t(0, 1) = INFINITY;
  EXPECT_FALSE(t.all_finite());
}

TEST(OrderInvariantSum, IndependentOfPermutation) {
  Rng rng(1);
  std::vector<double> v(1000);
  for (auto& x : v) x = (uniform01(rng) - 0.5) * std::pow(10.0, static_cast<int>(uniform_index(rng, 12)) - 6);
  auto a = v;
  const double s1 = order_invariant_sum(a);
  for (int trial = 0; trial < 5; ++trial) {
    shuffle(v, rng);
    auto b = v;
    EXPECT_EQ(order_invariant_sum(b), s1);
  }
}

TEST(Rng, DerivedStreamsAreReproducibleAndDistinct) {
  EXPECT_EQ(derive_seed(1, 2, 3, Stream::kMaskSelection), derive_seed(1, 2, 3, Stream::kMaskSelection));
  EXPECT_NE(derive_seed(1, 2, 3, Stream::kMaskSelection), derive_seed(1, 2, 3, Stream::kPositionNoise));
  EXPECT_NE(derive_seed(1, 2, 3, Stream::kMaskSelection), derive_seed(1, 3, 3, Stream::kMaskSelection));
  Rng a = make_rng(4, 5, 0, Stream::kInit), b = make_rng(4, 5, 0, Stream::kInit);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a(), b());
}

TEST(Rng, UniformOpenStaysInside) {
  Rng rng(9);
  for (int i = 0; i < 100000; ++i) {
    const double x = uniform_open(rng, -0.01, 0.01);
    EXPECT_GT(x, -0.01);
    EXPECT_LT(x, 0.01);
  }
}

TEST(Rng, StandardNormalMoments) {
  Rng rng(3);
  const int n = 200000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = standard_normal(rng);
    s += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.02);
}
