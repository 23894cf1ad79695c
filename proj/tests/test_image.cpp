#include <gtest/gtest.h>

#include <cmath>

#include "imrec/error.hpp"
#include "imrec/image.hpp"
#include "test_support.hpp"

using namespace imrec;
using imrec::testing::random_image;

namespace {

GradientField random_field(int side, std::uint64_t seed) {
  const Image a = random_image(side, seed);
  const Image b = random_image(side, seed + 1000);
  GradientField p(side);
  for (std::size_t k = 0; k < a.size(); ++k) {
    p.gx[k] = a[k];
    p.gy[k] = b[k];
  }
  return p;
}

}  // namespace

TEST(ImageTest, ConstructionChecksShape) {
  EXPECT_THROW(Image(1), ParameterError);
  EXPECT_THROW(Image(3, std::vector<double>(8, 0.0)), DimensionError);
  const Image m(5, 2.0);
  EXPECT_EQ(m.size(), 25u);
  EXPECT_EQ(m.n(), 4);
  EXPECT_DOUBLE_EQ(m.h() * m.n(), 1.0);
}

TEST(ImageTest, ArithmeticRejectsLatticeMismatch) {
  Image a(4), b(5);
  EXPECT_THROW(a += b, DimensionError);
  EXPECT_THROW(dot(a, b), DimensionError);
}

TEST(GradientTest, ConstantHasZeroGradient) {
  const GradientField g = gradient(Image(7, 3.5));
  for (double v : g.gx) EXPECT_EQ(v, 0.0);
  for (double v : g.gy) EXPECT_EQ(v, 0.0);
}

TEST(GradientTest, RampHasUnitSlope) {
  Image m(9);
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j) m(i, j) = j * m.h();
  const GradientField g = gradient(m);
  for (int i = 0; i < 9; ++i) {
    for (int j = 0; j < 9; ++j) {
      const std::size_t k = static_cast<std::size_t>(i * 9 + j);
      EXPECT_NEAR(g.gx[k], j < 8 ? 1.0 : 0.0, 1e-12);
      EXPECT_EQ(g.gy[k], 0.0);
    }
  }
}

TEST(GradientTest, TrailingBoundaryIsZero) {
  const Image m = random_image(6, 3);
  const GradientField g = gradient(m);
  for (int t = 0; t < 6; ++t) {
    EXPECT_EQ(g.gx[static_cast<std::size_t>(t * 6 + 5)], 0.0);
    EXPECT_EQ(g.gy[static_cast<std::size_t>(5 * 6 + t)], 0.0);
  }
}

TEST(GradientTest, AdjointOfDivergence) {
  for (int side : {2, 3, 8, 16}) {
    const Image m = random_image(side, 10 + side);
    const GradientField p = random_field(side, 20 + side);
    const double lhs = dot(gradient(m), p);
    const double rhs = -dot(m, divergence(p));
    const double scale = norm(m) * std::sqrt(dot(p, p));
    EXPECT_LE(std::abs(lhs - rhs), 1e-12 * scale) << "side " << side;
  }
}

TEST(GradientTest, DenseAdjointMatchesTranspose) {
  // Assemble both operators and compare D^T against -div.
  const int side = 8;
  const Eigen::Index n = side * side;
  Eigen::MatrixXd grad(2 * n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    Image e(side);
    e[static_cast<std::size_t>(k)] = 1.0;
    const GradientField g = gradient(e);
    for (Eigen::Index r = 0; r < n; ++r) {
      grad(r, k) = g.gx[static_cast<std::size_t>(r)];
      grad(n + r, k) = g.gy[static_cast<std::size_t>(r)];
    }
  }
  Eigen::MatrixXd div(n, 2 * n);
  for (Eigen::Index k = 0; k < 2 * n; ++k) {
    GradientField p(side);
    (k < n ? p.gx : p.gy)[static_cast<std::size_t>(k % n)] = 1.0;
    div.col(k) = imrec::testing::as_vector(divergence(p));
  }
  EXPECT_LE((grad.transpose() + div).norm(), 1e-12 * grad.norm());
}

TEST(DivergenceTest, ZeroFieldAndConstant) {
  const Image z = divergence(GradientField(5));
  for (double v : z.values()) EXPECT_EQ(v, 0.0);
  const Image c = divergence(gradient(Image(5, 4.0)));
  for (double v : c.values()) EXPECT_EQ(v, 0.0);
}

TEST(DivergenceTest, DivGradIsNeumannLaplacian) {
  const int side = 6;
  const Image m = random_image(side, 5);
  const Eigen::VectorXd expected = imrec::testing::neumann_laplacian(side) * imrec::testing::as_vector(m);
  const Eigen::VectorXd got = imrec::testing::as_vector(divergence(gradient(m)));
  EXPECT_LE((got - expected).norm(), 1e-12 * expected.norm());
}

TEST(DivergenceTest, Linearity) {
  const Image x = random_image(7, 1), y = random_image(7, 2);
  const GradientField gx = gradient(2.5 * x + (-1.5) * y);
  const GradientField g1 = gradient(x), g2 = gradient(y);
  for (std::size_t k = 0; k < gx.gx.size(); ++k) {
    EXPECT_NEAR(gx.gx[k], 2.5 * g1.gx[k] - 1.5 * g2.gx[k], 1e-10);
    EXPECT_NEAR(gx.gy[k], 2.5 * g1.gy[k] - 1.5 * g2.gy[k], 1e-10);
  }
}

TEST(RelativeErrorTest, HandValues) {
  const Image a = random_image(4, 9);
  EXPECT_EQ(relative_error(a, a), 0.0);
  EXPECT_NEAR(relative_error(2.0 * a, a), 0.5, 1e-15);
  const Image prev(2, {3.0, 0.0, 0.0, 0.0});
  const Image next(2, {3.0, 4.0, 0.0, 0.0});
  EXPECT_NEAR(relative_error(next, prev), 0.8, 1e-15);
  EXPECT_THROW(relative_error(Image(4), a), ZeroDenominatorError);
}

TEST(MisfitTest, HandValues) {
  const Image b = random_image(9, 4);
  EXPECT_EQ(misfit(b, b), 0.0);
  Image m = b;
  for (double& v : m.values()) v += 0.75;
  EXPECT_NEAR(misfit(m, b), 0.75 * 9.0 / 8.0, 1e-12);
}

TEST(NoiseTest, ZeroEtaIsIdentity) {
  const Image m = random_image(16, 2, 0.0, 255.0);
  EXPECT_EQ(add_gaussian_noise(m, {0.0, 1}), m);
}

TEST(NoiseTest, Deterministic) {
  const Image m = random_image(16, 2, 0.0, 255.0);
  EXPECT_EQ(add_gaussian_noise(m, {10.0, 42}), add_gaussian_noise(m, {10.0, 42}));
  EXPECT_NE(add_gaussian_noise(m, {10.0, 42}), add_gaussian_noise(m, {10.0, 43}));
}

TEST(NoiseTest, MisfitMatchesTargetLevel) {
  const Image m = random_image(129, 8, 0.0, 255.0);
  const double s = 0.10 * norm(m) / 129.0;
  EXPECT_NEAR(noise_sigma(m, 10.0), s, 1e-12 * s);
  const double got = misfit(add_gaussian_noise(m, {10.0, 5}), m);
  EXPECT_GE(got, 0.9 * s);
  EXPECT_LE(got, 1.1 * s);
}

TEST(NoiseTest, RejectsBadEta) {
  EXPECT_THROW(add_gaussian_noise(Image(4, 1.0), {-1.0, 0}), ParameterError);
  EXPECT_THROW(add_gaussian_noise(Image(4, 1.0), {NAN, 0}), ParameterError);
}

TEST(MetricsTest, PsnrOfExactCopyIsInfinite) {
  const Image m = random_image(8, 1, 0.0, 255.0);
  EXPECT_TRUE(std::isinf(psnr(m, m)));
  Image shifted = m;
  for (double& v : shifted.values()) v += 2.55;
  EXPECT_NEAR(psnr(shifted, m), 40.0, 1e-9);
}
