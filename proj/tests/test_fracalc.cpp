#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "tfsrc/fracalc.hpp"

using namespace tfsrc;

TEST(TimeGrid, Nodes) {
  const TimeGrid<double> grid(2.0, 8);
  EXPECT_EQ(grid.size(), 9);
  EXPECT_DOUBLE_EQ(grid.dt(), 0.25);
  EXPECT_EQ(grid.node(0), 0.0);
  EXPECT_EQ(grid.node(8), 2.0);
  const auto t = grid.nodes();
  for (Eigen::Index j = 1; j < t.size(); ++j) EXPECT_GT(t[j], t[j - 1]);
  EXPECT_THROW(TimeGrid<double>(0.0, 8), DomainError);
  EXPECT_THROW(TimeGrid<double>(1.0, 1), DomainError);
}

TEST(GridFunction, LengthMustMatch) {
  const TimeGrid<double> grid(1.0, 4);
  EXPECT_THROW(GridFunction<double>(grid, Eigen::VectorXd::Zero(4)), SizeMismatch);
  EXPECT_NO_THROW(GridFunction<double>(grid, Eigen::VectorXd::Zero(5)));
}

TEST(CaputoL1, ConstantHasZeroDerivative) {
  const TimeGrid<double> grid(1.0, 50);
  const auto f = GridFunction<double>::sample(grid, [](double) { return 3.5; });
  EXPECT_EQ(caputo_l1(f, 0.4).sup_norm(), 0.0);
}

TEST(CaputoL1, ExactOnRandomAffine) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coef(-5.0, 5.0);
  std::uniform_real_distribution<double> order(0.05, 0.95);
  for (int trial = 0; trial < 10; ++trial) {
    const double c0 = coef(rng);
    const double c1 = coef(rng);
    const double alpha = order(rng);
    const TimeGrid<double> grid(1.7, 300);
    const auto f = GridFunction<double>::sample(grid, [&](double t) { return c0 + c1 * t; });
    const auto d = caputo_l1(f, alpha);
    EXPECT_EQ(d[0], 0.0);
    for (Eigen::Index j = 1; j < grid.size(); ++j) {
      const double exact = c1 * std::pow(grid.node(j), 1 - alpha) / std::tgamma(2 - alpha);
      EXPECT_NEAR(d[j], exact, 1e-12 * std::abs(exact)) << trial << " " << j;
    }
  }
}

TEST(CaputoL1, Linearity) {
  const TimeGrid<double> grid(1.0, 200);
  const auto f = GridFunction<double>::sample(grid, [](double t) { return std::sin(3 * t); });
  const auto g = GridFunction<double>::sample(grid, [](double t) { return t * t * t; });
  const auto combo = f.with_values(2.5 * f.values() - 0.75 * g.values());
  const Eigen::VectorXd lhs = caputo_l1(combo, 0.6).values();
  const Eigen::VectorXd rhs = 2.5 * caputo_l1(f, 0.6).values() - 0.75 * caputo_l1(g, 0.6).values();
  EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(CaputoL1, SquareConvergesAtExpectedOrder) {
  const double alpha = 0.5;
  double previous = 0;
  for (Eigen::Index n : {100, 200, 400, 800}) {
    const TimeGrid<double> grid(1.0, n);
    const auto f = GridFunction<double>::sample(grid, [](double t) { return t * t; });
    const auto d = caputo_l1(f, alpha);
    double err = 0;
    for (Eigen::Index j = 1; j < grid.size(); ++j) {
      err = std::max(err, std::abs(d[j] - 2 * std::pow(grid.node(j), 1.5) / std::tgamma(2.5)));
    }
    if (previous > 0) {
      EXPECT_GE(std::log2(previous / err), 1.2);
    }
    previous = err;
  }
  const TimeGrid<double> fine(1.0, 1000);
  const auto f = GridFunction<double>::sample(fine, [](double t) { return t * t; });
  const auto d = caputo_l1(f, alpha);
  EXPECT_NEAR(d[1000], 2 / std::tgamma(2.5), 5 * std::pow(1e-3, 2 - alpha));
}

TEST(CaputoL1, RejectsBadOrder) {
  const TimeGrid<double> grid(1.0, 4);
  const auto f = GridFunction<double>::zeros(grid);
  EXPECT_THROW(caputo_l1(f, 1.0), DomainError);
  EXPECT_THROW(caputo_l1(f, 0.0), DomainError);
}

TEST(CaputoL1, LongDoubleInstantiation) {
  const TimeGrid<long double> grid(1.0L, 64);
  const auto f = GridFunction<long double>::sample(grid, [](long double t) { return 2 * t; });
  const auto d = caputo_l1(f, 0.25L);
  EXPECT_NEAR(static_cast<double>(d[64]), 2 / std::tgamma(1.75), 1e-15);
}

TEST(SingularConvolution, ZeroSource) {
  const TimeGrid<double> grid(1.0, 20);
  EXPECT_EQ(singular_convolution(GridFunction<double>::zeros(grid), 0.5, 1.0, 1.0).sup_norm(), 0.0);
}

TEST(SingularConvolution, UnitSourceMatchesClosedForm) {
  const TimeGrid<double> grid(10.0, 400);
  const auto ones = GridFunction<double>::sample(grid, [](double) { return 1.0; });
  for (double alpha : {0.3, 0.5, 0.7}) {
    for (double lambda : {1.0, 10.0, 100.0}) {
      for (double q : {0.5, 1.0}) {
        const auto c = singular_convolution(ones, alpha, lambda, q);
        for (Eigen::Index j = 1; j < grid.size(); ++j) {
          const double closed = kernel_integral_closed_form(alpha, lambda, q, grid.node(j)) / lambda;
          EXPECT_NEAR(c[j], closed, 1e-5 * closed);
        }
      }
    }
  }
}

TEST(SingularConvolution, LinearSourceMatchesQuadratureOracle) {
  const TimeGrid<double> grid(1.0, 50);
  const auto r = GridFunction<double>::sample(grid, [](double t) { return t; });
  const auto c = singular_convolution(r, 0.5, 1.0, 1.0);
  EXPECT_NEAR(c[50], oracle::kConvolutionLinear, 1e-12);
}

TEST(SingularConvolution, RejectsBadParameters) {
  const TimeGrid<double> grid(1.0, 4);
  const auto r = GridFunction<double>::zeros(grid);
  EXPECT_THROW(singular_convolution(r, 1.0, 1.0, 1.0), DomainError);
  EXPECT_THROW(singular_convolution(r, 0.5, 0.0, 1.0), DomainError);
  EXPECT_THROW(singular_convolution(r, 0.5, 1.0, -1.0), DomainError);
}

TEST(SingularConvolution, WeightsSumToKernelMass) {
  const auto [near, far] = convolution_weights<double>(30, 0.1, 0.4, 3.0);
  const double mass = near.sum() + far.sum();
  EXPECT_NEAR(mass, kernel_integral_closed_form(0.4, 3.0, 1.0, 3.0) / 3.0, 1e-13);
  EXPECT_TRUE((near.array() > 0).all());
  EXPECT_TRUE((far.array() > 0).all());
}

TEST(MeanValueModulus, Certificates) {
  const TimeGrid<double> grid(1.0, 200);
  const auto c = GridFunction<double>::sample(grid, [](double) { return 2.0; });
  EXPECT_LE(mean_value_modulus(c, caputo_l1(c, 0.5), 0.5), 0.0);
  const auto line = GridFunction<double>::sample(grid, [](double t) { return t; });
  EXPECT_LE(mean_value_modulus(line, caputo_l1(line, 0.5), 0.5), 1e-8);
  const TimeGrid<double> grid2(std::numbers::pi, 300);
  const auto wave = GridFunction<double>::sample(grid2, [](double t) { return std::sin(t); });
  EXPECT_LE(mean_value_modulus(wave, caputo_l1(wave, 0.7), 0.7), 1e-8);
}

TEST(MeanValueModulus, DetectsTooSmallDerivative) {
  const TimeGrid<double> grid(1.0, 100);
  const auto line = GridFunction<double>::sample(grid, [](double t) { return t; });
  const auto tiny = line.with_values(1e-3 * caputo_l1(line, 0.5).values());
  EXPECT_GT(mean_value_modulus(line, tiny, 0.5), 0.0);
  const TimeGrid<double> other(1.0, 50);
  EXPECT_THROW(mean_value_modulus(line, GridFunction<double>::zeros(other), 0.5), SizeMismatch);
}
