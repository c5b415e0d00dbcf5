#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "tfsrc/errors.hpp"
#include "tfsrc/spectral.hpp"

using namespace tfsrc;
using std::numbers::pi;

TEST(Dirichlet, Eigenvalues) {
  const auto sys = dirichlet_laplacian(16);
  EXPECT_EQ(sys.size(), 16);
  EXPECT_NEAR(sys.eigenvalue(0), pi * pi, 1e-12);
  EXPECT_NEAR(sys.eigenvalue(15), 256 * pi * pi, 1e-9);
  EXPECT_NEAR(sys.inf_eigenvalue(), pi * pi, 1e-12);
  EXPECT_EQ(sys.family(), EigenFamily::DirichletLaplacian);
  EXPECT_NEAR(sys.eigenfunction(2, 0.25), std::sqrt(2.0) * std::sin(3 * pi / 4), 1e-14);
}

TEST(Dirichlet, GramIsIdentity) {
  const auto sys = dirichlet_laplacian(10);
  const Eigen::MatrixXd gram = gram_matrix(sys);
  EXPECT_LE((gram - Eigen::MatrixXd::Identity(10, 10)).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Dirichlet, ProjectionOfParabola) {
  const auto sys = dirichlet_laplacian(20);
  const auto c = project([](double x) { return x * (1 - x); }, sys);
  for (Eigen::Index i = 0; i < 20; ++i) {
    const double k = static_cast<double>(i + 1);
    const double exact = (i % 2 == 0) ? 4 * std::sqrt(2.0) / (k * k * k * pi * pi * pi) : 0.0;
    EXPECT_NEAR(c[i], exact, 1e-11) << k;
  }
}

TEST(Dirichlet, RoundTripOfModeCombination) {
  const auto sys = dirichlet_laplacian(12);
  ModalVector v = ModalVector::Zero(12);
  v[0] = 1.0;
  v[3] = -0.25;
  v[7] = 0.125;
  const auto back = project([&](double x) { return synthesize(v, sys, Eigen::VectorXd::Constant(1, x))[0]; }, sys);
  EXPECT_LE((back - v).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Dirichlet, SampledProjection) {
  const auto sys = dirichlet_laplacian(8);
  const Eigen::VectorXd xs = Eigen::VectorXd::LinSpaced(4001, 0.0, 1.0);
  const Eigen::VectorXd vals = xs.array() * (1 - xs.array());
  const auto c = project_samples(xs, vals, sys);
  const auto exact = project([](double x) { return x * (1 - x); }, sys);
  EXPECT_LE((c - exact).cwiseAbs().maxCoeff(), 1e-7);
  EXPECT_THROW(project_samples(xs.head(100), vals.head(100), sys), DomainError);
}

TEST(Involution, EigenvaluesByParity) {
  const auto sys = involution_operator(6, 0.5);
  EXPECT_NEAR(sys.eigenvalue(0), 0.5, 1e-14);   // n = 1
  EXPECT_NEAR(sys.eigenvalue(1), 6.0, 1e-14);   // n = 2
  EXPECT_NEAR(sys.eigenvalue(2), 4.5, 1e-14);   // n = 3
  EXPECT_NEAR(sys.eigenvalue(3), 24.0, 1e-14);  // n = 4
  EXPECT_NEAR(sys.x_lo(), 0.0, 0.0);
  EXPECT_NEAR(sys.x_hi(), pi, 1e-15);
  const Eigen::MatrixXd gram = gram_matrix(sys);
  EXPECT_LE((gram - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Involution, EigenpairsSatisfyOperator) {
  // -u''(x) + eps u''(pi - x) by central differences
  const double eps = 0.3;
  const auto sys = involution_operator(5, eps);
  const double hstep = 1e-4;
  for (Eigen::Index i = 0; i < 5; ++i) {
    for (double x : {0.4, 1.3, 2.2}) {
      auto f = [&](double y) { return sys.eigenfunction(i, y); };
      auto second = [&](double y) { return (f(y + hstep) - 2 * f(y) + f(y - hstep)) / (hstep * hstep); };
      const double lhs = -second(x) + eps * second(pi - x);
      EXPECT_NEAR(lhs, sys.eigenvalue(i) * f(x), 1e-4 * (1 + std::abs(sys.eigenvalue(i)))) << i;
    }
  }
}

TEST(Involution, RejectsBadEps) {
  EXPECT_THROW(involution_operator(4, 1.0), DomainError);
  EXPECT_THROW(involution_operator(4, -1.5), DomainError);
}

TEST(Oscillator, Orthonormal) {
  for (Eigen::Index n : {6, 8}) {
    const auto sys = harmonic_oscillator_1d(n);
    EXPECT_NEAR(sys.eigenvalue(0), 1.0, 0.0);
    EXPECT_NEAR(sys.eigenvalue(n - 1), 2.0 * static_cast<double>(n) - 1, 0.0);
    const Eigen::MatrixXd gram = gram_matrix(sys);
    EXPECT_LE((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-9) << n;
  }
}

TEST(Oscillator, GroundState) {
  const auto sys = harmonic_oscillator_1d(4);
  const double x = 0.7;
  EXPECT_NEAR(sys.eigenfunction(0, x), std::pow(pi, -0.25) * std::exp(-x * x / 2), 1e-14);
  EXPECT_NEAR(sys.eigenfunction(1, x), std::pow(pi, -0.25) * std::sqrt(2.0) * x * std::exp(-x * x / 2),
              1e-14);
}

TEST(Oscillator, ModeCountGuard) {
  EXPECT_NO_THROW(harmonic_oscillator_1d(200));
  EXPECT_THROW(harmonic_oscillator_1d(201), DomainError);
}

TEST(Sobolev, MonotoneInRho) {
  const auto sys = dirichlet_laplacian(10);
  const auto v = project([](double x) { return x * (1 - x); }, sys);
  double previous = 0;
  for (double rho : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    const double norm = sobolev_norm(v, sys, rho);
    EXPECT_GT(norm, previous);
    previous = norm;
  }
  EXPECT_NEAR(sobolev_norm(v, sys, 0.0), v.norm(), 1e-15);
}

TEST(Spectral, Validation) {
  EXPECT_THROW(dirichlet_laplacian(0), DomainError);
  const auto sys = dirichlet_laplacian(4);
  EXPECT_THROW(sobolev_norm(ModalVector::Zero(3), sys, 1.0), SizeMismatch);
}
