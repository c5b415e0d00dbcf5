#pragma once

// Truncated eigensystems of the spatial operator, modal projection and
// synthesis, and the H^rho norms measured in the eigenbasis.

#include <functional>
#include <string>

#include <Eigen/Dense>

namespace tfsrc {

/// Coefficients (v, omega_xi) of an element of H in the eigenbasis.
using ModalVector = Eigen::VectorXd;

enum class EigenFamily { DirichletLaplacian, Involution, HarmonicOscillator, Custom };

class EigenSystem {
 public:
  /// Writes omega_1(x), ..., omega_N(x) into `out` (already sized N).
  using Evaluator = std::function<void(double x, Eigen::VectorXd& out)>;

  EigenSystem(std::string label, EigenFamily family, Eigen::VectorXd eigenvalues,
              Evaluator evaluator, double x_lo, double x_hi);

  const std::string& label() const { return label_; }
  EigenFamily family() const { return family_; }
  Eigen::Index size() const { return eigenvalues_.size(); }
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  double eigenvalue(Eigen::Index i) const { return eigenvalues_[i]; }
  double inf_eigenvalue() const { return eigenvalues_.minCoeff(); }
  double x_lo() const { return x_lo_; }
  double x_hi() const { return x_hi_; }

  Eigen::VectorXd evaluate(double x) const;
  void evaluate_into(double x, Eigen::VectorXd& out) const { evaluator_(x, out); }
  double eigenfunction(Eigen::Index i, double x) const { return evaluate(x)[i]; }

 private:
  std::string label_;
  EigenFamily family_;
  Eigen::VectorXd eigenvalues_;
  Evaluator evaluator_;
  double x_lo_;
  double x_hi_;
};

/// -u'' on (0, 1) with Dirichlet conditions: lambda_k = (k pi)^2,
/// omega_k = sqrt(2) sin(k pi x), k = 1..n_modes.
EigenSystem dirichlet_laplacian(Eigen::Index n_modes);

/// -u''(x) + eps u''(pi - x) on (0, pi) with Dirichlet conditions. Entry n
/// (1-based) carries sqrt(2/pi) sin(n x) with eigenvalue (1 + eps) n^2 for even
/// n and (1 - eps) n^2 for odd n.
EigenSystem involution_operator(Eigen::Index n_modes, double eps);

/// -u'' + x^2 u on the line: lambda_k = 2k + 1 with normalized Hermite
/// functions, k = 0..n_modes-1. Quadrature runs over [-L, L], L = sqrt(2 n) + 6.
EigenSystem harmonic_oscillator_1d(Eigen::Index n_modes);

inline constexpr double kProjectionTolerance = 1e-9;

/// (f, omega_xi) for every xi by composite Gauss-Legendre with panel doubling.
ModalVector project(const std::function<double(double)>& f, const EigenSystem& sys,
                    double tol = kProjectionTolerance);

/// Projection of the piecewise-linear interpolant of samples (xs, values).
/// The samples must be strictly increasing and span the domain of `sys`.
ModalVector project_samples(const Eigen::VectorXd& xs, const Eigen::VectorXd& values,
                            const EigenSystem& sys);

/// sum_xi v_xi omega_xi(x) at each point.
Eigen::VectorXd synthesize(const ModalVector& v, const EigenSystem& sys,
                           const Eigen::VectorXd& points);

/// (sum_xi |(1 + lambda_xi)^rho v_xi|^2)^{1/2}.
double sobolev_norm(const ModalVector& v, const EigenSystem& sys, double rho);

/// Gram matrix of the eigenfunctions under the projection quadrature.
Eigen::MatrixXd gram_matrix(const EigenSystem& sys, double tol = kProjectionTolerance);

}  // namespace tfsrc
