#pragma once

// Bounded linear functionals F stored through their eigenfunction
// coefficients F[omega_xi], with the gamma-admissibility constant C_F.

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "tfsrc/spectral.hpp"

namespace tfsrc {

struct AdmissibilityReport {
  double c_f = 0;
  /// |F[omega_N] / lambda_N^gamma|^2 / C_F^2, a truncation health indicator.
  double tail_ratio = 0;
};

/// Computes C_F = (sum |F[omega_xi] / lambda_xi^gamma|^2)^{1/2} over the
/// truncation. Throws InadmissibleError when the last quarter of the terms
/// carries more than 10% of the sum and is not decreasing (a finite
/// truncation cannot prove divergence, so this is a heuristic tail test).
AdmissibilityReport admissibility(const Eigen::VectorXd& magnitudes, const EigenSystem& sys,
                                  double gamma);

class Measurement {
 public:
  /// `magnitudes` are |F[omega_xi]|; `signs` (+1/-1) restore F[omega_xi] =
  /// sign * magnitude, i.e. the eigenfunctions flipped to make F[omega_xi]
  /// nonnegative.
  Measurement(std::string label, Eigen::VectorXd magnitudes, Eigen::VectorXd signs, double gamma,
              const EigenSystem& sys);

  const std::string& label() const { return label_; }
  Eigen::Index size() const { return magnitudes_.size(); }
  const Eigen::VectorXd& coefficients() const { return magnitudes_; }
  const Eigen::VectorXd& signs() const { return signs_; }
  /// F[omega_xi] with respect to the unflipped eigenfunctions.
  Eigen::VectorXd signed_coefficients() const { return signs_.cwiseProduct(magnitudes_); }
  double gamma() const { return gamma_; }
  double c_f() const { return report_.c_f; }
  double tail_ratio() const { return report_.tail_ratio; }

 private:
  std::string label_;
  Eigen::VectorXd magnitudes_;
  Eigen::VectorXd signs_;
  double gamma_;
  AdmissibilityReport report_;
};

/// F[v] = int v dx over the domain. Default gamma 0.
Measurement total_energy_functional(const EigenSystem& sys, std::optional<double> gamma = {});

/// F[v] = v(x_star). Default gamma 1/2.
Measurement point_functional(const EigenSystem& sys, double x_star,
                             std::optional<double> gamma = {});

/// F[v] = v_x(1), Dirichlet Laplacian only. Default gamma 1.
Measurement boundary_flux_functional(const EigenSystem& sys, std::optional<double> gamma = {});

AdmissibilityReport admissibility(const Measurement& m, const EigenSystem& sys, double gamma);

/// sum_xi v_xi F[omega_xi], with v given in the unflipped eigenbasis.
double apply(const Measurement& m, const ModalVector& v);

}  // namespace tfsrc
