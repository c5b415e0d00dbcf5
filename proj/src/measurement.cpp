#include "tfsrc/measurement.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "tfsrc/errors.hpp"

namespace tfsrc {

AdmissibilityReport admissibility(const Eigen::VectorXd& magnitudes, const EigenSystem& sys,
                                  double gamma) {
  if (!(gamma >= 0)) throw DomainError("admissibility exponent gamma must be nonnegative");
  if (magnitudes.size() != sys.size()) {
    throw SizeMismatch("measurement has " + std::to_string(magnitudes.size()) +
                       " coefficients, eigensystem has " + std::to_string(sys.size()));
  }
  const Eigen::ArrayXd terms =
      (magnitudes.array() / sys.eigenvalues().array().pow(gamma)).square();
  const double total = terms.sum();
  if (!(total > 0)) throw AssumptionViolation("measurement functional vanishes on every mode");
  if (!std::isfinite(total)) throw InadmissibleError("tail test failed: C_F is not finite");

  const Eigen::Index n = terms.size();
  const Eigen::Index quarter = n / 4;
  if (quarter >= 2) {
    const Eigen::Index half = quarter / 2;
    const double tail = terms.tail(quarter).sum();
    const double earlier = terms.segment(n - quarter, half).sum();
    const double later = terms.tail(quarter - half).sum() * static_cast<double>(half) /
                         static_cast<double>(quarter - half);
    if (tail > 0.1 * total && later >= earlier) {
      throw InadmissibleError("tail test failed for gamma = " + std::to_string(gamma) +
                              ": last quarter of the modes carries " +
                              std::to_string(100 * tail / total) + "% of C_F^2 without decaying");
    }
  }
  return {std::sqrt(total), terms[n - 1] / total};
}

Measurement::Measurement(std::string label, Eigen::VectorXd magnitudes, Eigen::VectorXd signs,
                         double gamma, const EigenSystem& sys)
    : label_(std::move(label)), magnitudes_(std::move(magnitudes)), signs_(std::move(signs)),
      gamma_(gamma) {
  if (signs_.size() != magnitudes_.size()) throw SizeMismatch("measurement signs and coefficients differ in length");
  if (!(magnitudes_.array() >= 0).all()) throw DomainError("measurement magnitudes must be nonnegative");
  if (!(signs_.array().abs() == 1).all()) throw DomainError("measurement signs must be +1 or -1");
  report_ = tfsrc::admissibility(magnitudes_, sys, gamma_);
}

namespace {

Measurement from_signed(std::string label, const Eigen::VectorXd& values, double gamma,
                        const EigenSystem& sys) {
  Eigen::VectorXd signs = values.unaryExpr([](double v) { return v < 0 ? -1.0 : 1.0; });
  return Measurement(std::move(label), values.cwiseAbs(), std::move(signs), gamma, sys);
}

}  // namespace

Measurement total_energy_functional(const EigenSystem& sys, std::optional<double> gamma) {
  const Eigen::VectorXd values = project([](double) { return 1.0; }, sys);
  return from_signed("total_energy", values, gamma.value_or(0.0), sys);
}

Measurement point_functional(const EigenSystem& sys, double x_star, std::optional<double> gamma) {
  if (!(x_star > sys.x_lo() && x_star < sys.x_hi())) {
    throw DomainError("point functional requires x_star strictly inside (" +
                      std::to_string(sys.x_lo()) + ", " + std::to_string(sys.x_hi()) + ")");
  }
  return from_signed("point", sys.evaluate(x_star), gamma.value_or(0.5), sys);
}

Measurement boundary_flux_functional(const EigenSystem& sys, std::optional<double> gamma) {
  if (sys.family() != EigenFamily::DirichletLaplacian) {
    throw UnsupportedError("boundary flux is only implemented for the Dirichlet Laplacian");
  }
  Eigen::VectorXd values(sys.size());
  for (Eigen::Index i = 0; i < sys.size(); ++i) {
    const double k = static_cast<double>(i + 1);
    // d/dx sqrt(2) sin(k pi x) at x = 1
    values[i] = std::numbers::sqrt2 * k * std::numbers::pi * ((i + 1) % 2 == 0 ? 1.0 : -1.0);
  }
  return from_signed("boundary_flux", values, gamma.value_or(1.0), sys);
}

AdmissibilityReport admissibility(const Measurement& m, const EigenSystem& sys, double gamma) {
  return admissibility(m.coefficients(), sys, gamma);
}

double apply(const Measurement& m, const ModalVector& v) {
  if (v.size() != m.size()) {
    throw SizeMismatch("apply: modal vector has " + std::to_string(v.size()) +
                       " entries, measurement has " + std::to_string(m.size()));
  }
  return (m.signs().array() * m.coefficients().array() * v.array()).sum();
}

}  // namespace tfsrc
