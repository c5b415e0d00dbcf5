#include "tfsrc/spectral.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "tfsrc/errors.hpp"
#include "tfsrc/quadrature.hpp"

namespace tfsrc {

namespace {

constexpr double kPi = std::numbers::pi;

void require_modes(Eigen::Index n_modes) {
  if (n_modes < 1) throw DomainError("an eigensystem needs at least one mode");
}

void require_match(const ModalVector& v, const EigenSystem& sys, const char* where) {
  if (v.size() != sys.size()) {
    throw SizeMismatch(std::string(where) + ": modal vector has " + std::to_string(v.size()) +
                       " entries, eigensystem has " + std::to_string(sys.size()));
  }
}

}  // namespace

EigenSystem::EigenSystem(std::string label, EigenFamily family, Eigen::VectorXd eigenvalues,
                         Evaluator evaluator, double x_lo, double x_hi)
    : label_(std::move(label)),
      family_(family),
      eigenvalues_(std::move(eigenvalues)),
      evaluator_(std::move(evaluator)),
      x_lo_(x_lo),
      x_hi_(x_hi) {
  if (eigenvalues_.size() < 1) throw DomainError("an eigensystem needs at least one mode");
  if (!(eigenvalues_.array() > 0).all()) throw DomainError("eigenvalues must be positive");
  if (!(x_lo < x_hi)) throw DomainError("eigensystem domain is empty");
}

Eigen::VectorXd EigenSystem::evaluate(double x) const {
  Eigen::VectorXd out(size());
  evaluator_(x, out);
  return out;
}

EigenSystem dirichlet_laplacian(Eigen::Index n_modes) {
  require_modes(n_modes);
  Eigen::VectorXd lambda(n_modes);
  for (Eigen::Index i = 0; i < n_modes; ++i) {
    const double k = static_cast<double>(i + 1);
    lambda[i] = (k * kPi) * (k * kPi);
  }
  auto eval = [](double x, Eigen::VectorXd& out) {
    for (Eigen::Index i = 0; i < out.size(); ++i) {
      out[i] = std::numbers::sqrt2 * std::sin(static_cast<double>(i + 1) * kPi * x);
    }
  };
  return EigenSystem("dirichlet_laplacian", EigenFamily::DirichletLaplacian, std::move(lambda),
                     eval, 0.0, 1.0);
}

EigenSystem involution_operator(Eigen::Index n_modes, double eps) {
  require_modes(n_modes);
  if (!(std::abs(eps) < 1)) throw DomainError("involution parameter must satisfy |eps| < 1");
  Eigen::VectorXd lambda(n_modes);
  for (Eigen::Index i = 0; i < n_modes; ++i) {
    const double n = static_cast<double>(i + 1);
    lambda[i] = ((i + 1) % 2 == 0 ? 1 + eps : 1 - eps) * n * n;
  }
  auto eval = [](double x, Eigen::VectorXd& out) {
    const double scale = std::sqrt(2 / kPi);
    for (Eigen::Index i = 0; i < out.size(); ++i) {
      out[i] = scale * std::sin(static_cast<double>(i + 1) * x);
    }
  };
  return EigenSystem("involution", EigenFamily::Involution, std::move(lambda), eval, 0.0, kPi);
}

EigenSystem harmonic_oscillator_1d(Eigen::Index n_modes) {
  require_modes(n_modes);
  if (n_modes > 200) {
    throw DomainError("harmonic oscillator limited to 200 modes (recurrence guard)");
  }
  Eigen::VectorXd lambda(n_modes);
  for (Eigen::Index k = 0; k < n_modes; ++k) lambda[k] = 2.0 * static_cast<double>(k) + 1.0;
  auto eval = [](double x, Eigen::VectorXd& out) {
    const Eigen::Index n = out.size();
    out[0] = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
    if (n > 1) out[1] = std::numbers::sqrt2 * x * out[0];
    for (Eigen::Index k = 1; k + 1 < n; ++k) {
      const double kd = static_cast<double>(k);
      out[k + 1] = std::sqrt(2 / (kd + 1)) * x * out[k] - std::sqrt(kd / (kd + 1)) * out[k - 1];
    }
  };
  const double half_width = std::sqrt(2.0 * static_cast<double>(n_modes)) + 6.0;
  return EigenSystem("harmonic_oscillator", EigenFamily::HarmonicOscillator, std::move(lambda),
                     eval, -half_width, half_width);
}

ModalVector project(const std::function<double(double)>& f, const EigenSystem& sys, double tol) {
  auto integrand = [&](double x, Eigen::VectorXd& out) {
    sys.evaluate_into(x, out);
    out *= f(x);
  };
  return quadrature::integrate_doubling(integrand, sys.x_lo(), sys.x_hi(), sys.size(), tol);
}

ModalVector project_samples(const Eigen::VectorXd& xs, const Eigen::VectorXd& values,
                            const EigenSystem& sys) {
  if (xs.size() != values.size()) throw SizeMismatch("sample abscissae and values differ in length");
  if (xs.size() < 2) throw DomainError("at least two samples are needed");
  for (Eigen::Index i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) throw DomainError("sample abscissae must be strictly increasing");
  }
  const double span = sys.x_hi() - sys.x_lo();
  if (xs[0] > sys.x_lo() + 1e-12 * span || xs[xs.size() - 1] < sys.x_hi() - 1e-12 * span) {
    throw DomainError("samples do not span the eigensystem domain");
  }
  static const quadrature::GaussLegendre<double> rule(16);
  ModalVector sum = ModalVector::Zero(sys.size());
  Eigen::VectorXd phi(sys.size());
  for (Eigen::Index i = 0; i + 1 < xs.size(); ++i) {
    const double lo = std::max(xs[i], sys.x_lo());
    const double hi = std::min(xs[i + 1], sys.x_hi());
    if (hi <= lo) continue;
    const double slope = (values[i + 1] - values[i]) / (xs[i + 1] - xs[i]);
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      const double x = mid + half * rule.nodes[j];
      sys.evaluate_into(x, phi);
      sum.noalias() += (half * rule.weights[j] * (values[i] + slope * (x - xs[i]))) * phi;
    }
  }
  return sum;
}

Eigen::VectorXd synthesize(const ModalVector& v, const EigenSystem& sys,
                           const Eigen::VectorXd& points) {
  require_match(v, sys, "synthesize");
  Eigen::VectorXd out(points.size());
  Eigen::VectorXd phi(sys.size());
  for (Eigen::Index i = 0; i < points.size(); ++i) {
    sys.evaluate_into(points[i], phi);
    out[i] = phi.dot(v);
  }
  return out;
}

double sobolev_norm(const ModalVector& v, const EigenSystem& sys, double rho) {
  require_match(v, sys, "sobolev_norm");
  return ((1.0 + sys.eigenvalues().array()).pow(rho) * v.array()).matrix().norm();
}

Eigen::MatrixXd gram_matrix(const EigenSystem& sys, double tol) {
  const Eigen::Index n = sys.size();
  Eigen::VectorXd phi(n);
  auto integrand = [&](double x, Eigen::VectorXd& out) {
    sys.evaluate_into(x, phi);
    Eigen::Map<Eigen::MatrixXd>(out.data(), n, n).noalias() = phi * phi.transpose();
  };
  const Eigen::VectorXd flat =
      quadrature::integrate_doubling(integrand, sys.x_lo(), sys.x_hi(), n * n, tol);
  return Eigen::Map<const Eigen::MatrixXd>(flat.data(), n, n);
}

}  // namespace tfsrc
