#pragma once

// Forward problem D_t^a u + a(t) L u = r(t) g, u(0) = h, solved mode by mode
// with the implicit L1 scheme.

#include <algorithm>
#include <concepts>
#include <limits>
#include <optional>

#include <Eigen/Dense>

#include "tfsrc/errors.hpp"
#include "tfsrc/fracalc.hpp"
#include "tfsrc/measurement.hpp"
#include "tfsrc/spectral.hpp"

namespace tfsrc {

/// One implicit L1 solve of D^a u + lambda a(t) u = r(t) g_xi, u(0) = h_xi:
///   (c0 + lambda a_n) u_n = r_n g_xi + c0 u_{n-1}
///                           - c0 sum_{k=0}^{n-2} b_{n-1-k} (u_{k+1} - u_k).
template <std::floating_point Scalar>
VectorX<Scalar> integrate_mode(Scalar alpha, Scalar lambda, const GridFunction<Scalar>& a,
                               const GridFunction<Scalar>& r, Scalar g_xi, Scalar h_xi) {
  detail::require_fractional_order(alpha);
  if (!(lambda > 0)) throw DomainError("mode eigenvalue must be positive");
  if (!(a.grid() == r.grid())) throw SizeMismatch("a(t) and r(t) live on different grids");
  const TimeGrid<Scalar>& grid = a.grid();
  const Eigen::Index n = grid.n_steps();
  const VectorX<Scalar> b = l1_weights<Scalar>(n, alpha);
  const Scalar c0 = l1_leading_coefficient(grid.dt(), alpha);
  VectorX<Scalar> u(n + 1);
  VectorX<Scalar> increments(n);
  u[0] = h_xi;
  for (Eigen::Index j = 1; j <= n; ++j) {
    // b_{j-1-k} for k = 0..j-2 is b_{j-1}, ..., b_1
    const Scalar history =
        j > 1 ? increments.head(j - 1).dot(b.segment(1, j - 1).reverse()) : Scalar(0);
    u[j] = (r[j] * g_xi + c0 * u[j - 1] - c0 * history) / (c0 + lambda * a[j]);
    increments[j - 1] = u[j] - u[j - 1];
  }
  return u;
}

template <std::floating_point Scalar>
struct ModeTrajectory {
  VectorX<Scalar> total;
  VectorX<Scalar> homogeneous;  // h_xi with r = 0
  VectorX<Scalar> source;       // zero initial value with r
};

/// Mode solve returning the superposition split. Throws AccuracyError if the
/// parts fail to add up to the combined solve.
template <std::floating_point Scalar>
ModeTrajectory<Scalar> solve_mode(Scalar alpha, Scalar lambda, const GridFunction<Scalar>& a,
                                  const GridFunction<Scalar>& r, Scalar g_xi, Scalar h_xi) {
  ModeTrajectory<Scalar> out;
  out.total = integrate_mode(alpha, lambda, a, r, g_xi, h_xi);
  out.homogeneous =
      integrate_mode(alpha, lambda, a, GridFunction<Scalar>::zeros(r.grid()), g_xi, h_xi);
  out.source = integrate_mode(alpha, lambda, a, r, g_xi, Scalar(0));
  const Scalar scale = std::max({out.homogeneous.cwiseAbs().maxCoeff(),
                                 out.source.cwiseAbs().maxCoeff(), Scalar(1e-300)});
  const Scalar gap = (out.homogeneous + out.source - out.total).cwiseAbs().maxCoeff();
  if (gap > 1e3 * std::numeric_limits<Scalar>::epsilon() * scale) {
    throw AccuracyError("mode superposition check failed");
  }
  return out;
}

/// Full datum of the inverse problem sampled on a time grid.
class Scenario {
 public:
  /// Checked assembly enforces the standing assumptions (a > 0, F[g] != 0,
  /// E != 0 without sign change). Unchecked keeps only the structural checks
  /// and exists for degenerate test configurations.
  enum class Policy { Checked, Unchecked };

  Scenario(double alpha, EigenSystem sys, Measurement meas, GridFunction<double> a,
           ModalVector g, ModalVector h, std::optional<GridFunction<double>> e_data = {},
           Policy policy = Policy::Checked);

  double alpha() const { return alpha_; }
  const TimeGrid<double>& grid() const { return a_.grid(); }
  const EigenSystem& sys() const { return sys_; }
  const Measurement& meas() const { return meas_; }
  const GridFunction<double>& a() const { return a_; }
  const ModalVector& g() const { return g_; }
  const ModalVector& h() const { return h_; }
  bool has_e_data() const { return e_data_.has_value(); }
  const GridFunction<double>& e_data() const;
  /// L1 Caputo derivative of e_data, computed once at assembly.
  const GridFunction<double>& dalpha_e() const;
  double q_a() const { return q_a_; }
  double cap_q_a() const { return cap_q_a_; }
  /// F[g].
  double f_g() const { return f_g_; }
  Policy policy() const { return policy_; }

  Scenario with_e_data(GridFunction<double> e) const;
  Scenario with_a(GridFunction<double> a) const;
  Scenario with_g(ModalVector g) const;
  Scenario with_h(ModalVector h) const;

 private:
  double alpha_;
  EigenSystem sys_;
  Measurement meas_;
  GridFunction<double> a_;
  ModalVector g_;
  ModalVector h_;
  std::optional<GridFunction<double>> e_data_;
  std::optional<GridFunction<double>> dalpha_e_;
  double q_a_ = 0;
  double cap_q_a_ = 0;
  double f_g_ = 0;
  Policy policy_;
};

struct ForwardSolution {
  /// u(t_j) in row j, one column per mode.
  Eigen::MatrixXd u;
  /// Filled only for split solves.
  Eigen::MatrixXd u_homogeneous;
  Eigen::MatrixXd u_source;
  /// F[u(t_j)] and its L1 Caputo derivative.
  GridFunction<double> measurement;
  GridFunction<double> measurement_caputo;
};

/// Solves every mode. With `split` the homogeneous and source parts are
/// returned as well (three solves per mode instead of one).
ForwardSolution solve_forward(const Scenario& sc, const GridFunction<double>& r,
                              bool split = false);

/// ((1/inf lambda) + 1)^{2+gamma} (||h||_{H^{2+gamma}} + c2 ||g||_{H^{1+gamma}} / q_a).
long double regularity_bound(const Scenario& sc, long double c2);

}  // namespace tfsrc
