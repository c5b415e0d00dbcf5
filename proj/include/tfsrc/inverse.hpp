#pragma once

// Recovery of the source factor r(t) as a fixed point of
//   K[r] = (D^a E + a(t) sum_xi lambda_xi u_xi(t; r) F[omega_xi]) / F[g],
// together with the explicit constants that certify the result.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tfsrc/forward.hpp"

namespace tfsrc {

/// A constant that may exceed the range of double; `log10` is always finite.
struct BigConstant {
  long double value = 0;
  double log10 = 0;
};

/// Radius C_2 of the ball mapped into itself by K.
BigConstant ball_radius(const Scenario& sc);

/// C_1, the bound on U = r - D^a E / F[g]: C_2 without its last term.
BigConstant gronwall_constant(const Scenario& sc);

struct StabilityConstants {
  double c4 = 0;
  BigConstant c5;
};

/// C_4 and C_5 of the two-sided estimate, valid for h = 0 only.
StabilityConstants stability_constants(const Scenario& sc);

/// K[r] at every node. The node-0 value is extrapolated linearly from nodes 1
/// and 2 because the L1 derivative is 0 there by convention.
GridFunction<double> apply_k(const Scenario& sc, const GridFunction<double>& r);

struct SandwichRecord {
  double r_norm = 0;
  double dalpha_e_norm = 0;
  long double lower = 0;  // C_4 ||D^a E||
  long double upper = 0;  // C_5 ||D^a E||
  double cushion = 0;
  bool lower_pass = false;
  bool upper_pass = false;
  /// Positive margins mean the inequality holds.
  long double lower_margin = 0;
  long double upper_margin = 0;
};

/// Evaluates C_4 ||D^a E|| <= ||r|| <= C_5 ||D^a E|| with cushion
/// 10 dt^a ||r||.
SandwichRecord evaluate_sandwich(double r_norm, double dalpha_e_norm, long double c4,
                                 long double c5, double dt, double alpha);

struct RecoveryOptions {
  double tol = 1e-6;
  int max_iter = 200;
  /// theta in (1 - theta) r + theta K[r].
  double relaxation = 0.5;
  /// Anderson mixing depth; 0 gives plain relaxed iteration.
  int anderson_depth = 30;
  /// Starting iterate; D^a E / F[g] when empty.
  std::optional<GridFunction<double>> initial_guess;
};

struct InverseResult {
  InverseResult(GridFunction<double> r_in, ForwardSolution u_in)
      : r(std::move(r_in)), u(std::move(u_in)) {}

  GridFunction<double> r;
  ForwardSolution u;
  int iterations = 0;
  /// sup-norm of r_{k+1} - r_k.
  std::vector<double> residual_history;
  /// sup-norm of K[r] - r at the returned r.
  double fixed_point_residual = 0;
  bool converged = false;
  std::string diagnostics;
  BigConstant c2;
  bool has_stability_constants = false;
  StabilityConstants stability;
  SandwichRecord sandwich;
  /// Largest ||K[r_k]||_inf seen along the iteration.
  double max_k_norm = 0;
};

/// Anderson-accelerated relaxed fixed-point iteration on K. Leaving the ball
/// of radius 2 C_2 or exhausting max_iter ends with converged = false.
InverseResult recover_source(const Scenario& sc, const RecoveryOptions& options = {});

/// Sandwich record of a converged recovery (h = 0 only).
SandwichRecord stability_check(const InverseResult& res, const Scenario& sc);

struct PerturbationReport {
  PerturbationReport(InverseResult base_in, InverseResult perturbed_in)
      : base(std::move(base_in)), perturbed(std::move(perturbed_in)) {}

  double delta_a = 0;
  double delta_g = 0;
  double delta_h = 0;
  double delta_e = 0;  // sup |dE| + sup |D^a dE|
  double delta = 0;
  double r_distance = 0;
  double u_distance = 0;  // max_n ||u~(t_n) - u(t_n)||_H
  double r_ratio = 0;
  double u_ratio = 0;
  bool converged = false;
  InverseResult base;
  InverseResult perturbed;
};

PerturbationReport continuity_experiment(const Scenario& sc, const Scenario& perturbed,
                                         const RecoveryOptions& options = {});

}  // namespace tfsrc
