#pragma once

// Shared fixtures for the forward and inverse tests.

#include <cmath>

#include "tfsrc/forward.hpp"

namespace fixtures {

// Dirichlet Laplacian, total energy, g = x(1-x), a = 2 + sin t.
inline tfsrc::Scenario base_scenario(Eigen::Index n_modes = 32, Eigen::Index n_steps = 1000,
                                     double alpha = 0.5, double h_scale = 0.0) {
  using namespace tfsrc;
  const TimeGrid<double> grid(1.0, n_steps);
  EigenSystem sys = dirichlet_laplacian(n_modes);
  Measurement meas = total_energy_functional(sys);
  const auto a = GridFunction<double>::sample(grid, [](double t) { return 2 + std::sin(t); });
  ModalVector g = project([](double x) { return x * (1 - x); }, sys);
  ModalVector h = ModalVector::Zero(n_modes);
  h[0] = h_scale;
  return Scenario(alpha, std::move(sys), std::move(meas), a, std::move(g), std::move(h));
}

inline tfsrc::GridFunction<double> linear_source(const tfsrc::TimeGrid<double>& grid) {
  return tfsrc::GridFunction<double>::sample(grid, [](double t) { return 1 + t / 2; });
}

// The scenario with E generated from r*.
inline tfsrc::Scenario with_forward_data(const tfsrc::Scenario& sc,
                                         const tfsrc::GridFunction<double>& r_true) {
  return sc.with_e_data(tfsrc::solve_forward(sc, r_true).measurement);
}

}  // namespace fixtures
