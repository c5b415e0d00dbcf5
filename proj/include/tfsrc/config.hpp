#pragma once

// Run configuration: INI-style sections of key = value lines.
//
//   [problem]     alpha, t_final, n_steps
//   [operator]    family (dirichlet_laplacian | involution | harmonic_oscillator),
//                 n_modes, eps
//   [measurement] functional (total_energy | point | boundary_flux), x, gamma
//   [data]        a, r (time profiles), g, h (spatial fields), e_data
//   [solver]      tol, max_iter, relaxation, anderson_depth
//   [output]      dir, modes
//   [perturb]     e_scale, a_sine, g_scale
//
// Time profiles: `const q`, `affine q0 q1` (q0 + q1 t),
// `sin_offset q0 amp period` (q0 + amp sin(2 pi t / period)).
// Spatial fields: `poly_x_1mx [scale]`, `mode k [scale]`, `zero`,
// `samples path` (CSV x,value). e_data: `forward` (generated from r) or
// `file path` (CSV t,E on the grid nodes). Relative paths are resolved
// against the directory of the configuration file.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "tfsrc/forward.hpp"
#include "tfsrc/inverse.hpp"

namespace tfsrc {

struct RunConfig {
  double alpha = 0.5;
  double t_final = 1.0;
  long n_steps = 1000;

  std::string family = "dirichlet_laplacian";
  long n_modes = 32;
  double eps = 0.0;

  std::string functional = "total_energy";
  double x_star = 0.5;
  std::optional<double> gamma;

  std::string a_profile = "const 1";
  std::string r_profile = "const 1";
  std::string g_field = "poly_x_1mx";
  std::string h_field = "zero";
  std::string e_data = "forward";

  RecoveryOptions solver;

  std::filesystem::path output_dir = ".";
  bool write_modes = false;

  double e_scale = 0.0;
  double a_sine = 0.0;
  double g_scale = 0.0;

  std::filesystem::path base_dir = ".";
};

RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = ".");
RunConfig load_config(const std::filesystem::path& path);

TimeGrid<double> make_grid(const RunConfig& cfg);
GridFunction<double> make_profile(const std::string& desc, const TimeGrid<double>& grid);
EigenSystem make_eigensystem(const RunConfig& cfg);
Measurement make_measurement(const RunConfig& cfg, const EigenSystem& sys);
ModalVector make_field(const std::string& desc, const EigenSystem& sys,
                       const std::filesystem::path& base_dir);

/// Scenario without measurement data.
Scenario make_base_scenario(const RunConfig& cfg);

/// Scenario with E(t) attached: generated by a forward solve with the
/// configured r for `e_data = forward`, read from file otherwise.
Scenario make_inverse_scenario(const RunConfig& cfg);

/// The scenario of `make_inverse_scenario` with the [perturb] settings applied.
Scenario make_perturbed_scenario(const RunConfig& cfg, const Scenario& base);

}  // namespace tfsrc
