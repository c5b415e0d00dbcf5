#include "tfsrc/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tfsrc/errors.hpp"
#include "tfsrc/mlf.hpp"

namespace tfsrc {

namespace {

namespace fs = std::filesystem;

std::ofstream open_output(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream out(dir / name);
  if (!out) throw ConfigError("cannot write " + (dir / name).string());
  out << std::setprecision(17);
  return out;
}

// key: value writer for text reports.
class Report {
 public:
  explicit Report(std::ostream& out) : out_(out) { out_ << std::setprecision(17); }
  template <typename T>
  Report& put(const std::string& key, const T& value) {
    out_ << key << ": " << value << '\n';
    return *this;
  }
  Report& flag(const std::string& key, bool value) { return put(key, value ? "true" : "false"); }

 private:
  std::ostream& out_;
};

void write_scenario_summary(Report& rep, const Scenario& sc) {
  rep.put("operator", sc.sys().label())
      .put("n_modes", sc.sys().size())
      .put("functional", sc.meas().label())
      .put("gamma", sc.meas().gamma())
      .put("c_f", sc.meas().c_f())
      .put("tail_ratio", sc.meas().tail_ratio())
      .put("alpha", sc.alpha())
      .put("t_final", sc.grid().t_final())
      .put("n_steps", sc.grid().n_steps())
      .put("q_a", sc.q_a())
      .put("cap_q_a", sc.cap_q_a())
      .put("f_g", sc.f_g());
}

double max_sobolev_norm(const ForwardSolution& sol, const Scenario& sc, double rho) {
  double worst = 0;
  for (Eigen::Index j = 0; j < sol.u.rows(); ++j) {
    worst = std::max(worst, sobolev_norm(sol.u.row(j).transpose(), sc.sys(), rho));
  }
  return worst;
}

}  // namespace

int run_forward(const RunConfig& cfg, std::ostream& log) {
  const Scenario sc = make_base_scenario(cfg);
  const GridFunction<double> r = make_profile(cfg.r_profile, sc.grid());
  const ForwardSolution sol = solve_forward(sc, r);

  std::ofstream csv = open_output(cfg.output_dir, "forward.csv");
  csv << "t,E,dalphaE";
  if (cfg.write_modes) {
    for (Eigen::Index xi = 0; xi < sc.sys().size(); ++xi) csv << ",u_" << xi + 1;
  }
  csv << '\n';
  for (Eigen::Index j = 0; j < sc.grid().size(); ++j) {
    csv << sc.grid().node(j) << ',' << sol.measurement[j] << ',' << sol.measurement_caputo[j];
    if (cfg.write_modes) {
      for (Eigen::Index xi = 0; xi < sc.sys().size(); ++xi) csv << ',' << sol.u(j, xi);
    }
    csv << '\n';
  }

  std::ofstream meta = open_output(cfg.output_dir, "meta.txt");
  Report rep(meta);
  write_scenario_summary(rep, sc);
  rep.put("r_sup", r.sup_norm());
  log << "forward: wrote " << (cfg.output_dir / "forward.csv").string() << '\n';
  return kExitOk;
}

int run_invert(const RunConfig& cfg, std::ostream& log) {
  const Scenario sc = make_inverse_scenario(cfg);
  const InverseResult res = recover_source(sc, cfg.solver);
  const bool manufactured = cfg.e_data == "forward";
  std::optional<GridFunction<double>> r_true;
  if (manufactured) r_true = make_profile(cfg.r_profile, sc.grid());

  std::ofstream csv = open_output(cfg.output_dir, "recovered_r.csv");
  csv << "t,r" << (manufactured ? ",r_true" : "") << '\n';
  for (Eigen::Index j = 0; j < sc.grid().size(); ++j) {
    csv << sc.grid().node(j) << ',' << res.r[j];
    if (r_true) csv << ',' << (*r_true)[j];
    csv << '\n';
  }

  std::ofstream residuals = open_output(cfg.output_dir, "residuals.csv");
  residuals << "iteration,step\n";
  for (std::size_t k = 0; k < res.residual_history.size(); ++k) {
    residuals << k + 1 << ',' << res.residual_history[k] << '\n';
  }

  const double dt_alpha = std::pow(sc.grid().dt(), sc.alpha());
  const double r_norm = res.r.sup_norm();
  const BigConstant c1 = gronwall_constant(sc);
  const double u_max = (res.r.values() - sc.dalpha_e().values() / sc.f_g()).cwiseAbs().maxCoeff();
  const long double reg = regularity_bound(sc, res.c2.value);
  const double u_h2 = max_sobolev_norm(res.u, sc, 2 + sc.meas().gamma());

  std::ofstream cert = open_output(cfg.output_dir, "certificate.txt");
  Report rep(cert);
  write_scenario_summary(rep, sc);
  rep.flag("converged", res.converged)
      .put("iterations", res.iterations)
      .put("tol", cfg.solver.tol)
      .put("relaxation", cfg.solver.relaxation)
      .put("anderson_depth", cfg.solver.anderson_depth)
      .put("final_step", res.residual_history.empty() ? 0.0 : res.residual_history.back())
      .put("fixed_point_residual", res.fixed_point_residual)
      .put("diagnostics", res.diagnostics.empty() ? "none" : res.diagnostics)
      .put("r_sup", r_norm)
      .put("dalpha_e_sup", sc.dalpha_e().sup_norm())
      .put("c2", res.c2.value)
      .put("c2_log10", res.c2.log10)
      .flag("ball_pass", r_norm <= res.c2.value * (1 + 10 * dt_alpha))
      .put("max_k_norm", res.max_k_norm)
      .put("c1", c1.value)
      .put("c1_log10", c1.log10)
      .put("gronwall_sup", u_max)
      .flag("gronwall_pass", u_max <= c1.value * (1 + 10 * dt_alpha))
      .put("regularity_bound", reg)
      .put("max_h2_norm", u_h2)
      .flag("regularity_pass", u_h2 <= reg);
  if (res.has_stability_constants) {
    rep.put("c4", res.stability.c4)
        .put("c5", res.stability.c5.value)
        .put("c5_log10", res.stability.c5.log10)
        .put("sandwich_lower", res.sandwich.lower)
        .put("sandwich_upper", res.sandwich.upper)
        .put("sandwich_cushion", res.sandwich.cushion)
        .put("sandwich_lower_margin", res.sandwich.lower_margin)
        .put("sandwich_upper_margin", res.sandwich.upper_margin)
        .flag("sandwich_lower_pass", res.sandwich.lower_pass)
        .flag("sandwich_upper_pass", res.sandwich.upper_pass);
  } else {
    rep.put("stability_constants", "not applicable (h != 0)");
  }
  if (r_true) {
    const double rel = (res.r.values() - r_true->values()).cwiseAbs().maxCoeff() / r_true->sup_norm();
    rep.put("relative_error", rel);
  }
  log << "invert: " << (res.converged ? "converged" : "did not converge") << " after "
      << res.iterations << " iterations\n";
  return res.converged ? kExitOk : kExitNoConvergence;
}

int run_perturb(const RunConfig& cfg, std::ostream& log) {
  const Scenario sc = make_inverse_scenario(cfg);
  const Scenario perturbed = make_perturbed_scenario(cfg, sc);
  const PerturbationReport rep = continuity_experiment(sc, perturbed, cfg.solver);

  std::ofstream out = open_output(cfg.output_dir, "perturbation.txt");
  Report r(out);
  r.put("e_scale", cfg.e_scale)
      .put("a_sine", cfg.a_sine)
      .put("g_scale", cfg.g_scale)
      .put("delta_a", rep.delta_a)
      .put("delta_g", rep.delta_g)
      .put("delta_h", rep.delta_h)
      .put("delta_e", rep.delta_e)
      .put("delta", rep.delta)
      .put("r_distance", rep.r_distance)
      .put("u_distance", rep.u_distance)
      .put("r_ratio", rep.r_ratio)
      .put("u_ratio", rep.u_ratio)
      .flag("base_converged", rep.base.converged)
      .flag("perturbed_converged", rep.perturbed.converged)
      .put("base_iterations", rep.base.iterations)
      .put("perturbed_iterations", rep.perturbed.iterations);
  log << "perturb: r_ratio " << rep.r_ratio << '\n';
  return rep.converged ? kExitOk : kExitNoConvergence;
}

int run_verify(const VerifyOptions& options, const RunConfig* cfg, std::ostream& log) {
  const VerifyReport report = run_verification(options);
  std::ostringstream table;
  table << std::left << std::setw(22) << "suite" << std::setw(6) << "pass" << std::setw(10)
        << "seconds" << "detail\n";
  for (const auto& s : report.suites) {
    table << std::setw(22) << s.name << std::setw(6) << (s.passed ? "yes" : "NO") << std::setw(10)
          << std::fixed << std::setprecision(3) << s.seconds << s.detail << '\n';
  }
  table << "total time: " << std::fixed << std::setprecision(3) << report.seconds << " s\n";
  log << table.str();
  if (cfg) {
    std::ofstream out = open_output(cfg->output_dir, "verify.txt");
    out << table.str();
  }
  return report.all_passed() ? kExitOk : kExitVerify;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Time-fractional diffusion: forward solves and source recovery"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_override;
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "Configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--output", output_override, "Output directory (overrides [output] dir)");
  };
  CLI::App* forward = app.add_subcommand("forward", "Solve the forward problem");
  add_config(forward);
  CLI::App* invert = app.add_subcommand("invert", "Recover r(t) from E(t)");
  add_config(invert);
  CLI::App* perturb = app.add_subcommand("perturb", "Data-perturbation experiment");
  add_config(perturb);

  CLI::App* verify = app.add_subcommand("verify", "Run the verification suites");
  double gamma_scale = 1.0;
  std::string verify_config;
  verify->add_option("config", verify_config, "Optional configuration (output directory)")
      ->check(CLI::ExistingFile);
  verify->add_option("--perturb-gamma", gamma_scale,
                     "Multiply Gamma values in the bound suite by this factor (fault injection)");

  CLI::App* ml_eval = app.add_subcommand("ml-eval", "Evaluate E_{alpha,beta}(z)");
  double alpha = 0;
  double beta = 0;
  double z = 0;
  ml_eval->add_option("alpha", alpha)->required();
  ml_eval->add_option("beta", beta)->required();
  ml_eval->add_option("z", z)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }

  try {
    const auto config = [&] {
      RunConfig cfg = load_config(config_path);
      if (!output_override.empty()) cfg.output_dir = output_override;
      return cfg;
    };
    if (*forward) return run_forward(config(), out);
    if (*invert) return run_invert(config(), out);
    if (*perturb) return run_perturb(config(), out);
    if (*verify) {
      VerifyOptions options;
      options.gamma_scale = gamma_scale;
      if (verify_config.empty()) return run_verify(options, nullptr, out);
      const RunConfig cfg = load_config(verify_config);
      return run_verify(options, &cfg, out);
    }
    if (*ml_eval) {
      out << std::setprecision(17) << mlf(alpha, beta, z) << '\n';
      return kExitOk;
    }
  } catch (const AssumptionViolation& e) {
    err << "assumption violated: " << e.what() << '\n';
    return kExitAssumption;
  } catch (const AccuracyError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitConfig;
}

}  // namespace tfsrc
