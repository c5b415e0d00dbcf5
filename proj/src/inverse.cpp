#include "tfsrc/inverse.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <string>
#include <utility>

#include "tfsrc/mlf.hpp"

namespace tfsrc {

namespace {

constexpr double kHZeroTolerance = 1e-12;

struct ConstantParts {
  long double front = 0;      // bracket multiplying the growth factor
  long double log_growth = 0;  // ln E_{a,1}(C_F Q_a ||g||_{H^{1+gamma}} T^a / |F[g]|)
  long double tail = 0;        // ||D^a E|| / |F[g]|
  long double abs_fg = 0;
};

long double abs_fg_checked(const Scenario& sc) {
  const long double abs_fg = std::abs(static_cast<long double>(sc.f_g()));
  if (abs_fg < 1e-12L) throw AssumptionViolation("F[g] vanishes; the operator K is undefined");
  return abs_fg;
}

long double log_growth(const Scenario& sc, long double abs_fg) {
  const double gamma = sc.meas().gamma();
  const long double argument = static_cast<long double>(sc.meas().c_f()) * sc.cap_q_a() *
                               sobolev_norm(sc.g(), sc.sys(), 1 + gamma) *
                               std::pow(static_cast<long double>(sc.grid().t_final()), sc.alpha()) /
                               abs_fg;
  return mlf_log_positive(MlfParams<double>(sc.alpha(), 1.0), argument);
}

ConstantParts constant_parts(const Scenario& sc) {
  ConstantParts p;
  p.abs_fg = abs_fg_checked(sc);
  const double gamma = sc.meas().gamma();
  const long double c_f = sc.meas().c_f();
  const long double de_norm = sc.dalpha_e().sup_norm();
  const long double cap_q = sc.cap_q_a();
  p.front = c_f * cap_q * sobolev_norm(sc.h(), sc.sys(), 1 + gamma) / p.abs_fg +
            c_f * cap_q * de_norm * sobolev_norm(sc.g(), sc.sys(), gamma) /
                (sc.q_a() * p.abs_fg * p.abs_fg);
  p.log_growth = log_growth(sc, p.abs_fg);
  p.tail = de_norm / p.abs_fg;
  return p;
}

// exp(log_a) + b with the log10 kept exact when the sum overflows.
BigConstant combine(long double log_a, long double b) {
  constexpr long double ln10 = 2.302585092994045684017991454684364208L;
  BigConstant out;
  if (b > 0) {
    const long double hi = std::max(log_a, std::log(b));
    const long double lo = std::min(log_a, std::log(b));
    const long double log_sum = hi + std::log1p(std::exp(lo - hi));
    out.log10 = static_cast<double>(log_sum / ln10);
    out.value = std::exp(log_sum);
  } else {
    out.log10 = static_cast<double>(log_a / ln10);
    out.value = std::exp(log_a);
  }
  return out;
}

BigConstant from_value(long double v) {
  return {v, v > 0 ? static_cast<double>(std::log10(v)) : -std::numeric_limits<double>::infinity()};
}

double sup_norm(const Eigen::VectorXd& v) { return v.cwiseAbs().maxCoeff(); }

void extrapolate_origin(Eigen::VectorXd& v) {
  if (v.size() >= 3) v[0] = 2 * v[1] - v[2];
}

// K[r] from the forward solution at r.
Eigen::VectorXd k_from_solution(const Scenario& sc, const ForwardSolution& sol) {
  const Eigen::VectorXd weights =
      sc.sys().eigenvalues().cwiseProduct(sc.meas().signed_coefficients());
  Eigen::VectorXd k = (sc.dalpha_e().values().array() +
                       sc.a().values().array() * (sol.u * weights).array()) /
                      sc.f_g();
  extrapolate_origin(k);
  return k;
}

}  // namespace

BigConstant ball_radius(const Scenario& sc) {
  const ConstantParts p = constant_parts(sc);
  if (p.front == 0) return from_value(p.tail);
  return combine(std::log(p.front) + p.log_growth, p.tail);
}

BigConstant gronwall_constant(const Scenario& sc) {
  const ConstantParts p = constant_parts(sc);
  if (p.front == 0) return from_value(0);
  return combine(std::log(p.front) + p.log_growth, 0);
}

StabilityConstants stability_constants(const Scenario& sc) {
  if (sc.h().norm() > kHZeroTolerance) {
    throw AssumptionViolation("stability constants require h = 0");
  }
  const long double abs_fg = abs_fg_checked(sc);
  StabilityConstants out;
  out.c4 = sc.q_a() / ((sc.cap_q_a() + sc.q_a()) * sc.meas().c_f() *
                       sobolev_norm(sc.g(), sc.sys(), sc.meas().gamma()));
  out.c5 = combine(log_growth(sc, abs_fg) - std::log(abs_fg), 0);
  return out;
}

GridFunction<double> apply_k(const Scenario& sc, const GridFunction<double>& r) {
  abs_fg_checked(sc);
  const ForwardSolution sol = solve_forward(sc, r);
  return r.with_values(k_from_solution(sc, sol));
}

SandwichRecord evaluate_sandwich(double r_norm, double dalpha_e_norm, long double c4,
                                 long double c5, double dt, double alpha) {
  SandwichRecord s;
  s.r_norm = r_norm;
  s.dalpha_e_norm = dalpha_e_norm;
  s.lower = c4 * dalpha_e_norm;
  s.upper = c5 * dalpha_e_norm;
  s.cushion = 10 * std::pow(dt, alpha) * r_norm;
  s.lower_margin = r_norm + s.cushion - s.lower;
  s.upper_margin = s.upper + s.cushion - r_norm;
  s.lower_pass = s.lower_margin >= 0;
  s.upper_pass = s.upper_margin >= 0;
  return s;
}

InverseResult recover_source(const Scenario& sc, const RecoveryOptions& options) {
  if (!(options.tol > 0)) throw DomainError("recovery tolerance must be positive");
  if (options.max_iter < 1) throw DomainError("max_iter must be at least 1");
  if (!(options.relaxation > 0 && options.relaxation <= 1)) {
    throw DomainError("relaxation must lie in (0, 1]");
  }
  if (options.anderson_depth < 0) throw DomainError("anderson_depth must be nonnegative");
  abs_fg_checked(sc);

  Eigen::VectorXd r;
  if (options.initial_guess) {
    if (!(options.initial_guess->grid() == sc.grid())) {
      throw SizeMismatch("initial guess is not sampled on the scenario grid");
    }
    r = options.initial_guess->values();
  } else {
    r = sc.dalpha_e().values() / sc.f_g();
    extrapolate_origin(r);
  }

  const BigConstant c2 = ball_radius(sc);
  const double theta = options.relaxation;
  const int depth = options.anderson_depth;

  std::deque<Eigen::VectorXd> xs;  // iterates
  std::deque<Eigen::VectorXd> gs;  // relaxed images
  std::vector<double> history;
  bool converged = false;
  std::string diagnostics;
  double max_k_norm = 0;
  int iterations = 0;

  for (int it = 0; it < options.max_iter; ++it) {
    const ForwardSolution sol = solve_forward(sc, GridFunction<double>(sc.grid(), r));
    const Eigen::VectorXd kr = k_from_solution(sc, sol);
    max_k_norm = std::max(max_k_norm, sup_norm(kr));
    const Eigen::VectorXd relaxed = (1 - theta) * r + theta * kr;
    const Eigen::VectorXd f = relaxed - r;
    xs.push_back(r);
    gs.push_back(relaxed);
    if (static_cast<int>(xs.size()) > depth + 1) {
      xs.pop_front();
      gs.pop_front();
    }

    Eigen::VectorXd next = relaxed;
    const Eigen::Index m = static_cast<Eigen::Index>(xs.size()) - 1;
    if (depth > 0 && m > 0) {
      Eigen::MatrixXd d_f(r.size(), m);
      Eigen::MatrixXd d_g(r.size(), m);
      for (Eigen::Index j = 0; j < m; ++j) {
        d_g.col(j) = gs[j + 1] - gs[j];
        d_f.col(j) = d_g.col(j) - (xs[j + 1] - xs[j]);
      }
      const Eigen::VectorXd weights = d_f.colPivHouseholderQr().solve(f);
      Eigen::VectorXd mixed = relaxed - d_g * weights;
      if (mixed.allFinite()) next = std::move(mixed);
    }

    const double step = sup_norm(next - r);
    history.push_back(step);
    r = std::move(next);
    iterations = it + 1;
    if (!r.allFinite()) {
      diagnostics = "iterate became non-finite at iteration " + std::to_string(iterations);
      break;
    }
    if (static_cast<long double>(sup_norm(r)) > 2 * c2.value) {
      diagnostics = "iterate left the ball of radius 2 C_2 at iteration " +
                    std::to_string(iterations);
      break;
    }
    if (step <= options.tol) {
      converged = true;
      break;
    }
  }
  if (!converged && diagnostics.empty()) {
    diagnostics = "no convergence within " + std::to_string(options.max_iter) + " iterations";
  }

  GridFunction<double> r_final(sc.grid(), r);
  ForwardSolution u = solve_forward(sc, r_final);
  const double fixed_point_residual = sup_norm(k_from_solution(sc, u) - r);

  InverseResult res(std::move(r_final), std::move(u));
  res.iterations = iterations;
  res.residual_history = std::move(history);
  res.fixed_point_residual = fixed_point_residual;
  res.converged = converged;
  res.diagnostics = std::move(diagnostics);
  res.c2 = c2;
  res.max_k_norm = max_k_norm;
  if (sc.h().norm() <= kHZeroTolerance) {
    res.has_stability_constants = true;
    res.stability = stability_constants(sc);
    res.sandwich = stability_check(res, sc);
  }
  return res;
}

SandwichRecord stability_check(const InverseResult& res, const Scenario& sc) {
  const StabilityConstants k = stability_constants(sc);
  return evaluate_sandwich(res.r.sup_norm(), sc.dalpha_e().sup_norm(), k.c4, k.c5.value,
                           sc.grid().dt(), sc.alpha());
}

PerturbationReport continuity_experiment(const Scenario& sc, const Scenario& perturbed,
                                         const RecoveryOptions& options) {
  if (!(sc.grid() == perturbed.grid())) throw SizeMismatch("perturbed scenario uses another grid");
  if (sc.sys().size() != perturbed.sys().size() || sc.sys().label() != perturbed.sys().label()) {
    throw SizeMismatch("perturbed scenario uses another eigensystem");
  }
  if (sc.meas().label() != perturbed.meas().label() ||
      sc.meas().coefficients() != perturbed.meas().coefficients()) {
    throw SizeMismatch("perturbed scenario uses another measurement");
  }
  const double gamma = sc.meas().gamma();
  InverseResult base = recover_source(sc, options);
  InverseResult other = recover_source(perturbed, options);

  PerturbationReport rep(std::move(base), std::move(other));
  rep.delta_a = sup_norm(perturbed.a().values() - sc.a().values());
  rep.delta_g = sobolev_norm(perturbed.g() - sc.g(), sc.sys(), 1 + gamma);
  rep.delta_h = sobolev_norm(perturbed.h() - sc.h(), sc.sys(), 2 + gamma);
  rep.delta_e = sup_norm(perturbed.e_data().values() - sc.e_data().values()) +
                sup_norm(perturbed.dalpha_e().values() - sc.dalpha_e().values());
  rep.delta = rep.delta_a + rep.delta_g + rep.delta_h + rep.delta_e;
  rep.r_distance = sup_norm(rep.perturbed.r.values() - rep.base.r.values());
  rep.u_distance = (rep.perturbed.u.u - rep.base.u.u).rowwise().norm().maxCoeff();
  if (rep.delta > 0) {
    rep.r_ratio = rep.r_distance / rep.delta;
    rep.u_ratio = rep.u_distance / rep.delta;
  }
  rep.converged = rep.base.converged && rep.perturbed.converged;
  return rep;
}

}  // namespace tfsrc
