// Acceptance run: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "scenarios.hpp"
#include "tfsrc/inverse.hpp"
#include "tfsrc/mlf.hpp"

using namespace tfsrc;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Round trip shared by criteria 6-8.
struct RoundTripState {
  std::optional<Scenario> sc;
  std::optional<GridFunction<double>> truth;
  std::optional<InverseResult> res;
  double seconds = 0;
};

RoundTripState& round_trip() {
  static RoundTripState state;
  return state;
}

Outcome mlf_bounds() {
  int violations = 0;
  double min_slack = std::numeric_limits<double>::infinity();
  for (double alpha : {0.3, 0.5, 0.7, 0.9}) {
    for (int i = 0; i < 60; ++i) {
      const double z = std::pow(10.0, -6.0 + 12.0 * i / 59.0);
      const double e = mlf(alpha, 1.0, -z);
      const double lower = 1 / (1 + std::tgamma(1 - alpha) * z);
      const double upper = 1 / (1 + z / std::tgamma(1 + alpha));
      const double slack = std::min(e - lower, upper - e);
      min_slack = std::min(min_slack, slack);
      if (slack < 0 || !(e > 0 && e < 1)) ++violations;
    }
  }
  const double anchor = std::abs(mlf(0.5, 1.0, -1.0) - oracle::kEErfc1);
  return {violations == 0 && anchor <= 1e-10,
          std::to_string(violations) + " violations / 240, min slack " + sci(min_slack) +
              ", |E_{0.5,1}(-1) - e erfc 1| = " + sci(anchor)};
}

Outcome derivative_identity() {
  std::mt19937_64 rng(97);
  std::uniform_real_distribution<double> alpha_dist(0.1, 0.95);
  std::uniform_real_distribution<double> log_lambda(-1.0, 2.0);
  std::uniform_real_distribution<double> log_t(-2.0, 1.0);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const double alpha = alpha_dist(rng);
    const double lambda = std::pow(10.0, log_lambda(rng));
    const double t = std::pow(10.0, log_t(rng));
    auto e = [&](double s) { return mlf(alpha, 1.0, -lambda * std::pow(s, alpha)); };
    // fourth-order central difference
    const double h = 1e-3 * t;
    const double fd = (e(t - 2 * h) - 8 * e(t - h) + 8 * e(t + h) - e(t + 2 * h)) / (12 * h);
    const double exact = mlf_time_derivative(alpha, lambda, t);
    worst = std::max(worst, std::abs(fd - exact) / std::abs(exact));
  }
  return {worst <= 1e-5, "max relative error " + sci(worst) + " over 100 triples"};
}

Outcome kernel_integral() {
  const TimeGrid<double> grid(10.0, 1000);
  const auto ones = GridFunction<double>::sample(grid, [](double) { return 1.0; });
  double worst = 0;
  bool below = true;
  for (double alpha : {0.3, 0.5, 0.7}) {
    for (double lambda : {1.0, 10.0, 100.0}) {
      for (double q : {0.5, 1.0, 2.0}) {
        const auto conv = singular_convolution(ones, alpha, lambda, q);
        for (Eigen::Index j = 10; j < grid.size(); ++j) {
          const double t = grid.node(j);
          const double closed = (1 - mlf(alpha, 1.0, -lambda * q * std::pow(t, alpha))) / q;
          const double quad = lambda * conv[j];
          worst = std::max(worst, std::abs(quad - closed) / closed);
          below = below && quad < 1 / q;
        }
      }
    }
  }
  return {worst <= 1e-6 && below,
          "27 combinations on t in [0.1, 10], max relative error " + sci(worst) +
              (below ? ", all < 1/q" : ", some value >= 1/q")};
}

Outcome l1_scheme() {
  const double alpha = 0.5;
  double affine = 0;
  for (double slope : {-2.5, 0.3, 7.0}) {
    const TimeGrid<double> grid(1.0, 100);
    const auto f = GridFunction<double>::sample(grid, [&](double t) { return 1.25 + slope * t; });
    const auto d = caputo_l1(f, alpha);
    for (Eigen::Index j = 1; j < grid.size(); ++j) {
      const double exact = slope * std::pow(grid.node(j), 1 - alpha) / std::tgamma(2 - alpha);
      affine = std::max(affine, std::abs(d[j] - exact) / std::abs(exact));
    }
  }
  std::vector<double> errors;
  for (Eigen::Index n : {100, 200, 400}) {
    const TimeGrid<double> grid(1.0, n);
    const auto f = GridFunction<double>::sample(grid, [](double t) { return t * t; });
    const auto d = caputo_l1(f, alpha);
    double err = 0;
    for (Eigen::Index j = 1; j < grid.size(); ++j) {
      err = std::max(err, std::abs(d[j] - 2 * std::pow(grid.node(j), 2 - alpha) / std::tgamma(3 - alpha)));
    }
    errors.push_back(err);
  }
  const double p1 = std::log2(errors[0] / errors[1]);
  const double p2 = std::log2(errors[1] / errors[2]);
  return {affine <= 1e-12 && p1 >= 1.2 && p2 >= 1.2,
          "affine relative error " + sci(affine) + ", orders " + sci(p1) + ", " + sci(p2)};
}

Outcome forward_oracle() {
  const double alpha = 0.5;
  const double lambda = std::numbers::pi * std::numbers::pi;
  const TimeGrid<double> grid(1.0, 1000);
  const auto one = GridFunction<double>::sample(grid, [](double) { return 1.0; });
  const auto u = integrate_mode(alpha, lambda, one, GridFunction<double>::zeros(grid), 0.0, 1.0);
  double rel_late = 0;
  double abs_all = 0;
  for (Eigen::Index j = 1; j < grid.size(); ++j) {
    const double t = grid.node(j);
    const double exact = oracle::mlf_half_one(lambda * std::sqrt(t));
    abs_all = std::max(abs_all, std::abs(u[j] - exact));
    if (t >= 0.25) rel_late = std::max(rel_late, std::abs(u[j] - exact) / exact);
  }
  const double rel_final = std::abs(u[grid.n_steps()] - oracle::mlf_half_one(lambda)) /
                           oracle::mlf_half_one(lambda);

  const auto a = GridFunction<double>::sample(grid, [](double t) { return 1 + t; });
  const auto r = GridFunction<double>::sample(grid, [&](double t) {
    return 2 * std::pow(t, 2 - alpha) / std::tgamma(3 - alpha) + lambda * (1 + t) * t * t;
  });
  const auto m = integrate_mode(alpha, lambda, a, r, 1.0, 0.0);
  double manufactured = 0;
  for (Eigen::Index j = 0; j < grid.size(); ++j) {
    manufactured = std::max(manufactured, std::abs(m[j] - grid.node(j) * grid.node(j)));
  }
  const double cushion = 2 * std::pow(grid.dt(), alpha);
  return {rel_late <= 1e-3 && abs_all <= cushion && manufactured <= 5e-3,
          "relative error " + sci(rel_final) + " at t=1, " + sci(rel_late) + " on [0.25,1], max abs " +
              sci(abs_all) + " (cushion " + sci(cushion) + "); manufactured t^2 error " +
              sci(manufactured)};
}

Outcome inverse_round_trip() {
  auto& st = round_trip();
  const auto start = std::chrono::steady_clock::now();
  const Scenario base = fixtures::base_scenario();
  st.truth = fixtures::linear_source(base.grid());
  st.sc = fixtures::with_forward_data(base, *st.truth);
  st.res = recover_source(*st.sc);
  st.seconds = seconds_since(start);
  const double err = (st.res->r.values() - st.truth->values()).cwiseAbs().maxCoeff() / st.truth->sup_norm();
  return {st.res->converged && st.res->iterations <= 50 && err <= 1e-2,
          std::string(st.res->converged ? "converged" : "not converged") + " in " +
              std::to_string(st.res->iterations) + " iterations, relative error " + sci(err)};
}

Outcome certificates() {
  const auto& st = round_trip();
  const auto& res = *st.res;
  const double dt_alpha = std::pow(st.sc->grid().dt(), st.sc->alpha());
  const bool ball = static_cast<long double>(res.r.sup_norm()) <= res.c2.value * (1 + 10 * dt_alpha);
  const auto& s = res.sandwich;
  const auto probe = evaluate_sandwich(s.r_norm, s.dalpha_e_norm, 1e6L * res.stability.c4,
                                       res.stability.c5.value, st.sc->grid().dt(), st.sc->alpha());
  return {ball && s.lower_pass && s.upper_pass && !probe.lower_pass,
          "||r|| = " + sci(s.r_norm) + ", log10 C2 = " + sci(res.c2.log10) + ", C4||D^aE|| = " +
              sci(static_cast<double>(s.lower)) + ", log10 C5||D^aE|| = " +
              sci(static_cast<double>(std::log10(s.upper))) + ", x1e6 probe " +
              (probe.lower_pass ? "passed (unexpected)" : "fails as expected")};
}

Outcome uniqueness() {
  const auto& st = round_trip();
  const Scenario& sc = *st.sc;
  RecoveryOptions opts;
  Eigen::VectorXd r0 = sc.dalpha_e().values() / sc.f_g();
  r0[0] = 2 * r0[1] - r0[2];
  const long double half_c2 = st.res->c2.value / 2;
  const double offset = half_c2 < 10.0L * r0.cwiseAbs().maxCoeff() ? static_cast<double>(half_c2)
                                                                    : 10 * r0.cwiseAbs().maxCoeff();
  opts.initial_guess = GridFunction<double>(sc.grid(), r0.array() + offset);
  const auto other = recover_source(sc, opts);
  const double gap = (other.r.values() - st.res->r.values()).cwiseAbs().maxCoeff();
  const double allowed = 10 * (opts.tol + std::pow(sc.grid().dt(), sc.alpha()) * st.res->r.sup_norm());
  return {other.converged && gap <= allowed,
          "offset " + sci(offset) + ", " + std::to_string(other.iterations) + " iterations, gap " +
              sci(gap) + " <= " + sci(allowed)};
}

Outcome continuity() {
  const auto& st = round_trip();
  const Scenario& sc = *st.sc;
  const auto& e = sc.e_data();
  std::vector<double> e_ratios;
  std::vector<double> a_ratios;
  bool converged = true;
  for (double eps : {1e-3, 5e-4}) {
    const auto rep = continuity_experiment(sc, sc.with_e_data(e.with_values((1 + eps) * e.values())));
    converged = converged && rep.converged;
    e_ratios.push_back(rep.r_ratio);
  }
  for (double eps : {1e-2, 5e-3}) {
    const auto& a = sc.a();
    const auto bumped = a.with_values(
        a.values().array() + eps * (2 * std::numbers::pi * sc.grid().nodes().array()).sin());
    const auto rep = continuity_experiment(sc, sc.with_a(bumped));
    converged = converged && rep.converged;
    a_ratios.push_back(rep.r_ratio);
  }
  const double e_change = std::abs(e_ratios[1] - e_ratios[0]) / e_ratios[0];
  const double a_change = std::abs(a_ratios[1] - a_ratios[0]) / a_ratios[0];
  return {converged && e_change < 0.2 && a_change < 0.2,
          "E probe ratios " + sci(e_ratios[0]) + " -> " + sci(e_ratios[1]) + " (change " +
              sci(e_change) + "), a probe ratios " + sci(a_ratios[0]) + " -> " + sci(a_ratios[1]) +
              " (change " + sci(a_change) + ")"};
}

Outcome gamma_catalog() {
  const auto sys = dirichlet_laplacian(32);
  auto admissible = [&](const std::function<Measurement()>& make) {
    try {
      make();
      return true;
    } catch (const InadmissibleError&) {
      return false;
    }
  };
  const bool energy = admissible([&] { return total_energy_functional(sys, 0.0); });
  const bool point = admissible([&] { return point_functional(sys, 0.5, 0.5); });
  double even = 0;
  const auto pm = point_functional(sys, 0.5);
  for (Eigen::Index i = 1; i < sys.size(); i += 2) even = std::max(even, pm.coefficients()[i]);
  const bool flux0 = admissible([&] { return boundary_flux_functional(sys, 0.0); });
  const bool flux1 = admissible([&] { return boundary_flux_functional(sys, 1.0); });
  const bool pass = energy && point && even <= 1e-14 && !flux0 && flux1;
  return {pass, std::string("total energy ") + (energy ? "admissible" : "rejected") +
                    ", point " + (point ? "admissible" : "rejected") + " (max even coefficient " +
                    sci(even) + "), flux gamma=0 " + (flux0 ? "admissible" : "rejected") +
                    ", flux gamma=1 " + (flux1 ? "admissible" : "rejected")};
}

struct Criterion {
  int id;
  double budget;  // seconds
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, 5, mlf_bounds},          {2, 5, derivative_identity}, {3, 10, kernel_integral},
      {4, 5, l1_scheme},           {5, 10, forward_oracle},     {6, 120, inverse_round_trip},
      {7, 120, certificates},      {8, 240, uniqueness},        {9, 360, continuity},
      {10, 5, gamma_catalog},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    double secs = seconds_since(start);
    // the certificates reuse run 6
    if (c.id == 7) secs += round_trip().seconds;
    const bool pass = out.pass && secs < c.budget;
    if (!pass) ++failures;
    std::printf("criterion %d: %s  %s  [%.2f s, budget %.0f s]\n", c.id, pass ? "PASS" : "FAIL",
                out.detail.c_str(), secs, c.budget);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
