#include "tfsrc/verify.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "tfsrc/fracalc.hpp"
#include "tfsrc/mlf.hpp"

namespace tfsrc {

namespace {

template <typename Fn>
SuiteResult timed(const std::string& name, Fn&& body) {
  const auto start = std::chrono::steady_clock::now();
  SuiteResult result{name, false, "", 0.0};
  try {
    body(result);
  } catch (const std::exception& e) {
    result.passed = false;
    result.detail = std::string("exception: ") + e.what();
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::string format(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

}  // namespace

bool VerifyReport::all_passed() const {
  for (const auto& s : suites) {
    if (!s.passed) return false;
  }
  return true;
}

SuiteResult verify_mlf_bounds(const VerifyOptions& options) {
  return timed("mlf_bounds", [&](SuiteResult& out) {
    int failures = 0;
    double worst_slack = std::numeric_limits<double>::infinity();
    for (double alpha : {0.3, 0.5, 0.7, 0.9}) {
      const MlfParams<double> params(alpha, 1.0);
      for (int i = 0; i < 60; ++i) {
        const double z = std::pow(10.0, -6.0 + 12.0 * i / 59.0);
        const double e = mlf(params, -z);
        const auto [lower, upper] = mlf_e1_bounds(alpha, z, options.gamma_scale);
        const double slack = std::min(e - lower, upper - e);
        worst_slack = std::min(worst_slack, slack);
        if (slack < 0 || !(e > 0 && e < 1)) ++failures;
      }
    }
    const double reference = std::numbers::e * std::erfc(1.0);
    const double anchor = std::abs(mlf(0.5, 1.0, -1.0) - reference);
    out.passed = failures == 0 && anchor <= 1e-10;
    out.detail = std::to_string(failures) + " bound violations in 240 points, min slack " +
                 format(worst_slack) + ", |E_{0.5,1}(-1) - e erfc(1)| = " + format(anchor);
  });
}

SuiteResult verify_derivative_identity() {
  return timed("derivative_identity", [](SuiteResult& out) {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> alpha_dist(0.2, 0.95);
    std::uniform_real_distribution<double> log_lambda(-1.0, 2.0);
    std::uniform_real_distribution<double> log_t(-2.0, 1.0);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
      const double alpha = alpha_dist(rng);
      const double lambda = std::pow(10.0, log_lambda(rng));
      const double t = std::pow(10.0, log_t(rng));
      const MlfParams<double> params(alpha, 1.0);
      auto e = [&](double s) { return mlf(params, -lambda * std::pow(s, alpha)); };
      // fourth-order central difference
      const double h = 1e-3 * t;
      const double fd = (e(t - 2 * h) - 8 * e(t - h) + 8 * e(t + h) - e(t + 2 * h)) / (12 * h);
      const double exact = mlf_time_derivative(alpha, lambda, t);
      worst = std::max(worst, std::abs(fd - exact) / std::abs(exact));
    }
    out.passed = worst <= 1e-5;
    out.detail = "max relative deviation " + format(worst) + " over 100 random triples";
  });
}

SuiteResult verify_kernel_integral() {
  return timed("kernel_integral", [](SuiteResult& out) {
    const TimeGrid<double> grid(10.0, 1000);
    const auto ones = GridFunction<double>::sample(grid, [](double) { return 1.0; });
    double worst = 0;
    bool below = true;
    for (double alpha : {0.3, 0.5, 0.7}) {
      for (double lambda : {1.0, 10.0, 100.0}) {
        for (double q : {0.5, 1.0, 2.0}) {
          const auto conv = singular_convolution(ones, alpha, lambda, q);
          for (Eigen::Index j = 10; j < grid.size(); ++j) {
            const double closed = kernel_integral_closed_form(alpha, lambda, q, grid.node(j));
            const double quad = lambda * conv[j];
            worst = std::max(worst, std::abs(quad - closed) / std::abs(closed));
            below = below && closed < 1 / q && quad < 1 / q;
          }
        }
      }
    }
    out.passed = worst <= 1e-6 && below;
    out.detail = "27 combinations, max relative deviation " + format(worst) +
                 (below ? ", all below 1/q" : ", a value reached 1/q");
  });
}

SuiteResult verify_l1_scheme() {
  return timed("l1_scheme", [](SuiteResult& out) {
    const double alpha = 0.5;
    const TimeGrid<double> grid(1.0, 200);
    const auto affine = GridFunction<double>::sample(grid, [](double t) { return 0.75 - 2.5 * t; });
    const auto d_affine = caputo_l1(affine, alpha);
    double exact_err = 0;
    for (Eigen::Index j = 1; j < grid.size(); ++j) {
      const double exact = -2.5 * std::pow(grid.node(j), 1 - alpha) / tgamma(2 - alpha);
      exact_err = std::max(exact_err, std::abs(d_affine[j] - exact) / std::abs(exact));
    }
    std::vector<double> errors;
    for (Eigen::Index n : {100, 200, 400}) {
      const TimeGrid<double> g(1.0, n);
      const auto sq = GridFunction<double>::sample(g, [](double t) { return t * t; });
      const auto d = caputo_l1(sq, alpha);
      double err = 0;
      for (Eigen::Index j = 1; j < g.size(); ++j) {
        err = std::max(err, std::abs(d[j] - 2 * std::pow(g.node(j), 2 - alpha) / tgamma(3 - alpha)));
      }
      errors.push_back(err);
    }
    const double order = std::log2(errors[1] / errors[2]);
    const double order_coarse = std::log2(errors[0] / errors[1]);
    out.passed = exact_err <= 1e-12 && order >= 1.2 && order_coarse >= 1.2;
    out.detail = "affine relative error " + format(exact_err) + ", observed orders " +
                 format(order_coarse) + " and " + format(order);
  });
}

SuiteResult verify_mean_value_modulus() {
  return timed("mean_value_modulus", [](SuiteResult& out) {
    const TimeGrid<double> grid(1.0, 400);
    const auto line = GridFunction<double>::sample(grid, [](double t) { return t; });
    const double m_line = mean_value_modulus(line, caputo_l1(line, 0.5), 0.5);
    const TimeGrid<double> grid2(std::numbers::pi, 400);
    const auto wave = GridFunction<double>::sample(grid2, [](double t) { return std::sin(t); });
    const double m_wave = mean_value_modulus(wave, caputo_l1(wave, 0.7), 0.7);
    out.passed = m_line <= 1e-8 && m_wave <= 1e-8;
    out.detail = "modulus f=t: " + format(m_line) + ", f=sin t: " + format(m_wave);
  });
}

VerifyReport run_verification(const VerifyOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  VerifyReport report;
  report.suites.push_back(verify_mlf_bounds(options));
  report.suites.push_back(verify_derivative_identity());
  report.suites.push_back(verify_kernel_integral());
  report.suites.push_back(verify_l1_scheme());
  report.suites.push_back(verify_mean_value_modulus());
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace tfsrc
