#pragma once

#include <cmath>
#include <concepts>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tfsrc/errors.hpp"

namespace tfsrc::quadrature {

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
template <std::floating_point Scalar = double>
struct GaussLegendre {
  explicit GaussLegendre(int n) : nodes(n), weights(n) {
    constexpr Scalar pi = std::numbers::pi_v<Scalar>;
    for (int i = 0; i < (n + 1) / 2; ++i) {
      Scalar x = std::cos(pi * (Scalar(i) + Scalar(0.75)) / (Scalar(n) + Scalar(0.5)));
      Scalar dp = 0;
      for (int iter = 0; iter < 100; ++iter) {
        Scalar p0 = 1;
        Scalar p1 = x;
        for (int k = 2; k <= n; ++k) {
          const Scalar p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1);
        const Scalar dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 4 * std::numeric_limits<Scalar>::epsilon()) break;
      }
      nodes[i] = -x;
      nodes[n - 1 - i] = x;
      weights[i] = weights[n - 1 - i] = 2 / ((1 - x * x) * dp * dp);
    }
  }

  std::vector<Scalar> nodes;
  std::vector<Scalar> weights;
};

/// Composite Gauss-Legendre on `panels` equal panels of [lo, hi] for a
/// vector-valued integrand `fn(x, out)` writing `dim` components.
template <typename Fn>
Eigen::VectorXd composite_gauss_legendre(Fn&& fn, double lo, double hi, Eigen::Index dim,
                                         int panels, const GaussLegendre<double>& rule) {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd value(dim);
  const double width = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * width;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      fn(mid + 0.5 * width * rule.nodes[i], value);
      sum.noalias() += (0.5 * width * rule.weights[i]) * value;
    }
  }
  return sum;
}

/// Composite 16-point Gauss-Legendre with panel doubling until two
/// successive refinements agree to `tol` in every component.
template <typename Fn>
Eigen::VectorXd integrate_doubling(Fn&& fn, double lo, double hi, Eigen::Index dim,
                                   double tol = 1e-9, int initial_panels = 8,
                                   int max_doublings = 12) {
  static const GaussLegendre<double> rule(16);
  int panels = initial_panels;
  Eigen::VectorXd previous = composite_gauss_legendre(fn, lo, hi, dim, panels, rule);
  for (int level = 0; level < max_doublings; ++level) {
    panels *= 2;
    Eigen::VectorXd current = composite_gauss_legendre(fn, lo, hi, dim, panels, rule);
    const double change = dim > 0 ? (current - previous).cwiseAbs().maxCoeff() : 0.0;
    if (change <= tol) return current;
    previous = std::move(current);
  }
  throw QuadratureError("composite Gauss-Legendre did not reach tolerance " +
                        std::to_string(tol) + " after " + std::to_string(panels) + " panels");
}

/// Double-exponential (exp-sinh) quadrature of a function on (0, inf).
///
/// The integrand is supplied in transformed form: `weighted(tau)` must return
/// f(s(tau)) * s'(tau) with s(tau) = exp(pi/2 sinh tau), which lets callers
/// evaluate powers of s through log s = pi/2 sinh tau without underflow.
/// Returns the integral and an error estimate from successive step halving.
template <std::floating_point Scalar, typename Fn>
std::pair<Scalar, Scalar> exp_sinh(Fn&& weighted, Scalar rel_tol, int max_levels = 8) {
  using std::abs;
  const Scalar h0 = Scalar(0.5);
  const auto sweep = [&](Scalar h, bool odd_only) {
    Scalar total = 0;
    const int step = odd_only ? 2 : 1;
    for (int dir : {1, -1}) {
      int quiet = 0;
      for (int k = (dir == 1 ? (odd_only ? 1 : 0) : 1); k < 4096; k += step) {
        const Scalar term = weighted(dir * k * h);
        total += term;
        if (abs(term) <= std::numeric_limits<Scalar>::min() ||
            abs(term) < std::numeric_limits<Scalar>::epsilon() * Scalar(1e-3) * abs(total)) {
          if (++quiet >= 3) break;
        } else {
          quiet = 0;
        }
      }
    }
    return total;
  };

  Scalar h = h0;
  Scalar raw = sweep(h, false);
  Scalar estimate = raw * h;
  Scalar error = std::numeric_limits<Scalar>::infinity();
  for (int level = 1; level <= max_levels; ++level) {
    h /= 2;
    raw += sweep(h, true);
    const Scalar refined = raw * h;
    error = abs(refined - estimate);
    estimate = refined;
    if (level >= 2 && error <= rel_tol * abs(estimate)) break;
  }
  return {estimate, error};
}

}  // namespace tfsrc::quadrature
