#pragma once

// Two-parameter Mittag-Leffler function E_{a,b}(z) = sum_k z^k / Gamma(a k + b)
// on the real axis, and the closed-form identities built on it that the
// forward and inverse solvers rely on.
//
// Negative arguments z = -x are evaluated by one of four routes:
//   * power series in long double with compensated summation, accepted only
//     while sum |term_k| = E(+x) stays small enough that cancellation is harmless;
//   * the asymptotic expansion sum_{k>=1} (-1)^{k+1} x^{-k} / Gamma(b - a k),
//     optimally truncated, for x >= 50;
//   * the real integral representation obtained by collapsing the Bromwich
//     contour onto the branch cut (valid for 0 < a < 1, 0 < b < 1 + a);
//   * the recurrence E_{a,b}(-x) = (1/Gamma(b - a) - E_{a,b-a}(-x)) / x, which
//     moves b into the range of the integral representation.

#include <cmath>
#include <concepts>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "tfsrc/errors.hpp"
#include "tfsrc/quadrature.hpp"
#include "tfsrc/special.hpp"

namespace tfsrc {

template <std::floating_point Scalar = double>
class MlfParams {
 public:
  MlfParams(Scalar alpha, Scalar beta) : alpha_(alpha), beta_(beta) {
    if (!(alpha > 0 && alpha <= 1)) {
      throw DomainError("Mittag-Leffler alpha must lie in (0, 1], got " + std::to_string(alpha));
    }
    if (!(beta > 0)) {
      throw DomainError("Mittag-Leffler beta must be positive, got " + std::to_string(beta));
    }
  }

  Scalar alpha() const { return alpha_; }
  Scalar beta() const { return beta_; }

 private:
  Scalar alpha_;
  Scalar beta_;
};

namespace detail {

using Wide = long double;

// Largest admissible sum of |terms| for the alternating series. The
// cancellation error is roughly this times the long double epsilon.
inline constexpr Wide kSeriesAbsSumLimit = 100;
inline constexpr double kAsymptoticThreshold = 50.0;

/// Alternating power series for E_{a,b}(-x); returns false if the absolute
/// term sum grows past the cancellation limit.
inline bool mlf_series_negative(Wide alpha, Wide beta, Wide x, Wide& out) {
  Wide sum = 0;
  Wide compensation = 0;
  Wide abs_sum = 0;
  Wide power = 1;  // x^k
  for (int k = 0; k < 5000; ++k) {
    const Wide magnitude = power * rgamma(alpha * k + beta);
    const Wide term = (k % 2 == 0) ? magnitude : -magnitude;
    // Neumaier summation.
    const Wide t = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      compensation += (sum - t) + term;
    } else {
      compensation += (term - t) + sum;
    }
    sum = t;
    abs_sum += magnitude;
    if (abs_sum > kSeriesAbsSumLimit) return false;
    // Stop once past the peak and terms are negligible.
    if (alpha * k + beta > 2 && magnitude < std::numeric_limits<Wide>::epsilon() * 1e-3L) {
      out = sum + compensation;
      return true;
    }
    power *= x;
  }
  return false;
}

/// Optimally truncated asymptotic expansion of E_{a,b}(-x). The term k is
/// bounded through the reflection formula by Gamma(1 - b + a k) / (pi x^k),
/// an envelope that is smooth in k even where 1/Gamma(b - a k) nearly
/// vanishes; the expansion is accepted once the envelope of the next term is
/// negligible and rejected if the envelope starts growing first.
inline bool mlf_asymptotic_negative(Wide alpha, Wide beta, Wide x, Wide& out) {
  constexpr Wide pi = std::numbers::pi_v<Wide>;
  const Wide log_x = std::log(x);
  Wide sum = 0;
  Wide inv_power = 1;
  Wide previous_envelope = std::numeric_limits<Wide>::infinity();
  for (int k = 1; k < 4000; ++k) {
    inv_power /= x;
    sum += (k % 2 == 1 ? 1 : -1) * inv_power * rgamma(beta - alpha * k);
    const Wide s = 1 - beta + alpha * (k + 1);
    if (s < Wide(0.5)) continue;  // still in the leading, regular terms
    const Wide envelope = std::exp(lgamma(s) - (k + 1) * log_x) / pi;
    if (envelope < 1e-18L * std::abs(sum)) {
      out = sum;
      return true;
    }
    if (envelope > previous_envelope) return false;
    previous_envelope = envelope;
  }
  return false;
}

/// Integral representation for 0 < a < 1, 0 < b < 1 + a:
///   E_{a,b}(-x) = 1/(pi x) int_0^inf e^{-s} s^{a-b}
///                 (rho sin(pi b) + sin(pi (b - a))) / (rho^2 + 2 rho cos(pi a) + 1) ds,
/// with rho = s^a / x.
inline Wide mlf_integral_negative(Wide alpha, Wide beta, Wide x) {
  constexpr Wide pi = std::numbers::pi_v<Wide>;
  const Wide sin_b = sinpi(beta);
  const Wide sin_ba = sinpi(beta - alpha);
  const Wide cos_a = std::cos(pi * alpha);
  const Wide log_x = std::log(x);
  const auto weighted = [&](Wide tau) -> Wide {
    const Wide log_s = pi / 2 * std::sinh(tau);
    if (log_s > 12000) return 0;  // e^{-s} underflows
    const Wide s = std::exp(log_s);
    const Wide rho = std::exp(alpha * log_s - log_x);
    const Wide numerator = rho * sin_b + sin_ba;
    const Wide denominator = rho * rho + 2 * rho * cos_a + 1;
    // f(s) ds = e^{-s} s^{a-b} (...) * s (pi/2) cosh(tau) dtau
    const Wide log_factor = -s + (alpha - beta + 1) * log_s;
    if (log_factor < -11000) return 0;
    return std::exp(log_factor) * numerator / denominator * (pi / 2) * std::cosh(tau);
  };
  const auto [integral, error] = quadrature::exp_sinh<Wide>(weighted, 1e-16L);
  if (!(error <= 1e-13L * std::max<Wide>(std::abs(integral), 1e-300L))) {
    throw AccuracyError("Mittag-Leffler integral representation did not converge");
  }
  return integral / (pi * x);
}

inline Wide mlf_negative(Wide alpha, Wide beta, Wide x) {
  Wide out = 0;
  if (mlf_series_negative(alpha, beta, x, out)) return out;
  if (x >= kAsymptoticThreshold && mlf_asymptotic_negative(alpha, beta, x, out)) return out;
  if (alpha == 1) {
    if (beta == 1) return std::exp(-x);
    if (beta > 1) return (rgamma(beta - 1) - mlf_negative(alpha, beta - 1, x)) / x;
    throw AccuracyError("E_{1,b}(-x) with b < 1 is only available for small x");
  }
  // The integral representation degrades as b approaches 1 + a, so every
  // b >= 1 is first reduced to b - a.
  if (beta >= 1) {
    return (rgamma(beta - alpha) - mlf_negative(alpha, beta - alpha, x)) / x;
  }
  return mlf_integral_negative(alpha, beta, x);
}

}  // namespace detail

/// log E_{a,b}(x) for x > 0 (all series terms are positive). Used for the
/// growth factors in the stability constants, which overflow double quickly.
template <std::floating_point Scalar>
long double mlf_log_positive(const MlfParams<Scalar>& params, long double x) {
  using detail::Wide;
  if (!(x > 0)) throw DomainError("mlf_log_positive requires x > 0");
  const Wide alpha = params.alpha();
  const Wide beta = params.beta();
  const Wide growth = std::pow(x, 1 / alpha);
  if (growth > 60) {
    // E_{a,b}(x) = x^{(1-b)/a} e^{x^{1/a}} / a + O(1/x); the algebraic tail is
    // below e^{-60} relative.
    return -std::log(alpha) + (1 - beta) / alpha * std::log(x) + growth;
  }
  Wide sum = 0;
  Wide power = 1;
  for (int k = 0; k < 100000; ++k) {
    const Wide term = power * rgamma(alpha * k + beta);
    sum += term;
    if (alpha * k + beta > growth + 2 && term < std::numeric_limits<Wide>::epsilon() * sum * 1e-2L) {
      break;
    }
    power *= x;
  }
  return std::log(sum);
}

/// E_{a,b}(z). The supported contract is z <= 0; positive z is accepted and
/// computed from the positive series (overflowing to +inf when the value
/// exceeds the range of Scalar).
template <std::floating_point Scalar>
Scalar mlf(const MlfParams<Scalar>& params, Scalar z) {
  using detail::Wide;
  const Wide alpha = params.alpha();
  const Wide beta = params.beta();
  if (z == 0) return static_cast<Scalar>(rgamma(beta));
  if (alpha == 1 && beta == 1) return std::exp(z);
  if (z > 0) {
    return static_cast<Scalar>(std::exp(mlf_log_positive(params, static_cast<Wide>(z))));
  }
  return static_cast<Scalar>(detail::mlf_negative(alpha, beta, -static_cast<Wide>(z)));
}

template <std::floating_point Scalar>
Scalar mlf(Scalar alpha, Scalar beta, Scalar z) {
  return mlf(MlfParams<Scalar>(alpha, beta), z);
}

/// Two-sided bound on E_{a,1}(-z), 0 < a < 1, z > 0:
///   1/(1 + Gamma(1-a) z) <= E_{a,1}(-z) <= 1/(1 + z/Gamma(1+a)).
/// `gamma_scale` multiplies every Gamma value (fault injection for the
/// verification suite); leave it at 1 otherwise.
template <std::floating_point Scalar>
std::pair<Scalar, Scalar> mlf_e1_bounds(Scalar alpha, Scalar z, Scalar gamma_scale = 1) {
  if (!(alpha > 0 && alpha < 1)) throw DomainError("mlf_e1_bounds requires 0 < alpha < 1");
  if (!(z > 0)) throw DomainError("mlf_e1_bounds requires z > 0");
  const Scalar lower = 1 / (1 + gamma_scale * tgamma<Scalar>(1 - alpha) * z);
  const Scalar upper = 1 / (1 + z / (gamma_scale * tgamma<Scalar>(1 + alpha)));
  return {lower, upper};
}

/// t^{a-1} E_{a,a}(-lambda q t^a): the weakly singular kernel of the mode
/// equations.
template <std::floating_point Scalar>
Scalar relaxation_kernel(Scalar alpha, Scalar lambda, Scalar q, Scalar t) {
  if (!(alpha > 0 && alpha < 1)) throw DomainError("relaxation_kernel requires 0 < alpha < 1");
  if (!(t > 0)) throw DomainError("relaxation_kernel is singular at t <= 0");
  if (lambda < 0 || q < 0) throw DomainError("relaxation_kernel requires lambda, q >= 0");
  const Scalar argument = -lambda * q * std::pow(t, alpha);
  return std::pow(t, alpha - 1) * mlf(MlfParams<Scalar>(alpha, alpha), argument);
}

/// d/dt E_{a,1}(-lambda t^a) = -lambda t^{a-1} E_{a,a}(-lambda t^a).
template <std::floating_point Scalar>
Scalar mlf_time_derivative(Scalar alpha, Scalar lambda, Scalar t) {
  if (!(alpha > 0 && alpha <= 1)) throw DomainError("mlf_time_derivative requires 0 < alpha <= 1");
  if (!(t > 0)) throw DomainError("mlf_time_derivative requires t > 0");
  if (lambda < 0) throw DomainError("mlf_time_derivative requires lambda >= 0");
  if (lambda == 0) return Scalar(0);
  const Scalar argument = -lambda * std::pow(t, alpha);
  return -lambda * std::pow(t, alpha - 1) * mlf(MlfParams<Scalar>(alpha, alpha), argument);
}

/// (1 - E_{a,1}(-lambda q t^a)) / q, which equals
/// int_0^t lambda (t-s)^{a-1} E_{a,a}(-lambda q (t-s)^a) ds.
template <std::floating_point Scalar>
Scalar kernel_integral_closed_form(Scalar alpha, Scalar lambda, Scalar q, Scalar t) {
  if (!(alpha > 0 && alpha < 1)) throw DomainError("kernel_integral_closed_form requires 0 < alpha < 1");
  if (!(lambda > 0) || !(q > 0)) throw DomainError("kernel_integral_closed_form requires lambda, q > 0");
  if (t < 0) throw DomainError("kernel_integral_closed_form requires t >= 0");
  if (t == 0) return Scalar(0);
  const Scalar x = lambda * q * std::pow(t, alpha);
  // 1 - E_{a,1}(-x) = x E_{a,a+1}(-x) avoids cancellation for small x.
  if (x < 1) return x * mlf(MlfParams<Scalar>(alpha, alpha + 1), -x) / q;
  return (1 - mlf(MlfParams<Scalar>(alpha, Scalar(1)), -x)) / q;
}

}  // namespace tfsrc
