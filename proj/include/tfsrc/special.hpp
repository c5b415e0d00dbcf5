#pragma once

// Gamma function family via the Lanczos approximation (g = 7, 9 terms),
// templated on the floating-point type. Relative accuracy is about 1e-15
// for every supported Scalar since the coefficients are double-precision.

#include <array>
#include <cmath>
#include <concepts>
#include <limits>
#include <numbers>

namespace tfsrc {

namespace detail {

inline constexpr double kLanczosG = 7.0;
inline constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

template <std::floating_point Scalar>
Scalar lanczos_sum(Scalar xm1) {
  Scalar a = static_cast<Scalar>(kLanczosCoeffs[0]);
  for (std::size_t i = 1; i < kLanczosCoeffs.size(); ++i) {
    a += static_cast<Scalar>(kLanczosCoeffs[i]) / (xm1 + static_cast<Scalar>(i));
  }
  return a;
}

}  // namespace detail

/// sin(pi x) with exact zeros at the integers.
template <std::floating_point Scalar>
Scalar sinpi(Scalar x) {
  using std::floor;
  using std::sin;
  Scalar r = x - 2 * floor(x / 2);  // r in [0, 2)
  Scalar sign = 1;
  if (r >= 1) {
    r -= 1;
    sign = -1;
  }
  if (r == 0) return Scalar(0);
  if (r > Scalar(0.5)) r = 1 - r;
  return sign * sin(std::numbers::pi_v<Scalar> * r);
}

/// Gamma(x). Poles at the non-positive integers return +inf.
template <std::floating_point Scalar>
Scalar tgamma(Scalar x) {
  using std::exp;
  using std::floor;
  using std::pow;
  using std::sqrt;
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  if (x <= 0 && x == floor(x)) return std::numeric_limits<Scalar>::infinity();
  if (x < Scalar(0.5)) {
    return pi / (sinpi(x) * tgamma(1 - x));
  }
  const Scalar xm1 = x - 1;
  const Scalar t = xm1 + static_cast<Scalar>(detail::kLanczosG) + Scalar(0.5);
  const Scalar half_power = pow(t, (xm1 + Scalar(0.5)) / 2);
  return sqrt(2 * pi) * half_power * exp(-t) * half_power * detail::lanczos_sum(xm1);
}

/// log|Gamma(x)|.
template <std::floating_point Scalar>
Scalar lgamma(Scalar x) {
  using std::abs;
  using std::floor;
  using std::log;
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  if (x <= 0 && x == floor(x)) return std::numeric_limits<Scalar>::infinity();
  if (x < Scalar(0.5)) {
    return log(pi / abs(sinpi(x))) - lgamma(1 - x);
  }
  const Scalar xm1 = x - 1;
  const Scalar t = xm1 + static_cast<Scalar>(detail::kLanczosG) + Scalar(0.5);
  return Scalar(0.5) * log(2 * pi) + (xm1 + Scalar(0.5)) * log(t) - t +
         log(detail::lanczos_sum(xm1));
}

/// 1/Gamma(x), an entire function: zero at the non-positive integers.
template <std::floating_point Scalar>
Scalar rgamma(Scalar x) {
  using std::floor;
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  if (x <= 0 && x == floor(x)) return Scalar(0);
  if (x < Scalar(0.5)) {
    return sinpi(x) * tgamma(1 - x) / pi;
  }
  const Scalar g = tgamma(x);
  if (!std::isfinite(g)) return Scalar(0);
  return 1 / g;
}

}  // namespace tfsrc
