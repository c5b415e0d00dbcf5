#pragma once

// Discrete fractional calculus on uniform time grids: the L1 Caputo
// derivative and product integration of weakly singular convolutions with
// Mittag-Leffler kernels.

#include <cmath>
#include <concepts>
#include <functional>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "tfsrc/errors.hpp"
#include "tfsrc/mlf.hpp"
#include "tfsrc/special.hpp"

namespace tfsrc {

template <std::floating_point Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Uniform grid t_j = j * T / n on [0, T].
template <std::floating_point Scalar = double>
class TimeGrid {
 public:
  TimeGrid(Scalar t_final, Eigen::Index n_steps) : t_final_(t_final), n_steps_(n_steps) {
    if (!(t_final > 0)) throw DomainError("time horizon must be positive");
    if (n_steps < 2) throw DomainError("time grid needs at least 2 steps");
  }

  Scalar t_final() const { return t_final_; }
  Eigen::Index n_steps() const { return n_steps_; }
  Eigen::Index size() const { return n_steps_ + 1; }
  Scalar dt() const { return t_final_ / static_cast<Scalar>(n_steps_); }

  Scalar node(Eigen::Index j) const {
    return j == n_steps_ ? t_final_ : static_cast<Scalar>(j) * dt();
  }

  VectorX<Scalar> nodes() const {
    VectorX<Scalar> t(size());
    for (Eigen::Index j = 0; j < size(); ++j) t[j] = node(j);
    return t;
  }

  bool operator==(const TimeGrid&) const = default;

 private:
  Scalar t_final_;
  Eigen::Index n_steps_;
};

/// Samples of a scalar function of time on a TimeGrid.
template <std::floating_point Scalar = double>
class GridFunction {
 public:
  GridFunction(TimeGrid<Scalar> grid, VectorX<Scalar> values)
      : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
      throw SizeMismatch("grid function has " + std::to_string(values_.size()) +
                         " samples for a grid of " + std::to_string(grid_.size()) + " nodes");
    }
  }

  static GridFunction zeros(const TimeGrid<Scalar>& grid) {
    return GridFunction(grid, VectorX<Scalar>::Zero(grid.size()));
  }

  template <typename Fn>
  static GridFunction sample(const TimeGrid<Scalar>& grid, Fn&& fn) {
    VectorX<Scalar> values(grid.size());
    for (Eigen::Index j = 0; j < grid.size(); ++j) values[j] = fn(grid.node(j));
    return GridFunction(grid, std::move(values));
  }

  const TimeGrid<Scalar>& grid() const { return grid_; }
  const VectorX<Scalar>& values() const { return values_; }
  Eigen::Index size() const { return values_.size(); }
  Scalar operator[](Eigen::Index j) const { return values_[j]; }
  Scalar sup_norm() const { return values_.cwiseAbs().maxCoeff(); }

  GridFunction with_values(VectorX<Scalar> values) const {
    return GridFunction(grid_, std::move(values));
  }

 private:
  TimeGrid<Scalar> grid_;
  VectorX<Scalar> values_;
};

namespace detail {

template <std::floating_point Scalar>
void require_fractional_order(Scalar alpha) {
  if (!(alpha > 0 && alpha < 1)) {
    throw DomainError("fractional order must lie in (0, 1), got " + std::to_string(alpha));
  }
}

}  // namespace detail

/// L1 weights b_m = (m+1)^{1-a} - m^{1-a}, m = 0..count-1.
template <std::floating_point Scalar>
VectorX<Scalar> l1_weights(Eigen::Index count, Scalar alpha) {
  VectorX<Scalar> b(count);
  const Scalar p = 1 - alpha;
  for (Eigen::Index m = 0; m < count; ++m) {
    b[m] = std::pow(static_cast<Scalar>(m + 1), p) - std::pow(static_cast<Scalar>(m), p);
  }
  return b;
}

/// Leading L1 coefficient dt^{-a} / Gamma(2 - a).
template <std::floating_point Scalar>
Scalar l1_leading_coefficient(Scalar dt, Scalar alpha) {
  return std::pow(dt, -alpha) / tgamma<Scalar>(2 - alpha);
}

/// L1 approximation of the Caputo derivative at every node:
///   D^a f(t_n) ~ c0 sum_{k=0}^{n-1} b_{n-1-k} (f_{k+1} - f_k),
/// with the value at t_0 defined as 0. Exact for affine f.
template <std::floating_point Scalar>
GridFunction<Scalar> caputo_l1(const GridFunction<Scalar>& f, Scalar alpha) {
  detail::require_fractional_order(alpha);
  const Eigen::Index n = f.grid().n_steps();
  const VectorX<Scalar> b = l1_weights<Scalar>(n, alpha);
  const Scalar c0 = l1_leading_coefficient(f.grid().dt(), alpha);
  const VectorX<Scalar>& v = f.values();
  VectorX<Scalar> increments = v.tail(n) - v.head(n);
  VectorX<Scalar> out = VectorX<Scalar>::Zero(n + 1);
  for (Eigen::Index j = 1; j <= n; ++j) {
    // sum_{k=0}^{j-1} b_{j-1-k} d_k
    out[j] = c0 * increments.head(j).dot(b.head(j).reverse());
  }
  return f.with_values(std::move(out));
}

/// Product-integration weights for int_0^{t_n} r(s) (t_n - s)^{a-1} E_{a,a}(-c (t_n - s)^a) ds
/// with r piecewise linear on the grid. Panel m covers sigma = t_n - s in
/// [m dt, (m+1) dt]; `near[m]` multiplies r at node n-m and `far[m]` at node n-m-1.
///
/// The kernel moments are integrated exactly through the Riemann-Liouville
/// identities I^1 f(s) = s^a E_{a,a+1}(-c s^a), I^2 f(s) = s^{a+1} E_{a,a+2}(-c s^a).
template <std::floating_point Scalar>
std::pair<VectorX<Scalar>, VectorX<Scalar>> convolution_weights(Eigen::Index n_steps, Scalar dt,
                                                                 Scalar alpha, Scalar c) {
  const MlfParams<Scalar> p1(alpha, alpha + 1);
  const MlfParams<Scalar> p2(alpha, alpha + 2);
  VectorX<Scalar> first(n_steps + 1);   // I^1 f at m dt
  VectorX<Scalar> second(n_steps + 1);  // I^2 f at m dt
  first[0] = second[0] = 0;
  for (Eigen::Index m = 1; m <= n_steps; ++m) {
    const Scalar s = static_cast<Scalar>(m) * dt;
    const Scalar sa = std::pow(s, alpha);
    first[m] = sa * mlf(p1, -c * sa);
    second[m] = s * sa * mlf(p2, -c * sa);
  }
  VectorX<Scalar> near(n_steps);
  VectorX<Scalar> far(n_steps);
  for (Eigen::Index m = 0; m < n_steps; ++m) {
    const Scalar mass = first[m + 1] - first[m];
    // int_a^b (b - sigma) f(sigma) d sigma = I2(b) - I2(a) - (b - a) I1(a)
    const Scalar toward_near = second[m + 1] - second[m] - dt * first[m];
    near[m] = toward_near / dt;
    far[m] = mass - near[m];
  }
  return {std::move(near), std::move(far)};
}

/// int_0^t r(s) (t-s)^{a-1} E_{a,a}(-lambda q (t-s)^a) ds at every node, by
/// product integration with r piecewise linear between nodes.
template <std::floating_point Scalar>
GridFunction<Scalar> singular_convolution(const GridFunction<Scalar>& r, Scalar alpha,
                                          Scalar lambda, Scalar q) {
  detail::require_fractional_order(alpha);
  if (!(lambda > 0) || !(q > 0)) throw DomainError("singular_convolution requires lambda, q > 0");
  const Eigen::Index n = r.grid().n_steps();
  const auto [near, far] = convolution_weights<Scalar>(n, r.grid().dt(), alpha, lambda * q);
  const VectorX<Scalar>& v = r.values();
  VectorX<Scalar> out = VectorX<Scalar>::Zero(n + 1);
  for (Eigen::Index j = 1; j <= n; ++j) {
    // panel m pairs with nodes j-m (near) and j-m-1 (far)
    out[j] = near.head(j).dot(v.segment(1, j).reverse()) + far.head(j).dot(v.head(j).reverse());
  }
  return r.with_values(std::move(out));
}

/// max over node pairs i < j of |f_j - f_i| - sup|df| (t_j - t_i)^a / Gamma(a+1).
/// A non-positive value certifies the generalized mean value modulus bound on
/// the sampled data.
template <std::floating_point Scalar>
Scalar mean_value_modulus(const GridFunction<Scalar>& f, const GridFunction<Scalar>& df,
                          Scalar alpha) {
  if (f.size() != df.size()) throw SizeMismatch("mean_value_modulus: length mismatch");
  if (!(alpha > 0 && alpha <= 1)) throw DomainError("mean_value_modulus requires 0 < alpha <= 1");
  const Scalar sup = df.sup_norm();
  const Scalar scale = sup / tgamma<Scalar>(alpha + 1);
  const Eigen::Index n = f.size();
  const TimeGrid<Scalar>& grid = f.grid();
  // Pairs with equal separation share the same bound, so only the largest
  // variation per separation matters.
  Scalar worst = -std::numeric_limits<Scalar>::infinity();
  for (Eigen::Index gap = 1; gap < n; ++gap) {
    const Scalar variation =
        (f.values().tail(n - gap) - f.values().head(n - gap)).cwiseAbs().maxCoeff();
    const Scalar bound = scale * std::pow(static_cast<Scalar>(gap) * grid.dt(), alpha);
    worst = std::max(worst, variation - bound);
  }
  return worst;
}

}  // namespace tfsrc
