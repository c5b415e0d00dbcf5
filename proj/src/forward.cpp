#include "tfsrc/forward.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace tfsrc {

namespace {

void check_modal(const ModalVector& v, const EigenSystem& sys, const char* name) {
  if (v.size() != sys.size()) {
    throw SizeMismatch(std::string(name) + " has " + std::to_string(v.size()) +
                       " modal coefficients, eigensystem has " + std::to_string(sys.size()));
  }
}

}  // namespace

Scenario::Scenario(double alpha, EigenSystem sys, Measurement meas, GridFunction<double> a,
                   ModalVector g, ModalVector h, std::optional<GridFunction<double>> e_data,
                   Policy policy)
    : alpha_(alpha),
      sys_(std::move(sys)),
      meas_(std::move(meas)),
      a_(std::move(a)),
      g_(std::move(g)),
      h_(std::move(h)),
      e_data_(std::move(e_data)),
      policy_(policy) {
  detail::require_fractional_order(alpha_);
  check_modal(g_, sys_, "g");
  check_modal(h_, sys_, "h");
  if (meas_.size() != sys_.size()) throw SizeMismatch("measurement and eigensystem sizes differ");
  if (e_data_ && !(e_data_->grid() == a_.grid())) {
    throw SizeMismatch("E(t) and a(t) are sampled on different grids");
  }
  if (!a_.values().allFinite() || !g_.allFinite() || !h_.allFinite() ||
      (e_data_ && !e_data_->values().allFinite())) {
    throw DomainError("scenario data contain non-finite values");
  }

  q_a_ = a_.values().minCoeff();
  cap_q_a_ = a_.values().maxCoeff() + 1e-12;
  f_g_ = apply(meas_, g_);
  if (e_data_) dalpha_e_ = caputo_l1(*e_data_, alpha_);

  if (policy_ == Policy::Unchecked) return;
  if (!(q_a_ > 0)) {
    throw AssumptionViolation("a(t) must stay positive on [0, T] (min sample " +
                              std::to_string(q_a_) + ")");
  }
  if (!(std::abs(f_g_) >= 1e-12)) {
    throw AssumptionViolation("F[g] must be nonzero (got " + std::to_string(f_g_) + ")");
  }
  if (e_data_) {
    // E(0) = F[h] may vanish; the samples after t = 0 must be nonzero and
    // keep one sign.
    const auto tail = e_data_->values().tail(e_data_->size() - 1).array();
    const bool positive = (tail > 0).all();
    const bool negative = (tail < 0).all();
    if (!positive && !negative) {
      throw AssumptionViolation("E(t) must be nonzero without sign change on (0, T]");
    }
  }
}

const GridFunction<double>& Scenario::e_data() const {
  if (!e_data_) throw DomainError("scenario carries no measurement data E(t)");
  return *e_data_;
}

const GridFunction<double>& Scenario::dalpha_e() const {
  if (!dalpha_e_) throw DomainError("scenario carries no measurement data E(t)");
  return *dalpha_e_;
}

Scenario Scenario::with_e_data(GridFunction<double> e) const {
  return Scenario(alpha_, sys_, meas_, a_, g_, h_, std::move(e), policy_);
}

Scenario Scenario::with_a(GridFunction<double> a) const {
  return Scenario(alpha_, sys_, meas_, std::move(a), g_, h_, e_data_, policy_);
}

Scenario Scenario::with_g(ModalVector g) const {
  return Scenario(alpha_, sys_, meas_, a_, std::move(g), h_, e_data_, policy_);
}

Scenario Scenario::with_h(ModalVector h) const {
  return Scenario(alpha_, sys_, meas_, a_, g_, std::move(h), e_data_, policy_);
}

ForwardSolution solve_forward(const Scenario& sc, const GridFunction<double>& r, bool split) {
  if (!(r.grid() == sc.grid())) throw SizeMismatch("r(t) is not sampled on the scenario grid");
  const Eigen::Index rows = sc.grid().size();
  const Eigen::Index modes = sc.sys().size();
  Eigen::MatrixXd u(rows, modes);
  Eigen::MatrixXd u_homogeneous;
  Eigen::MatrixXd u_source;
  if (split) {
    u_homogeneous.resize(rows, modes);
    u_source.resize(rows, modes);
  }
  for (Eigen::Index xi = 0; xi < modes; ++xi) {
    const double lambda = sc.sys().eigenvalue(xi);
    if (split) {
      ModeTrajectory<double> mode = solve_mode(sc.alpha(), lambda, sc.a(), r, sc.g()[xi], sc.h()[xi]);
      u.col(xi) = mode.total;
      u_homogeneous.col(xi) = mode.homogeneous;
      u_source.col(xi) = mode.source;
    } else {
      u.col(xi) = integrate_mode(sc.alpha(), lambda, sc.a(), r, sc.g()[xi], sc.h()[xi]);
    }
  }
  GridFunction<double> track(sc.grid(), u * sc.meas().signed_coefficients());
  GridFunction<double> track_caputo = caputo_l1(track, sc.alpha());
  return {std::move(u), std::move(u_homogeneous), std::move(u_source), std::move(track),
          std::move(track_caputo)};
}

long double regularity_bound(const Scenario& sc, long double c2) {
  if (!(c2 >= 0)) throw DomainError("regularity_bound requires c2 >= 0");
  const double gamma = sc.meas().gamma();
  const long double factor = std::pow(1.0L / sc.sys().inf_eigenvalue() + 1.0L, 2.0L + gamma);
  return factor * (sobolev_norm(sc.h(), sc.sys(), 2 + gamma) +
                   c2 * sobolev_norm(sc.g(), sc.sys(), 1 + gamma) / sc.q_a());
}

}  // namespace tfsrc
