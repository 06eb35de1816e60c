#include "isslab/iss_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "isslab/errors.hpp"

namespace isslab {

WeightedNorm::WeightedNorm(WeightFunction weight, SpatialGrid grid)
    : weight_(std::move(weight)), grid_(grid), eta_(grid.n_nodes()) {
  for (std::size_t i = 0; i < eta_.size(); ++i) {
    eta_[i] = weight_.value(grid_.x(i));
    if (!(eta_[i] > 0.0) || !std::isfinite(eta_[i])) {
      throw Error(ErrorCode::invalid_weight,
                  "weight is not positive at node " + std::to_string(i));
    }
  }
  const auto [lo, hi] = std::minmax_element(eta_.begin(), eta_.end());
  min_eta_ = *lo;
  max_eta_ = *hi;
}

double WeightedNorm::operator()(std::span<const double> values) const {
  if (values.size() != eta_.size()) {
    throw Error(ErrorCode::invalid_argument, "profile size does not match the weighted norm");
  }
  double m = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) m = std::max(m, std::abs(values[i]) / eta_[i]);
  return m;
}

double WeightedNorm::interior(std::span<const double> values) const {
  if (values.size() != eta_.size()) {
    throw Error(ErrorCode::invalid_argument, "profile size does not match the weighted norm");
  }
  double m = 0.0;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    m = std::max(m, std::abs(values[i]) / eta_[i]);
  }
  return m;
}

double weighted_sup_norm(const GridProfile& profile, const WeightedNorm& norm) {
  if (!(profile.grid() == norm.grid())) {
    throw Error(ErrorCode::invalid_argument, "profile is not on the weighted norm's grid");
  }
  return norm(profile.values());
}

// ---------------------------------------------------------------------------

FadingMemoryTracker::FadingMemoryTracker(double zeta) : zeta_(zeta) {
  if (!(zeta >= 0.0) || !std::isfinite(zeta)) {
    throw Error(ErrorCode::invalid_zeta, "zeta must be finite and >= 0");
  }
}

void FadingMemoryTracker::update(double t, double g) {
  if (!(g >= 0.0) || !std::isfinite(g)) {
    throw Error(ErrorCode::invalid_argument, "tracker input must be finite and >= 0");
  }
  if (started_ && t < last_time_) {
    throw Error(ErrorCode::nonmonotone_time, "tracker update at t = " + std::to_string(t) +
                                                 " precedes t = " + std::to_string(last_time_));
  }
  current_max_ = started_ ? std::max(current_max_ * std::exp(-zeta_ * (t - last_time_)), g) : g;
  last_time_ = t;
  started_ = true;
}

double FadingMemoryTracker::value_at(double t) const {
  if (!started_) return 0.0;
  if (t < last_time_) {
    throw Error(ErrorCode::nonmonotone_time, "tracker query precedes the last update");
  }
  return current_max_ * std::exp(-zeta_ * (t - last_time_));
}

// ---------------------------------------------------------------------------

BoundaryTermSpec BoundaryTermSpec::general(DisturbanceSignal g0, DisturbanceSignal g1,
                                           DisturbanceSignal k0, DisturbanceSignal k1) {
  BoundaryTermSpec s;
  s.mode = Mode::general;
  s.g0 = std::move(g0);
  s.g1 = std::move(g1);
  s.k0 = std::move(k0);
  s.k1 = std::move(k1);
  return s;
}

BoundaryTermSpec BoundaryTermSpec::robin(Mode mode, double mu0, double lambda0, double mu1,
                                         double lambda1) {
  if (mode != Mode::robin_left && mode != Mode::robin_right && mode != Mode::robin_both) {
    throw Error(ErrorCode::invalid_argument, "not a Robin boundary-term mode");
  }
  BoundaryTermSpec s;
  s.mode = mode;
  s.mu0 = mu0;
  s.lambda0 = lambda0;
  s.mu1 = mu1;
  s.lambda1 = lambda1;
  return s;
}

BoundaryTermSpec BoundaryTermSpec::nonlocal(double lambda0, double lambda1) {
  BoundaryTermSpec s;
  s.mode = Mode::nonlocal;
  s.lambda0 = lambda0;
  s.lambda1 = lambda1;
  return s;
}

std::string to_string(BoundaryTermSpec::Mode mode) {
  using M = BoundaryTermSpec::Mode;
  switch (mode) {
    case M::dirichlet: return "dirichlet";
    case M::general: return "general";
    case M::robin_left: return "robin_left";
    case M::robin_right: return "robin_right";
    case M::robin_both: return "robin_both";
    case M::nonlocal: return "nonlocal";
  }
  return "unknown";
}

BoundaryTermSpec::Mode boundary_mode_from_string(const std::string& name) {
  using M = BoundaryTermSpec::Mode;
  for (M m : {M::dirichlet, M::general, M::robin_left, M::robin_right, M::robin_both,
              M::nonlocal}) {
    if (to_string(m) == name) return m;
  }
  throw Error(ErrorCode::scenario_error, "unknown boundary-term mode '" + name + "'");
}

namespace {

// (g / eta) |ux - (eta'/eta + s k / g) u| with s = +1 at x = 0 and -1 at x = 1.
double general_term(double g, double k, double sign, double eta, double deta, double u,
                    double ux) {
  return (g / eta) * std::abs(ux - (deta / eta + sign * k / g) * u);
}

double left_robin_term(const BoundaryTermSpec& s, const BoundarySample& b, double eta,
                       double deta) {
  const double denom = s.mu0 * deta - s.lambda0 * eta;
  if (!(denom < -kDegenerateDenominator)) {
    throw Error(ErrorCode::degenerate_denominator,
                "left Robin denominator mu0 eta'(0) - lambda0 eta(0) = " + std::to_string(denom) +
                    " is not negative");
  }
  return std::abs(s.mu0 * b.ux0 - s.lambda0 * b.u0) / std::abs(denom);
}

double right_robin_term(const BoundaryTermSpec& s, const BoundarySample& b, double eta,
                        double deta) {
  const double denom = s.mu1 * deta + s.lambda1 * eta;
  if (!(denom > kDegenerateDenominator)) {
    throw Error(ErrorCode::degenerate_denominator,
                "right Robin denominator mu1 eta'(1) + lambda1 eta(1) = " +
                    std::to_string(denom) + " is not positive");
  }
  return std::abs(s.mu1 * b.ux1 + s.lambda1 * b.u1) / denom;
}

void require_general(double g, double k, const char* side) {
  if (!(g > 0.0) || !(k >= 1.0)) {
    throw Error(ErrorCode::invalid_argument,
                std::string(side) + " boundary functions need g > 0 and k >= 1");
  }
}

}  // namespace

std::pair<double, double> boundary_terms(const BoundaryTermSpec& spec,
                                         const BoundarySample& b,
                                         const WeightFunction& weight) {
  using M = BoundaryTermSpec::Mode;
  const double eta0 = weight.value(0.0), eta1 = weight.value(1.0);
  const double deta0 = weight.first(0.0), deta1 = weight.first(1.0);
  double r0 = std::abs(b.u0) / eta0;
  double r1 = std::abs(b.u1) / eta1;

  switch (spec.mode) {
    case M::dirichlet: break;
    case M::general: {
      const double g0 = spec.g0(b.t), k0 = spec.k0(b.t), g1 = spec.g1(b.t), k1 = spec.k1(b.t);
      require_general(g0, k0, "left");
      require_general(g1, k1, "right");
      r0 = std::min(r0, general_term(g0, k0, +1.0, eta0, deta0, b.u0, b.ux0));
      r1 = std::min(r1, general_term(g1, k1, -1.0, eta1, deta1, b.u1, b.ux1));
      break;
    }
    case M::robin_left: r0 = std::min(r0, left_robin_term(spec, b, eta0, deta0)); break;
    case M::robin_right: r1 = std::min(r1, right_robin_term(spec, b, eta1, deta1)); break;
    case M::robin_both:
      r0 = std::min(r0, left_robin_term(spec, b, eta0, deta0));
      r1 = std::min(r1, right_robin_term(spec, b, eta1, deta1));
      break;
    case M::nonlocal: {
      if (weight.family() != WeightFunction::Family::cosine) {
        throw Error(ErrorCode::invalid_argument, "non-local boundary terms need a cosine weight");
      }
      const double theta = weight.theta();
      const double left_den = b.beta0 + spec.lambda0;
      const double right_den = b.beta1 + spec.lambda1 - theta * std::tan(theta);
      if (!(left_den > kDegenerateDenominator) || !(right_den > kDegenerateDenominator)) {
        throw Error(ErrorCode::degenerate_denominator,
                    "non-local boundary gains are not positive");
      }
      r0 = std::min(r0, general_term(1.0 / left_den, 1.0, +1.0, eta0, deta0, b.u0, b.ux0));
      r1 = std::min(r1, general_term(1.0 / right_den, 1.0, -1.0, eta1, deta1, b.u1, b.ux1));
      break;
    }
  }
  return {r0, r1};
}

double default_bound_tolerance(double h) noexcept { return 1e-6 + 10.0 * h * h; }

// ---------------------------------------------------------------------------

double BoundTrace::max_excess() const noexcept {
  double m = -kInf;
  for (std::size_t i = 0; i < times.size(); ++i) m = std::max(m, lhs[i] - rhs[i]);
  return m;
}

double BoundTrace::tightness() const noexcept {
  double m = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (rhs[i] > 0.0) {
      m = std::max(m, lhs[i] / rhs[i]);
    } else if (lhs[i] > 0.0) {
      return kInf;
    }
  }
  return m;
}

double BoundTrace::tightest_time() const noexcept {
  double best = -1.0, at = times.empty() ? 0.0 : times.front();
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double ratio = rhs[i] > 0.0 ? lhs[i] / rhs[i] : (lhs[i] > 0.0 ? kInf : 0.0);
    if (ratio > best) {
      best = ratio;
      at = times[i];
    }
  }
  return at;
}

void write_csv(std::ostream& os, const BoundTrace& trace) {
  os << "t,lhs,rhs,rhs_ic,rhs_boundary,rhs_forcing,violation\n";
  char buf[32];
  auto put = [&](double v, char sep) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf << sep;
  };
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const double excess = trace.lhs[i] - trace.rhs[i];
    put(trace.times[i], ',');
    put(trace.lhs[i], ',');
    put(trace.rhs[i], ',');
    put(trace.rhs_ic[i], ',');
    put(trace.rhs_boundary[i], ',');
    put(trace.rhs_forcing[i], ',');
    put(excess > trace.tolerance ? excess : 0.0, '\n');
  }
}

// ---------------------------------------------------------------------------

EnvelopeBuilder::EnvelopeBuilder(WeightedNorm norm, BoundaryTermSpec spec, double sigma,
                                 double zeta, double tolerance, double max_zeta_fraction)
    : norm_(std::move(norm)),
      spec_(std::move(spec)),
      boundary_(std::max(zeta, 0.0)),
      forcing_(std::max(zeta, 0.0)) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::invalid_zeta, "sigma must be > 0");
  if (!(zeta >= 0.0) || !(zeta < sigma) || zeta > max_zeta_fraction * sigma) {
    throw Error(ErrorCode::invalid_zeta, "zeta = " + std::to_string(zeta) +
                                             " outside [0, " +
                                             std::to_string(max_zeta_fraction) + " sigma]");
  }
  if (!(tolerance >= 0.0)) throw Error(ErrorCode::invalid_argument, "tolerance must be >= 0");
  trace_.sigma = sigma;
  trace_.zeta = zeta;
  trace_.tolerance = tolerance;
}

void EnvelopeBuilder::append(const GridProfile& u, const BoundarySample& boundary,
                             std::span<const double> forcing) {
  const double t = boundary.t;
  if (!trace_.times.empty() && !(t > trace_.times.back())) {
    throw Error(ErrorCode::nonmonotone_time, "envelope samples must strictly increase in time");
  }
  if (trace_.times.empty()) start_time_ = t;

  const double lhs = weighted_sup_norm(u, norm_);
  last_r_ = boundary_terms(spec_, boundary, norm_.weight());
  boundary_.update(t, std::max(last_r_.first, last_r_.second));
  forcing_.update(t, norm_.interior(forcing) / (trace_.sigma - trace_.zeta));

  const double lhs0 = trace_.lhs.empty() ? lhs : trace_.lhs.front();
  const double ic = std::exp(-trace_.zeta * (t - start_time_)) * lhs0;
  const double bnd = boundary_.value();
  const double frc = forcing_.value();
  const double rhs = std::max({ic, bnd, frc});

  trace_.times.push_back(t);
  trace_.lhs.push_back(lhs);
  trace_.rhs.push_back(rhs);
  trace_.rhs_ic.push_back(ic);
  trace_.rhs_boundary.push_back(bnd);
  trace_.rhs_forcing.push_back(frc);
  if (lhs > rhs + trace_.tolerance) trace_.violations.emplace_back(t, lhs - rhs);
}

}  // namespace isslab
