#include "isslab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include <nlohmann/json.hpp>

#include "isslab/errors.hpp"

namespace isslab {

void SolverConfig::validate(double horizon) const {
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "cfl_safety must lie in (0, 1]");
  }
  if (max_steps == 0) throw Error(ErrorCode::invalid_argument, "max_steps must be positive");
  if (!(dt_max > 0.0)) throw Error(ErrorCode::invalid_argument, "dt_max must be positive");
  if (output_times.empty()) return;
  for (std::size_t i = 0; i < output_times.size(); ++i) {
    const double t = output_times[i];
    if (!(t >= 0.0 && t <= horizon)) {
      throw Error(ErrorCode::invalid_argument, "output time outside [0, T]");
    }
    if (i > 0 && !(t > output_times[i - 1])) {
      throw Error(ErrorCode::invalid_argument, "output times must strictly increase");
    }
  }
  if (output_times.back() != horizon) {
    throw Error(ErrorCode::invalid_argument, "output times must end at the horizon");
  }
}

std::vector<double> SolverConfig::uniform_times(double horizon, int count) {
  if (count < 1) throw Error(ErrorCode::invalid_argument, "need at least one output interval");
  std::vector<double> t(static_cast<std::size_t>(count) + 1);
  for (int k = 0; k <= count; ++k) t[k] = horizon * k / count;
  t.back() = horizon;
  return t;
}

std::string to_string(SolverConfig::Scheme scheme) {
  return scheme == SolverConfig::Scheme::rk4 ? "rk4" : "semi_implicit";
}

SolverConfig::Scheme scheme_from_string(const std::string& name) {
  if (name == "rk4") return SolverConfig::Scheme::rk4;
  if (name == "semi_implicit") return SolverConfig::Scheme::semi_implicit;
  throw Error(ErrorCode::scenario_error, "unknown solver scheme '" + name + "'");
}

std::pair<double, double> boundary_derivatives(const GridProfile& profile) {
  const auto u = profile.values();
  const std::size_t n = u.size() - 1;
  const double h = profile.grid().h();
  return {(-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h),
          (3.0 * u[n] - 4.0 * u[n - 1] + u[n - 2]) / (2.0 * h)};
}

namespace {

constexpr double kSingularSolve = 1e-12;

class Stepper {
 public:
  explicit Stepper(const PdeProblem& problem)
      : p_(problem),
        n_(problem.grid.n_nodes()),
        h_(problem.grid.h()),
        stage_(GridProfile::zeros(problem.grid)),
        coeff_(n_) {}

  /// Fills du/dt at interior nodes of u; coefficients stay in coeff_.
  void rhs(double t, std::span<const double> u, const GridProfile& frozen,
           std::vector<double>& out) {
    std::copy(u.begin(), u.end(), stage_.mutable_values().begin());
    evaluate_coefficients(p_, t, stage_, frozen, coeff_);
    out.assign(n_, 0.0);
    const double inv_h2 = 1.0 / (h_ * h_), inv_2h = 0.5 / h_;
    const bool has_g = !p_.gradient_squared.is_zero();
    for (std::size_t i = 1; i + 1 < n_; ++i) {
      const double d1 = (u[i + 1] - u[i - 1]) * inv_2h;
      double v = coeff_.a[i] * (u[i + 1] - 2.0 * u[i] + u[i - 1]) * inv_h2 + coeff_.b[i] * d1 +
                 coeff_.c[i] * u[i] + coeff_.f[i];
      if (has_g) v += coeff_.g[i] * d1 * d1;
      out[i] = v;
    }
  }

  /// Closure coefficients {p, q} of one Robin end; `denominator` is 3/(2h) + p.
  std::pair<double, double> flux(const BoundaryCondition& bc, double t, const GridProfile& frozen) {
    const auto pq = bc.flux_coefficients(t, frozen);
    if (std::abs(1.5 / h_ + pq.first) < kSingularSolve) {
      throw Error(ErrorCode::singular_boundary_solve, "one-sided boundary closure is singular");
    }
    return pq;
  }

  void close(double t, std::span<double> u, const GridProfile& frozen) {
    const std::size_t last = n_ - 1;
    if (p_.left.is_dirichlet()) {
      u[0] = p_.left.data(t);
    } else {
      const auto [p, q] = flux(p_.left, t, frozen);
      u[0] = ((4.0 * u[1] - u[2]) / (2.0 * h_) - q) / (1.5 / h_ + p);
    }
    if (p_.right.is_dirichlet()) {
      u[last] = p_.right.data(t);
    } else {
      const auto [p, q] = flux(p_.right, t, frozen);
      u[last] = ((4.0 * u[last - 1] - u[last - 2]) / (2.0 * h_) + q) / (1.5 / h_ + p);
    }
  }

  /// Stability-limited step from the coefficients left in coeff_ by rhs().
  double stable_dt(std::span<const double> u, const SolverConfig& cfg) const {
    double a_max = 0.0, speed = 0.0, c_max = 0.0;
    const double inv_2h = 0.5 / h_;
    for (std::size_t i = 1; i + 1 < n_; ++i) {
      const double d1 = (u[i + 1] - u[i - 1]) * inv_2h;
      a_max = std::max(a_max, coeff_.a[i]);
      speed = std::max(speed, std::abs(coeff_.b[i] + 2.0 * coeff_.g[i] * d1));
      c_max = std::max(c_max, std::abs(coeff_.c[i]));
    }
    double dt = kInf;
    if (cfg.scheme == SolverConfig::Scheme::rk4) {
      const double denom = 2.0 * a_max + h_ * speed;
      if (denom > 0.0) dt = cfg.cfl_safety * h_ * h_ / denom;
    } else if (speed > 0.0) {
      dt = cfg.cfl_safety * h_ / speed;
    }
    if (c_max > 0.0) dt = std::min(dt, cfg.cfl_safety / c_max);
    dt = std::min(dt, cfg.dt_max);
    if (!std::isfinite(dt)) dt = cfg.cfl_safety * h_;
    return dt;
  }

  void rk4_step(double t, double dt, std::vector<double>& u, const GridProfile& frozen) {
    // k1 is already in k1_ (computed by the caller to size the step).
    const double half = 0.5 * dt;
    auto stage = [&](const std::vector<double>& k, double scale, double ts) {
      tmp_ = u;
      for (std::size_t i = 1; i + 1 < n_; ++i) tmp_[i] += scale * k[i];
      close(ts, tmp_, frozen);
    };
    stage(k1_, half, t + half);
    rhs(t + half, tmp_, frozen, k2_);
    stage(k2_, half, t + half);
    rhs(t + half, tmp_, frozen, k3_);
    stage(k3_, dt, t + dt);
    rhs(t + dt, tmp_, frozen, k4_);
    for (std::size_t i = 1; i + 1 < n_; ++i) {
      u[i] += dt / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    }
    close(t + dt, u, frozen);
  }

  /// Backward Euler in the diffusion, explicit in everything else; Robin
  /// rows eliminate the third one-sided point using the neighbouring row.
  void semi_implicit_step(double t, double dt, std::vector<double>& u, const GridProfile& frozen) {
    const std::size_t last = n_ - 1;
    const double t1 = t + dt;
    lower_.assign(n_, 0.0);
    diag_.assign(n_, 1.0);
    upper_.assign(n_, 0.0);
    rhs_.assign(n_, 0.0);
    for (std::size_t i = 1; i < last; ++i) {
      const double alpha = dt * coeff_.a[i] / (h_ * h_);
      lower_[i] = -alpha;
      diag_[i] = 1.0 + 2.0 * alpha;
      upper_[i] = -alpha;
      rhs_[i] = u[i] + dt * (k1_[i] - coeff_.a[i] * (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h_ * h_));
    }
    if (p_.left.is_dirichlet()) {
      rhs_[0] = p_.left.data(t1);
    } else {
      const auto [p, q] = flux(p_.left, t1, frozen);
      const double alpha = -upper_[1];
      if (!(alpha > kSingularSolve)) {
        throw Error(ErrorCode::singular_boundary_solve, "Robin row needs a > 0 next to x = 0");
      }
      diag_[0] = -2.0 - 2.0 * h_ * p;
      upper_[0] = 2.0 - 1.0 / alpha;
      rhs_[0] = 2.0 * h_ * q - rhs_[1] / alpha;
    }
    if (p_.right.is_dirichlet()) {
      rhs_[last] = p_.right.data(t1);
    } else {
      const auto [p, q] = flux(p_.right, t1, frozen);
      const double alpha = -lower_[last - 1];
      if (!(alpha > kSingularSolve)) {
        throw Error(ErrorCode::singular_boundary_solve, "Robin row needs a > 0 next to x = 1");
      }
      lower_[last] = -2.0 + 1.0 / alpha;
      diag_[last] = 2.0 + 2.0 * h_ * p;
      rhs_[last] = 2.0 * h_ * q + rhs_[last - 1] / alpha;
    }
    // Thomas algorithm.
    for (std::size_t i = 1; i < n_; ++i) {
      const double m = lower_[i] / diag_[i - 1];
      diag_[i] -= m * upper_[i - 1];
      rhs_[i] -= m * rhs_[i - 1];
    }
    u[last] = rhs_[last] / diag_[last];
    for (std::size_t i = last; i-- > 0;) u[i] = (rhs_[i] - upper_[i] * u[i + 1]) / diag_[i];
  }

  std::vector<double>& k1() { return k1_; }

 private:
  const PdeProblem& p_;
  std::size_t n_;
  double h_;
  GridProfile stage_;
  CoefficientArrays coeff_;
  std::vector<double> k1_, k2_, k3_, k4_, tmp_;
  std::vector<double> lower_, diag_, upper_, rhs_;
};

void check_finite(std::span<const double> u, double t) {
  double m = 0.0;
  for (double v : u) m = std::max(m, std::isnan(v) ? kInf : std::abs(v));
  if (!(m <= kBlowUpThreshold)) {
    throw Error(ErrorCode::blow_up, "solution left [-1e12, 1e12] at t = " + std::to_string(t));
  }
}

}  // namespace

std::vector<double> step_spatial_operator(const PdeProblem& problem, double t,
                                          const GridProfile& profile) {
  Stepper s(problem);
  std::vector<double> out;
  s.rhs(t, profile.values(), profile, out);
  return out;
}

GridProfile apply_boundary(const PdeProblem& problem, double t, const GridProfile& profile) {
  Stepper s(problem);
  std::vector<double> v(profile.values().begin(), profile.values().end());
  s.close(t, v, profile);
  return GridProfile(profile.grid(), std::move(v));
}

Trajectory integrate(const PdeProblem& problem, const SolverConfig& config) {
  config.validate(problem.horizon);
  if (!(problem.initial.grid() == problem.grid)) {
    throw Error(ErrorCode::invalid_argument, "initial profile is not on the problem grid");
  }
  const double horizon = problem.horizon;
  const std::vector<double> outputs =
      config.output_times.empty() ? std::vector<double>{0.0, horizon} : config.output_times;

  Trajectory traj;
  Stepper stepper(problem);
  GridProfile frozen = apply_boundary(problem, 0.0, problem.initial);
  std::vector<double> u(frozen.values().begin(), frozen.values().end());
  std::vector<double> prev;

  auto record = [&](double t, std::span<const double> values) {
    check_finite(values, t);
    GridProfile snap(problem.grid, std::vector<double>(values.begin(), values.end()));
    traj.boundary_derivatives.push_back(boundary_derivatives(snap));
    traj.times.push_back(t);
    traj.snapshots.push_back(std::move(snap));
  };

  std::size_t next = 0;
  double t = 0.0;
  while (next < outputs.size() && outputs[next] <= t) record(outputs[next++], u);

  std::vector<double> blend(u.size());
  std::size_t steps = 0;
  while (next < outputs.size()) {
    if (++steps > config.max_steps) {
      throw Error(ErrorCode::step_budget_exceeded,
                  "exceeded " + std::to_string(config.max_steps) + " steps at t = " +
                      std::to_string(t));
    }
    // Non-local functionals stay frozen at the step-start profile.
    std::copy(u.begin(), u.end(), frozen.mutable_values().begin());
    stepper.rhs(t, u, frozen, stepper.k1());
    double dt = stepper.stable_dt(u, config);
    const bool final_step = dt >= horizon - t;
    if (final_step) dt = horizon - t;

    prev = u;
    if (config.scheme == SolverConfig::Scheme::rk4) {
      stepper.rk4_step(t, dt, u, frozen);
    } else {
      stepper.semi_implicit_step(t, dt, u, frozen);
    }
    const double t_new = final_step ? horizon : t + dt;
    check_finite(u, t_new);
    traj.dt_history.push_back(dt);

    while (next < outputs.size() && outputs[next] <= t_new) {
      const double w = (outputs[next] - t) / (t_new - t);
      for (std::size_t i = 0; i < u.size(); ++i) blend[i] = prev[i] + w * (u[i] - prev[i]);
      record(outputs[next++], blend);
    }
    t = t_new;
  }
  return traj;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory) {
  os << "t,x,u\n";
  char buf[96];
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    const auto& snap = trajectory.snapshots[k];
    for (std::size_t i = 0; i < snap.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", trajectory.times[k],
                    snap.grid().x(i), snap[i]);
      os << buf;
    }
  }
}

nlohmann::json trajectory_summary(const Trajectory& trajectory) {
  nlohmann::json j;
  std::vector<double> sup, u0, u1, ux0, ux1;
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    const auto& snap = trajectory.snapshots[k];
    sup.push_back(snap.sup_norm());
    u0.push_back(snap[0]);
    u1.push_back(snap[snap.size() - 1]);
    ux0.push_back(trajectory.boundary_derivatives[k].first);
    ux1.push_back(trajectory.boundary_derivatives[k].second);
  }
  j["times"] = trajectory.times;
  j["sup_norm"] = sup;
  j["u_left"] = u0;
  j["u_right"] = u1;
  j["ux_left"] = ux0;
  j["ux_right"] = ux1;
  const auto& dts = trajectory.dt_history;
  j["steps"] = dts.size();
  if (!dts.empty()) {
    j["dt_min"] = *std::min_element(dts.begin(), dts.end());
    j["dt_max"] = *std::max_element(dts.begin(), dts.end());
  }
  return j;
}

}  // namespace isslab
