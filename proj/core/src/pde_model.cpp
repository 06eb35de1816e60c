#include "isslab/pde_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace isslab {

CoefficientField CoefficientField::constant(double value) {
  CoefficientField c;
  c.kind_ = Kind::constant;
  c.value_ = value;
  return c;
}

CoefficientField CoefficientField::space_time(SpaceTimeFn fn, std::optional<Interval> range) {
  if (!fn) throw Error(ErrorCode::invalid_argument, "empty space-time evaluator");
  CoefficientField c;
  c.kind_ = Kind::space_time;
  c.space_time_ = std::move(fn);
  c.declared_range_ = range;
  return c;
}

CoefficientField CoefficientField::separable(DisturbanceSignal signal, SpatialShape shape) {
  if (signal.is_zero()) return {};
  CoefficientField c;
  c.kind_ = Kind::space_time;
  c.space_time_ = [signal, shape](double t, double x) { return signal(t) * shape(x); };
  c.separable_ = std::make_pair(std::move(signal), shape);
  return c;
}

CoefficientField CoefficientField::state(StateFn fn, std::optional<Interval> range) {
  if (!fn) throw Error(ErrorCode::invalid_argument, "empty state evaluator");
  CoefficientField c;
  c.kind_ = Kind::state;
  c.state_ = std::move(fn);
  c.declared_range_ = range;
  return c;
}

CoefficientField CoefficientField::of_state(ScalarFunction fn) {
  if (fn.is_constant()) return constant(fn(0.0));
  CoefficientField c;
  c.kind_ = Kind::state;
  c.state_ = [fn](double, double, double u) { return fn(u); };
  c.scalar_ = std::move(fn);
  return c;
}

CoefficientField CoefficientField::nonlocal(ProfileFunctional fn) {
  if (fn.terms().empty()) return constant(fn.constant());
  CoefficientField c;
  c.kind_ = Kind::nonlocal;
  c.functional_ = std::move(fn);
  return c;
}

double CoefficientField::evaluate(double t, double x, double u_point,
                                  const GridProfile& profile) const {
  switch (kind_) {
    case Kind::constant: return value_;
    case Kind::space_time: return space_time_(t, x);
    case Kind::state: return state_(t, x, u_point);
    case Kind::nonlocal: return (*functional_)(profile);
  }
  return 0.0;
}

void CoefficientField::evaluate_all(double t, const GridProfile& profile,
                                    std::span<double> out) const {
  const auto& grid = profile.grid();
  switch (kind_) {
    case Kind::constant: std::fill(out.begin(), out.end(), value_); return;
    case Kind::space_time:
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = space_time_(t, grid.x(i));
      return;
    case Kind::state:
      if (scalar_) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*scalar_)(profile[i]);
      } else {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = state_(t, grid.x(i), profile[i]);
      }
      return;
    case Kind::nonlocal: std::fill(out.begin(), out.end(), (*functional_)(profile)); return;
  }
}

std::optional<Interval> CoefficientField::range(double horizon) const {
  switch (kind_) {
    case Kind::constant: return Interval::point(value_);
    case Kind::space_time:
      if (separable_) return separable_->first.range(horizon) * separable_->second.range();
      return declared_range_;
    case Kind::state:
      if (scalar_) return scalar_->range();
      return declared_range_;
    case Kind::nonlocal: return functional_->range();
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

BoundaryCondition BoundaryCondition::dirichlet(DisturbanceSignal d) {
  BoundaryCondition bc;
  bc.form = Form::dirichlet;
  bc.data = std::move(d);
  return bc;
}

BoundaryCondition BoundaryCondition::robin(double mu, double lambda, DisturbanceSignal d) {
  BoundaryCondition bc;
  bc.form = Form::robin;
  bc.mu = mu;
  bc.lambda = lambda;
  bc.data = std::move(d);
  return bc;
}

BoundaryCondition BoundaryCondition::nonlocal_robin(double lambda, ProfileFunctional beta,
                                                    DisturbanceSignal d) {
  BoundaryCondition bc;
  bc.form = Form::nonlocal_robin;
  bc.lambda = lambda;
  bc.beta = std::move(beta);
  bc.data = std::move(d);
  return bc;
}

std::pair<double, double> BoundaryCondition::flux_coefficients(double t,
                                                               const GridProfile& u) const {
  switch (form) {
    case Form::dirichlet: break;
    case Form::robin:
      if (!(mu > 0.0)) throw Error(ErrorCode::invalid_robin_parameter, "Robin mu must be > 0");
      return {lambda / mu, data(t) / mu};
    case Form::nonlocal_robin: {
      const double b = beta(u);
      if (b < 0.0) {
        throw Error(ErrorCode::negative_boundary_functional,
                    "boundary functional evaluated to " + std::to_string(b));
      }
      return {lambda + b, data(t)};
    }
  }
  throw Error(ErrorCode::invalid_argument, "flux coefficients requested for a Dirichlet end");
}

// ---------------------------------------------------------------------------

void evaluate_coefficients(const PdeProblem& problem, double t, const GridProfile& profile,
                           CoefficientArrays& out) {
  evaluate_coefficients(problem, t, profile, profile, out);
}

void evaluate_coefficients(const PdeProblem& problem, double t, const GridProfile& profile,
                           const GridProfile& nonlocal_profile, CoefficientArrays& out) {
  const std::size_t n = profile.size();
  if (out.a.size() != n) out = CoefficientArrays(n);
  auto eval = [&](const CoefficientField& field, std::vector<double>& dst) {
    const bool frozen = field.kind() == CoefficientField::Kind::nonlocal;
    field.evaluate_all(t, frozen ? nonlocal_profile : profile, dst);
  };
  eval(problem.a, out.a);
  eval(problem.b, out.b);
  eval(problem.c, out.c);
  eval(problem.f, out.f);
  eval(problem.gradient_squared, out.g);

  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(out.a[i]) || !std::isfinite(out.b[i]) || !std::isfinite(out.c[i]) ||
        !std::isfinite(out.f[i]) || !std::isfinite(out.g[i])) {
      std::ostringstream msg;
      msg << "non-finite coefficient at node " << i << ", t = " << t;
      throw Error(ErrorCode::nonfinite_coefficient, msg.str());
    }
    if (out.a[i] < 0.0) {
      std::ostringstream msg;
      msg << "a = " << out.a[i] << " at node " << i << ", t = " << t;
      throw Error(ErrorCode::nonpositive_diffusion, msg.str());
    }
  }
}

CoefficientArrays evaluate_coefficients(const PdeProblem& problem, double t,
                                        const GridProfile& profile) {
  CoefficientArrays out(profile.size());
  evaluate_coefficients(problem, t, profile, out);
  return out;
}

bool ValidationReport::contains(ErrorCode code) const noexcept {
  return std::any_of(issues.begin(), issues.end(),
                     [code](const ValidationIssue& i) { return i.code == code; });
}

namespace {

void check_boundary(const BoundaryCondition& bc, const char* side, const GridProfile& u0,
                    ValidationReport& report) {
  using F = BoundaryCondition::Form;
  if (bc.form == F::robin && !(bc.mu > 0.0)) {
    report.issues.push_back({ErrorCode::invalid_robin_parameter,
                             std::string(side) + " Robin condition needs mu > 0"});
  }
  if (bc.form == F::nonlocal_robin) {
    if (bc.beta.range().lo < 0.0 || bc.beta(u0) < 0.0) {
      report.issues.push_back({ErrorCode::negative_boundary_functional,
                               std::string(side) + " boundary functional can be negative"});
    }
  }
}

}  // namespace

ValidationReport validate_problem(const PdeProblem& problem) {
  ValidationReport report;
  if (!(problem.horizon > 0.0) || !std::isfinite(problem.horizon)) {
    report.issues.push_back({ErrorCode::invalid_argument, "horizon must be positive"});
  }
  if (!(problem.initial.grid() == problem.grid)) {
    report.issues.push_back(
        {ErrorCode::invalid_argument, "initial profile is not on the problem grid"});
    return report;
  }
  check_boundary(problem.left, "left", problem.initial, report);
  check_boundary(problem.right, "right", problem.initial, report);

  if (auto r = problem.a.range(problem.horizon); r && r->lo < 0.0) {
    report.issues.push_back({ErrorCode::nonpositive_diffusion,
                             "declared diffusion range has lower bound " + std::to_string(r->lo)});
  }

  const double horizon = std::isfinite(problem.horizon) ? std::max(problem.horizon, 0.0) : 0.0;
  CoefficientArrays arrays(problem.grid.n_nodes());
  bool diffusion_reported = false;
  bool finite_reported = false;
  for (int k = 0; k < kValidationProbeTimes; ++k) {
    const double t = horizon * k / (kValidationProbeTimes - 1);
    try {
      evaluate_coefficients(problem, t, problem.initial, arrays);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::nonpositive_diffusion && !diffusion_reported) {
        report.issues.push_back({e.code(), e.what()});
        diffusion_reported = true;
      } else if (e.code() == ErrorCode::nonfinite_coefficient && !finite_reported) {
        report.issues.push_back({e.code(), e.what()});
        finite_reported = true;
      } else if (e.code() != ErrorCode::nonpositive_diffusion &&
                 e.code() != ErrorCode::nonfinite_coefficient) {
        report.issues.push_back({e.code(), e.what()});
        break;
      }
    }
  }
  return report;
}

}  // namespace isslab
