#pragma once

// Problem description for
//   u_t = a u_xx + b u_x + c u + f + g (u_x)^2,   x in (0,1), t in (0,T]
// with Dirichlet, Robin or non-local Robin closures at each end. The
// gradient-squared term is zero unless a problem is built for the
// temperature-dependent conductivity model.

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "isslab/errors.hpp"
#include "isslab/functions.hpp"
#include "isslab/grid.hpp"

namespace isslab {

class CoefficientField {
 public:
  enum class Kind { constant, space_time, state, nonlocal };

  using SpaceTimeFn = std::function<double(double t, double x)>;
  using StateFn = std::function<double(double t, double x, double u)>;

  CoefficientField() = default;  // the zero field

  static CoefficientField constant(double value);
  static CoefficientField space_time(SpaceTimeFn fn, std::optional<Interval> range = {});
  /// signal(t) * shape(x)
  static CoefficientField separable(DisturbanceSignal signal, SpatialShape shape);
  static CoefficientField state(StateFn fn, std::optional<Interval> range = {});
  /// Pointwise state dependence through a vocabulary function, e.g. kappa(u).
  static CoefficientField of_state(ScalarFunction fn);
  /// Value depends on the whole profile, identical at every node.
  static CoefficientField nonlocal(ProfileFunctional fn);

  Kind kind() const noexcept { return kind_; }
  bool is_zero() const noexcept { return kind_ == Kind::constant && value_ == 0.0; }
  double constant_value() const noexcept { return value_; }

  double evaluate(double t, double x, double u_point, const GridProfile& profile) const;
  /// Nodewise evaluation; non-local functionals are computed once per call.
  void evaluate_all(double t, const GridProfile& profile, std::span<double> out) const;

  /// Declared interval bound over [0, horizon] x [0,1] x states, if known.
  std::optional<Interval> range(double horizon) const;

 private:
  Kind kind_ = Kind::constant;
  double value_ = 0.0;
  SpaceTimeFn space_time_;
  StateFn state_;
  std::optional<ScalarFunction> scalar_;
  std::optional<ProfileFunctional> functional_;
  std::optional<std::pair<DisturbanceSignal, SpatialShape>> separable_;
  std::optional<Interval> declared_range_;
};

/// Boundary closure at one end of the interval.
///   dirichlet:       u = d(t)
///   robin:           mu u_x - lambda u = d(t) at x=0, mu u_x + lambda u = d(t) at x=1
///   nonlocal_robin:  u_x = (lambda + beta(u[t])) u + d(t) at x=0,
///                    u_x = -(lambda + beta(u[t])) u + d(t) at x=1
struct BoundaryCondition {
  enum class Form { dirichlet, robin, nonlocal_robin };

  Form form = Form::dirichlet;
  double mu = 1.0;
  double lambda = 0.0;
  ProfileFunctional beta;
  DisturbanceSignal data;

  static BoundaryCondition dirichlet(DisturbanceSignal d);
  static BoundaryCondition robin(double mu, double lambda, DisturbanceSignal d);
  static BoundaryCondition nonlocal_robin(double lambda, ProfileFunctional beta,
                                          DisturbanceSignal d);
  static BoundaryCondition neumann(DisturbanceSignal d) { return robin(1.0, 0.0, std::move(d)); }

  bool is_dirichlet() const noexcept { return form == Form::dirichlet; }

  /// Writes the closure as u_x = s*(p*u) + q with s = +1 at the left end and
  /// -1 at the right end; returns {p, q}. Throws NegativeBoundaryFunctional
  /// when beta(u) < 0. Only meaningful for the Robin forms.
  std::pair<double, double> flux_coefficients(double t, const GridProfile& u) const;
};

struct PdeProblem {
  SpatialGrid grid{64};
  CoefficientField a = CoefficientField::constant(1.0);
  CoefficientField b;
  CoefficientField c;
  CoefficientField f;
  CoefficientField gradient_squared;
  BoundaryCondition left;
  BoundaryCondition right;
  double horizon = 1.0;
  GridProfile initial = GridProfile::zeros(SpatialGrid{64});
};

/// Nodewise coefficient arrays at one time instant.
struct CoefficientArrays {
  std::vector<double> a, b, c, f, g;

  explicit CoefficientArrays(std::size_t n = 0) : a(n), b(n), c(n), f(n), g(n) {}
};

/// Throws NonpositiveDiffusion when some a_i < 0 and NonfiniteCoefficient on
/// NaN or infinity.
CoefficientArrays evaluate_coefficients(const PdeProblem& problem, double t,
                                        const GridProfile& profile);
/// Allocation-free variant used by the time stepper.
void evaluate_coefficients(const PdeProblem& problem, double t, const GridProfile& profile,
                           CoefficientArrays& out);
/// As above, with non-local fields evaluated on `nonlocal_profile` instead.
void evaluate_coefficients(const PdeProblem& problem, double t, const GridProfile& profile,
                           const GridProfile& nonlocal_profile, CoefficientArrays& out);

struct ValidationIssue {
  ErrorCode code;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool admissible() const noexcept { return issues.empty(); }
  bool contains(ErrorCode code) const noexcept;
};

/// Number of probe times used by validate_problem.
inline constexpr int kValidationProbeTimes = 33;

/// Report-only admissibility check: diffusion sign on a probe lattice, Robin
/// parameters, grid consistency. Never throws.
ValidationReport validate_problem(const PdeProblem& problem);

}  // namespace isslab
