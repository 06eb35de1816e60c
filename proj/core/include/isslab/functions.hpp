#pragma once

// Closed vocabulary of scalar functions, profile functionals, time signals
// and spatial shapes. Everything here is declarative so scenario files can
// round-trip through JSON, and each object can report interval bounds used
// by the certificate checker.

#include <limits>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "isslab/grid.hpp"

namespace isslab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  static Interval point(double v) { return {v, v}; }
  static Interval all() { return {-kInf, kInf}; }
  bool contains(double v) const noexcept { return lo <= v && v <= hi; }
  bool empty() const noexcept { return !(lo <= hi); }
  bool bounded() const noexcept { return lo > -kInf && hi < kInf; }
  double abs_max() const noexcept;
  friend bool operator==(const Interval&, const Interval&) = default;
};

Interval operator*(const Interval& a, const Interval& b);
Interval operator+(const Interval& a, const Interval& b);
Interval hull(const Interval& a, const Interval& b);

/// Pointwise nonlinearity u -> value, e.g. a state dependent diffusivity
/// kappa(u) or reaction rate r(u).
class ScalarFunction {
 public:
  enum class Kind { constant, sine, tanh, exponential, polynomial };

  ScalarFunction() = default;
  static ScalarFunction constant(double value);
  /// offset + amplitude * sin(frequency * u)
  static ScalarFunction sine(double amplitude, double frequency, double offset = 0.0);
  /// offset + amplitude * tanh(frequency * u)
  static ScalarFunction tanh(double amplitude, double frequency, double offset = 0.0);
  /// offset + amplitude * exp(rate * clamp(u))
  static ScalarFunction exponential(double amplitude, double rate, double offset = 0.0,
                                    Interval clip = Interval::all());
  /// sum_k coefficients[k] * clamp(u)^k
  static ScalarFunction polynomial(std::vector<double> coefficients,
                                   Interval clip = Interval::all());

  double operator()(double u) const noexcept;
  /// Interval containing every value over u in R.
  Interval range() const;

  Kind kind() const noexcept { return kind_; }
  bool is_constant() const noexcept;

  friend void to_json(nlohmann::json& j, const ScalarFunction& f);
  friend void from_json(const nlohmann::json& j, ScalarFunction& f);

 private:
  Kind kind_ = Kind::constant;
  double amplitude_ = 0.0;
  double frequency_ = 0.0;
  double offset_ = 0.0;
  std::vector<double> coefficients_;
  Interval clip_ = Interval::all();
};

/// Non-local functional of a whole profile:
///   constant + sum_k weight_k * measure_k(u)^power_k
/// with measure in {sup norm, trapezoid L2 norm}.
class ProfileFunctional {
 public:
  enum class Measure { sup, l2 };
  struct Term {
    Measure measure = Measure::sup;
    double weight = 0.0;
    int power = 1;
  };

  ProfileFunctional() = default;
  explicit ProfileFunctional(double constant, std::vector<Term> terms = {});

  double operator()(const GridProfile& u) const;
  Interval range() const;
  double constant() const noexcept { return constant_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return constant_ == 0.0 && terms_.empty(); }

  friend void to_json(nlohmann::json& j, const ProfileFunctional& f);
  friend void from_json(const nlohmann::json& j, ProfileFunctional& f);

 private:
  double constant_ = 0.0;
  std::vector<Term> terms_;
};

/// Continuous time signal d(t) from five closed-form kinds.
class DisturbanceSignal {
 public:
  enum class Kind { zero, constant, sinusoid, decaying_exponential, piecewise_linear };

  DisturbanceSignal() = default;
  static DisturbanceSignal zero();
  static DisturbanceSignal constant(double value);
  /// offset + amplitude * sin(frequency * t + phase)
  static DisturbanceSignal sinusoid(double amplitude, double frequency, double phase = 0.0,
                                    double offset = 0.0);
  /// offset + amplitude * exp(-rate * t)
  static DisturbanceSignal decaying_exponential(double amplitude, double rate,
                                                double offset = 0.0);
  /// Linear interpolation through (times, values), held constant outside.
  static DisturbanceSignal piecewise_linear(std::vector<double> times,
                                            std::vector<double> values);

  double operator()(double t) const noexcept;
  /// Interval containing d(t) for t in [0, horizon].
  Interval range(double horizon) const;
  /// Global Lipschitz constant in t.
  double lipschitz() const noexcept;

  Kind kind() const noexcept { return kind_; }
  bool is_zero() const noexcept { return kind_ == Kind::zero; }

  friend void to_json(nlohmann::json& j, const DisturbanceSignal& d);
  friend void from_json(const nlohmann::json& j, DisturbanceSignal& d);

 private:
  Kind kind_ = Kind::zero;
  double amplitude_ = 0.0;
  double frequency_ = 0.0;
  double phase_ = 0.0;
  double offset_ = 0.0;
  std::vector<double> times_;
  std::vector<double> values_;
};

/// Spatial factor used for separable space-time fields s(t) * shape(x).
class SpatialShape {
 public:
  enum class Kind { uniform, sine, cosine };

  SpatialShape() = default;
  static SpatialShape uniform();
  /// sin(mode * pi * x)
  static SpatialShape sine(int mode);
  /// cos(mode * pi * x)
  static SpatialShape cosine(int mode);

  double operator()(double x) const noexcept;
  Interval range() const;

  friend void to_json(nlohmann::json& j, const SpatialShape& s);
  friend void from_json(const nlohmann::json& j, SpatialShape& s);

 private:
  Kind kind_ = Kind::uniform;
  int mode_ = 1;
};

}  // namespace isslab
