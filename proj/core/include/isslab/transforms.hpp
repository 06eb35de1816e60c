#pragma once

// State transformation for u_t = kappa(u) u_xx + g(u) (u_x)^2:
//   gamma(u) = int_0^u exp( int_0^s g/kappa ) ds,   w = gamma(u)
// turns it into w_t = kappa(gamma^{-1}(w)) w_xx with Dirichlet data gamma(d).
// gamma is tabulated on a finite domain [u_lo, u_hi]; queries outside it
// raise TableDomainExceeded instead of extrapolating.

#include <memory>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "isslab/functions.hpp"
#include "isslab/pde_model.hpp"

namespace isslab {

struct TransformSpec {
  ScalarFunction kappa = ScalarFunction::constant(1.0);
  ScalarFunction g = ScalarFunction::constant(0.0);
  double kappa_star = 1.0;
  double u_lo = -4.0;
  double u_hi = 4.0;
  int nodes = 4097;
};

void to_json(nlohmann::json& j, const TransformSpec& s);
void from_json(const nlohmann::json& j, TransformSpec& s);

inline constexpr double kQuadratureTolerance = 1e-10;

class GammaTable {
 public:
  /// Tabulates gamma with 0 as a node. Throws InvalidArgument on a bad domain,
  /// fewer than 3 nodes, kappa < kappa_star at a node or a non-increasing
  /// table.
  static GammaTable build(const TransformSpec& spec);

  const TransformSpec& spec() const noexcept { return spec_; }
  const std::vector<double>& nodes() const noexcept { return u_; }
  const std::vector<double>& values() const noexcept { return w_; }
  Interval domain() const noexcept { return {u_.front(), u_.back()}; }
  Interval image() const noexcept { return {w_.front(), w_.back()}; }

  /// Cubic Hermite interpolation between tabulated nodes.
  double gamma(double u) const;
  double gamma_derivative(double u) const;
  /// Bisection then Newton polish to |gamma(u) - w| <= 1e-10 (1 + |w|).
  double gamma_inverse(double w) const;

  /// (gamma1(s), gamma2(s)) = (min, max) of gamma(s) and -gamma(-s), s >= 0.
  std::pair<double, double> envelopes(double s) const;
  /// Inverse of the lower envelope; TableDomainExceeded above its table maximum.
  double gamma1_inverse(double v) const;
  /// omega(s, t) = gamma1^{-1}( e^{-zeta t} gamma2(s) / sin(phi) ) for a sine
  /// weight with phase phi; requires phi in (0, pi/2) and
  /// 0 <= zeta < kappa_star (pi - 2 phi)^2.
  double iss_gain(double phi, double zeta, double s, double t) const;

  friend void to_json(nlohmann::json& j, const GammaTable& t);
  /// Re-validates the loaded arrays (strict monotonicity, positive slopes,
  /// gamma(0) = 0 at a node).
  friend void from_json(const nlohmann::json& j, GammaTable& t);

 private:
  void validate() const;
  std::size_t segment(double u) const;

  TransformSpec spec_;
  std::vector<double> u_, w_, dw_;
};

/// Builds w_t = kappa(gamma^{-1}(w)) w_xx with mapped Dirichlet data and
/// initial profile. The original must have Dirichlet ends and b = c = f = 0.
/// Non-constant boundary signals are resampled as piecewise-linear signals
/// on 4097 points of [0, T].
PdeProblem transform_problem(std::shared_ptr<const GammaTable> table, const PdeProblem& original);

}  // namespace isslab
