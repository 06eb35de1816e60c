#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace isslab {

/// Positive C^2 weight eta on [0,1] from one of four families:
///   sine         eta = sin(theta x + phi),   0 < phi, theta + phi < pi
///   cosine       eta = cos(theta x),         0 < theta < pi/2
///   exponential  eta = exp(-rho x) + offset
///   tabulated    natural cubic spline through user samples
class WeightFunction {
 public:
  enum class Family { sine, cosine, exponential, tabulated_cubic };

  WeightFunction() = default;

  static WeightFunction sine(double theta, double phi);
  static WeightFunction cosine(double theta);
  static WeightFunction exponential(double rho, double offset = 0.0);
  static WeightFunction tabulated_cubic(std::vector<double> xs, std::vector<double> values);

  double value(double x) const noexcept;
  double first(double x) const noexcept;
  double second(double x) const noexcept;

  Family family() const noexcept { return family_; }
  std::string family_name() const;
  double theta() const noexcept { return p0_; }
  double phi() const noexcept { return p1_; }
  double rho() const noexcept { return p0_; }
  double offset() const noexcept { return p1_; }

  /// Family-specific analytic positivity conditions (tabulated: all samples > 0).
  bool analytic_positive() const noexcept;
  /// Smallest value over a uniform check grid with `cells` cells.
  double min_on_grid(int cells) const noexcept;
  double max_on_grid(int cells) const noexcept;

  friend void to_json(nlohmann::json& j, const WeightFunction& w);
  friend void from_json(const nlohmann::json& j, WeightFunction& w);

 private:
  void build_spline();
  std::size_t segment(double x) const noexcept;

  Family family_ = Family::sine;
  double p0_ = 0.0;
  double p1_ = 0.0;
  std::vector<double> xs_, ys_, m_;  // spline knots, values, second derivatives
};

}  // namespace isslab
