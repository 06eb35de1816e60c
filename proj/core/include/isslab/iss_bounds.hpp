#pragma once

// Weighted sup-norms, boundary terms and the fading-memory envelope
//   ||u[t]||_eta <= max( e^{-zeta t} ||u[0]||_eta,
//                        sup_{s<=t} e^{-zeta (t-s)} max(r0(s), r1(s), ||f[s]||_eta / (sigma - zeta)) )
// evaluated incrementally along a sampled trajectory.

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "isslab/functions.hpp"
#include "isslab/grid.hpp"
#include "isslab/weight.hpp"

namespace isslab {

class WeightedNorm {
 public:
  /// Throws InvalidWeight if eta <= 0 at some node.
  WeightedNorm(WeightFunction weight, SpatialGrid grid);

  const WeightFunction& weight() const noexcept { return weight_; }
  const SpatialGrid& grid() const noexcept { return grid_; }
  std::span<const double> eta() const noexcept { return eta_; }
  double min_eta() const noexcept { return min_eta_; }
  double max_eta() const noexcept { return max_eta_; }

  /// max_i |u_i| / eta_i over all nodes.
  double operator()(std::span<const double> values) const;
  /// Same maximum restricted to interior nodes (used for the forcing term).
  double interior(std::span<const double> values) const;

 private:
  WeightFunction weight_;
  SpatialGrid grid_;
  std::vector<double> eta_;
  double min_eta_ = 0.0;
  double max_eta_ = 0.0;
};

/// Throws InvalidArgument when the profile is not on the norm's grid.
double weighted_sup_norm(const GridProfile& profile, const WeightedNorm& norm);

/// Running value of sup_{s <= t} g(s) e^{-zeta (t - s)} over samples.
class FadingMemoryTracker {
 public:
  explicit FadingMemoryTracker(double zeta);

  /// Throws NonmonotoneTime if t precedes the previous update and
  /// InvalidArgument if g is negative or not finite.
  void update(double t, double g);
  /// Tracker value decayed forward to t >= last_time without a new input.
  double value_at(double t) const;

  double value() const noexcept { return current_max_; }
  double zeta() const noexcept { return zeta_; }
  double last_time() const noexcept { return last_time_; }
  bool started() const noexcept { return started_; }

 private:
  double zeta_;
  double current_max_ = 0.0;
  double last_time_ = 0.0;
  bool started_ = false;
};

/// Boundary values and one-sided derivatives at one sample time. beta0 and
/// beta1 carry the non-local boundary functionals evaluated on u[t].
struct BoundarySample {
  double t = 0.0;
  double u0 = 0.0;
  double u1 = 0.0;
  double ux0 = 0.0;
  double ux1 = 0.0;
  double beta0 = 0.0;
  double beta1 = 0.0;
};

struct BoundaryTermSpec {
  enum class Mode { dirichlet, general, robin_left, robin_right, robin_both, nonlocal };

  Mode mode = Mode::dirichlet;
  // robin_* modes
  double mu0 = 1.0, lambda0 = 0.0, mu1 = 1.0, lambda1 = 0.0;
  // general mode; time functions with g > 0 and k >= 1
  DisturbanceSignal g0 = DisturbanceSignal::constant(1.0);
  DisturbanceSignal g1 = DisturbanceSignal::constant(1.0);
  DisturbanceSignal k0 = DisturbanceSignal::constant(1.0);
  DisturbanceSignal k1 = DisturbanceSignal::constant(1.0);
  // nonlocal mode reuses lambda0/lambda1; theta is read from the cosine weight.

  static BoundaryTermSpec dirichlet() { return {}; }
  static BoundaryTermSpec general(DisturbanceSignal g0, DisturbanceSignal g1,
                                  DisturbanceSignal k0, DisturbanceSignal k1);
  static BoundaryTermSpec robin(Mode mode, double mu0, double lambda0, double mu1,
                                double lambda1);
  static BoundaryTermSpec nonlocal(double lambda0, double lambda1);
};

std::string to_string(BoundaryTermSpec::Mode mode);
BoundaryTermSpec::Mode boundary_mode_from_string(const std::string& name);

inline constexpr double kDegenerateDenominator = 1e-12;

/// Returns (r0, r1). Always r0 <= |u0|/eta(0) and r1 <= |u1|/eta(1).
/// Throws DegenerateDenominator when a Robin or non-local denominator is at
/// most 1e-12 (or has the wrong sign) and InvalidArgument when g <= 0 or
/// k < 1 in general mode.
std::pair<double, double> boundary_terms(const BoundaryTermSpec& spec,
                                         const BoundarySample& sample,
                                         const WeightFunction& weight);

/// Default bound tolerance 1e-6 + 10 h^2.
double default_bound_tolerance(double h) noexcept;

inline constexpr double kDefaultMaxZetaFraction = 0.95;

struct BoundTrace {
  double sigma = 0.0;
  double zeta = 0.0;
  double tolerance = 0.0;
  std::vector<double> times, lhs, rhs, rhs_ic, rhs_boundary, rhs_forcing;
  std::vector<std::pair<double, double>> violations;  // (t, lhs - rhs)

  std::size_t size() const noexcept { return times.size(); }
  double max_excess() const noexcept;
  /// sup_t lhs / rhs, skipping rows where both vanish.
  double tightness() const noexcept;
  /// Time of the largest lhs / rhs ratio.
  double tightest_time() const noexcept;
};

/// Columns t, lhs, rhs, rhs_ic, rhs_boundary, rhs_forcing, violation with
/// 17 significant digits. violation is lhs - rhs on rows beyond tolerance
/// and 0 elsewhere.
void write_csv(std::ostream& os, const BoundTrace& trace);

/// Builds a BoundTrace one sample at a time.
class EnvelopeBuilder {
 public:
  /// Throws InvalidZeta unless 0 <= zeta <= max_zeta_fraction * sigma and
  /// zeta < sigma.
  EnvelopeBuilder(WeightedNorm norm, BoundaryTermSpec spec, double sigma, double zeta,
                  double tolerance, double max_zeta_fraction = kDefaultMaxZetaFraction);

  /// Appends the row at boundary.t. `forcing` holds f[t] at the grid nodes.
  /// Throws NonmonotoneTime unless times strictly increase.
  void append(const GridProfile& u, const BoundarySample& boundary,
              std::span<const double> forcing);

  const BoundTrace& trace() const noexcept { return trace_; }
  /// Most recent (r0, r1).
  std::pair<double, double> last_boundary_terms() const noexcept { return last_r_; }

 private:
  WeightedNorm norm_;
  BoundaryTermSpec spec_;
  FadingMemoryTracker boundary_;
  FadingMemoryTracker forcing_;
  BoundTrace trace_;
  double start_time_ = 0.0;
  std::pair<double, double> last_r_{0.0, 0.0};
};

}  // namespace isslab
