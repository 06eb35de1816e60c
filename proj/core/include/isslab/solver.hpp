#pragma once

// Method-of-lines finite differences for PdeProblem: central differences in
// space, second-order one-sided closures at Robin ends, and either classical
// RK4 or a semi-implicit (backward Euler diffusion, explicit remainder) step.

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "isslab/pde_model.hpp"

namespace isslab {

struct SolverConfig {
  enum class Scheme { rk4, semi_implicit };

  Scheme scheme = Scheme::rk4;
  double cfl_safety = 0.4;
  /// Strictly increasing, inside [0, T], last entry T. Empty means {0, T}.
  std::vector<double> output_times;
  std::size_t max_steps = 20'000'000;
  /// Upper bound on the step; the semi-implicit scheme needs a finite value
  /// or falls back to cfl_safety * h.
  double dt_max = std::numeric_limits<double>::infinity();

  /// Throws InvalidArgument when the invariants above fail for horizon T.
  void validate(double horizon) const;
  /// count + 1 equally spaced times 0, T/count, ..., T.
  static std::vector<double> uniform_times(double horizon, int count);
};

std::string to_string(SolverConfig::Scheme scheme);
SolverConfig::Scheme scheme_from_string(const std::string& name);

struct Trajectory {
  std::vector<double> times;
  std::vector<GridProfile> snapshots;
  /// One-sided second-order du/dx at x = 0 and x = 1 per snapshot.
  std::vector<std::pair<double, double>> boundary_derivatives;
  std::vector<double> dt_history;

  std::size_t size() const noexcept { return times.size(); }
};

/// du/dt at interior nodes; boundary entries are zero (the closure owns them).
/// Non-local coefficients are evaluated on `profile`.
std::vector<double> step_spatial_operator(const PdeProblem& problem, double t,
                                          const GridProfile& profile);

/// Profile with boundary nodes replaced by the closure at time t. Robin ends
/// solve (-3u0 + 4u1 - u2)/(2h) = p u0 + q for u0 (mirror image at x = 1),
/// with non-local functionals evaluated on the incoming profile. Throws
/// SingularBoundarySolve when |3/(2h) + p| < 1e-12.
GridProfile apply_boundary(const PdeProblem& problem, double t, const GridProfile& profile);

/// One-sided second-order derivative estimates at both ends.
std::pair<double, double> boundary_derivatives(const GridProfile& profile);

/// Throws BlowUp when ||u|| exceeds 1e12 or turns non-finite, and
/// StepBudgetExceeded after config.max_steps steps.
Trajectory integrate(const PdeProblem& problem, const SolverConfig& config);

inline constexpr double kBlowUpThreshold = 1e12;

/// Long format: t, x, u (17 significant digits).
void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory);
/// Output times, sup norms, boundary values and derivatives, step statistics.
nlohmann::json trajectory_summary(const Trajectory& trajectory);

}  // namespace isslab
