#pragma once

// Decay-rate certificates: a positive weight eta and a rate sigma > 0 with
//   a eta'' + b eta' + (sigma + c) eta <= 0   for all admissible (a, b, c).
// The universal quantifier over coefficients is discharged with interval
// bounds (the inequality is affine in a, b, c, so the worst case sits at an
// interval corner); the quantifier over x is discharged on a check grid.

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "isslab/functions.hpp"
#include "isslab/pde_model.hpp"
#include "isslab/weight.hpp"

namespace isslab {

struct CoefficientBounds {
  Interval a{1.0, 1.0};
  Interval b{0.0, 0.0};
  Interval c{0.0, 0.0};

  /// Throws InvalidArgument on a_min < 0 or empty intervals.
  void validate() const;
  /// Bounds from the declared ranges of a problem's coefficient fields;
  /// throws InvalidArgument when a field has no declared range.
  static CoefficientBounds from_problem(const PdeProblem& problem);
};

enum class Verdict { verified, refuted, inconclusive };
std::string to_string(Verdict v);

/// non_strict treats R <= -margin as verified (the equality case of a
/// cosine weight with sigma = kappa* theta^2 verifies at margin 0).
enum class Comparison { non_strict, strict };

struct WorstPoint {
  double x = 0.0;
  double residual = 0.0;
};

struct WeightCertificate {
  WeightFunction weight;
  double sigma = 0.0;
  double margin = 0.0;
  int grid_size = 0;
  Verdict verdict = Verdict::inconclusive;
  WorstPoint worst;

  bool verified() const noexcept { return verdict == Verdict::verified; }
};

void to_json(nlohmann::json& j, const WeightCertificate& c);
void from_json(const nlohmann::json& j, WeightCertificate& c);

inline constexpr int kMinCheckGrid = 64;

/// Worst-corner residual max_{a,b,c} [a eta'' + b eta' + (sigma + c) eta] at x.
double certificate_residual(const CoefficientBounds& bounds, const WeightFunction& weight,
                            double sigma, double x);

/// Evaluates the residual on grid_size+1 uniform nodes of [0,1]. Verified iff
/// the residual is <= -margin at every node (strictly below for
/// Comparison::strict), refuted iff it is positive (>= 0 when strict)
/// somewhere, inconclusive otherwise. Comparisons allow a few ulps of
/// floating-point rounding relative to the size of the summands.
/// Throws InvalidWeight when eta <= 0 on the check grid.
WeightCertificate check_certificate(const CoefficientBounds& bounds, const WeightFunction& weight,
                                    double sigma, double margin, int grid_size,
                                    Comparison comparison = Comparison::non_strict);

struct BoundarySignReport {
  bool left = false;   // mu0 eta'(0) - lambda0 eta(0) < 0
  bool right = false;  // mu1 eta'(1) + lambda1 eta(1) > 0
  bool both = false;
  double left_denominator = 0.0;   // |mu0 eta'(0) - lambda0 eta(0)|
  double right_denominator = 0.0;  // mu1 eta'(1) + lambda1 eta(1)
};

BoundarySignReport check_boundary_signs(const WeightFunction& weight, double mu0, double lambda0,
                                        double mu1, double lambda1);

inline constexpr double kThetaSlack = 1e-3;
inline constexpr double kBisectionSlack = 1e-3;

/// Sine weight for a reaction-diffusion bound sup (sigma + c)/a <= s_bound.
/// Picks theta = sqrt(s_bound (1 + eps)) (kept strictly inside (sqrt(S), pi)),
/// phi = (pi - theta)/2, and self-checks against the normalized bounds
/// a = 1, b = 0, c = s_bound - sigma. Throws InfeasibleCertificate when
/// s_bound >= pi^2 or the check fails.
WeightCertificate synthesize_sine_certificate(double s_bound, double sigma,
                                              int grid_size = 256);

struct CosineSynthesis {
  double theta = 0.0;
  double sigma = 0.0;
  WeightCertificate certificate;
};

/// Largest theta in (0, pi/2) with theta tan(theta) <= lambda1 (1 - eps_b),
/// sigma = kappa_star theta^2, eta = cos(theta x). The certificate is checked
/// against a in [kappa_star, inf), b = c = 0.
CosineSynthesis synthesize_cosine_certificate(double kappa_star, double lambda1,
                                              double eps_b = kBisectionSlack,
                                              int grid_size = 256);

struct DecaySearchOptions {
  int lattice = 512;
  double sigma_rel_tol = 1e-6;
  int grid_size = 256;
  double margin = 0.0;
};

/// Grid search over the family parameter (theta for sine/cosine with the
/// sine phase fixed at (pi - theta)/2, rho for exponential) with sigma found
/// by bisection. Throws InfeasibleCertificate if nothing verifies.
WeightCertificate maximize_decay_rate(const CoefficientBounds& bounds,
                                      WeightFunction::Family family,
                                      const DecaySearchOptions& options = {});

}  // namespace isslab
