#pragma once

// Discrete oracles for the sup-norm properties the envelope argument relies
// on: Lipschitz continuity of t -> ||u[t]||, agreement of the forward
// difference with the directional limit along u_t, and the contact-set bound
// on the one-sided derivative of the norm.

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace isslab {

/// u(t, x) = sum_k (alpha_k cos(omega_k t + psi_k) + beta_k) sin(k pi x + chi_k).
class FourierField {
 public:
  struct Mode {
    double alpha, omega, psi, beta, chi;
  };

  explicit FourierField(std::vector<Mode> modes);
  /// Up to `max_modes` modes with |alpha|, |beta| <= 1 and omega in [0, max_omega].
  static FourierField random(std::mt19937_64& rng, int max_modes = 6, double max_omega = 5.0);

  double value(double t, double x) const;
  double time_derivative(double t, double x) const;
  /// Upper bound on |u_tt| over all (t, x).
  double second_derivative_bound() const;

  std::vector<double> sample(double t, std::span<const double> xs) const;
  std::vector<double> sample_time_derivative(double t, std::span<const double> xs) const;

  const std::vector<Mode>& modes() const { return modes_; }

 private:
  std::vector<Mode> modes_;
};

double sup_norm(std::span<const double> u);

/// (||u + h w|| - ||u||) / h.
double norm_forward_difference(std::span<const double> u, std::span<const double> w, double h);

/// max of sgn(u_i) w_i over indices with |u_i| >= ||u|| - eps. Requires
/// ||u|| > 0.
double contact_set_bound(std::span<const double> u, std::span<const double> w, double eps = 0.0);

struct OracleFailure {
  std::string oracle;
  std::uint64_t seed = 0;
  int trial = 0;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct OracleTally {
  int trials = 0;
  int passed = 0;
  /// Largest lhs - rhs seen; negative when every trial had room to spare.
  double worst_excess = -1e300;
};

struct OracleReport {
  std::uint64_t seed = 0;
  int grid_points = 0;
  double dini_step = 0.0;
  double contact_step = 0.0;
  OracleTally lipschitz, dini, contact, zero_gate;
  std::vector<OracleFailure> failures;

  bool pass() const { return failures.empty(); }
  nlohmann::json to_json() const;
};

/// Runs `trials` random fields through each oracle. Every 40th contact
/// trial uses u = 0, where only the ||w|| bound applies.
OracleReport derivative_oracles(std::uint64_t seed, int trials = 200, int grid_points = 513);

}  // namespace isslab
