#pragma once

// Scenario pipeline: certificate -> integration -> envelope per zeta -> report.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "isslab/certificates.hpp"
#include "isslab/iss_bounds.hpp"
#include "isslab/scenario.hpp"
#include "isslab/solver.hpp"
#include "isslab/transforms.hpp"

namespace isslab {

enum class RunMode { certify, simulate, check };

/// Process exit codes shared by the CLI.
enum ExitCode : int {
  exit_pass = 0,
  exit_bound_violation = 1,
  exit_infeasible_certificate = 2,
  exit_model_error = 3,
};

struct ZetaResult {
  double zeta = 0.0;
  BoundTrace trace;
  /// Gain-form envelope along the untransformed trajectory (conductivity
  /// scenarios only).
  std::optional<BoundTrace> gain_trace;
};

struct RunReport {
  std::string scenario;
  RunMode mode = RunMode::check;
  /// Last stage reached: model, certificate, solver, bounds, complete.
  std::string stage = "model";
  std::optional<WeightCertificate> certificate;
  bool certificate_expected_infeasible = false;
  std::string error;
  double tolerance = 0.0;
  std::vector<ZetaResult> bounds;
  std::optional<Trajectory> trajectory;
  /// Scenario-specific measurements (sup drift, conjugacy gap, sign checks).
  nlohmann::json checks = nlohmann::json::object();
  bool pass = false;
  int exit_code = exit_model_error;
  double wall_seconds = 0.0;

  nlohmann::json to_json() const;
};

/// Never throws for scenario-level failures; they are recorded in the report.
RunReport run_scenario(const Scenario& scenario, RunMode mode = RunMode::check);

/// Runs independent scenarios on up to `jobs` threads; reports are ordered
/// by scenario name.
std::vector<RunReport> run_batch(const std::vector<Scenario>& scenarios, unsigned jobs,
                                 RunMode mode = RunMode::check);

struct SweepRow {
  double zeta = 0.0;
  double tightness = 0.0;
  double max_excess = 0.0;
  std::size_t violations = 0;
};

/// Tightness sup_t lhs/rhs per zeta (absolute values), sorted by zeta.
/// Throws InvalidZeta for values outside [0, max_zeta_fraction * sigma].
std::vector<SweepRow> sweep_zeta(const Scenario& scenario, std::vector<double> zetas);

/// Writes <out> (JSON) plus <stem>_zeta<k>.csv, <stem>_gain_zeta<k>.csv and
/// <stem>_trajectory.csv beside it.
void write_report(const RunReport& report, const std::filesystem::path& out);

/// Resolves the scenario's certificate against `problem`. Throws
/// InfeasibleCertificate when no certificate verifies.
WeightCertificate resolve_certificate(const CertificateSpec& spec, const PdeProblem& problem);

/// Certificate for the problem the envelope applies to: the transformed
/// problem when the scenario has a transform section.
WeightCertificate scenario_certificate(const Scenario& scenario);

/// Envelope rows for every trajectory sample of `problem`.
BoundTrace build_bound_trace(const PdeProblem& problem, const Trajectory& trajectory,
                             const WeightCertificate& certificate, const BoundaryTermSpec& spec,
                             double zeta, double tolerance,
                             double max_zeta_fraction = kDefaultMaxZetaFraction);

/// Gain-form envelope for the conductivity model along the untransformed
/// trajectory: rhs(t) = max( omega(||u[0]||, t),
///   max_{s <= t} max(omega(|d0(s)|, t - s), omega(|d1(s)|, t - s)) ).
BoundTrace build_gain_trace(const GammaTable& table, double phi, double zeta,
                            const PdeProblem& problem, const Trajectory& trajectory,
                            double tolerance);

}  // namespace isslab
