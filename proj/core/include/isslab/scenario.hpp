#pragma once

// Declarative scenario documents. A Scenario maps one-to-one onto a JSON
// document; unknown keys are errors so that files stay reproducible.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "isslab/certificates.hpp"
#include "isslab/functions.hpp"
#include "isslab/iss_bounds.hpp"
#include "isslab/pde_model.hpp"
#include "isslab/solver.hpp"
#include "isslab/transforms.hpp"
#include "isslab/weight.hpp"

namespace isslab {

struct CoefficientSpec {
  enum class Kind { constant, state, nonlocal, separable };

  Kind kind = Kind::constant;
  double value = 0.0;
  ScalarFunction function;
  ProfileFunctional functional;
  DisturbanceSignal signal;
  SpatialShape shape;

  static CoefficientSpec constant(double value);
  static CoefficientSpec state(ScalarFunction fn);
  static CoefficientSpec nonlocal(ProfileFunctional fn);
  static CoefficientSpec separable(DisturbanceSignal signal, SpatialShape shape);

  CoefficientField build() const;
};

struct InitialSpec {
  enum class Kind { sine_modes, constant, values };

  Kind kind = Kind::sine_modes;
  std::vector<std::pair<int, double>> modes{{1, 1.0}};  // (mode, amplitude)
  double value = 0.0;
  std::vector<double> values;

  static InitialSpec sine(std::vector<std::pair<int, double>> modes);
  static InitialSpec constant(double value);

  GridProfile build(const SpatialGrid& grid) const;
};

struct CertificateSpec {
  enum class Mode { maximize, synthesize_sine, synthesize_cosine, given };

  Mode mode = Mode::maximize;
  WeightFunction::Family family = WeightFunction::Family::sine;  // maximize
  double sigma_fraction = 0.5;  // synthesize_sine: share of the feasible sigma range
  double eps_b = kBisectionSlack;  // synthesize_cosine
  std::optional<WeightFunction> weight;  // given
  double sigma = 0.0;  // given
  double margin = 0.0;
  int grid_size = 256;
};

struct BoundSpec {
  std::vector<double> zetas;
  std::vector<double> zeta_fractions{0.0, 0.5};  // multiples of sigma
  BoundaryTermSpec terms;
  std::optional<double> tolerance;  // default 1e-6 + 10 h^2
  double max_zeta_fraction = kDefaultMaxZetaFraction;
};

struct SolverSpec {
  SolverConfig::Scheme scheme = SolverConfig::Scheme::rk4;
  double cfl_safety = 0.4;
  int output_count = 200;
  std::size_t max_steps = 20'000'000;
  double dt_max = kInf;
};

/// Conductivity model u_t = kappa(u) u_xx + g(u) (u_x)^2 with Dirichlet ends,
/// checked through the state transformation and a sine weight of phase phi.
struct TransformSection {
  TransformSpec spec;
  double phi = 0.7853981633974483;
  /// Allowed sup-norm gap between direct and mapped-back transformed
  /// trajectories; default 20 h^2.
  std::optional<double> conjugacy_tolerance;
};

struct ExpectSpec {
  bool infeasible_certificate = false;
  /// Largest allowed | ||u[t]|| / ||u[0]|| - 1 | over the run.
  std::optional<double> max_sup_drift;
};

struct Scenario {
  std::string name = "scenario";
  std::uint64_t seed = 0;
  int cells = 128;
  double horizon = 1.0;
  CoefficientSpec a = CoefficientSpec::constant(1.0);
  CoefficientSpec b, c, f, gradient_squared;
  BoundaryCondition left = BoundaryCondition::dirichlet({});
  BoundaryCondition right = BoundaryCondition::dirichlet({});
  InitialSpec initial;
  CertificateSpec certificate;
  BoundSpec bounds;
  SolverSpec solver;
  std::optional<TransformSection> transform;
  ExpectSpec expect;
  std::optional<std::string> output_prefix;
};

void to_json(nlohmann::json& j, const CoefficientSpec& s);
void from_json(const nlohmann::json& j, CoefficientSpec& s);
void to_json(nlohmann::json& j, const InitialSpec& s);
void from_json(const nlohmann::json& j, InitialSpec& s);
void to_json(nlohmann::json& j, const BoundaryCondition& bc);
void from_json(const nlohmann::json& j, BoundaryCondition& bc);
void to_json(nlohmann::json& j, const BoundaryTermSpec& s);
void from_json(const nlohmann::json& j, BoundaryTermSpec& s);
void to_json(nlohmann::json& j, const Scenario& s);
void from_json(const nlohmann::json& j, Scenario& s);

/// Reads and parses a scenario file; throws ScenarioError.
Scenario load_scenario(const std::filesystem::path& path);

/// With a transform section, a and gradient_squared come from kappa and g.
PdeProblem build_problem(const Scenario& scenario);
SolverConfig build_solver_config(const Scenario& scenario);

}  // namespace isslab
