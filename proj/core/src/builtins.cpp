#include "isslab/builtins.hpp"

#include <algorithm>
#include <functional>
#include <numbers>
#include <random>

namespace isslab {

using std::numbers::pi;

namespace {

ProfileFunctional sup_term(double constant, double weight, int power) {
  return ProfileFunctional(constant, {{ProfileFunctional::Measure::sup, weight, power}});
}

Scenario heat_dirichlet_decay() {
  Scenario s;
  s.name = "heat-dirichlet-decay";
  s.cells = 256;
  s.horizon = 0.5;
  s.initial = InitialSpec::sine({{1, 1.0}});
  s.certificate.mode = CertificateSpec::Mode::synthesize_sine;
  s.certificate.sigma_fraction = 0.97;
  s.bounds.zeta_fractions = {0.0, 0.5};
  s.solver.output_count = 100;
  return s;
}

Scenario sharpness_pi_squared() {
  Scenario s;
  s.name = "sharpness-pi-squared";
  s.cells = 512;
  s.horizon = 1.0;
  s.c = CoefficientSpec::constant(pi * pi);
  s.initial = InitialSpec::sine({{1, 1.0}});
  s.certificate.mode = CertificateSpec::Mode::synthesize_sine;
  s.expect.infeasible_certificate = true;
  s.expect.max_sup_drift = 0.01;
  s.solver.output_count = 50;
  return s;
}

Scenario reaction_diffusion_dirichlet() {
  Scenario s;
  s.name = "reaction-diffusion-dirichlet";
  s.cells = 128;
  s.horizon = 1.0;
  s.a = CoefficientSpec::state(ScalarFunction::sine(0.75, 1.0, 1.25));
  s.c = CoefficientSpec::state(ScalarFunction::sine(2.0, 2.0));
  s.f = CoefficientSpec::separable(DisturbanceSignal::sinusoid(0.5, 3.0), SpatialShape::sine(1));
  s.left = BoundaryCondition::dirichlet(DisturbanceSignal::sinusoid(0.2, 2.0));
  s.right = BoundaryCondition::dirichlet(DisturbanceSignal::constant(0.1));
  s.initial = InitialSpec::sine({{1, 1.0}, {3, 0.3}});
  s.certificate.mode = CertificateSpec::Mode::synthesize_sine;
  s.certificate.sigma_fraction = 0.5;
  s.bounds.zeta_fractions = {0.0, 0.5, 0.9};
  return s;
}

Scenario nonlocal_robin_heat() {
  Scenario s;
  s.name = "nonlocal-robin-heat";
  s.cells = 128;
  s.horizon = 2.0;
  s.a = CoefficientSpec::nonlocal(sup_term(1.0, 0.1, 2));
  s.left = BoundaryCondition::nonlocal_robin(1.0, sup_term(0.0, 0.5, 1),
                                             DisturbanceSignal::sinusoid(0.3, 4.0));
  s.right = BoundaryCondition::nonlocal_robin(1.0, sup_term(0.0, 0.5, 1),
                                              DisturbanceSignal::sinusoid(0.2, 3.0, 1.0));
  s.initial = InitialSpec::sine({{1, 1.0}, {2, 0.4}});
  s.certificate.mode = CertificateSpec::Mode::synthesize_cosine;
  s.bounds.zeta_fractions = {0.0, 0.5};
  s.bounds.terms = BoundaryTermSpec::nonlocal(1.0, 1.0);
  return s;
}

Scenario conductivity_transform() {
  Scenario s;
  s.name = "conductivity-transform";
  s.cells = 256;
  s.horizon = 0.5;
  TransformSection t;
  t.spec.kappa = ScalarFunction::constant(1.0);
  t.spec.g = ScalarFunction::constant(1.0);
  t.spec.kappa_star = 1.0;
  t.spec.u_lo = -2.0;
  t.spec.u_hi = 2.0;
  t.phi = pi / 4;
  s.transform = t;
  s.left = BoundaryCondition::dirichlet(DisturbanceSignal::sinusoid(0.05, 5.0));
  s.right = BoundaryCondition::dirichlet(DisturbanceSignal::constant(-0.04));
  s.initial = InitialSpec::sine({{1, 0.1}, {2, 0.03}});
  const double theta = pi - 2.0 * t.phi;
  s.certificate.mode = CertificateSpec::Mode::given;
  s.certificate.weight = WeightFunction::sine(theta, t.phi);
  s.certificate.sigma = t.spec.kappa_star * theta * theta;
  s.bounds.zeta_fractions = {0.0, 0.5};
  s.solver.output_count = 100;
  return s;
}

Scenario robin_both_linear() {
  Scenario s;
  s.name = "robin-both-linear";
  s.cells = 128;
  s.horizon = 1.0;
  s.left = BoundaryCondition::robin(1.0, 2.0, DisturbanceSignal::sinusoid(0.2, 2.0));
  s.right = BoundaryCondition::robin(1.0, 2.0, DisturbanceSignal::decaying_exponential(0.3, 1.5));
  s.f = CoefficientSpec::separable(DisturbanceSignal::constant(0.2), SpatialShape::uniform());
  s.initial = InitialSpec::sine({{1, 0.8}});
  // cos(theta x) with theta tan(theta) < 2 satisfies both sign conditions.
  s.certificate.mode = CertificateSpec::Mode::given;
  s.certificate.weight = WeightFunction::cosine(0.9);
  s.certificate.sigma = 0.81;
  s.bounds.zeta_fractions = {0.0, 0.5};
  s.bounds.terms = BoundaryTermSpec::robin(BoundaryTermSpec::Mode::robin_both, 1.0, 2.0, 1.0, 2.0);
  return s;
}

struct Entry {
  const char* name;
  const char* description;
  Scenario (*make)();
};

constexpr Entry kRegistry[] = {
    {"heat-dirichlet-decay", "heat equation, homogeneous Dirichlet, sine initial data",
     heat_dirichlet_decay},
    {"sharpness-pi-squared", "reaction rate pi^2: no decay certificate exists (expected)",
     sharpness_pi_squared},
    {"reaction-diffusion-dirichlet",
     "state-dependent diffusivity and reaction with Dirichlet and in-domain inputs",
     reaction_diffusion_dirichlet},
    {"nonlocal-robin-heat",
     "non-local diffusivity with non-local Robin boundary feedback and boundary inputs",
     nonlocal_robin_heat},
    {"conductivity-transform",
     "temperature-dependent conductivity checked through the state transformation",
     conductivity_transform},
    {"robin-both-linear", "constant-coefficient heat equation with Robin data at both ends",
     robin_both_linear},
};

}  // namespace

std::vector<BuiltinInfo> list_builtins() {
  std::vector<BuiltinInfo> out;
  for (const auto& e : kRegistry) out.push_back({e.name, e.description});
  return out;
}

bool is_builtin(const std::string& name) {
  return std::any_of(std::begin(kRegistry), std::end(kRegistry),
                     [&](const Entry& e) { return name == e.name; });
}

Scenario builtin_scenario(const std::string& name) {
  for (const auto& e : kRegistry) {
    if (name == e.name) return e.make();
  }
  throw Error(ErrorCode::scenario_error, "unknown built-in scenario '" + name + "'");
}

Scenario random_reaction_diffusion(std::uint64_t seed, int cells, double horizon) {
  std::mt19937_64 rng(seed);
  auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };

  // Every draw is a separate statement so the sequence is fixed by the seed.
  auto signal = [&](double amplitude) {
    const int kind = pick(5);
    const double value = uni(-amplitude, amplitude);
    switch (kind) {
      case 0: return DisturbanceSignal::zero();
      case 1: return DisturbanceSignal::constant(value);
      case 2: {
        const double frequency = uni(1.0, 6.0);
        const double phase = uni(0.0, 2.0 * pi);
        return DisturbanceSignal::sinusoid(value, frequency, phase);
      }
      case 3: return DisturbanceSignal::decaying_exponential(value, uni(0.5, 4.0));
      default: {
        const double start = uni(0.0, 0.6 * horizon);
        const double width = uni(0.05, 0.2) * horizon;
        return DisturbanceSignal::piecewise_linear({start, start + width, start + 2.0 * width},
                                                   {0.0, value, 0.0});
      }
    }
  };
  auto bounded_rate = [&]() {
    const int kind = pick(3);
    const double p0 = uni(-1.0, 0.5), p1 = uni(0.2, 1.5), p2 = uni(0.5, 3.0);
    if (kind == 0) return ScalarFunction::sine(p1, p2, p0);
    if (kind == 1) return ScalarFunction::tanh(p1, p2, p0);
    const double q1 = uni(-0.5, 0.5), q2 = uni(-0.3, 0.3);
    return ScalarFunction::polynomial({p0, q1, q2}, Interval{-2.0, 2.0});
  };

  Scenario s;
  s.name = "random-reaction-diffusion-" + std::to_string(seed);
  s.seed = seed;
  s.cells = cells;
  s.horizon = horizon;
  const bool sine_kappa = pick(2) == 0;
  const double kappa_frequency = uni(0.5, 2.0);
  s.a = CoefficientSpec::state(sine_kappa ? ScalarFunction::sine(0.75, kappa_frequency, 1.25)
                                          : ScalarFunction::tanh(0.75, kappa_frequency, 1.25));
  s.c = CoefficientSpec::state(bounded_rate());
  const int shape_kind = pick(3);
  const int mode = 1 + pick(3);
  const SpatialShape shape = shape_kind == 0   ? SpatialShape::uniform()
                             : shape_kind == 1 ? SpatialShape::sine(mode)
                                               : SpatialShape::cosine(mode);
  s.f = CoefficientSpec::separable(signal(1.0), shape);
  s.left = BoundaryCondition::dirichlet(signal(0.5));
  s.right = BoundaryCondition::dirichlet(signal(0.5));
  const double m1 = uni(-1.0, 1.0), m2 = uni(-0.5, 0.5), m3 = uni(-0.3, 0.3);
  s.initial = InitialSpec::sine({{1, m1}, {2, m2}, {3, m3}});
  s.certificate.mode = CertificateSpec::Mode::synthesize_sine;
  s.certificate.sigma_fraction = 0.5;
  s.bounds.zeta_fractions = {0.0, 0.5, 0.9};
  s.solver.output_count = 200;
  return s;
}

}  // namespace isslab
