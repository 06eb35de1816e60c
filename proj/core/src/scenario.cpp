#include "isslab/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include <nlohmann/json.hpp>

#include "json_util.hpp"

namespace isslab {

using detail::get_or;
using detail::get_required;
using detail::require_keys;
using detail::schema_error;
using nlohmann::json;

CoefficientSpec CoefficientSpec::constant(double value) {
  CoefficientSpec s;
  s.value = value;
  return s;
}

CoefficientSpec CoefficientSpec::state(ScalarFunction fn) {
  CoefficientSpec s;
  s.kind = Kind::state;
  s.function = std::move(fn);
  return s;
}

CoefficientSpec CoefficientSpec::nonlocal(ProfileFunctional fn) {
  CoefficientSpec s;
  s.kind = Kind::nonlocal;
  s.functional = std::move(fn);
  return s;
}

CoefficientSpec CoefficientSpec::separable(DisturbanceSignal signal, SpatialShape shape) {
  CoefficientSpec s;
  s.kind = Kind::separable;
  s.signal = std::move(signal);
  s.shape = shape;
  return s;
}

CoefficientField CoefficientSpec::build() const {
  switch (kind) {
    case Kind::constant: return CoefficientField::constant(value);
    case Kind::state: return CoefficientField::of_state(function);
    case Kind::nonlocal: return CoefficientField::nonlocal(functional);
    case Kind::separable: return CoefficientField::separable(signal, shape);
  }
  return {};
}

InitialSpec InitialSpec::sine(std::vector<std::pair<int, double>> modes) {
  InitialSpec s;
  s.modes = std::move(modes);
  return s;
}

InitialSpec InitialSpec::constant(double value) {
  InitialSpec s;
  s.kind = Kind::constant;
  s.value = value;
  return s;
}

GridProfile InitialSpec::build(const SpatialGrid& grid) const {
  switch (kind) {
    case Kind::sine_modes:
      return GridProfile::sample(grid, [&](double x) {
        double v = 0.0;
        for (const auto& [mode, amplitude] : modes) {
          v += amplitude * std::sin(mode * std::numbers::pi * x);
        }
        return v;
      });
    case Kind::constant: return GridProfile::sample(grid, [&](double) { return value; });
    case Kind::values:
      if (values.size() != grid.n_nodes()) {
        throw Error(ErrorCode::scenario_error, "initial values do not match the grid");
      }
      return GridProfile(grid, values);
  }
  return GridProfile::zeros(grid);
}

// ---------------------------------------------------------------------------

void to_json(json& j, const CoefficientSpec& s) {
  using K = CoefficientSpec::Kind;
  switch (s.kind) {
    case K::constant: j = s.value; break;
    case K::state: j = {{"kind", "state"}, {"function", s.function}}; break;
    case K::nonlocal: j = {{"kind", "nonlocal"}, {"functional", s.functional}}; break;
    case K::separable: j = {{"kind", "separable"}, {"signal", s.signal}, {"shape", s.shape}}; break;
  }
}

void from_json(const json& j, CoefficientSpec& s) {
  if (j.is_number()) {
    s = CoefficientSpec::constant(j.get<double>());
    return;
  }
  const auto kind = get_required<std::string>(j, "kind", "coefficient");
  if (kind == "constant") {
    require_keys(j, {"kind", "value"}, "coefficient(constant)");
    s = CoefficientSpec::constant(get_required<double>(j, "value", "coefficient"));
  } else if (kind == "state") {
    require_keys(j, {"kind", "function"}, "coefficient(state)");
    s = CoefficientSpec::state(get_required<ScalarFunction>(j, "function", "coefficient"));
  } else if (kind == "nonlocal") {
    require_keys(j, {"kind", "functional"}, "coefficient(nonlocal)");
    s = CoefficientSpec::nonlocal(get_required<ProfileFunctional>(j, "functional", "coefficient"));
  } else if (kind == "separable") {
    require_keys(j, {"kind", "signal", "shape"}, "coefficient(separable)");
    s = CoefficientSpec::separable(get_required<DisturbanceSignal>(j, "signal", "coefficient"),
                                   get_or(j, "shape", SpatialShape::uniform()));
  } else {
    schema_error("coefficient", "unknown kind '" + kind + "'");
  }
}

void to_json(json& j, const InitialSpec& s) {
  using K = InitialSpec::Kind;
  switch (s.kind) {
    case K::sine_modes: {
      json modes = json::array();
      for (const auto& [m, a] : s.modes) modes.push_back({{"mode", m}, {"amplitude", a}});
      j = {{"kind", "sine_modes"}, {"modes", modes}};
      break;
    }
    case K::constant: j = {{"kind", "constant"}, {"value", s.value}}; break;
    case K::values: j = {{"kind", "values"}, {"values", s.values}}; break;
  }
}

void from_json(const json& j, InitialSpec& s) {
  const auto kind = get_required<std::string>(j, "kind", "initial");
  s = InitialSpec{};
  if (kind == "sine_modes") {
    require_keys(j, {"kind", "modes"}, "initial(sine_modes)");
    s.modes.clear();
    for (const auto& m : j.at("modes")) {
      require_keys(m, {"mode", "amplitude"}, "initial mode");
      s.modes.emplace_back(get_required<int>(m, "mode", "initial mode"),
                           get_required<double>(m, "amplitude", "initial mode"));
    }
  } else if (kind == "constant") {
    require_keys(j, {"kind", "value"}, "initial(constant)");
    s = InitialSpec::constant(get_required<double>(j, "value", "initial"));
  } else if (kind == "values") {
    require_keys(j, {"kind", "values"}, "initial(values)");
    s.kind = InitialSpec::Kind::values;
    s.values = get_required<std::vector<double>>(j, "values", "initial");
  } else {
    schema_error("initial", "unknown kind '" + kind + "'");
  }
}

void to_json(json& j, const BoundaryCondition& bc) {
  using F = BoundaryCondition::Form;
  switch (bc.form) {
    case F::dirichlet: j = {{"type", "dirichlet"}, {"data", bc.data}}; break;
    case F::robin:
      j = {{"type", "robin"}, {"mu", bc.mu}, {"lambda", bc.lambda}, {"data", bc.data}};
      break;
    case F::nonlocal_robin:
      j = {{"type", "nonlocal_robin"}, {"lambda", bc.lambda}, {"beta", bc.beta}, {"data", bc.data}};
      break;
  }
}

void from_json(const json& j, BoundaryCondition& bc) {
  const auto type = get_required<std::string>(j, "type", "boundary");
  const auto data = get_or(j, "data", DisturbanceSignal::zero());
  if (type == "dirichlet") {
    require_keys(j, {"type", "data"}, "boundary(dirichlet)");
    bc = BoundaryCondition::dirichlet(data);
  } else if (type == "robin") {
    require_keys(j, {"type", "mu", "lambda", "data"}, "boundary(robin)");
    bc = BoundaryCondition::robin(get_or(j, "mu", 1.0), get_required<double>(j, "lambda", "robin"),
                                  data);
  } else if (type == "neumann") {
    require_keys(j, {"type", "data"}, "boundary(neumann)");
    bc = BoundaryCondition::neumann(data);
  } else if (type == "nonlocal_robin") {
    require_keys(j, {"type", "lambda", "beta", "data"}, "boundary(nonlocal_robin)");
    bc = BoundaryCondition::nonlocal_robin(get_required<double>(j, "lambda", "nonlocal_robin"),
                                           get_or(j, "beta", ProfileFunctional{}), data);
  } else {
    schema_error("boundary", "unknown type '" + type + "'");
  }
}

void to_json(json& j, const BoundaryTermSpec& s) {
  using M = BoundaryTermSpec::Mode;
  j = {{"mode", to_string(s.mode)}};
  switch (s.mode) {
    case M::dirichlet: break;
    case M::general:
      j["g0"] = s.g0;
      j["g1"] = s.g1;
      j["k0"] = s.k0;
      j["k1"] = s.k1;
      break;
    case M::robin_left:
    case M::robin_right:
    case M::robin_both:
      j["mu0"] = s.mu0;
      j["lambda0"] = s.lambda0;
      j["mu1"] = s.mu1;
      j["lambda1"] = s.lambda1;
      break;
    case M::nonlocal:
      j["lambda0"] = s.lambda0;
      j["lambda1"] = s.lambda1;
      break;
  }
}

void from_json(const json& j, BoundaryTermSpec& s) {
  using M = BoundaryTermSpec::Mode;
  const auto mode = boundary_mode_from_string(get_required<std::string>(j, "mode", "boundary_terms"));
  const auto one = DisturbanceSignal::constant(1.0);
  switch (mode) {
    case M::dirichlet:
      require_keys(j, {"mode"}, "boundary_terms");
      s = BoundaryTermSpec::dirichlet();
      break;
    case M::general:
      require_keys(j, {"mode", "g0", "g1", "k0", "k1"}, "boundary_terms(general)");
      s = BoundaryTermSpec::general(get_or(j, "g0", one), get_or(j, "g1", one),
                                    get_or(j, "k0", one), get_or(j, "k1", one));
      break;
    case M::robin_left:
    case M::robin_right:
    case M::robin_both:
      require_keys(j, {"mode", "mu0", "lambda0", "mu1", "lambda1"}, "boundary_terms(robin)");
      s = BoundaryTermSpec::robin(mode, get_or(j, "mu0", 1.0), get_or(j, "lambda0", 0.0),
                                  get_or(j, "mu1", 1.0), get_or(j, "lambda1", 0.0));
      break;
    case M::nonlocal:
      require_keys(j, {"mode", "lambda0", "lambda1"}, "boundary_terms(nonlocal)");
      s = BoundaryTermSpec::nonlocal(get_required<double>(j, "lambda0", "boundary_terms"),
                                     get_required<double>(j, "lambda1", "boundary_terms"));
      break;
  }
}

namespace {

std::string family_to_string(WeightFunction::Family f) {
  switch (f) {
    case WeightFunction::Family::sine: return "sine";
    case WeightFunction::Family::cosine: return "cosine";
    case WeightFunction::Family::exponential: return "exponential";
    case WeightFunction::Family::tabulated_cubic: return "tabulated_cubic";
  }
  return "unknown";
}

WeightFunction::Family family_from_string(const std::string& s) {
  using F = WeightFunction::Family;
  for (F f : {F::sine, F::cosine, F::exponential, F::tabulated_cubic}) {
    if (family_to_string(f) == s) return f;
  }
  schema_error("certificate", "unknown family '" + s + "'");
}

const char* mode_name(CertificateSpec::Mode m) {
  switch (m) {
    case CertificateSpec::Mode::maximize: return "maximize";
    case CertificateSpec::Mode::synthesize_sine: return "synthesize_sine";
    case CertificateSpec::Mode::synthesize_cosine: return "synthesize_cosine";
    case CertificateSpec::Mode::given: return "given";
  }
  return "unknown";
}

json certificate_to_json(const CertificateSpec& c) {
  json j = {{"mode", mode_name(c.mode)}, {"margin", c.margin}, {"grid_size", c.grid_size}};
  switch (c.mode) {
    case CertificateSpec::Mode::maximize: j["family"] = family_to_string(c.family); break;
    case CertificateSpec::Mode::synthesize_sine: j["sigma_fraction"] = c.sigma_fraction; break;
    case CertificateSpec::Mode::synthesize_cosine: j["eps_b"] = c.eps_b; break;
    case CertificateSpec::Mode::given:
      j["weight"] = *c.weight;
      j["sigma"] = c.sigma;
      break;
  }
  return j;
}

CertificateSpec certificate_from_json(const json& j) {
  require_keys(j, {"mode", "family", "sigma_fraction", "eps_b", "weight", "sigma", "margin",
                   "grid_size"},
               "certificate");
  CertificateSpec c;
  const auto mode = get_required<std::string>(j, "mode", "certificate");
  if (mode == "maximize") {
    c.mode = CertificateSpec::Mode::maximize;
    c.family = family_from_string(get_or<std::string>(j, "family", "sine"));
  } else if (mode == "synthesize_sine") {
    c.mode = CertificateSpec::Mode::synthesize_sine;
    c.sigma_fraction = get_or(j, "sigma_fraction", c.sigma_fraction);
    if (!(c.sigma_fraction > 0.0 && c.sigma_fraction < 1.0)) {
      schema_error("certificate", "sigma_fraction must lie in (0, 1)");
    }
  } else if (mode == "synthesize_cosine") {
    c.mode = CertificateSpec::Mode::synthesize_cosine;
    c.eps_b = get_or(j, "eps_b", c.eps_b);
  } else if (mode == "given") {
    c.mode = CertificateSpec::Mode::given;
    c.weight = get_required<WeightFunction>(j, "weight", "certificate");
    c.sigma = get_required<double>(j, "sigma", "certificate");
  } else {
    schema_error("certificate", "unknown mode '" + mode + "'");
  }
  c.margin = get_or(j, "margin", c.margin);
  c.grid_size = get_or(j, "grid_size", c.grid_size);
  return c;
}

}  // namespace

void to_json(json& j, const Scenario& s) {
  json bounds = {{"zetas", s.bounds.zetas},
                 {"zeta_fractions", s.bounds.zeta_fractions},
                 {"boundary_terms", s.bounds.terms},
                 {"max_zeta_fraction", s.bounds.max_zeta_fraction}};
  if (s.bounds.tolerance) bounds["tolerance"] = *s.bounds.tolerance;
  json solver = {{"scheme", to_string(s.solver.scheme)},
                 {"cfl_safety", s.solver.cfl_safety},
                 {"output_count", s.solver.output_count},
                 {"max_steps", s.solver.max_steps}};
  if (std::isfinite(s.solver.dt_max)) solver["dt_max"] = s.solver.dt_max;
  json expect = {{"infeasible_certificate", s.expect.infeasible_certificate}};
  if (s.expect.max_sup_drift) expect["max_sup_drift"] = *s.expect.max_sup_drift;

  j = {{"name", s.name},
       {"seed", s.seed},
       {"grid", {{"cells", s.cells}}},
       {"horizon", s.horizon},
       {"boundary", {{"left", s.left}, {"right", s.right}}},
       {"initial", s.initial},
       {"certificate", certificate_to_json(s.certificate)},
       {"bounds", bounds},
       {"solver", solver},
       {"expect", expect}};
  if (s.transform) {
    json t = s.transform->spec;
    t["phi"] = s.transform->phi;
    if (s.transform->conjugacy_tolerance) {
      t["conjugacy_tolerance"] = *s.transform->conjugacy_tolerance;
    }
    j["transform"] = t;
    j["pde"] = {{"b", s.b}, {"c", s.c}, {"f", s.f}};
  } else {
    j["pde"] = {{"a", s.a}, {"b", s.b}, {"c", s.c}, {"f", s.f}, {"gradient_squared", s.gradient_squared}};
  }
  if (s.output_prefix) j["output"] = {{"prefix", *s.output_prefix}};
}

void from_json(const json& j, Scenario& s) {
  require_keys(j, {"name", "seed", "grid", "horizon", "pde", "boundary", "initial", "certificate",
                   "bounds", "solver", "transform", "expect", "output"},
               "scenario");
  s = Scenario{};
  s.name = get_required<std::string>(j, "name", "scenario");
  s.seed = get_or<std::uint64_t>(j, "seed", 0);
  if (auto it = j.find("grid"); it != j.end()) {
    require_keys(*it, {"cells"}, "grid");
    s.cells = get_required<int>(*it, "cells", "grid");
  }
  s.horizon = get_required<double>(j, "horizon", "scenario");

  if (auto it = j.find("transform"); it != j.end()) {
    require_keys(*it, {"kappa", "g", "kappa_star", "u_lo", "u_hi", "nodes", "phi",
                       "conjugacy_tolerance"},
                 "transform");
    TransformSection t;
    json spec_part = *it;
    spec_part.erase("phi");
    spec_part.erase("conjugacy_tolerance");
    t.spec = spec_part.get<TransformSpec>();
    t.phi = get_or(*it, "phi", t.phi);
    if (it->contains("conjugacy_tolerance")) {
      t.conjugacy_tolerance = it->at("conjugacy_tolerance").get<double>();
    }
    s.transform = std::move(t);
  }

  if (auto it = j.find("pde"); it != j.end()) {
    if (s.transform) {
      require_keys(*it, {"b", "c", "f"}, "pde (with transform)");
    } else {
      require_keys(*it, {"a", "b", "c", "f", "gradient_squared"}, "pde");
      s.a = get_or(*it, "a", s.a);
      s.gradient_squared = get_or(*it, "gradient_squared", s.gradient_squared);
    }
    s.b = get_or(*it, "b", s.b);
    s.c = get_or(*it, "c", s.c);
    s.f = get_or(*it, "f", s.f);
  }
  if (auto it = j.find("boundary"); it != j.end()) {
    require_keys(*it, {"left", "right"}, "boundary");
    s.left = get_or(*it, "left", s.left);
    s.right = get_or(*it, "right", s.right);
  }
  s.initial = get_or(j, "initial", s.initial);
  if (auto it = j.find("certificate"); it != j.end()) s.certificate = certificate_from_json(*it);
  if (auto it = j.find("bounds"); it != j.end()) {
    require_keys(*it, {"zetas", "zeta_fractions", "boundary_terms", "tolerance",
                       "max_zeta_fraction"},
                 "bounds");
    s.bounds.zetas = get_or(*it, "zetas", s.bounds.zetas);
    s.bounds.zeta_fractions = get_or(*it, "zeta_fractions", s.bounds.zeta_fractions);
    s.bounds.terms = get_or(*it, "boundary_terms", s.bounds.terms);
    if (it->contains("tolerance")) s.bounds.tolerance = it->at("tolerance").get<double>();
    s.bounds.max_zeta_fraction = get_or(*it, "max_zeta_fraction", s.bounds.max_zeta_fraction);
  }
  if (auto it = j.find("solver"); it != j.end()) {
    require_keys(*it, {"scheme", "cfl_safety", "output_count", "max_steps", "dt_max"}, "solver");
    s.solver.scheme = scheme_from_string(get_or<std::string>(*it, "scheme", "rk4"));
    s.solver.cfl_safety = get_or(*it, "cfl_safety", s.solver.cfl_safety);
    s.solver.output_count = get_or(*it, "output_count", s.solver.output_count);
    s.solver.max_steps = get_or(*it, "max_steps", s.solver.max_steps);
    s.solver.dt_max = get_or(*it, "dt_max", s.solver.dt_max);
  }
  if (auto it = j.find("expect"); it != j.end()) {
    require_keys(*it, {"infeasible_certificate", "max_sup_drift"}, "expect");
    s.expect.infeasible_certificate = get_or(*it, "infeasible_certificate", false);
    if (it->contains("max_sup_drift")) s.expect.max_sup_drift = it->at("max_sup_drift").get<double>();
  }
  if (auto it = j.find("output"); it != j.end()) {
    require_keys(*it, {"prefix"}, "output");
    s.output_prefix = get_required<std::string>(*it, "prefix", "output");
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::scenario_error, "cannot open scenario file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::scenario_error, path.string() + ": " + e.what());
  }
  try {
    return j.get<Scenario>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::scenario_error, path.string() + ": " + e.what());
  }
}

PdeProblem build_problem(const Scenario& s) {
  if (s.cells < 2) throw Error(ErrorCode::scenario_error, "grid needs at least 2 cells");
  PdeProblem p;
  p.grid = SpatialGrid(static_cast<std::size_t>(s.cells));
  p.horizon = s.horizon;
  if (s.transform) {
    p.a = CoefficientField::of_state(s.transform->spec.kappa);
    p.gradient_squared = CoefficientField::of_state(s.transform->spec.g);
  } else {
    p.a = s.a.build();
    p.gradient_squared = s.gradient_squared.build();
  }
  p.b = s.b.build();
  p.c = s.c.build();
  p.f = s.f.build();
  p.left = s.left;
  p.right = s.right;
  p.initial = s.initial.build(p.grid);
  return p;
}

SolverConfig build_solver_config(const Scenario& s) {
  SolverConfig cfg;
  cfg.scheme = s.solver.scheme;
  cfg.cfl_safety = s.solver.cfl_safety;
  cfg.max_steps = s.solver.max_steps;
  cfg.dt_max = s.solver.dt_max;
  cfg.output_times = SolverConfig::uniform_times(s.horizon, s.solver.output_count);
  return cfg;
}

}  // namespace isslab
