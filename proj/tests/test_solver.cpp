#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "isslab/solver.hpp"

using namespace isslab;
using std::numbers::pi;

namespace {

PdeProblem heat(std::size_t cells, double horizon) {
  PdeProblem p;
  p.grid = SpatialGrid(cells);
  p.horizon = horizon;
  p.initial = GridProfile::sample(p.grid, [](double x) { return std::sin(pi * x); });
  return p;
}

SolverConfig outputs(double horizon, int count) {
  SolverConfig c;
  c.output_times = SolverConfig::uniform_times(horizon, count);
  return c;
}

double heat_error(std::size_t cells, double T) {
  const auto traj = integrate(heat(cells, T), outputs(T, 1));
  const auto& u = traj.snapshots.back();
  double err = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    err = std::max(err, std::abs(u[i] - std::exp(-pi * pi * T) * std::sin(pi * u.grid().x(i))));
  }
  return err;
}

}  // namespace

TEST(SpatialOperator, HeatSineIsSecondOrder) {
  double prev = 0.0;
  for (std::size_t n : {32u, 64u, 128u}) {
    const auto p = heat(n, 1.0);
    const auto du = step_spatial_operator(p, 0.0, p.initial);
    double err = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
      err = std::max(err, std::abs(du[i] + pi * pi * std::sin(pi * p.grid.x(i))));
    }
    const double h = p.grid.h();
    EXPECT_LE(err, 10.0 * h * h);  // truncation error pi^4 h^2 / 12
    if (prev > 0.0) EXPECT_NEAR(prev / err, 4.0, 0.2);
    prev = err;
  }
}

TEST(SpatialOperator, ConstantsAreStationary) {
  auto p = heat(16, 1.0);
  p.left = BoundaryCondition::dirichlet(DisturbanceSignal::constant(2.5));
  p.right = BoundaryCondition::dirichlet(DisturbanceSignal::constant(2.5));
  const GridProfile k(p.grid, std::vector<double>(17, 2.5));
  for (double v : step_spatial_operator(p, 0.3, k)) EXPECT_EQ(v, 0.0);
}

TEST(SpatialOperator, GradientSquaredOnLinearProfile) {
  auto p = heat(16, 1.0);
  p.gradient_squared = CoefficientField::constant(1.0);
  const auto u = GridProfile::sample(p.grid, [](double x) { return x; });
  const auto du = step_spatial_operator(p, 0.0, u);
  for (std::size_t i = 1; i < 16; ++i) EXPECT_NEAR(du[i], 1.0, 1e-12);
}

TEST(Boundary, DirichletTakesData) {
  auto p = heat(16, 1.0);
  p.left = BoundaryCondition::dirichlet(DisturbanceSignal::sinusoid(1.0, 1.0));
  const auto u = apply_boundary(p, pi / 2, p.initial);
  EXPECT_NEAR(u[0], 1.0, 1e-15);
}

TEST(Boundary, NeumannFlatProfile) {
  auto p = heat(16, 1.0);
  p.left = BoundaryCondition::neumann(DisturbanceSignal::zero());
  std::vector<double> v(17, 0.0);
  v[1] = v[2] = 5.0;
  const auto u = apply_boundary(p, 0.0, GridProfile(p.grid, v));
  EXPECT_NEAR(u[0], 5.0, 1e-14);
}

TEST(Boundary, NonlocalRobinSolvesScalarEquation) {
  auto p = heat(100, 1.0);
  p.left = BoundaryCondition::nonlocal_robin(
      1.0, ProfileFunctional(0.0, {{ProfileFunctional::Measure::sup, 1.0, 1}}),
      DisturbanceSignal::zero());
  const GridProfile ones(p.grid, std::vector<double>(101, 1.0));
  const auto u = apply_boundary(p, 0.0, ones);
  // (-3 u0 + 4 - 1) / 0.02 = 2 u0.
  EXPECT_NEAR(u[0], 3.0 / 3.04, 1e-14);
}

TEST(Integrate, HeatDecayMatchesAnalytic) {
  const auto traj = integrate(heat(256, 0.1), outputs(0.1, 10));
  EXPECT_NEAR(traj.snapshots.back().sup_norm(), std::exp(-pi * pi * 0.1), 1e-4);
}

TEST(Integrate, SecondOrderInSpace) {
  const double e1 = heat_error(32, 0.1), e2 = heat_error(64, 0.1);
  EXPECT_NEAR(e1 / e2, 4.0, 0.4);
}

TEST(Integrate, BoundaryDerivativeMatchesAnalytic) {
  const auto traj = integrate(heat(128, 0.1), outputs(0.1, 4));
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double h = 1.0 / 128;
    EXPECT_NEAR(traj.boundary_derivatives[k].first, pi * std::exp(-pi * pi * traj.times[k]),
                20.0 * h * h);
  }
}

TEST(Integrate, SharpnessRateKeepsAmplitude) {
  auto p = heat(128, 1.0);
  p.c = CoefficientField::constant(pi * pi);
  const auto traj = integrate(p, outputs(1.0, 20));
  for (const auto& s : traj.snapshots) EXPECT_NEAR(s.sup_norm(), 1.0, 0.01);
}

TEST(Integrate, ZeroDataStaysZero) {
  auto p = heat(32, 0.5);
  p.initial = GridProfile::zeros(p.grid);
  const auto traj = integrate(p, outputs(0.5, 5));
  for (const auto& s : traj.snapshots) EXPECT_EQ(s.sup_norm(), 0.0);
}

TEST(Integrate, DiscreteMaximumPrinciple) {
  auto p = heat(32, 0.2);
  p.c = CoefficientField::constant(-1.0);
  p.left = BoundaryCondition::dirichlet(DisturbanceSignal::constant(0.2));
  p.initial = GridProfile::sample(p.grid, [](double x) { return std::cos(3 * x); });
  const auto traj = integrate(p, outputs(0.2, 200));
  for (std::size_t k = 1; k < traj.size(); ++k) {
    const auto& prev = traj.snapshots[k - 1];
    const double hi = std::max({*std::max_element(prev.values().begin(), prev.values().end()), 0.2, 0.0});
    const double lo = std::min({*std::min_element(prev.values().begin(), prev.values().end()), 0.2, 0.0});
    for (double v : traj.snapshots[k].values()) {
      EXPECT_LE(v, hi + 1e-12);
      EXPECT_GE(v, lo - 1e-12);
    }
  }
}

TEST(Integrate, Deterministic) {
  auto p = heat(64, 0.05);
  p.c = CoefficientField::of_state(ScalarFunction::sine(1.0, 2.0));
  const auto a = integrate(p, outputs(0.05, 5));
  const auto b = integrate(p, outputs(0.05, 5));
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_TRUE(std::equal(a.snapshots[k].values().begin(), a.snapshots[k].values().end(),
                           b.snapshots[k].values().begin()));
  }
}

TEST(Integrate, SemiImplicitTracksRk4) {
  auto p = heat(64, 0.1);
  auto cfg = outputs(0.1, 4);
  cfg.scheme = SolverConfig::Scheme::semi_implicit;
  cfg.dt_max = 1e-5;
  const auto traj = integrate(p, cfg);
  EXPECT_NEAR(traj.snapshots.back().sup_norm(), std::exp(-pi * pi * 0.1), 1e-3);
}

TEST(Integrate, BlowUpIsReported) {
  auto p = heat(16, 10.0);
  p.c = CoefficientField::constant(20.0);
  p.initial = GridProfile::sample(p.grid, [](double x) { return 1e10 * std::sin(pi * x); });
  try {
    integrate(p, outputs(10.0, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::blow_up);
  }
}

TEST(TrajectoryCsv, LongFormat) {
  const auto traj = integrate(heat(8, 0.01), outputs(0.01, 2));
  std::ostringstream os;
  write_trajectory_csv(os, traj);
  const auto text = os.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "t,x,u");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1 + 3 * 9);
  const auto summary = trajectory_summary(traj);
  EXPECT_TRUE(summary.is_object());
}
