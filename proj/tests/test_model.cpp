#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "isslab/functions.hpp"
#include "isslab/pde_model.hpp"

using namespace isslab;
using std::numbers::pi;

namespace {

PdeProblem heat_problem(std::size_t cells = 32) {
  PdeProblem p;
  p.grid = SpatialGrid(cells);
  p.initial = GridProfile::sample(p.grid, [](double x) { return std::sin(pi * x); });
  return p;
}

}  // namespace

TEST(Grid, NodesCoverUnitInterval) {
  SpatialGrid g(10);
  EXPECT_EQ(g.n_nodes(), 11u);
  EXPECT_DOUBLE_EQ(g.x(0), 0.0);
  EXPECT_DOUBLE_EQ(g.x(10), 1.0);
  EXPECT_DOUBLE_EQ(g.h(), 0.1);
}

TEST(Interval, ProductCoversCorners) {
  const Interval p = Interval{-1.0, 2.0} * Interval{-3.0, 0.5};
  EXPECT_DOUBLE_EQ(p.lo, -6.0);
  EXPECT_DOUBLE_EQ(p.hi, 3.0);
}

TEST(ScalarFunction, RangeContainsSamples) {
  const ScalarFunction fns[] = {
      ScalarFunction::sine(0.75, 1.3, 1.25), ScalarFunction::tanh(2.0, 0.7, -0.5),
      ScalarFunction::polynomial({0.1, -0.4, 0.3}, Interval{-2.0, 2.0}),
      ScalarFunction::exponential(1.0, 0.5, 0.0, Interval{-3.0, 3.0})};
  for (const auto& f : fns) {
    const Interval r = f.range();
    for (int k = -300; k <= 300; ++k) {
      const double v = f(k * 0.01);
      EXPECT_LE(r.lo, v + 1e-12);
      EXPECT_GE(r.hi, v - 1e-12);
    }
  }
}

TEST(DisturbanceSignal, EveryKindIsContinuous) {
  const DisturbanceSignal signals[] = {
      DisturbanceSignal::zero(), DisturbanceSignal::constant(0.3),
      DisturbanceSignal::sinusoid(0.5, 3.0, 0.2), DisturbanceSignal::decaying_exponential(0.7, 2.0),
      DisturbanceSignal::piecewise_linear({0.1, 0.3, 0.5}, {0.0, 1.0, 0.0})};
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> t(0.0, 1.0);
  for (const auto& d : signals) {
    const double lip = d.lipschitz();
    for (int k = 0; k < 500; ++k) {
      const double s = t(rng), dt = 1e-6;
      EXPECT_LE(std::abs(d(s + dt) - d(s)), lip * dt * (1.0 + 1e-9) + 1e-15);
    }
  }
}

TEST(Coefficients, HeatEquationFieldsAreConstant) {
  const auto p = heat_problem();
  const auto arr = evaluate_coefficients(p, 0.37, p.initial);
  for (std::size_t i = 0; i < arr.a.size(); ++i) {
    EXPECT_EQ(arr.a[i], 1.0);
    EXPECT_EQ(arr.b[i], 0.0);
    EXPECT_EQ(arr.c[i], 0.0);
    EXPECT_EQ(arr.f[i], 0.0);
  }
}

TEST(Coefficients, NonlocalDiffusivityCollapsesOnZeroProfile) {
  auto p = heat_problem();
  const double kappa_star = 0.8;
  p.a = CoefficientField::nonlocal(
      ProfileFunctional(kappa_star, {{ProfileFunctional::Measure::sup, 1.0, 2}}));
  const auto arr = evaluate_coefficients(p, 0.0, GridProfile::zeros(p.grid));
  for (double a : arr.a) EXPECT_EQ(a, kappa_star);
  for (double c : arr.c) EXPECT_EQ(c, 0.0);
}

TEST(Coefficients, StateReactionIsPointwise) {
  auto p = heat_problem();
  p.c = CoefficientField::of_state(ScalarFunction::sine(1.0, 1.0));
  const GridProfile ones(p.grid, std::vector<double>(p.grid.n_nodes(), 1.0));
  const auto arr = evaluate_coefficients(p, 0.0, ones);
  // sin(1) to 18 digits.
  for (double c : arr.c) EXPECT_NEAR(c, 0.841470984807896507, 1e-15);
}

TEST(Coefficients, DiffusionStaysNonnegativeOnAdmissibleProblems) {
  auto p = heat_problem(64);
  p.a = CoefficientField::of_state(ScalarFunction::tanh(0.75, 1.7, 1.25));
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(p.grid.n_nodes());
    for (double& x : v) x = n(rng);
    const auto arr = evaluate_coefficients(p, 0.1 * trial, GridProfile(p.grid, v));
    for (double a : arr.a) EXPECT_GE(a, 0.0);
  }
}

TEST(Coefficients, EvaluationIsBitIdentical) {
  auto p = heat_problem();
  p.a = CoefficientField::of_state(ScalarFunction::sine(0.5, 2.0, 1.0));
  p.f = CoefficientField::separable(DisturbanceSignal::sinusoid(0.3, 2.0), SpatialShape::sine(2));
  const auto x = evaluate_coefficients(p, 0.41, p.initial);
  const auto y = evaluate_coefficients(p, 0.41, p.initial);
  EXPECT_EQ(x.a, y.a);
  EXPECT_EQ(x.f, y.f);
}

TEST(Coefficients, NegativeDiffusionThrows) {
  auto p = heat_problem();
  p.a = CoefficientField::constant(-1.0);
  try {
    evaluate_coefficients(p, 0.0, p.initial);
    FAIL() << "expected an exception";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::nonpositive_diffusion);
  }
}

TEST(Validation, HeatProblemIsAdmissible) {
  EXPECT_TRUE(validate_problem(heat_problem()).admissible());
}

TEST(Validation, ReportsNegativeDiffusion) {
  auto p = heat_problem();
  p.a = CoefficientField::constant(-1.0);
  EXPECT_TRUE(validate_problem(p).contains(ErrorCode::nonpositive_diffusion));
}

TEST(Validation, ReportsZeroRobinMu) {
  auto p = heat_problem();
  p.left = BoundaryCondition::robin(0.0, 1.0, DisturbanceSignal::zero());
  EXPECT_TRUE(validate_problem(p).contains(ErrorCode::invalid_robin_parameter));
}
