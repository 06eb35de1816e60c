#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "isslab/transforms.hpp"

using namespace isslab;
using std::numbers::e;
using std::numbers::pi;

namespace {

TransformSpec exponential_spec() {
  TransformSpec s;
  s.kappa = ScalarFunction::constant(1.0);
  s.g = ScalarFunction::constant(1.0);
  s.u_lo = -3.0;
  s.u_hi = 3.0;
  return s;
}

const GammaTable& exponential_table() {
  static const GammaTable t = GammaTable::build(exponential_spec());
  return t;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an exception";
  return ErrorCode::invalid_argument;
}

}  // namespace

TEST(Gamma, ZeroGradientTermIsIdentity) {
  TransformSpec s;
  s.kappa = ScalarFunction::sine(0.5, 1.0, 1.5);
  s.g = ScalarFunction::constant(0.0);
  s.kappa_star = 1.0;
  const auto t = GammaTable::build(s);
  for (double u = -3.9; u < 3.9; u += 0.37) {
    EXPECT_NEAR(t.gamma(u), u, 1e-14);
    EXPECT_NEAR(t.gamma_inverse(u), u, 1e-12);
  }
}

TEST(Gamma, ExponentialClosedForm) {
  const auto& t = exponential_table();
  EXPECT_NEAR(t.gamma(1.0), e - 1.0, 1e-9);
  for (double u = -2.9; u < 2.9; u += 0.113) EXPECT_NEAR(t.gamma(u), std::expm1(u), 1e-9);
  EXPECT_NEAR(t.gamma_inverse(e - 1.0), 1.0, 1e-8);
}

TEST(Gamma, VanishesAtZero) {
  for (double g : {0.0, 0.5, -0.7}) {
    TransformSpec s;
    s.g = ScalarFunction::sine(g, 1.3, 0.1);
    EXPECT_EQ(GammaTable::build(s).gamma(0.0), 0.0);
  }
}

TEST(Gamma, RoundTripOnRandomPoints) {
  const auto& t = exponential_table();
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int k = 0; k < 1000; ++k) {
    const double x = u(rng);
    EXPECT_NEAR(t.gamma_inverse(t.gamma(x)), x, 1e-8);
  }
}

TEST(Gamma, TableIsStrictlyIncreasing) {
  const auto& w = exponential_table().values();
  for (std::size_t i = 1; i < w.size(); ++i) EXPECT_GT(w[i], w[i - 1]);
}

TEST(Gamma, OutsideDomainThrows) {
  EXPECT_EQ(code_of([] { exponential_table().gamma(3.5); }), ErrorCode::table_domain_exceeded);
}

TEST(Envelopes, ExponentialValues) {
  const auto [g1, g2] = exponential_table().envelopes(1.0);
  EXPECT_NEAR(g1, 1.0 - 1.0 / e, 1e-9);
  EXPECT_NEAR(g2, e - 1.0, 1e-9);
  const auto [z1, z2] = exponential_table().envelopes(0.0);
  EXPECT_EQ(z1, 0.0);
  EXPECT_EQ(z2, 0.0);
}

TEST(Envelopes, OddGammaHasEqualEnvelopes) {
  TransformSpec s;
  s.kappa = ScalarFunction::constant(2.0);
  s.g = ScalarFunction::constant(0.0);
  s.kappa_star = 2.0;
  const auto t = GammaTable::build(s);
  for (double x = 0.0; x < 3.5; x += 0.25) {
    const auto [g1, g2] = t.envelopes(x);
    EXPECT_NEAR(g1, g2, 1e-14);
  }
}

TEST(Envelopes, SandwichAndMonotone) {
  const auto& t = exponential_table();
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int k = 0; k < 10000; ++k) {
    const double x = u(rng);
    const auto [g1, g2] = t.envelopes(std::abs(x));
    EXPECT_LE(g1, std::abs(t.gamma(x)) + 1e-15);
    EXPECT_LE(std::abs(t.gamma(x)), g2 + 1e-15);
  }
  double p1 = -1.0, p2 = -1.0;
  for (double s = 0.0; s <= 3.0; s += 0.01) {
    const auto [g1, g2] = t.envelopes(s);
    EXPECT_GE(g1, p1);
    EXPECT_GE(g2, p2);
    p1 = g1;
    p2 = g2;
  }
}

TEST(IssGain, ZeroInputGivesZero) {
  EXPECT_EQ(exponential_table().iss_gain(pi / 4, 0.5, 0.0, 0.3), 0.0);
}

TEST(IssGain, IdentityTransformIsLinearGain) {
  TransformSpec s;
  const auto t = GammaTable::build(s);
  const double phi = 0.6, zeta = 1.2, x = 0.4, time = 0.7;
  EXPECT_NEAR(t.iss_gain(phi, zeta, x, time), std::exp(-zeta * time) * x / std::sin(phi), 1e-9);
}

TEST(IssGain, LargeInputExceedsLowerEnvelope) {
  // sqrt(2)(e - 1) ~ 2.43 exceeds sup gamma1 = 1 - e^{-3} on this table.
  EXPECT_EQ(code_of([] { exponential_table().iss_gain(pi / 4, 0.0, 1.0, 0.0); }),
            ErrorCode::table_domain_exceeded);
}

TEST(GammaJson, RoundTripRevalidates) {
  const nlohmann::json j = exponential_table();
  const GammaTable back = j.get<GammaTable>();
  EXPECT_EQ(back.values(), exponential_table().values());
  nlohmann::json broken = j;
  broken["gamma"][10] = broken["gamma"][9];
  EXPECT_THROW(broken.get<GammaTable>(), Error);
}

TEST(TransformProblem, MapsBoundaryDataAndInitial) {
  auto table = std::make_shared<const GammaTable>(GammaTable::build(exponential_spec()));
  PdeProblem p;
  p.grid = SpatialGrid(16);
  p.a = CoefficientField::constant(1.0);
  p.gradient_squared = CoefficientField::constant(1.0);
  p.left = BoundaryCondition::dirichlet(DisturbanceSignal::constant(1.0));
  p.initial = GridProfile::zeros(p.grid);
  const auto q = transform_problem(table, p);
  EXPECT_NEAR(q.left.data(0.3), e - 1.0, 1e-9);
  for (double v : q.initial.values()) EXPECT_EQ(v, 0.0);
  EXPECT_TRUE(q.gradient_squared.is_zero());
}

TEST(TransformProblem, IdentityLeavesProblemUnchanged) {
  auto table = std::make_shared<const GammaTable>(GammaTable::build(TransformSpec{}));
  PdeProblem p;
  p.grid = SpatialGrid(16);
  p.initial = GridProfile::sample(p.grid, [](double x) { return std::sin(pi * x); });
  p.left = BoundaryCondition::dirichlet(DisturbanceSignal::sinusoid(0.2, 3.0));
  const auto q = transform_problem(table, p);
  for (std::size_t i = 0; i < p.initial.size(); ++i) EXPECT_NEAR(q.initial[i], p.initial[i], 1e-14);
  for (double t = 0.0; t <= 1.0; t += 0.05) EXPECT_NEAR(q.left.data(t), p.left.data(t), 1e-4);
  EXPECT_TRUE(q.gradient_squared.is_zero());
}
