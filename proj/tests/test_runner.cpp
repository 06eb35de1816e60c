#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "isslab/builtins.hpp"
#include "isslab/oracles.hpp"
#include "isslab/runner.hpp"

using namespace isslab;
using std::numbers::pi;

namespace {

Scenario small_heat() {
  Scenario s = builtin_scenario("heat-dirichlet-decay");
  s.cells = 64;
  s.horizon = 0.2;
  s.solver.output_count = 20;
  return s;
}

}  // namespace

TEST(Runner, HeatScenarioPasses) {
  const auto r = run_scenario(small_heat());
  EXPECT_TRUE(r.pass) << r.error;
  EXPECT_EQ(r.exit_code, exit_pass);
  ASSERT_EQ(r.bounds.size(), 2u);
  for (const auto& z : r.bounds) {
    EXPECT_TRUE(z.trace.violations.empty());
    EXPECT_LE(z.trace.tightness(), 1.0 + r.tolerance);
  }
}

TEST(Runner, ZeroZetaEnvelopeIsFlat) {
  const auto r = run_scenario(small_heat());
  const auto& t = r.bounds.front().trace;
  ASSERT_EQ(t.zeta, 0.0);
  for (double v : t.rhs) EXPECT_DOUBLE_EQ(v, t.lhs.front());
}

TEST(Runner, UnexpectedInfeasibilityExitsTwo) {
  Scenario s = small_heat();
  s.c = CoefficientSpec::constant(pi * pi + 1.0);
  const auto r = run_scenario(s);
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.exit_code, exit_infeasible_certificate);
  EXPECT_EQ(r.stage, "certificate");
}

TEST(Runner, ModelErrorExitsThree) {
  Scenario s = small_heat();
  s.a = CoefficientSpec::constant(-1.0);
  const auto r = run_scenario(s);
  EXPECT_EQ(r.exit_code, exit_model_error);
  EXPECT_EQ(r.stage, "model");
}

TEST(Runner, SimulateSkipsCertificate) {
  const auto r = run_scenario(small_heat(), RunMode::simulate);
  EXPECT_TRUE(r.pass);
  EXPECT_FALSE(r.certificate.has_value());
  ASSERT_TRUE(r.trajectory.has_value());
  EXPECT_EQ(r.trajectory->size(), 21u);
}

TEST(Runner, CertifyRoundTripsThroughJson) {
  const auto r = run_scenario(small_heat(), RunMode::certify);
  ASSERT_TRUE(r.certificate.has_value());
  const auto back = nlohmann::json(*r.certificate).get<WeightCertificate>();
  EXPECT_EQ(back.verdict, r.certificate->verdict);
  const auto j = r.to_json();
  for (const char* key : {"family", "parameters", "sigma", "margin", "grid_size", "verdict",
                          "worst_point"}) {
    EXPECT_TRUE(j["certificate"].contains(key)) << key;
  }
}

TEST(Runner, BatchIsOrderedByName) {
  std::vector<Scenario> batch;
  for (const char* name : {"robin-both-linear", "heat-dirichlet-decay"}) {
    Scenario s = builtin_scenario(name);
    s.horizon = 0.1;
    s.cells = 32;
    batch.push_back(s);
  }
  const auto reports = run_batch(batch, 2);
  ASSERT_EQ(reports.size(), 2u);
  EXPECT_EQ(reports[0].scenario, "heat-dirichlet-decay");
  EXPECT_EQ(reports[1].scenario, "robin-both-linear");
}

TEST(Runner, DeterministicReports) {
  const auto a = run_scenario(small_heat()).to_json();
  const auto b = run_scenario(small_heat()).to_json();
  EXPECT_EQ(a["bounds"], b["bounds"]);
  EXPECT_EQ(a["trajectory"], b["trajectory"]);
}

TEST(Runner, WriteReportEmitsCsvBesideJson) {
  const auto dir = std::filesystem::temp_directory_path() / "isslab_runner_test";
  std::filesystem::remove_all(dir);
  write_report(run_scenario(small_heat()), dir / "heat.json");
  EXPECT_TRUE(std::filesystem::exists(dir / "heat.json"));
  EXPECT_TRUE(std::filesystem::exists(dir / "heat_zeta0.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "heat_zeta1.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "heat_trajectory.csv"));
  std::filesystem::remove_all(dir);
}

TEST(Sweep, SortedAndBounded) {
  const double sigma = scenario_certificate(small_heat()).sigma;
  const auto rows = sweep_zeta(small_heat(), {0.9 * sigma, 0.0, 0.3 * sigma});
  ASSERT_EQ(rows.size(), 3u);
  for (std::size_t k = 1; k < rows.size(); ++k) EXPECT_LT(rows[k - 1].zeta, rows[k].zeta);
  for (const auto& r : rows) {
    EXPECT_LE(r.tightness, 1.0 + 1e-6);
    EXPECT_EQ(r.violations, 0u);
  }
}

TEST(Sweep, RejectsZetaBeyondFraction) {
  const double sigma = scenario_certificate(small_heat()).sigma;
  EXPECT_THROW(sweep_zeta(small_heat(), {0.99 * sigma}), Error);
}

TEST(Oracles, DecayingSineIsLipschitz) {
  std::vector<double> xs;
  for (int i = 0; i <= 200; ++i) xs.push_back(i / 200.0);
  auto profile = [&](double t) {
    std::vector<double> u;
    for (double x : xs) u.push_back(std::exp(-t) * std::sin(pi * x));
    return u;
  };
  // max |u_t| = max e^{-t} |sin(pi x)| = 1 on t >= 0.
  for (double t1 : {0.0, 0.4, 1.3}) {
    const double t2 = t1 + 0.3;
    const double change = std::abs(sup_norm(profile(t2)) - sup_norm(profile(t1)));
    EXPECT_NEAR(change, std::exp(-t1) - std::exp(-t2), 1e-12);
    EXPECT_LE(change, t2 - t1);
  }
}

TEST(Oracles, ContactSetOfSineWithUnitDirection) {
  std::vector<double> u, w;
  for (int i = 0; i <= 1000; ++i) {
    u.push_back(std::sin(pi * i / 1000.0));
    w.push_back(1.0);
  }
  EXPECT_DOUBLE_EQ(contact_set_bound(u, w), 1.0);
  EXPECT_NEAR(norm_forward_difference(u, w, 1e-6), 1.0, 1e-6);
}

TEST(Oracles, ZeroProfileOnlyNeedsDirectionNorm) {
  const std::vector<double> zero(11, 0.0), w{0.1, -0.7, 0.3, 0, 0, 0, 0, 0, 0, 0, 0.2};
  EXPECT_NEAR(norm_forward_difference(zero, w, 1e-8), 0.7, 1e-12);
  EXPECT_THROW(contact_set_bound(zero, w), Error);
}

TEST(Oracles, SeededSuitePasses) {
  const auto r = derivative_oracles(1, 40, 257);
  EXPECT_TRUE(r.pass()) << r.to_json().dump(2);
  EXPECT_EQ(r.lipschitz.trials, 40);
  EXPECT_EQ(r.dini.trials, 40);
  EXPECT_EQ(r.contact.trials + r.zero_gate.trials, 40);
}
