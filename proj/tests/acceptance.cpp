// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances are the contract values and must not be relaxed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "isslab/builtins.hpp"
#include "isslab/certificates.hpp"
#include "isslab/iss_bounds.hpp"
#include "isslab/oracles.hpp"
#include "isslab/runner.hpp"
#include "isslab/transforms.hpp"

using namespace isslab;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

unsigned worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

// Shared between the randomized bound criterion and the dominance criterion.
std::vector<Scenario> g_random_scenarios;
std::vector<RunReport> g_random_reports;
std::optional<RunReport> g_nonlocal_report;

Outcome heat_decay() {
  const auto start = Clock::now();
  const Scenario s = builtin_scenario("heat-dirichlet-decay");
  const RunReport r = run_scenario(s);
  const double elapsed = seconds_since(start);
  if (!r.trajectory || !r.certificate) return {false, "run failed: " + r.error};
  double max_err = 0.0;
  for (std::size_t k = 0; k < r.trajectory->size(); ++k) {
    const double exact = std::exp(-pi * pi * r.trajectory->times[k]);
    max_err = std::max(max_err, std::abs(r.trajectory->snapshots[k].sup_norm() - exact));
  }
  const double sigma = r.certificate->sigma;
  const ZetaResult* half = nullptr;
  for (const auto& z : r.bounds) {
    if (std::abs(z.zeta - 0.5 * sigma) <= 1e-12 * sigma) half = &z;
  }
  const bool ok = max_err <= 5e-4 && sigma >= 0.95 * pi * pi && half &&
                  half->trace.violations.empty() && r.pass && elapsed < 5.0;
  return {ok, fmt("sup error %.2e (<= 5e-4), sigma/pi^2 = %.4f (>= 0.95), violations at "
                  "0.5 sigma = %zu, %.2f s (< 5 s)",
                  max_err, sigma / (pi * pi), half ? half->trace.violations.size() : 999u,
                  elapsed)};
}

Outcome randomized_reaction_diffusion() {
  const auto start = Clock::now();
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    g_random_scenarios.push_back(random_reaction_diffusion(seed));
  }
  g_random_reports = run_batch(g_random_scenarios, worker_count());
  const double elapsed = seconds_since(start);
  std::size_t failed = 0, violations = 0, traces = 0;
  std::string first_failure;
  for (const auto& r : g_random_reports) {
    if (!r.pass || r.bounds.size() != 3) {
      ++failed;
      if (first_failure.empty()) first_failure = r.scenario + ": " + r.error;
    }
    for (const auto& z : r.bounds) {
      ++traces;
      violations += z.trace.violations.size();
    }
  }
  const bool ok = failed == 0 && violations == 0 && traces == 300 && elapsed < 120.0;
  return {ok, fmt("%zu/100 scenarios pass, %zu traces, %zu violations, %.1f s (< 120 s)%s%s",
                  100 - failed, traces, violations, elapsed, first_failure.empty() ? "" : "; ",
                  first_failure.c_str())};
}

Outcome sharpness() {
  const RunReport r = run_scenario(builtin_scenario("sharpness-pi-squared"));
  bool infeasible = false;
  try {
    synthesize_sine_certificate(pi * pi, 1e-6);
  } catch (const Error& e) {
    infeasible = e.code() == ErrorCode::infeasible_certificate;
  }
  if (!r.trajectory) return {false, "run failed: " + r.error};
  double drift = 0.0;
  const double u0 = r.trajectory->snapshots.front().sup_norm();
  for (const auto& snap : r.trajectory->snapshots) {
    drift = std::max(drift, std::abs(snap.sup_norm() / u0 - 1.0));
  }
  const bool ok = infeasible && r.certificate_expected_infeasible && r.pass && drift <= 0.01 &&
                  std::abs(r.trajectory->times.back() - 1.0) < 1e-12 &&
                  r.trajectory->snapshots.front().grid().n_cells() == 512;
  return {ok, fmt("sup-norm drift %.2e (<= 1e-2) over [0, 1], synthesis at S = pi^2 %s", drift,
                  infeasible ? "infeasible" : "NOT infeasible")};
}

Outcome nonlocal_robin() {
  const Scenario s = builtin_scenario("nonlocal-robin-heat");
  RunReport r = run_scenario(s);
  if (!r.trajectory || !r.certificate) return {false, "run failed: " + r.error};
  const PdeProblem problem = build_problem(s);
  const WeightFunction& w = r.certificate->weight;
  const double theta = w.theta();
  const double kappa_star = CoefficientBounds::from_problem(problem).a.lo;
  const double l0 = s.bounds.terms.lambda0, l1 = s.bounds.terms.lambda1;
  const double closed_right = l1 * std::cos(theta) - theta * std::sin(theta);
  const double tol = r.tolerance;

  double component_gap = 0.0;  // computed r vs |d|/(beta + lambda) form
  double dominance_excess = -1e300;  // computed r minus the constant-denominator closed form
  double bound_excess = -1e300;  // lhs minus the closed-form envelope
  std::size_t checked_zetas = 0;
  const std::vector<double> zetas{0.0, 0.5 * kappa_star * theta * theta};
  for (double zeta : zetas) {
    const ZetaResult* z = nullptr;
    for (const auto& cand : r.bounds) {
      if (std::abs(cand.zeta - zeta) <= 1e-12 * (1.0 + zeta)) z = &cand;
    }
    if (!z || !z->trace.violations.empty()) return {false, fmt("zeta = %.4f missing or violated", zeta)};
    ++checked_zetas;
    FadingMemoryTracker closed(zeta);
    const double lhs0 = z->trace.lhs.front();
    for (std::size_t k = 0; k < r.trajectory->size(); ++k) {
      const double t = r.trajectory->times[k];
      const auto& u = r.trajectory->snapshots[k];
      const auto [ux0, ux1] = r.trajectory->boundary_derivatives[k];
      const double b0 = problem.left.beta(u), b1 = problem.right.beta(u);
      const double d0 = std::abs(problem.left.data(t)), d1 = std::abs(problem.right.data(t));
      const BoundarySample sample{t, u[0], u[u.size() - 1], ux0, ux1, b0, b1};
      const auto [r0, r1] = boundary_terms(s.bounds.terms, sample, w);
      const double e0 = std::min(std::abs(u[0]) / w.value(0.0), d0 / (b0 + l0));
      const double e1 = std::min(std::abs(u[u.size() - 1]) / w.value(1.0),
                                 d1 / ((b1 + l1) * std::cos(theta) - theta * std::sin(theta)));
      component_gap = std::max({component_gap, std::abs(r0 - e0), std::abs(r1 - e1)});
      // r recovers d from the one-sided boundary derivative, so it carries the
      // same discretization error as the component comparison above.
      dominance_excess = std::max({dominance_excess, r0 - d0 / l0, r1 - d1 / closed_right});
      closed.update(t, std::max(d0 / l0, d1 / closed_right));
      const double envelope = std::max(std::exp(-zeta * t) * lhs0, closed.value());
      bound_excess = std::max(bound_excess, z->trace.lhs[k] - envelope);
    }
  }
  g_nonlocal_report = std::move(r);
  const bool ok = checked_zetas == 2 && component_gap <= tol && dominance_excess <= tol &&
                  bound_excess <= tol && g_nonlocal_report->pass;
  return {ok, fmt("theta = %.6f, component gap %.2e (<= %.2e), closed-form dominance excess "
                  "%.2e (<= %.2e), closed-form bound excess %.2e (<= %.2e)",
                  theta, component_gap, tol, dominance_excess, tol, bound_excess, tol)};
}

Outcome conductivity_conjugacy() {
  const Scenario s = builtin_scenario("conductivity-transform");
  const RunReport r = run_scenario(s);
  const auto table = GammaTable::build(s.transform->spec);
  std::mt19937_64 rng(2024);
  const Interval dom = table.domain();
  std::uniform_real_distribution<double> u(dom.lo, dom.hi);
  double roundtrip = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double x = u(rng);
    roundtrip = std::max(roundtrip, std::abs(table.gamma_inverse(table.gamma(x)) - x));
  }
  std::size_t sandwich_failures = 0;
  for (int k = 0; k < 10000; ++k) {
    const double x = u(rng);
    const auto [g1, g2] = table.envelopes(std::abs(x));
    const double gx = std::abs(table.gamma(x));
    if (!(g1 <= gx && gx <= g2)) ++sandwich_failures;
  }
  if (!r.checks.contains("conjugacy_gap")) return {false, "run failed: " + r.error};
  const double gap = r.checks["conjugacy_gap"].get<double>();
  const double h = 1.0 / s.cells;
  std::size_t gain_violations = 0, gain_traces = 0;
  for (const auto& z : r.bounds) {
    if (z.gain_trace) {
      ++gain_traces;
      gain_violations += z.gain_trace->violations.size();
    }
  }
  const bool ok = gap <= 20.0 * h * h && roundtrip <= 1e-8 && sandwich_failures == 0 &&
                  gain_traces > 0 && gain_violations == 0 && r.pass;
  return {ok, fmt("conjugacy gap %.2e (<= 20 h^2 = %.2e), roundtrip %.2e (<= 1e-8), sandwich "
                  "failures %zu/10000, gain violations %zu over %zu traces",
                  gap, 20.0 * h * h, roundtrip, sandwich_failures, gain_violations, gain_traces)};
}

Outcome tracker_oracle() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int seq = 0; seq < 10000; ++seq) {
    const int n = 1 + static_cast<int>(unit(rng) * 64);
    const double zeta = unit(rng) < 0.1 ? 0.0 : 5.0 * unit(rng);
    std::vector<double> ts(n), gs(n);
    double t = unit(rng);
    for (int i = 0; i < n; ++i) {
      ts[i] = t;
      gs[i] = unit(rng) < 0.2 ? 0.0 : std::exp(4.0 * (unit(rng) - 0.5));
      t += unit(rng) < 0.1 ? 0.0 : 0.5 * unit(rng);
    }
    FadingMemoryTracker tracker(zeta);
    for (int i = 0; i < n; ++i) {
      tracker.update(ts[i], gs[i]);
      double brute = 0.0;
      for (int j = 0; j <= i; ++j) brute = std::max(brute, gs[j] * std::exp(-zeta * (ts[i] - ts[j])));
      const double rel = brute > 0.0 ? std::abs(tracker.value() - brute) / brute
                                     : std::abs(tracker.value());
      worst = std::max(worst, rel);
    }
  }
  return {worst <= 1e-12, fmt("worst relative gap %.2e over 10^4 sequences (<= 1e-12)", worst)};
}

Outcome derivative_oracle_suite() {
  const auto report = derivative_oracles(20240601, 200);
  const bool ok = report.pass() && report.lipschitz.passed == 200 && report.dini.passed == 200 &&
                  report.contact.passed + report.zero_gate.passed == 200;
  return {ok, fmt("lipschitz %d/200, dini %d/200 (|gap| <= 1e-3 at h = 1e-5), contact %d/%d, "
                  "zero-profile gate %d/%d",
                  report.lipschitz.passed, report.dini.passed, report.contact.passed,
                  report.contact.trials, report.zero_gate.passed, report.zero_gate.trials)};
}

CoefficientBounds random_bounds(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  CoefficientBounds b;
  b.a.lo = 0.2 + 1.8 * unit(rng);
  b.a.hi = b.a.lo + 2.0 * unit(rng);
  const double bc = 2.0 * unit(rng) - 1.0, bw = unit(rng);
  b.b = {bc - bw, bc + bw};
  b.c.lo = -3.0 + 6.0 * unit(rng);
  b.c.hi = b.c.lo + 2.0 * unit(rng);
  return b;
}

Outcome certificate_refinement() {
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  DecaySearchOptions coarse;
  coarse.lattice = 64;
  coarse.grid_size = 64;
  coarse.margin = 0.01;
  int verified = 0, reverified = 0;
  const WeightFunction::Family families[] = {WeightFunction::Family::sine,
                                             WeightFunction::Family::cosine,
                                             WeightFunction::Family::exponential};
  for (int k = 0; k < 300 && verified < 150; ++k) {
    const auto bounds = random_bounds(rng);
    WeightCertificate c;
    try {
      c = maximize_decay_rate(bounds, families[k % 3], coarse);
    } catch (const Error&) {
      continue;
    }
    ++verified;
    if (check_certificate(bounds, c.weight, c.sigma, 0.0, 4096).verified()) ++reverified;
  }

  int triples = 0, monotone = 0;
  for (int k = 0; k < 100000 && triples < 100; ++k) {
    const auto bounds = random_bounds(rng);
    const double theta = 0.2 + 2.8 * unit(rng);
    const auto weight = k % 2 ? WeightFunction::sine(theta, 0.5 * (pi - theta) * (0.3 + 0.7 * unit(rng)))
                              : WeightFunction::exponential(4.0 * unit(rng) - 2.0);
    const double sigma = 10.0 * unit(rng);
    const double margin = 0.05 * unit(rng);
    if (!check_certificate(bounds, weight, sigma, margin, 256).verified()) continue;
    ++triples;
    const double lower = sigma * unit(rng);
    const double widened = margin + (sigma - lower) * weight.min_on_grid(256);
    if (check_certificate(bounds, weight, lower, widened, 256).verified()) ++monotone;
  }
  const bool ok = verified >= 100 && reverified == verified && triples == 100 && monotone == 100;
  return {ok, fmt("%d/%d coarse certificates re-verify at grid 4096, sigma monotonicity %d/%d",
                  reverified, verified, monotone, triples)};
}

Outcome boundary_dominance() {
  if (g_random_reports.empty() || !g_nonlocal_report) return {false, "prerequisite runs missing"};
  std::size_t samples = 0, failures = 0;
  auto check = [&](const BoundaryTermSpec& spec, const BoundarySample& b, const WeightFunction& w) {
    const auto [r0, r1] = boundary_terms(spec, b, w);
    ++samples;
    const double cap0 = std::abs(b.u0) / w.value(0.0), cap1 = std::abs(b.u1) / w.value(1.0);
    if (!(r0 <= cap0 && r1 <= cap1)) ++failures;
  };
  // General-mode multipliers exercise the min() against the Dirichlet cap.
  const auto general = BoundaryTermSpec::general(
      DisturbanceSignal::constant(0.5), DisturbanceSignal::sinusoid(0.3, 2.0, 0.0, 1.0),
      DisturbanceSignal::constant(1.0), DisturbanceSignal::constant(2.0));
  for (std::size_t i = 0; i < g_random_reports.size(); ++i) {
    const auto& r = g_random_reports[i];
    if (!r.trajectory || !r.certificate) return {false, r.scenario + " has no trajectory"};
    for (std::size_t k = 0; k < r.trajectory->size(); ++k) {
      const auto& u = r.trajectory->snapshots[k];
      const auto [ux0, ux1] = r.trajectory->boundary_derivatives[k];
      const BoundarySample b{r.trajectory->times[k], u[0], u[u.size() - 1], ux0, ux1, 0.0, 0.0};
      check(g_random_scenarios[i].bounds.terms, b, r.certificate->weight);
      check(general, b, r.certificate->weight);
    }
  }
  const Scenario s = builtin_scenario("nonlocal-robin-heat");
  const PdeProblem problem = build_problem(s);
  const auto& r = *g_nonlocal_report;
  for (std::size_t k = 0; k < r.trajectory->size(); ++k) {
    const auto& u = r.trajectory->snapshots[k];
    const auto [ux0, ux1] = r.trajectory->boundary_derivatives[k];
    const BoundarySample b{r.trajectory->times[k], u[0], u[u.size() - 1], ux0, ux1,
                           problem.left.beta(u), problem.right.beta(u)};
    check(s.bounds.terms, b, r.certificate->weight);
    check(general, b, r.certificate->weight);
  }
  return {failures == 0, fmt("%zu/%zu samples satisfy r0 <= |u(t,0)|/eta(0) and "
                             "r1 <= |u(t,1)|/eta(1)",
                             samples - failures, samples)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"1 heat decay", heat_decay},
      {"2 randomized reaction-diffusion bound", randomized_reaction_diffusion},
      {"3 sharpness at pi^2", sharpness},
      {"4 non-local Robin closed-form bound", nonlocal_robin},
      {"5 conductivity transform conjugacy", conductivity_conjugacy},
      {"6 fading-memory tracker oracle", tracker_oracle},
      {"7 sup-norm derivative oracles", derivative_oracle_suite},
      {"8 certificate refinement and sigma monotonicity", certificate_refinement},
      {"9 boundary-term dominance", boundary_dominance},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = Clock::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s  [%s] %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(),
                seconds_since(start));
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d/9 criteria passed\n", 9 - failed);
  return failed == 0 ? 0 : 1;
}
