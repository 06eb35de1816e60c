#include "isslab/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <thread>

#include "isslab/errors.hpp"

namespace isslab {

using nlohmann::json;
using std::numbers::pi;

namespace {

const char* mode_name(RunMode m) {
  switch (m) {
    case RunMode::certify: return "certify";
    case RunMode::simulate: return "simulate";
    case RunMode::check: return "check";
  }
  return "unknown";
}

json trace_summary(const BoundTrace& t) {
  return {{"zeta", t.zeta},
          {"tolerance", t.tolerance},
          {"samples", t.size()},
          {"max_excess", t.max_excess()},
          {"violations", t.violations.size()},
          {"tightness", t.tightness()},
          {"tightest_time", t.tightest_time()}};
}

double boundary_beta(const BoundaryCondition& bc, const GridProfile& u) {
  return bc.form == BoundaryCondition::Form::nonlocal_robin ? bc.beta(u) : 0.0;
}

std::vector<double> resolve_zetas(const BoundSpec& bounds, double sigma) {
  std::vector<double> z = bounds.zetas;
  for (double f : bounds.zeta_fractions) z.push_back(f * sigma);
  std::sort(z.begin(), z.end());
  z.erase(std::unique(z.begin(), z.end()), z.end());
  return z;
}

double right_lambda(const BoundaryCondition& bc) {
  switch (bc.form) {
    case BoundaryCondition::Form::robin: return bc.lambda / bc.mu;
    case BoundaryCondition::Form::nonlocal_robin: return bc.lambda;
    case BoundaryCondition::Form::dirichlet: break;
  }
  throw Error(ErrorCode::invalid_argument, "cosine synthesis needs a Robin right end");
}

/// Largest amount by which the computed boundary component exceeds the
/// closed-form envelope built from |d0|/lambda0 and
/// |d1|/(lambda1 cos(theta) - theta sin(theta)).
double closed_form_boundary_gap(const PdeProblem& problem, const BoundTrace& trace,
                                const WeightFunction& weight, const BoundaryTermSpec& spec) {
  const double theta = weight.theta();
  const double right_den = spec.lambda1 * std::cos(theta) - theta * std::sin(theta);
  FadingMemoryTracker closed(trace.zeta);
  double gap = -kInf;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const double t = trace.times[k];
    closed.update(t, std::max(std::abs(problem.left.data(t)) / spec.lambda0,
                              std::abs(problem.right.data(t)) / right_den));
    gap = std::max(gap, trace.rhs_boundary[k] - closed.value());
  }
  return gap;
}

}  // namespace

WeightCertificate resolve_certificate(const CertificateSpec& spec, const PdeProblem& problem) {
  const auto bounds = CoefficientBounds::from_problem(problem);
  WeightCertificate cert;
  switch (spec.mode) {
    case CertificateSpec::Mode::maximize: {
      DecaySearchOptions options;
      options.grid_size = spec.grid_size;
      options.margin = spec.margin;
      cert = maximize_decay_rate(bounds, spec.family, options);
      break;
    }
    case CertificateSpec::Mode::synthesize_sine: {
      if (!(bounds.a.lo > 0.0)) {
        throw Error(ErrorCode::infeasible_certificate, "sine synthesis needs a_min > 0");
      }
      // sup (sigma + c)/a over the coefficient box, sigma a share of the
      // feasible range (0, a_min pi^2 - c_max).
      const double sigma_max = bounds.a.lo * pi * pi - bounds.c.hi;
      const double sigma = sigma_max > 0.0 ? spec.sigma_fraction * sigma_max : 1e-6;
      const double top = sigma + bounds.c.hi;
      const double s_bound =
          top >= 0.0 ? top / bounds.a.lo : (std::isfinite(bounds.a.hi) ? top / bounds.a.hi : 0.0);
      const auto synth = synthesize_sine_certificate(s_bound, sigma, spec.grid_size);
      cert = check_certificate(bounds, synth.weight, sigma, spec.margin, spec.grid_size);
      break;
    }
    case CertificateSpec::Mode::synthesize_cosine: {
      const auto synth = synthesize_cosine_certificate(bounds.a.lo, right_lambda(problem.right),
                                                       spec.eps_b, spec.grid_size);
      cert = check_certificate(bounds, synth.certificate.weight, synth.sigma, spec.margin,
                               spec.grid_size);
      break;
    }
    case CertificateSpec::Mode::given:
      if (!spec.weight) throw Error(ErrorCode::scenario_error, "given certificate needs a weight");
      cert = check_certificate(bounds, *spec.weight, spec.sigma, spec.margin, spec.grid_size);
      break;
  }
  if (!cert.verified()) {
    throw Error(ErrorCode::infeasible_certificate,
                "certificate " + to_string(cert.verdict) + " (worst residual " +
                    std::to_string(cert.worst.residual) + " at x = " +
                    std::to_string(cert.worst.x) + ")");
  }
  return cert;
}

WeightCertificate scenario_certificate(const Scenario& s) {
  const PdeProblem problem = build_problem(s);
  if (!s.transform) return resolve_certificate(s.certificate, problem);
  auto table = std::make_shared<const GammaTable>(GammaTable::build(s.transform->spec));
  return resolve_certificate(s.certificate, transform_problem(table, problem));
}

BoundTrace build_bound_trace(const PdeProblem& problem, const Trajectory& trajectory,
                             const WeightCertificate& certificate, const BoundaryTermSpec& spec,
                             double zeta, double tolerance, double max_zeta_fraction) {
  EnvelopeBuilder env(WeightedNorm(certificate.weight, problem.grid), spec, certificate.sigma,
                      zeta, tolerance, max_zeta_fraction);
  CoefficientArrays arrays(problem.grid.n_nodes());
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    const auto& u = trajectory.snapshots[k];
    const double t = trajectory.times[k];
    evaluate_coefficients(problem, t, u, arrays);
    const auto [ux0, ux1] = trajectory.boundary_derivatives[k];
    BoundarySample b{t,   u[0], u[u.size() - 1], ux0, ux1, boundary_beta(problem.left, u),
                     boundary_beta(problem.right, u)};
    env.append(u, b, arrays.f);
  }
  return env.trace();
}

BoundTrace build_gain_trace(const GammaTable& table, double phi, double zeta,
                            const PdeProblem& problem, const Trajectory& trajectory,
                            double tolerance) {
  BoundTrace trace;
  trace.sigma = table.spec().kappa_star * (pi - 2.0 * phi) * (pi - 2.0 * phi);
  trace.zeta = zeta;
  trace.tolerance = tolerance;
  const std::size_t n = trajectory.size();
  std::vector<double> d0(n), d1(n);
  for (std::size_t k = 0; k < n; ++k) {
    d0[k] = std::abs(problem.left.data(trajectory.times[k]));
    d1[k] = std::abs(problem.right.data(trajectory.times[k]));
  }
  const double u0_norm = n > 0 ? trajectory.snapshots.front().sup_norm() : 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = trajectory.times[k];
    const double lhs = trajectory.snapshots[k].sup_norm();
    const double ic = table.iss_gain(phi, zeta, u0_norm, t - trajectory.times.front());
    double bnd = 0.0;
    for (std::size_t j = 0; j <= k; ++j) {
      const double lag = t - trajectory.times[j];
      bnd = std::max({bnd, table.iss_gain(phi, zeta, d0[j], lag),
                      table.iss_gain(phi, zeta, d1[j], lag)});
    }
    const double rhs = std::max(ic, bnd);
    trace.times.push_back(t);
    trace.lhs.push_back(lhs);
    trace.rhs.push_back(rhs);
    trace.rhs_ic.push_back(ic);
    trace.rhs_boundary.push_back(bnd);
    trace.rhs_forcing.push_back(0.0);
    if (lhs > rhs + tolerance) trace.violations.emplace_back(t, lhs - rhs);
  }
  return trace;
}

json RunReport::to_json() const {
  json j = {{"scenario", scenario},
            {"mode", mode_name(mode)},
            {"stage", stage},
            {"pass", pass},
            {"exit_code", exit_code},
            {"wall_seconds", wall_seconds},
            {"tolerance", tolerance},
            {"certificate_expected_infeasible", certificate_expected_infeasible},
            {"checks", checks}};
  j["certificate"] = certificate ? json(*certificate) : json(nullptr);
  if (!error.empty()) j["error"] = error;
  json b = json::array();
  for (const auto& z : bounds) {
    json row = trace_summary(z.trace);
    if (z.gain_trace) row["gain"] = trace_summary(*z.gain_trace);
    b.push_back(row);
  }
  j["bounds"] = b;
  if (trajectory) j["trajectory"] = trajectory_summary(*trajectory);
  return j;
}

RunReport run_scenario(const Scenario& s, RunMode mode) {
  const auto start = std::chrono::steady_clock::now();
  RunReport r;
  r.scenario = s.name;
  r.mode = mode;
  auto finish = [&](bool pass, int code) {
    r.pass = pass;
    r.exit_code = code;
    r.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
  };

  try {
    PdeProblem problem = build_problem(s);
    if (const auto v = validate_problem(problem); !v.admissible()) {
      r.error = v.issues.front().message;
      json issues = json::array();
      for (const auto& i : v.issues) issues.push_back(std::string(to_string(i.code)) + ": " + i.message);
      r.checks["validation"] = issues;
      return finish(false, exit_model_error);
    }
    const SolverConfig config = build_solver_config(s);
    config.validate(problem.horizon);
    r.tolerance = s.bounds.tolerance.value_or(default_bound_tolerance(problem.grid.h()));

    // The envelope applies to the transformed problem for conductivity models.
    std::shared_ptr<const GammaTable> table;
    PdeProblem checked = problem;
    if (s.transform) {
      table = std::make_shared<const GammaTable>(GammaTable::build(s.transform->spec));
      checked = transform_problem(table, problem);
    }

    if (mode != RunMode::simulate) {
      r.stage = "certificate";
      try {
        r.certificate = resolve_certificate(s.certificate, checked);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::infeasible_certificate) throw;
        r.error = e.what();
        if (!s.expect.infeasible_certificate) return finish(false, exit_infeasible_certificate);
        r.certificate_expected_infeasible = true;
      }
      if (r.certificate && s.expect.infeasible_certificate) {
        r.error = "certificate verified although infeasibility was expected";
        return finish(false, exit_bound_violation);
      }
      using M = BoundaryTermSpec::Mode;
      const auto& terms = s.bounds.terms;
      if (r.certificate && (terms.mode == M::robin_left || terms.mode == M::robin_right ||
                            terms.mode == M::robin_both)) {
        const auto signs = check_boundary_signs(r.certificate->weight, terms.mu0, terms.lambda0,
                                                terms.mu1, terms.lambda1);
        r.checks["boundary_signs"] = {{"left", signs.left},
                                      {"right", signs.right},
                                      {"both", signs.both},
                                      {"left_denominator", signs.left_denominator},
                                      {"right_denominator", signs.right_denominator}};
      }
      if (mode == RunMode::certify) {
        r.stage = "complete";
        return finish(true, exit_pass);
      }
    }

    r.stage = "solver";
    Trajectory direct = integrate(problem, config);
    std::optional<Trajectory> transformed;
    if (s.transform) transformed = integrate(checked, config);

    bool ok = true;
    if (s.expect.max_sup_drift) {
      const double u0 = direct.snapshots.front().sup_norm();
      double drift = 0.0;
      for (const auto& snap : direct.snapshots) {
        drift = std::max(drift, std::abs(snap.sup_norm() / u0 - 1.0));
      }
      r.checks["sup_drift"] = drift;
      r.checks["max_sup_drift"] = *s.expect.max_sup_drift;
      ok = ok && drift <= *s.expect.max_sup_drift;
    }
    if (s.transform) {
      double gap = 0.0;
      for (std::size_t k = 0; k < direct.size(); ++k) {
        const auto& u = direct.snapshots[k];
        const auto& w = transformed->snapshots[k];
        for (std::size_t i = 0; i < u.size(); ++i) {
          gap = std::max(gap, std::abs(table->gamma_inverse(w[i]) - u[i]));
        }
      }
      const double h = problem.grid.h();
      const double allowed = s.transform->conjugacy_tolerance.value_or(20.0 * h * h);
      r.checks["conjugacy_gap"] = gap;
      r.checks["conjugacy_tolerance"] = allowed;
      ok = ok && gap <= allowed;
    }

    if (mode == RunMode::check && r.certificate) {
      r.stage = "bounds";
      const auto& trajectory = s.transform ? *transformed : direct;
      const bool closed_form = s.bounds.terms.mode == BoundaryTermSpec::Mode::nonlocal;
      double closed_gap = -kInf;
      for (double zeta : resolve_zetas(s.bounds, r.certificate->sigma)) {
        ZetaResult z;
        z.zeta = zeta;
        z.trace = build_bound_trace(checked, trajectory, *r.certificate, s.bounds.terms, zeta,
                                    r.tolerance, s.bounds.max_zeta_fraction);
        ok = ok && z.trace.violations.empty();
        if (closed_form) {
          closed_gap = std::max(closed_gap, closed_form_boundary_gap(
                                                checked, z.trace, r.certificate->weight,
                                                s.bounds.terms));
        }
        if (s.transform) {
          z.gain_trace = build_gain_trace(*table, s.transform->phi, zeta, problem, direct,
                                          r.tolerance);
          ok = ok && z.gain_trace->violations.empty();
        }
        r.bounds.push_back(std::move(z));
      }
      if (closed_form) {
        r.checks["closed_form_boundary_gap"] = closed_gap;
        ok = ok && closed_gap <= r.tolerance;
      }
    }
    r.trajectory = std::move(direct);
    r.stage = "complete";
    return finish(ok, ok ? exit_pass : exit_bound_violation);
  } catch (const Error& e) {
    r.error = e.what();
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  return finish(false, exit_model_error);
}

std::vector<RunReport> run_batch(const std::vector<Scenario>& scenarios, unsigned jobs,
                                 RunMode mode) {
  std::vector<RunReport> reports(scenarios.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < scenarios.size(); i = next++) {
      reports[i] = run_scenario(scenarios[i], mode);
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(scenarios.size())));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  std::stable_sort(reports.begin(), reports.end(),
                   [](const RunReport& a, const RunReport& b) { return a.scenario < b.scenario; });
  return reports;
}

std::vector<SweepRow> sweep_zeta(const Scenario& s, std::vector<double> zetas) {
  PdeProblem problem = build_problem(s);
  PdeProblem checked = problem;
  std::shared_ptr<const GammaTable> table;
  if (s.transform) {
    table = std::make_shared<const GammaTable>(GammaTable::build(s.transform->spec));
    checked = transform_problem(table, problem);
  }
  const auto cert = resolve_certificate(s.certificate, checked);
  for (double z : zetas) {
    if (!(z >= 0.0) || z >= cert.sigma || z > s.bounds.max_zeta_fraction * cert.sigma) {
      throw Error(ErrorCode::invalid_zeta, "zeta = " + std::to_string(z) +
                                               " outside [0, " +
                                               std::to_string(s.bounds.max_zeta_fraction) +
                                               " sigma] with sigma = " +
                                               std::to_string(cert.sigma));
    }
  }
  std::sort(zetas.begin(), zetas.end());
  const auto trajectory = integrate(checked, build_solver_config(s));
  const double tol = s.bounds.tolerance.value_or(default_bound_tolerance(problem.grid.h()));
  std::vector<SweepRow> rows;
  for (double z : zetas) {
    const auto trace = build_bound_trace(checked, trajectory, cert, s.bounds.terms, z, tol,
                                         s.bounds.max_zeta_fraction);
    rows.push_back({z, trace.tightness(), trace.max_excess(), trace.violations.size()});
  }
  return rows;
}

void write_report(const RunReport& report, const std::filesystem::path& out) {
  if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
  {
    std::ofstream js(out);
    if (!js) throw Error(ErrorCode::invalid_argument, "cannot write " + out.string());
    js << report.to_json().dump(2) << '\n';
  }
  const auto dir = out.parent_path();
  const auto stem = out.stem().string();
  for (std::size_t k = 0; k < report.bounds.size(); ++k) {
    std::ofstream csv(dir / (stem + "_zeta" + std::to_string(k) + ".csv"));
    write_csv(csv, report.bounds[k].trace);
    if (report.bounds[k].gain_trace) {
      std::ofstream gain(dir / (stem + "_gain_zeta" + std::to_string(k) + ".csv"));
      write_csv(gain, *report.bounds[k].gain_trace);
    }
  }
  if (report.trajectory) {
    std::ofstream csv(dir / (stem + "_trajectory.csv"));
    write_trajectory_csv(csv, *report.trajectory);
  }
}

}  // namespace isslab
