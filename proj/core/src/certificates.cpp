#include "isslab/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "json_util.hpp"

namespace isslab {

using std::numbers::pi;

namespace {

constexpr double kRoundingUlps = 64.0 * std::numeric_limits<double>::epsilon();

/// max over k in [lo, hi] of k * s, with 0 * inf = 0.
double corner_max(const Interval& range, double s) {
  if (s == 0.0) return 0.0;
  return s > 0.0 ? range.hi * s : range.lo * s;
}

double corner_abs(const Interval& range, double s) {
  if (s == 0.0) return 0.0;
  return range.abs_max() * std::abs(s);
}

// Residual split as R(sigma) = base + sigma * eta at each check node.
struct ResidualTable {
  std::vector<double> x, base, eta, scale;
};

ResidualTable tabulate(const CoefficientBounds& bounds, const WeightFunction& weight,
                       int grid_size) {
  ResidualTable t;
  const auto n = static_cast<std::size_t>(grid_size) + 1;
  t.x.resize(n);
  t.base.resize(n);
  t.eta.resize(n);
  t.scale.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = j == n - 1 ? 1.0 : static_cast<double>(j) / grid_size;
    const double e0 = weight.value(x), e1 = weight.first(x), e2 = weight.second(x);
    if (!(e0 > 0.0) || !std::isfinite(e0)) {
      throw Error(ErrorCode::invalid_weight,
                  "weight is not positive at x = " + std::to_string(x));
    }
    t.x[j] = x;
    t.eta[j] = e0;
    t.base[j] = corner_max(bounds.a, e2) + corner_max(bounds.b, e1) + bounds.c.hi * e0;
    t.scale[j] = corner_abs(bounds.a, e2) + corner_abs(bounds.b, e1) + bounds.c.abs_max() * e0;
  }
  return t;
}

struct Evaluation {
  Verdict verdict;
  WorstPoint worst;
};

Evaluation evaluate(const ResidualTable& t, double sigma, double margin, Comparison cmp) {
  Evaluation ev{Verdict::verified, {t.x.front(), -std::numeric_limits<double>::infinity()}};
  bool any_positive = false, all_below = true;
  for (std::size_t j = 0; j < t.x.size(); ++j) {
    const double r = t.base[j] + sigma * t.eta[j];
    if (std::isnan(r)) {
      any_positive = true;
      ev.worst = {t.x[j], r};
      break;
    }
    if (r > ev.worst.residual) ev.worst = {t.x[j], r};
    const double slack = kRoundingUlps * (t.scale[j] + std::abs(sigma) * t.eta[j]);
    if (cmp == Comparison::non_strict) {
      all_below = all_below && (r <= -margin + slack);
      any_positive = any_positive || (r > slack);
    } else {
      all_below = all_below && (r < -margin - slack);
      any_positive = any_positive || (r >= -slack);
    }
  }
  if (any_positive) {
    ev.verdict = Verdict::refuted;
  } else if (all_below) {
    ev.verdict = Verdict::verified;
  } else {
    ev.verdict = Verdict::inconclusive;
  }
  return ev;
}

WeightCertificate make_certificate(const WeightFunction& weight, double sigma, double margin,
                                   int grid_size, const Evaluation& ev) {
  WeightCertificate c;
  c.weight = weight;
  c.sigma = sigma;
  c.margin = margin;
  c.grid_size = grid_size;
  c.verdict = ev.verdict;
  c.worst = ev.worst;
  return c;
}

void check_preconditions(const WeightFunction& weight, double margin, int grid_size) {
  if (grid_size < kMinCheckGrid) {
    throw Error(ErrorCode::invalid_argument,
                "check grid must have at least " + std::to_string(kMinCheckGrid) + " cells");
  }
  if (!(margin >= 0.0)) throw Error(ErrorCode::invalid_argument, "margin must be >= 0");
  if (!weight.analytic_positive()) {
    throw Error(ErrorCode::invalid_weight,
                "weight violates the positivity conditions of the " + weight.family_name() +
                    " family");
  }
}

}  // namespace

void CoefficientBounds::validate() const {
  if (a.empty() || b.empty() || c.empty()) {
    throw Error(ErrorCode::invalid_argument, "coefficient interval is empty");
  }
  if (a.lo < 0.0) throw Error(ErrorCode::invalid_argument, "a_min must be >= 0");
}

CoefficientBounds CoefficientBounds::from_problem(const PdeProblem& problem) {
  auto need = [&](const CoefficientField& f, const char* name) {
    auto r = f.range(problem.horizon);
    if (!r) {
      throw Error(ErrorCode::invalid_argument,
                  std::string("coefficient ") + name + " has no declared range");
    }
    return *r;
  };
  CoefficientBounds out{need(problem.a, "a"), need(problem.b, "b"), need(problem.c, "c")};
  out.validate();
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::verified: return "verified";
    case Verdict::refuted: return "refuted";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

double certificate_residual(const CoefficientBounds& bounds, const WeightFunction& weight,
                            double sigma, double x) {
  const double e0 = weight.value(x);
  return corner_max(bounds.a, weight.second(x)) + corner_max(bounds.b, weight.first(x)) +
         (sigma + bounds.c.hi) * e0;
}

WeightCertificate check_certificate(const CoefficientBounds& bounds, const WeightFunction& weight,
                                    double sigma, double margin, int grid_size,
                                    Comparison comparison) {
  bounds.validate();
  check_preconditions(weight, margin, grid_size);
  if (!(sigma > 0.0)) throw Error(ErrorCode::invalid_argument, "sigma must be > 0");
  const auto table = tabulate(bounds, weight, grid_size);
  return make_certificate(weight, sigma, margin, grid_size,
                          evaluate(table, sigma, margin, comparison));
}

BoundarySignReport check_boundary_signs(const WeightFunction& weight, double mu0, double lambda0,
                                        double mu1, double lambda1) {
  BoundarySignReport r;
  const double left = mu0 * weight.first(0.0) - lambda0 * weight.value(0.0);
  const double right = mu1 * weight.first(1.0) + lambda1 * weight.value(1.0);
  r.left = left < 0.0;
  r.right = right > 0.0;
  r.both = r.left && r.right;
  r.left_denominator = std::abs(left);
  r.right_denominator = right;
  return r;
}

WeightCertificate synthesize_sine_certificate(double s_bound, double sigma, int grid_size) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::invalid_argument, "sigma must be > 0");
  if (!(s_bound < pi * pi)) {
    throw Error(ErrorCode::infeasible_certificate,
                "sup (sigma + c)/a = " + std::to_string(s_bound) + " is not below pi^2");
  }
  // Any theta works when the reaction already dominates; keep it away from 0
  // so the weight is a genuine member of the family.
  constexpr double kThetaFloor = 0.1;
  const double root = std::sqrt(std::max(s_bound, 0.0));
  double theta = std::sqrt(std::max(s_bound, 0.0) * (1.0 + kThetaSlack));
  theta = std::min(theta, 0.5 * (root + pi));
  theta = std::max(theta, kThetaFloor);
  const double phi = 0.5 * (pi - theta);
  const auto weight = WeightFunction::sine(theta, phi);

  const CoefficientBounds normalized{Interval::point(1.0), Interval::point(0.0),
                                     Interval::point(s_bound - sigma)};
  auto cert = check_certificate(normalized, weight, sigma, 0.0, grid_size);
  if (!cert.verified()) {
    throw Error(ErrorCode::infeasible_certificate,
                "no sine weight verifies for S = " + std::to_string(s_bound));
  }
  return cert;
}

CosineSynthesis synthesize_cosine_certificate(double kappa_star, double lambda1, double eps_b,
                                              int grid_size) {
  if (!(kappa_star > 0.0)) throw Error(ErrorCode::invalid_argument, "kappa* must be > 0");
  if (!(lambda1 > 0.0)) throw Error(ErrorCode::invalid_argument, "lambda1 must be > 0");
  if (!(eps_b >= 0.0 && eps_b < 1.0)) {
    throw Error(ErrorCode::invalid_argument, "eps_b must lie in [0, 1)");
  }
  const double target = lambda1 * (1.0 - eps_b);
  // theta tan(theta) is increasing on (0, pi/2); keep the lower bracket end.
  double lo = 0.0, hi = 0.5 * pi;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid * std::tan(mid) <= target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  CosineSynthesis out;
  out.theta = lo;
  out.sigma = kappa_star * lo * lo;
  const CoefficientBounds bounds{{kappa_star, kInf}, Interval::point(0.0), Interval::point(0.0)};
  out.certificate = check_certificate(bounds, WeightFunction::cosine(lo), out.sigma, 0.0, grid_size);
  if (!out.certificate.verified()) {
    throw Error(ErrorCode::infeasible_certificate, "cosine certificate failed its self-check");
  }
  return out;
}

namespace {

std::vector<WeightFunction> search_lattice(WeightFunction::Family family, int lattice) {
  std::vector<WeightFunction> out;
  out.reserve(static_cast<std::size_t>(lattice) + 1);
  switch (family) {
    case WeightFunction::Family::sine:
      for (int k = 1; k <= lattice; ++k) {
        const double theta = pi * k / (lattice + 1);
        out.push_back(WeightFunction::sine(theta, 0.5 * (pi - theta)));
      }
      break;
    case WeightFunction::Family::cosine:
      for (int k = 1; k <= lattice; ++k) {
        out.push_back(WeightFunction::cosine(0.5 * pi * k / (lattice + 1)));
      }
      break;
    case WeightFunction::Family::exponential: {
      // Symmetric in rho and containing rho = 0 (the flat weight).
      constexpr double kRhoMax = 8.0;
      const int half = lattice / 2;
      for (int k = -half; k <= half; ++k) {
        out.push_back(WeightFunction::exponential(kRhoMax * k / half, 0.0));
      }
      break;
    }
    case WeightFunction::Family::tabulated_cubic:
      throw Error(ErrorCode::invalid_argument, "tabulated weights are not searchable");
  }
  return out;
}

}  // namespace

WeightCertificate maximize_decay_rate(const CoefficientBounds& bounds,
                                      WeightFunction::Family family,
                                      const DecaySearchOptions& options) {
  bounds.validate();
  std::optional<WeightCertificate> best;
  const auto lattice = search_lattice(family, options.lattice);
  for (const auto& weight : lattice) {
    if (!weight.analytic_positive()) continue;
    const auto table = tabulate(bounds, weight, options.grid_size);

    // Bracket: sigma -> 0+ must verify, and the closed-form crossing plus a
    // unit of slack must not.
    const double tiny = std::numeric_limits<double>::min();
    if (evaluate(table, tiny, options.margin, Comparison::non_strict).verdict !=
        Verdict::verified) {
      continue;
    }
    double crossing = kInf;
    for (std::size_t j = 0; j < table.x.size(); ++j) {
      crossing = std::min(crossing, (-options.margin - table.base[j]) / table.eta[j]);
    }
    if (!std::isfinite(crossing)) continue;
    double lo = tiny;
    double hi = 2.0 * std::max(crossing, 0.0) + 1.0;
    while (evaluate(table, hi, options.margin, Comparison::non_strict).verdict ==
           Verdict::verified) {
      hi *= 2.0;
    }
    while (hi - lo > options.sigma_rel_tol * hi) {
      const double mid = 0.5 * (lo + hi);
      if (evaluate(table, mid, options.margin, Comparison::non_strict).verdict ==
          Verdict::verified) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    if (!best || lo > best->sigma) {
      best = make_certificate(weight, lo, options.margin, options.grid_size,
                              evaluate(table, lo, options.margin, Comparison::non_strict));
    }
  }
  if (!best || !(best->sigma > 0.0) || !best->verified()) {
    throw Error(ErrorCode::infeasible_certificate,
                "no " + lattice.front().family_name() + "-family weight verifies on the lattice");
  }
  return *best;
}

void to_json(nlohmann::json& j, const WeightCertificate& c) {
  nlohmann::json w = c.weight;
  j = {{"family", w["family"]},
       {"parameters", w["parameters"]},
       {"sigma", c.sigma},
       {"margin", c.margin},
       {"grid_size", c.grid_size},
       {"verdict", to_string(c.verdict)},
       {"worst_point", {{"x", c.worst.x}, {"residual", c.worst.residual}}}};
}

void from_json(const nlohmann::json& j, WeightCertificate& c) {
  detail::require_keys(
      j, {"family", "parameters", "sigma", "margin", "grid_size", "verdict", "worst_point"},
      "certificate");
  c.weight = nlohmann::json{{"family", j.at("family")}, {"parameters", j.at("parameters")}}
                 .get<WeightFunction>();
  c.sigma = j.at("sigma").get<double>();
  c.margin = j.at("margin").get<double>();
  c.grid_size = j.at("grid_size").get<int>();
  const auto v = j.at("verdict").get<std::string>();
  if (v == "verified") {
    c.verdict = Verdict::verified;
  } else if (v == "refuted") {
    c.verdict = Verdict::refuted;
  } else if (v == "inconclusive") {
    c.verdict = Verdict::inconclusive;
  } else {
    detail::schema_error("certificate", "unknown verdict '" + v + "'");
  }
  c.worst.x = j.at("worst_point").at("x").get<double>();
  c.worst.residual = j.at("worst_point").at("residual").get<double>();
}

}  // namespace isslab
