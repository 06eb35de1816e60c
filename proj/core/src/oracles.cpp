#include "isslab/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "isslab/errors.hpp"

namespace isslab {

using std::numbers::pi;

namespace {

constexpr double kDiniStep = 1e-5;
constexpr double kDiniTolerance = 1e-3;
constexpr double kContactStep = 1e-8;
constexpr double kContactSlack = 1e-6;
constexpr int kLipschitzSubsamples = 400;
constexpr int kZeroGatePeriod = 40;

void record(OracleReport& report, OracleTally& tally, const char* name, int trial, double lhs,
            double rhs) {
  ++tally.trials;
  tally.worst_excess = std::max(tally.worst_excess, lhs - rhs);
  if (lhs <= rhs) {
    ++tally.passed;
  } else {
    report.failures.push_back({name, report.seed, trial, lhs, rhs});
  }
}

nlohmann::json tally_json(const OracleTally& t) {
  return {{"trials", t.trials}, {"passed", t.passed}, {"worst_excess", t.worst_excess}};
}

}  // namespace

FourierField::FourierField(std::vector<Mode> modes) : modes_(std::move(modes)) {
  if (modes_.empty()) throw Error(ErrorCode::invalid_argument, "Fourier field needs a mode");
}

FourierField FourierField::random(std::mt19937_64& rng, int max_modes, double max_omega) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
  std::uniform_real_distribution<double> freq(0.0, max_omega);
  const int n = std::uniform_int_distribution<int>(1, max_modes)(rng);
  std::vector<Mode> modes;
  for (int k = 0; k < n; ++k) {
    Mode m{};
    m.alpha = unit(rng);
    m.omega = freq(rng);
    m.psi = angle(rng);
    m.beta = unit(rng);
    m.chi = angle(rng);
    modes.push_back(m);
  }
  return FourierField(std::move(modes));
}

double FourierField::value(double t, double x) const {
  double s = 0.0;
  for (std::size_t k = 0; k < modes_.size(); ++k) {
    const auto& m = modes_[k];
    s += (m.alpha * std::cos(m.omega * t + m.psi) + m.beta) *
         std::sin(static_cast<double>(k + 1) * pi * x + m.chi);
  }
  return s;
}

double FourierField::time_derivative(double t, double x) const {
  double s = 0.0;
  for (std::size_t k = 0; k < modes_.size(); ++k) {
    const auto& m = modes_[k];
    s += -m.alpha * m.omega * std::sin(m.omega * t + m.psi) *
         std::sin(static_cast<double>(k + 1) * pi * x + m.chi);
  }
  return s;
}

double FourierField::second_derivative_bound() const {
  double s = 0.0;
  for (const auto& m : modes_) s += std::abs(m.alpha) * m.omega * m.omega;
  return s;
}

std::vector<double> FourierField::sample(double t, std::span<const double> xs) const {
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = value(t, xs[i]);
  return out;
}

std::vector<double> FourierField::sample_time_derivative(double t,
                                                         std::span<const double> xs) const {
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = time_derivative(t, xs[i]);
  return out;
}

double sup_norm(std::span<const double> u) {
  double m = 0.0;
  for (double v : u) m = std::max(m, std::abs(v));
  return m;
}

double norm_forward_difference(std::span<const double> u, std::span<const double> w, double h) {
  if (u.size() != w.size()) throw Error(ErrorCode::invalid_argument, "profile sizes differ");
  if (!(h > 0.0)) throw Error(ErrorCode::invalid_argument, "step must be positive");
  double shifted = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) shifted = std::max(shifted, std::abs(u[i] + h * w[i]));
  return (shifted - sup_norm(u)) / h;
}

double contact_set_bound(std::span<const double> u, std::span<const double> w, double eps) {
  if (u.size() != w.size()) throw Error(ErrorCode::invalid_argument, "profile sizes differ");
  const double norm = sup_norm(u);
  if (!(norm > 0.0)) throw Error(ErrorCode::invalid_argument, "contact set needs ||u|| > 0");
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (std::abs(u[i]) >= norm - eps) best = std::max(best, std::copysign(1.0, u[i]) * w[i]);
  }
  return best;
}

nlohmann::json OracleReport::to_json() const {
  nlohmann::json f = nlohmann::json::array();
  for (const auto& x : failures) {
    f.push_back({{"oracle", x.oracle}, {"seed", x.seed}, {"trial", x.trial}, {"lhs", x.lhs},
                 {"rhs", x.rhs}});
  }
  return {{"seed", seed},
          {"grid_points", grid_points},
          {"dini_step", dini_step},
          {"contact_step", contact_step},
          {"lipschitz", tally_json(lipschitz)},
          {"dini", tally_json(dini)},
          {"contact", tally_json(contact)},
          {"zero_gate", tally_json(zero_gate)},
          {"failures", f},
          {"pass", pass()}};
}

OracleReport derivative_oracles(std::uint64_t seed, int trials, int grid_points) {
  if (trials < 1 || grid_points < 2) {
    throw Error(ErrorCode::invalid_argument, "oracles need trials >= 1 and grid_points >= 2");
  }
  OracleReport report;
  report.seed = seed;
  report.grid_points = grid_points;
  report.dini_step = kDiniStep;
  report.contact_step = kContactStep;

  std::vector<double> xs(static_cast<std::size_t>(grid_points));
  for (int i = 0; i < grid_points; ++i) xs[i] = static_cast<double>(i) / (grid_points - 1);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit_time(0.0, 1.0);

  for (int trial = 0; trial < trials; ++trial) {
    const FourierField field = FourierField::random(rng);
    const double u_tt = field.second_derivative_bound();

    // Lipschitz: the sampled max of |u_t| on [t1, t2] plus the curvature
    // allowance between samples bounds the true max.
    double t1 = unit_time(rng), t2 = unit_time(rng);
    if (t1 > t2) std::swap(t1, t2);
    const double dt = (t2 - t1) / kLipschitzSubsamples;
    double max_ut = 0.0;
    for (int k = 0; k <= kLipschitzSubsamples; ++k) {
      max_ut = std::max(max_ut, sup_norm(field.sample_time_derivative(t1 + k * dt, xs)));
    }
    max_ut += 0.5 * dt * u_tt;
    const double change =
        std::abs(sup_norm(field.sample(t2, xs)) - sup_norm(field.sample(t1, xs)));
    record(report, report.lipschitz, "lipschitz", trial, change,
           (t2 - t1) * max_ut * (1.0 + 1e-12) + 1e-15);

    // Dini: the forward difference of the norm against the same quotient
    // along the tangent u + h u_t.
    const double t = unit_time(rng);
    const auto u = field.sample(t, xs);
    const auto ut = field.sample_time_derivative(t, xs);
    const double forward = (sup_norm(field.sample(t + kDiniStep, xs)) - sup_norm(u)) / kDiniStep;
    const double tangent = norm_forward_difference(u, ut, kDiniStep);
    record(report, report.dini, "dini", trial, std::abs(forward - tangent), kDiniTolerance);

    // Contact set: w is an independent field frozen at a random time.
    const FourierField direction = FourierField::random(rng);
    const auto w = direction.sample(unit_time(rng), xs);
    if (trial % kZeroGatePeriod == kZeroGatePeriod - 1) {
      const std::vector<double> zero(xs.size(), 0.0);
      record(report, report.zero_gate, "zero_gate", trial,
             norm_forward_difference(zero, w, kContactStep), sup_norm(w) * (1.0 + 1e-12));
    } else {
      // Indices within 2 h ||w|| of the max can overtake the maximizer over
      // one step, so they belong to the contact set at this resolution.
      const double eps = 2.0 * kContactStep * sup_norm(w);
      record(report, report.contact, "contact", trial,
             norm_forward_difference(u, w, kContactStep),
             contact_set_bound(u, w, eps) + kContactSlack);
    }
  }
  return report;
}

}  // namespace isslab
