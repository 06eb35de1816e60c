#include "isslab/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "isslab/errors.hpp"
#include "isslab/quadrature.hpp"
#include "json_util.hpp"

namespace isslab {

using std::numbers::pi;

void to_json(nlohmann::json& j, const TransformSpec& s) {
  j = {{"kappa", s.kappa},   {"g", s.g},       {"kappa_star", s.kappa_star},
       {"u_lo", s.u_lo},     {"u_hi", s.u_hi}, {"nodes", s.nodes}};
}

void from_json(const nlohmann::json& j, TransformSpec& s) {
  detail::require_keys(j, {"kappa", "g", "kappa_star", "u_lo", "u_hi", "nodes"}, "transform");
  s = TransformSpec{};
  s.kappa = detail::get_required<ScalarFunction>(j, "kappa", "transform");
  s.g = detail::get_or(j, "g", ScalarFunction::constant(0.0));
  s.kappa_star = detail::get_required<double>(j, "kappa_star", "transform");
  s.u_lo = detail::get_or(j, "u_lo", s.u_lo);
  s.u_hi = detail::get_or(j, "u_hi", s.u_hi);
  s.nodes = detail::get_or(j, "nodes", s.nodes);
}

namespace {

[[noreturn]] void domain_error(const char* what, double v, const Interval& range) {
  throw Error(ErrorCode::table_domain_exceeded,
              std::string(what) + " " + std::to_string(v) + " outside [" +
                  std::to_string(range.lo) + ", " + std::to_string(range.hi) + "]");
}

}  // namespace

GammaTable GammaTable::build(const TransformSpec& spec) {
  if (!(spec.u_lo <= 0.0 && spec.u_hi >= 0.0 && spec.u_lo < spec.u_hi) ||
      !std::isfinite(spec.u_lo) || !std::isfinite(spec.u_hi)) {
    throw Error(ErrorCode::invalid_argument, "table domain must satisfy u_lo <= 0 <= u_hi");
  }
  if (spec.nodes < 3) throw Error(ErrorCode::invalid_argument, "table needs >= 3 nodes");
  if (!(spec.kappa_star > 0.0)) throw Error(ErrorCode::invalid_argument, "kappa* must be > 0");

  GammaTable t;
  t.spec_ = spec;
  const int intervals = spec.nodes - 1;
  int n_neg = static_cast<int>(std::lround(intervals * (-spec.u_lo) / (spec.u_hi - spec.u_lo)));
  if (spec.u_lo < 0.0) n_neg = std::max(n_neg, 1);
  if (spec.u_hi > 0.0) n_neg = std::min(n_neg, intervals - 1);
  const int n_pos = intervals - n_neg;
  for (int k = 0; k < n_neg; ++k) t.u_.push_back(spec.u_lo * (n_neg - k) / n_neg);
  const auto zero = t.u_.size();
  for (int k = 0; k <= n_pos; ++k) t.u_.push_back(spec.u_hi * k / n_pos);

  for (double u : t.u_) {
    if (!(spec.kappa(u) >= spec.kappa_star)) {
      throw Error(ErrorCode::invalid_argument,
                  "kappa(" + std::to_string(u) + ") is below kappa*");
    }
  }

  const std::size_t n = t.u_.size();
  t.w_.assign(n, 0.0);
  t.dw_.assign(n, 1.0);
  if (!(spec.g.is_constant() && spec.g(0.0) == 0.0)) {
    const auto ratio = [&](double l) { return spec.g(l) / spec.kappa(l); };
    std::vector<double> G(n, 0.0);
    // Integrate outward from the zero node in both directions.
    auto advance = [&](std::size_t from, std::size_t to) {
      const double a = t.u_[from], b = t.u_[to];
      G[to] = G[from] + adaptive_simpson(ratio, a, b, kQuadratureTolerance);
      const auto inner = [&](double s) {
        return std::exp(G[from] + adaptive_simpson(ratio, a, s, kQuadratureTolerance));
      };
      t.w_[to] = t.w_[from] + adaptive_simpson(inner, a, b, kQuadratureTolerance);
      t.dw_[to] = std::exp(G[to]);
    };
    for (std::size_t k = zero; k + 1 < n; ++k) advance(k, k + 1);
    for (std::size_t k = zero; k > 0; --k) advance(k, k - 1);
  } else {
    t.w_ = t.u_;
  }
  t.validate();
  return t;
}

void GammaTable::validate() const {
  const std::size_t n = u_.size();
  if (n < 3 || w_.size() != n || dw_.size() != n) {
    throw Error(ErrorCode::invalid_argument, "gamma table arrays are inconsistent");
  }
  bool has_zero = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(u_[i]) || !std::isfinite(w_[i]) || !(dw_[i] > 0.0)) {
      throw Error(ErrorCode::invalid_argument, "gamma table has invalid entries");
    }
    if (i > 0 && (!(u_[i] > u_[i - 1]) || !(w_[i] > w_[i - 1]))) {
      throw Error(ErrorCode::invalid_argument, "gamma table is not strictly increasing");
    }
    if (u_[i] == 0.0) has_zero = w_[i] == 0.0;
  }
  if (!has_zero) throw Error(ErrorCode::invalid_argument, "gamma table must map 0 to 0");
}

std::size_t GammaTable::segment(double u) const {
  const auto it = std::upper_bound(u_.begin(), u_.end(), u);
  const auto k = static_cast<std::size_t>(it - u_.begin());
  return std::clamp<std::size_t>(k, 1, u_.size() - 1) - 1;
}

double GammaTable::gamma(double u) const {
  if (!(u >= u_.front() && u <= u_.back())) domain_error("gamma argument", u, domain());
  const std::size_t k = segment(u);
  const double h = u_[k + 1] - u_[k], s = (u - u_[k]) / h;
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * w_[k] + (s3 - 2 * s2 + s) * h * dw_[k] +
         (-2 * s3 + 3 * s2) * w_[k + 1] + (s3 - s2) * h * dw_[k + 1];
}

double GammaTable::gamma_derivative(double u) const {
  if (!(u >= u_.front() && u <= u_.back())) domain_error("gamma argument", u, domain());
  const std::size_t k = segment(u);
  const double h = u_[k + 1] - u_[k], s = (u - u_[k]) / h;
  const double s2 = s * s;
  return (6 * s2 - 6 * s) / h * w_[k] + (3 * s2 - 4 * s + 1) * dw_[k] +
         (-6 * s2 + 6 * s) / h * w_[k + 1] + (3 * s2 - 2 * s) * dw_[k + 1];
}

double GammaTable::gamma_inverse(double w) const {
  if (!(w >= w_.front() && w <= w_.back())) domain_error("gamma value", w, image());
  const auto it = std::upper_bound(w_.begin(), w_.end(), w);
  const auto k =
      std::clamp<std::size_t>(static_cast<std::size_t>(it - w_.begin()), 1, w_.size() - 1) - 1;
  double lo = u_[k], hi = u_[k + 1];
  double u = lo + (w - w_[k]) / (w_[k + 1] - w_[k]) * (hi - lo);
  const double tol = 1e-10 * (1.0 + std::abs(w));
  for (int it_count = 0; it_count < 100; ++it_count) {
    const double r = gamma(u) - w;
    if (std::abs(r) <= 0.01 * tol) break;
    if (r > 0.0) {
      hi = u;
    } else {
      lo = u;
    }
    double next = u - r / gamma_derivative(u);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == u) break;
    u = next;
  }
  return u;
}

std::pair<double, double> GammaTable::envelopes(double s) const {
  if (!(s >= 0.0)) throw Error(ErrorCode::invalid_argument, "envelopes need s >= 0");
  const double plus = gamma(s), minus = -gamma(-s);
  return {std::min(plus, minus), std::max(plus, minus)};
}

double GammaTable::gamma1_inverse(double v) const {
  if (!(v >= 0.0)) throw Error(ErrorCode::invalid_argument, "gamma1 inverse needs v >= 0");
  const double s_max = std::min(-u_.front(), u_.back());
  const double top = envelopes(s_max).first;
  if (v > top) domain_error("lower envelope value", v, {0.0, top});
  double lo = 0.0, hi = s_max;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (envelopes(mid).first < v) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return v == 0.0 ? 0.0 : hi;
}

double GammaTable::iss_gain(double phi, double zeta, double s, double t) const {
  if (!(phi > 0.0 && phi < 0.5 * pi)) {
    throw Error(ErrorCode::invalid_argument, "phi must lie in (0, pi/2)");
  }
  const double sigma = spec_.kappa_star * (pi - 2.0 * phi) * (pi - 2.0 * phi);
  if (!(zeta >= 0.0 && zeta < sigma)) {
    throw Error(ErrorCode::invalid_zeta, "zeta must lie in [0, kappa* (pi - 2 phi)^2)");
  }
  if (!(s >= 0.0) || !(t >= 0.0)) {
    throw Error(ErrorCode::invalid_argument, "gain arguments must be >= 0");
  }
  return gamma1_inverse(std::exp(-zeta * t) / std::sin(phi) * envelopes(s).second);
}

void to_json(nlohmann::json& j, const GammaTable& t) {
  j = {{"spec", t.spec_}, {"u", t.u_}, {"gamma", t.w_}, {"derivative", t.dw_}};
}

void from_json(const nlohmann::json& j, GammaTable& t) {
  detail::require_keys(j, {"spec", "u", "gamma", "derivative"}, "gamma table");
  GammaTable loaded;
  loaded.spec_ = detail::get_required<TransformSpec>(j, "spec", "gamma table");
  loaded.u_ = detail::get_required<std::vector<double>>(j, "u", "gamma table");
  loaded.w_ = detail::get_required<std::vector<double>>(j, "gamma", "gamma table");
  loaded.dw_ = detail::get_required<std::vector<double>>(j, "derivative", "gamma table");
  loaded.validate();
  t = std::move(loaded);
}

namespace {

constexpr int kResampledSignalPoints = 4097;

DisturbanceSignal map_signal(const GammaTable& table, const DisturbanceSignal& d,
                             double horizon) {
  switch (d.kind()) {
    case DisturbanceSignal::Kind::zero: return DisturbanceSignal::zero();
    case DisturbanceSignal::Kind::constant: return DisturbanceSignal::constant(table.gamma(d(0.0)));
    default: break;
  }
  std::vector<double> times(kResampledSignalPoints), values(kResampledSignalPoints);
  for (int k = 0; k < kResampledSignalPoints; ++k) {
    times[k] = horizon * k / (kResampledSignalPoints - 1);
    values[k] = table.gamma(d(times[k]));
  }
  return DisturbanceSignal::piecewise_linear(std::move(times), std::move(values));
}

}  // namespace

PdeProblem transform_problem(std::shared_ptr<const GammaTable> table, const PdeProblem& original) {
  if (!table) throw Error(ErrorCode::invalid_argument, "missing gamma table");
  if (!original.left.is_dirichlet() || !original.right.is_dirichlet()) {
    throw Error(ErrorCode::invalid_argument, "transformation needs Dirichlet ends");
  }
  if (!original.b.is_zero() || !original.c.is_zero() || !original.f.is_zero()) {
    throw Error(ErrorCode::invalid_argument, "transformation needs b = c = f = 0");
  }
  const auto& spec = table->spec();
  PdeProblem out;
  out.grid = original.grid;
  out.horizon = original.horizon;
  if (spec.kappa.is_constant()) {
    out.a = CoefficientField::constant(spec.kappa(0.0));
  } else {
    const auto kappa_range = spec.kappa.range();
    out.a = CoefficientField::state(
        [table](double, double, double w) { return table->spec().kappa(table->gamma_inverse(w)); },
        Interval{std::max(spec.kappa_star, kappa_range.lo), kappa_range.hi});
  }
  out.left = BoundaryCondition::dirichlet(map_signal(*table, original.left.data, out.horizon));
  out.right = BoundaryCondition::dirichlet(map_signal(*table, original.right.data, out.horizon));
  std::vector<double> w(original.initial.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = table->gamma(original.initial[i]);
  out.initial = GridProfile(original.grid, std::move(w));
  return out;
}

}  // namespace isslab
