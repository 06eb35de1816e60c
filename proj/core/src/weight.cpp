#include "isslab/weight.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "isslab/errors.hpp"
#include "json_util.hpp"

namespace isslab {

using std::numbers::pi;

WeightFunction WeightFunction::sine(double theta, double phi) {
  WeightFunction w;
  w.family_ = Family::sine;
  w.p0_ = theta;
  w.p1_ = phi;
  return w;
}

WeightFunction WeightFunction::cosine(double theta) {
  WeightFunction w;
  w.family_ = Family::cosine;
  w.p0_ = theta;
  return w;
}

WeightFunction WeightFunction::exponential(double rho, double offset) {
  WeightFunction w;
  w.family_ = Family::exponential;
  w.p0_ = rho;
  w.p1_ = offset;
  return w;
}

WeightFunction WeightFunction::tabulated_cubic(std::vector<double> xs, std::vector<double> values) {
  if (xs.size() < 3 || xs.size() != values.size()) {
    throw Error(ErrorCode::invalid_weight, "tabulated weight needs >= 3 matching samples");
  }
  if (xs.front() != 0.0 || xs.back() != 1.0) {
    throw Error(ErrorCode::invalid_weight, "tabulated weight knots must span [0,1]");
  }
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) {
      throw Error(ErrorCode::invalid_weight, "tabulated weight knots must increase");
    }
  }
  WeightFunction w;
  w.family_ = Family::tabulated_cubic;
  w.xs_ = std::move(xs);
  w.ys_ = std::move(values);
  w.build_spline();
  return w;
}

// Natural cubic spline second derivatives via the tridiagonal system.
void WeightFunction::build_spline() {
  const std::size_t n = xs_.size();
  m_.assign(n, 0.0);
  std::vector<double> c(n, 0.0), d(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = xs_[i] - xs_[i - 1];
    const double h1 = xs_[i + 1] - xs_[i];
    const double diag = 2.0 * (h0 + h1);
    const double rhs = 6.0 * ((ys_[i + 1] - ys_[i]) / h1 - (ys_[i] - ys_[i - 1]) / h0);
    const double denom = diag - h0 * c[i - 1];
    c[i] = h1 / denom;
    d[i] = (rhs - h0 * d[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 1;) m_[i] = d[i] - c[i] * m_[i + 1];
}

std::size_t WeightFunction::segment(double x) const noexcept {
  const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  const auto k = static_cast<std::size_t>(it - xs_.begin());
  return std::clamp<std::size_t>(k, 1, xs_.size() - 1) - 1;
}

double WeightFunction::value(double x) const noexcept {
  switch (family_) {
    case Family::sine: return std::sin(p0_ * x + p1_);
    case Family::cosine: return std::cos(p0_ * x);
    case Family::exponential: return std::exp(-p0_ * x) + p1_;
    case Family::tabulated_cubic: {
      const std::size_t k = segment(x);
      const double h = xs_[k + 1] - xs_[k];
      const double a = (xs_[k + 1] - x) / h, b = (x - xs_[k]) / h;
      return a * ys_[k] + b * ys_[k + 1] +
             ((a * a * a - a) * m_[k] + (b * b * b - b) * m_[k + 1]) * h * h / 6.0;
    }
  }
  return 0.0;
}

double WeightFunction::first(double x) const noexcept {
  switch (family_) {
    case Family::sine: return p0_ * std::cos(p0_ * x + p1_);
    case Family::cosine: return -p0_ * std::sin(p0_ * x);
    case Family::exponential: return -p0_ * std::exp(-p0_ * x);
    case Family::tabulated_cubic: {
      const std::size_t k = segment(x);
      const double h = xs_[k + 1] - xs_[k];
      const double a = (xs_[k + 1] - x) / h, b = (x - xs_[k]) / h;
      return (ys_[k + 1] - ys_[k]) / h +
             (-(3 * a * a - 1) * m_[k] + (3 * b * b - 1) * m_[k + 1]) * h / 6.0;
    }
  }
  return 0.0;
}

double WeightFunction::second(double x) const noexcept {
  switch (family_) {
    case Family::sine: return -p0_ * p0_ * std::sin(p0_ * x + p1_);
    case Family::cosine: return -p0_ * p0_ * std::cos(p0_ * x);
    case Family::exponential: return p0_ * p0_ * std::exp(-p0_ * x);
    case Family::tabulated_cubic: {
      const std::size_t k = segment(x);
      const double h = xs_[k + 1] - xs_[k];
      const double a = (xs_[k + 1] - x) / h, b = (x - xs_[k]) / h;
      return a * m_[k] + b * m_[k + 1];
    }
  }
  return 0.0;
}

std::string WeightFunction::family_name() const {
  switch (family_) {
    case Family::sine: return "sine";
    case Family::cosine: return "cosine";
    case Family::exponential: return "exponential";
    case Family::tabulated_cubic: return "tabulated_cubic";
  }
  return "unknown";
}

bool WeightFunction::analytic_positive() const noexcept {
  switch (family_) {
    case Family::sine: return p1_ > 0.0 && p0_ + p1_ < pi && p0_ >= 0.0;
    case Family::cosine: return p0_ > 0.0 && p0_ < pi / 2;
    case Family::exponential: return std::exp(-std::max(p0_, 0.0)) + p1_ > 0.0;
    case Family::tabulated_cubic:
      return std::all_of(ys_.begin(), ys_.end(), [](double y) { return y > 0.0; });
  }
  return false;
}

double WeightFunction::min_on_grid(int cells) const noexcept {
  double m = value(0.0);
  for (int j = 1; j <= cells; ++j) m = std::min(m, value(static_cast<double>(j) / cells));
  return m;
}

double WeightFunction::max_on_grid(int cells) const noexcept {
  double m = value(0.0);
  for (int j = 1; j <= cells; ++j) m = std::max(m, value(static_cast<double>(j) / cells));
  return m;
}

void to_json(nlohmann::json& j, const WeightFunction& w) {
  using F = WeightFunction::Family;
  j = {{"family", w.family_name()}};
  switch (w.family_) {
    case F::sine: j["parameters"] = {{"theta", w.p0_}, {"phi", w.p1_}}; break;
    case F::cosine: j["parameters"] = {{"theta", w.p0_}}; break;
    case F::exponential: j["parameters"] = {{"rho", w.p0_}, {"offset", w.p1_}}; break;
    case F::tabulated_cubic: j["parameters"] = {{"x", w.xs_}, {"values", w.ys_}}; break;
  }
}

void from_json(const nlohmann::json& j, WeightFunction& w) {
  detail::require_keys(j, {"family", "parameters"}, "weight");
  const auto family = detail::get_required<std::string>(j, "family", "weight");
  const auto& p = j.at("parameters");
  if (family == "sine") {
    detail::require_keys(p, {"theta", "phi"}, "weight(sine)");
    w = WeightFunction::sine(p.at("theta").get<double>(), p.at("phi").get<double>());
  } else if (family == "cosine") {
    detail::require_keys(p, {"theta"}, "weight(cosine)");
    w = WeightFunction::cosine(p.at("theta").get<double>());
  } else if (family == "exponential") {
    detail::require_keys(p, {"rho", "offset"}, "weight(exponential)");
    w = WeightFunction::exponential(p.at("rho").get<double>(), detail::get_or(p, "offset", 0.0));
  } else if (family == "tabulated_cubic") {
    detail::require_keys(p, {"x", "values"}, "weight(tabulated_cubic)");
    w = WeightFunction::tabulated_cubic(p.at("x").get<std::vector<double>>(),
                                        p.at("values").get<std::vector<double>>());
  } else {
    detail::schema_error("weight", "unknown family '" + family + "'");
  }
}

}  // namespace isslab
