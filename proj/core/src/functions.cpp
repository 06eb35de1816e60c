#include "isslab/functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "isslab/errors.hpp"
#include "json_util.hpp"

namespace isslab {

using detail::get_or;
using detail::get_required;
using detail::json;
using detail::require_keys;

namespace {

// Product of an infinite bound with zero is treated as zero.
double mul0(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  return a * b;
}

double clamp_to(double u, const Interval& clip) { return std::clamp(u, clip.lo, clip.hi); }

json clip_to_json(const Interval& clip) {
  json c = json::array();
  c.push_back(clip.lo > -kInf ? json(clip.lo) : json(nullptr));
  c.push_back(clip.hi < kInf ? json(clip.hi) : json(nullptr));
  return c;
}

Interval clip_from_json(const json& j) {
  auto it = j.find("clip");
  if (it == j.end()) return Interval::all();
  if (!it->is_array() || it->size() != 2) detail::schema_error("clip", "expected [lo, hi]");
  Interval c;
  c.lo = (*it)[0].is_null() ? -kInf : (*it)[0].get<double>();
  c.hi = (*it)[1].is_null() ? kInf : (*it)[1].get<double>();
  if (c.empty()) detail::schema_error("clip", "lo > hi");
  return c;
}

}  // namespace

double Interval::abs_max() const noexcept { return std::max(std::abs(lo), std::abs(hi)); }

Interval operator*(const Interval& a, const Interval& b) {
  const double p[] = {mul0(a.lo, b.lo), mul0(a.lo, b.hi), mul0(a.hi, b.lo), mul0(a.hi, b.hi)};
  return {*std::min_element(std::begin(p), std::end(p)),
          *std::max_element(std::begin(p), std::end(p))};
}

Interval operator+(const Interval& a, const Interval& b) { return {a.lo + b.lo, a.hi + b.hi}; }

Interval hull(const Interval& a, const Interval& b) {
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

// ---------------------------------------------------------------------------
// ScalarFunction

ScalarFunction ScalarFunction::constant(double value) {
  ScalarFunction f;
  f.kind_ = Kind::constant;
  f.offset_ = value;
  return f;
}

ScalarFunction ScalarFunction::sine(double amplitude, double frequency, double offset) {
  ScalarFunction f;
  f.kind_ = Kind::sine;
  f.amplitude_ = amplitude;
  f.frequency_ = frequency;
  f.offset_ = offset;
  return f;
}

ScalarFunction ScalarFunction::tanh(double amplitude, double frequency, double offset) {
  ScalarFunction f = sine(amplitude, frequency, offset);
  f.kind_ = Kind::tanh;
  return f;
}

ScalarFunction ScalarFunction::exponential(double amplitude, double rate, double offset,
                                           Interval clip) {
  if (clip.empty()) throw Error(ErrorCode::invalid_argument, "empty clip interval");
  ScalarFunction f = sine(amplitude, rate, offset);
  f.kind_ = Kind::exponential;
  f.clip_ = clip;
  return f;
}

ScalarFunction ScalarFunction::polynomial(std::vector<double> coefficients, Interval clip) {
  if (clip.empty()) throw Error(ErrorCode::invalid_argument, "empty clip interval");
  ScalarFunction f;
  f.kind_ = Kind::polynomial;
  f.coefficients_ = std::move(coefficients);
  f.clip_ = clip;
  return f;
}

double ScalarFunction::operator()(double u) const noexcept {
  switch (kind_) {
    case Kind::constant: return offset_;
    case Kind::sine: return offset_ + amplitude_ * std::sin(frequency_ * u);
    case Kind::tanh: return offset_ + amplitude_ * std::tanh(frequency_ * u);
    case Kind::exponential:
      return offset_ + amplitude_ * std::exp(frequency_ * clamp_to(u, clip_));
    case Kind::polynomial: {
      const double v = clamp_to(u, clip_);
      double acc = 0.0;
      for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) acc = acc * v + *it;
      return acc;
    }
  }
  return 0.0;
}

bool ScalarFunction::is_constant() const noexcept {
  switch (kind_) {
    case Kind::constant: return true;
    case Kind::sine:
    case Kind::tanh:
    case Kind::exponential: return amplitude_ == 0.0 || frequency_ == 0.0;
    case Kind::polynomial:
      return std::all_of(coefficients_.begin() + std::min<std::size_t>(1, coefficients_.size()),
                         coefficients_.end(), [](double c) { return c == 0.0; });
  }
  return false;
}

Interval ScalarFunction::range() const {
  if (is_constant()) {
    const double v = (*this)(0.0);
    return Interval::point(v);
  }
  switch (kind_) {
    case Kind::constant: break;
    case Kind::sine:
    case Kind::tanh: {
      const double a = std::abs(amplitude_);
      return {offset_ - a, offset_ + a};
    }
    case Kind::exponential: {
      const double e_lo = std::exp(frequency_ * (frequency_ > 0 ? clip_.lo : clip_.hi));
      const double e_hi = std::exp(frequency_ * (frequency_ > 0 ? clip_.hi : clip_.lo));
      return Interval::point(offset_) + Interval{e_lo, e_hi} * Interval::point(amplitude_);
    }
    case Kind::polynomial: {
      if (!clip_.bounded()) return Interval::all();
      // Dense scan padded by a Lipschitz bound over each sub-interval.
      constexpr int n = 4096;
      const double step = (clip_.hi - clip_.lo) / n;
      double deriv_max = 0.0;
      for (std::size_t k = 1; k < coefficients_.size(); ++k) {
        deriv_max += static_cast<double>(k) * std::abs(coefficients_[k]) *
                     std::pow(clip_.abs_max(), static_cast<double>(k - 1));
      }
      double lo = kInf, hi = -kInf;
      for (int i = 0; i <= n; ++i) {
        const double v = (*this)(clip_.lo + step * i);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      const double pad = 0.5 * step * deriv_max;
      return {lo - pad, hi + pad};
    }
  }
  return Interval::all();
}

void to_json(json& j, const ScalarFunction& f) {
  switch (f.kind_) {
    case ScalarFunction::Kind::constant: j = {{"kind", "constant"}, {"value", f.offset_}}; break;
    case ScalarFunction::Kind::sine:
    case ScalarFunction::Kind::tanh:
      j = {{"kind", f.kind_ == ScalarFunction::Kind::sine ? "sin" : "tanh"},
           {"amplitude", f.amplitude_},
           {"frequency", f.frequency_},
           {"offset", f.offset_}};
      break;
    case ScalarFunction::Kind::exponential:
      j = {{"kind", "exp"},
           {"amplitude", f.amplitude_},
           {"rate", f.frequency_},
           {"offset", f.offset_},
           {"clip", clip_to_json(f.clip_)}};
      break;
    case ScalarFunction::Kind::polynomial:
      j = {{"kind", "polynomial"}, {"coefficients", f.coefficients_}, {"clip", clip_to_json(f.clip_)}};
      break;
  }
}

void from_json(const json& j, ScalarFunction& f) {
  if (j.is_number()) {
    f = ScalarFunction::constant(j.get<double>());
    return;
  }
  const auto kind = get_required<std::string>(j, "kind", "function");
  if (kind == "constant") {
    require_keys(j, {"kind", "value"}, "function(constant)");
    f = ScalarFunction::constant(get_required<double>(j, "value", "function(constant)"));
  } else if (kind == "sin" || kind == "tanh") {
    require_keys(j, {"kind", "amplitude", "frequency", "offset"}, "function(" + kind + ")");
    const double a = get_or(j, "amplitude", 1.0);
    const double w = get_or(j, "frequency", 1.0);
    const double o = get_or(j, "offset", 0.0);
    f = kind == "sin" ? ScalarFunction::sine(a, w, o) : ScalarFunction::tanh(a, w, o);
  } else if (kind == "exp") {
    require_keys(j, {"kind", "amplitude", "rate", "offset", "clip"}, "function(exp)");
    f = ScalarFunction::exponential(get_or(j, "amplitude", 1.0), get_or(j, "rate", 1.0),
                                    get_or(j, "offset", 0.0), clip_from_json(j));
  } else if (kind == "polynomial") {
    require_keys(j, {"kind", "coefficients", "clip"}, "function(polynomial)");
    f = ScalarFunction::polynomial(
        get_required<std::vector<double>>(j, "coefficients", "function(polynomial)"),
        clip_from_json(j));
  } else {
    detail::schema_error("function", "unknown kind '" + kind + "'");
  }
}

// ---------------------------------------------------------------------------
// ProfileFunctional

ProfileFunctional::ProfileFunctional(double constant, std::vector<Term> terms)
    : constant_(constant), terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (t.power < 1) throw Error(ErrorCode::invalid_argument, "functional power must be >= 1");
  }
}

double ProfileFunctional::operator()(const GridProfile& u) const {
  double acc = constant_;
  if (terms_.empty()) return acc;
  double sup = -1.0, l2 = -1.0;
  for (const auto& t : terms_) {
    double m;
    if (t.measure == Measure::sup) {
      if (sup < 0.0) sup = u.sup_norm();
      m = sup;
    } else {
      if (l2 < 0.0) l2 = u.l2_norm();
      m = l2;
    }
    double p = m;
    for (int k = 1; k < t.power; ++k) p *= m;
    acc += t.weight * p;
  }
  return acc;
}

Interval ProfileFunctional::range() const {
  Interval r = Interval::point(constant_);
  for (const auto& t : terms_) r = r + Interval{0.0, kInf} * Interval::point(t.weight);
  return r;
}

void to_json(json& j, const ProfileFunctional& f) {
  j = {{"constant", f.constant_}, {"terms", json::array()}};
  for (const auto& t : f.terms_) {
    j["terms"].push_back({{"measure", t.measure == ProfileFunctional::Measure::sup ? "sup" : "l2"},
                          {"weight", t.weight},
                          {"power", t.power}});
  }
}

void from_json(const json& j, ProfileFunctional& f) {
  if (j.is_number()) {
    f = ProfileFunctional(j.get<double>());
    return;
  }
  require_keys(j, {"constant", "terms"}, "functional");
  std::vector<ProfileFunctional::Term> terms;
  if (auto it = j.find("terms"); it != j.end()) {
    for (const auto& tj : *it) {
      require_keys(tj, {"measure", "weight", "power"}, "functional term");
      ProfileFunctional::Term t;
      const auto m = get_required<std::string>(tj, "measure", "functional term");
      if (m == "sup") {
        t.measure = ProfileFunctional::Measure::sup;
      } else if (m == "l2") {
        t.measure = ProfileFunctional::Measure::l2;
      } else {
        detail::schema_error("functional term", "unknown measure '" + m + "'");
      }
      t.weight = get_required<double>(tj, "weight", "functional term");
      t.power = get_or(tj, "power", 1);
      terms.push_back(t);
    }
  }
  f = ProfileFunctional(get_or(j, "constant", 0.0), std::move(terms));
}

// ---------------------------------------------------------------------------
// DisturbanceSignal

DisturbanceSignal DisturbanceSignal::zero() { return {}; }

DisturbanceSignal DisturbanceSignal::constant(double value) {
  DisturbanceSignal d;
  d.kind_ = Kind::constant;
  d.offset_ = value;
  return d;
}

DisturbanceSignal DisturbanceSignal::sinusoid(double amplitude, double frequency, double phase,
                                              double offset) {
  DisturbanceSignal d;
  d.kind_ = Kind::sinusoid;
  d.amplitude_ = amplitude;
  d.frequency_ = frequency;
  d.phase_ = phase;
  d.offset_ = offset;
  return d;
}

DisturbanceSignal DisturbanceSignal::decaying_exponential(double amplitude, double rate,
                                                          double offset) {
  if (rate < 0.0) throw Error(ErrorCode::invalid_argument, "decay rate must be >= 0");
  DisturbanceSignal d;
  d.kind_ = Kind::decaying_exponential;
  d.amplitude_ = amplitude;
  d.frequency_ = rate;
  d.offset_ = offset;
  return d;
}

DisturbanceSignal DisturbanceSignal::piecewise_linear(std::vector<double> times,
                                                      std::vector<double> values) {
  if (times.empty() || times.size() != values.size()) {
    throw Error(ErrorCode::invalid_argument, "piecewise-linear signal needs matching samples");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw Error(ErrorCode::invalid_argument, "sample times must be strictly increasing");
    }
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::invalid_argument, "non-finite sample value");
  }
  DisturbanceSignal d;
  d.kind_ = Kind::piecewise_linear;
  d.times_ = std::move(times);
  d.values_ = std::move(values);
  return d;
}

double DisturbanceSignal::operator()(double t) const noexcept {
  switch (kind_) {
    case Kind::zero: return 0.0;
    case Kind::constant: return offset_;
    case Kind::sinusoid: return offset_ + amplitude_ * std::sin(frequency_ * t + phase_);
    case Kind::decaying_exponential: return offset_ + amplitude_ * std::exp(-frequency_ * t);
    case Kind::piecewise_linear: {
      if (t <= times_.front()) return values_.front();
      if (t >= times_.back()) return values_.back();
      const auto it = std::upper_bound(times_.begin(), times_.end(), t);
      const std::size_t k = static_cast<std::size_t>(it - times_.begin());
      const double w = (t - times_[k - 1]) / (times_[k] - times_[k - 1]);
      return values_[k - 1] + w * (values_[k] - values_[k - 1]);
    }
  }
  return 0.0;
}

Interval DisturbanceSignal::range(double horizon) const {
  switch (kind_) {
    case Kind::zero: return Interval::point(0.0);
    case Kind::constant: return Interval::point(offset_);
    case Kind::sinusoid: {
      const double a = std::abs(amplitude_);
      return {offset_ - a, offset_ + a};
    }
    case Kind::decaying_exponential: {
      const double v0 = (*this)(0.0), v1 = (*this)(horizon);
      return {std::min(v0, v1), std::max(v0, v1)};
    }
    case Kind::piecewise_linear: {
      auto [lo, hi] = std::minmax_element(values_.begin(), values_.end());
      return {*lo, *hi};
    }
  }
  return Interval::all();
}

double DisturbanceSignal::lipschitz() const noexcept {
  switch (kind_) {
    case Kind::zero:
    case Kind::constant: return 0.0;
    case Kind::sinusoid: return std::abs(amplitude_ * frequency_);
    case Kind::decaying_exponential: return std::abs(amplitude_ * frequency_);
    case Kind::piecewise_linear: {
      double l = 0.0;
      for (std::size_t i = 1; i < times_.size(); ++i) {
        l = std::max(l, std::abs(values_[i] - values_[i - 1]) / (times_[i] - times_[i - 1]));
      }
      return l;
    }
  }
  return 0.0;
}

void to_json(json& j, const DisturbanceSignal& d) {
  using K = DisturbanceSignal::Kind;
  switch (d.kind_) {
    case K::zero: j = {{"kind", "zero"}}; break;
    case K::constant: j = {{"kind", "constant"}, {"value", d.offset_}}; break;
    case K::sinusoid:
      j = {{"kind", "sinusoid"},
           {"amplitude", d.amplitude_},
           {"frequency", d.frequency_},
           {"phase", d.phase_},
           {"offset", d.offset_}};
      break;
    case K::decaying_exponential:
      j = {{"kind", "exponential"}, {"amplitude", d.amplitude_}, {"rate", d.frequency_},
           {"offset", d.offset_}};
      break;
    case K::piecewise_linear:
      j = {{"kind", "piecewise_linear"}, {"times", d.times_}, {"values", d.values_}};
      break;
  }
}

void from_json(const json& j, DisturbanceSignal& d) {
  if (j.is_number()) {
    d = DisturbanceSignal::constant(j.get<double>());
    return;
  }
  const auto kind = get_required<std::string>(j, "kind", "signal");
  if (kind == "zero") {
    require_keys(j, {"kind"}, "signal(zero)");
    d = DisturbanceSignal::zero();
  } else if (kind == "constant") {
    require_keys(j, {"kind", "value"}, "signal(constant)");
    d = DisturbanceSignal::constant(get_required<double>(j, "value", "signal(constant)"));
  } else if (kind == "sinusoid") {
    require_keys(j, {"kind", "amplitude", "frequency", "phase", "offset"}, "signal(sinusoid)");
    d = DisturbanceSignal::sinusoid(get_or(j, "amplitude", 1.0), get_or(j, "frequency", 1.0),
                                    get_or(j, "phase", 0.0), get_or(j, "offset", 0.0));
  } else if (kind == "exponential") {
    require_keys(j, {"kind", "amplitude", "rate", "offset"}, "signal(exponential)");
    d = DisturbanceSignal::decaying_exponential(get_or(j, "amplitude", 1.0), get_or(j, "rate", 1.0),
                                                get_or(j, "offset", 0.0));
  } else if (kind == "piecewise_linear") {
    require_keys(j, {"kind", "times", "values"}, "signal(piecewise_linear)");
    d = DisturbanceSignal::piecewise_linear(
        get_required<std::vector<double>>(j, "times", "signal(piecewise_linear)"),
        get_required<std::vector<double>>(j, "values", "signal(piecewise_linear)"));
  } else {
    detail::schema_error("signal", "unknown kind '" + kind + "'");
  }
}

// ---------------------------------------------------------------------------
// SpatialShape

SpatialShape SpatialShape::uniform() { return {}; }

SpatialShape SpatialShape::sine(int mode) {
  if (mode < 1) throw Error(ErrorCode::invalid_argument, "sine mode must be >= 1");
  SpatialShape s;
  s.kind_ = Kind::sine;
  s.mode_ = mode;
  return s;
}

SpatialShape SpatialShape::cosine(int mode) {
  if (mode < 0) throw Error(ErrorCode::invalid_argument, "cosine mode must be >= 0");
  SpatialShape s;
  s.kind_ = Kind::cosine;
  s.mode_ = mode;
  return s;
}

double SpatialShape::operator()(double x) const noexcept {
  switch (kind_) {
    case Kind::uniform: return 1.0;
    case Kind::sine: return std::sin(mode_ * std::numbers::pi * x);
    case Kind::cosine: return std::cos(mode_ * std::numbers::pi * x);
  }
  return 0.0;
}

Interval SpatialShape::range() const {
  switch (kind_) {
    case Kind::uniform: return Interval::point(1.0);
    case Kind::sine: return mode_ == 1 ? Interval{0.0, 1.0} : Interval{-1.0, 1.0};
    case Kind::cosine: return mode_ == 0 ? Interval::point(1.0) : Interval{-1.0, 1.0};
  }
  return Interval::all();
}

void to_json(json& j, const SpatialShape& s) {
  switch (s.kind_) {
    case SpatialShape::Kind::uniform: j = {{"kind", "uniform"}}; break;
    case SpatialShape::Kind::sine: j = {{"kind", "sine"}, {"mode", s.mode_}}; break;
    case SpatialShape::Kind::cosine: j = {{"kind", "cosine"}, {"mode", s.mode_}}; break;
  }
}

void from_json(const json& j, SpatialShape& s) {
  require_keys(j, {"kind", "mode"}, "shape");
  const auto kind = get_required<std::string>(j, "kind", "shape");
  if (kind == "uniform") {
    s = SpatialShape::uniform();
  } else if (kind == "sine") {
    s = SpatialShape::sine(get_or(j, "mode", 1));
  } else if (kind == "cosine") {
    s = SpatialShape::cosine(get_or(j, "mode", 1));
  } else {
    detail::schema_error("shape", "unknown kind '" + kind + "'");
  }
}

}  // namespace isslab
