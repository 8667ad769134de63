#include "betacoal/stable.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "betacoal/asymptotics.h"
#include "betacoal/error.h"

namespace betacoal {

namespace {

constexpr double kPi = std::numbers::pi;

// Nodes and weights for ∫_0^∞ f(t) dt with f integrable at 0 (possibly with a
// log singularity) and negligible beyond t_max. Geometric panels near zero,
// uniform panels of width h elsewhere, 20-point Gauss-Legendre on each.
struct InversionRule {
  std::vector<double> t;
  std::vector<double> w;
  std::vector<std::complex<double>> cf;
};

void add_panel(InversionRule& rule, double lo, double hi) {
  using Gauss = boost::math::quadrature::gauss<double, 20>;
  const auto& x = Gauss::abscissa();
  const auto& wt = Gauss::weights();
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) {
      rule.t.push_back(mid);
      rule.w.push_back(half * wt[i]);
      continue;
    }
    rule.t.push_back(mid - half * x[i]);
    rule.w.push_back(half * wt[i]);
    rule.t.push_back(mid + half * x[i]);
    rule.w.push_back(half * wt[i]);
  }
}

double cf_cutoff(const StableSpec& spec) {
  // |φ(t)| < e^{−40} beyond the cutoff
  if (spec.form() == StableSpec::Form::kOneStable) return 40.0 / (kPi / 2.0);
  const double decay = -std::cos(kPi * spec.alpha() / 2.0);
  return std::pow(40.0 / decay, 1.0 / spec.alpha());
}

InversionRule make_rule(const StableSpec& spec, double x_max) {
  InversionRule rule;
  const double t_max = cf_cutoff(spec);
  const double h = std::min(0.25, 1.0 / std::max(1.0, x_max));
  const double first = std::min(h, t_max);
  double hi = first;
  for (int k = 0; k < 60; ++k) {
    const double lo = hi * 0.5;
    add_panel(rule, lo, hi);
    hi = lo;
  }
  const auto panels = static_cast<std::int64_t>(std::ceil((t_max - first) / h));
  for (std::int64_t k = 0; k < panels; ++k) {
    add_panel(rule, first + static_cast<double>(k) * h, first + static_cast<double>(k + 1) * h);
  }
  rule.cf.reserve(rule.t.size());
  for (double t : rule.t) rule.cf.push_back(stable_cf(spec, t));
  return rule;
}

double invert(const InversionRule& rule, double x) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < rule.t.size(); ++i) {
    const double t = rule.t[i];
    const std::complex<double> v = std::polar(1.0, -t * x) * rule.cf[i];
    s += static_cast<long double>(rule.w[i] * v.imag() / t);
  }
  const double f = 0.5 - static_cast<double>(s) / kPi;
  return std::clamp(f, 0.0, 1.0);
}

}  // namespace

StableSpec StableSpec::alpha_stable(double alpha) {
  if (!(alpha > 1.0 && alpha < 2.0)) throw ArgumentError("alpha_stable requires 1 < alpha < 2");
  return {alpha, Form::kAlphaStable};
}

StableSpec StableSpec::one_stable() { return {1.0, Form::kOneStable}; }

StableSpec StableSpec::for_collisions(double a) {
  if (!(a > 0.0 && a <= 1.0)) throw RegimeError("stable limit requires 0 < a <= 1");
  if (a == 1.0) return one_stable();
  return alpha_stable(2.0 - a);
}

std::complex<double> stable_cf(const StableSpec& spec, double z) {
  if (z == 0.0) return {1.0, 0.0};
  const double sgn = z > 0.0 ? 1.0 : -1.0;
  const double az = std::abs(z);
  if (spec.form() == StableSpec::Form::kOneStable) {
    return std::exp(std::complex<double>(-az * kPi / 2.0, az * std::log(az) * sgn));
  }
  const double alpha = spec.alpha();
  const double mod = std::pow(az, alpha);
  return std::exp(std::complex<double>(mod * std::cos(kPi * alpha / 2.0),
                                       mod * std::sin(kPi * alpha / 2.0) * sgn));
}

double sample_stable(const StableSpec& spec, Rng& rng) {
  constexpr double beta = -1.0;
  const double v = kPi * (rng.uniform_open() - 0.5);
  const double w = rng.exponential();
  if (spec.form() == StableSpec::Form::kOneStable) {
    const double sigma = kPi / 2.0;
    const double shifted = kPi / 2.0 + beta * v;
    const double x = (2.0 / kPi) *
                     (shifted * std::tan(v) - beta * std::log((kPi / 2.0) * w * std::cos(v) / shifted));
    return sigma * x + (2.0 / kPi) * beta * sigma * std::log(sigma);
  }
  const double alpha = spec.alpha();
  const double tan_term = beta * std::tan(kPi * alpha / 2.0);
  const double b_shift = std::atan(tan_term) / alpha;
  const double s_scale = std::pow(1.0 + tan_term * tan_term, 1.0 / (2.0 * alpha));
  const double x = s_scale * std::sin(alpha * (v + b_shift)) / std::pow(std::cos(v), 1.0 / alpha) *
                   std::pow(std::cos(v - alpha * (v + b_shift)) / w, (1.0 - alpha) / alpha);
  const double sigma = std::pow(-std::cos(kPi * alpha / 2.0), 1.0 / alpha);
  return sigma * x;
}

double stable_cdf(const StableSpec& spec, double x) {
  const InversionRule rule = make_rule(spec, std::abs(x));
  return invert(rule, x);
}

StableCdfTable::StableCdfTable(const StableSpec& spec, double lo, double hi, double step)
    : spec_(spec), lo_(lo), step_(step) {
  if (!(hi > lo) || !(step > 0.0) || !(lo < 0.0)) {
    throw ArgumentError("StableCdfTable: need lo < 0, lo < hi and step > 0");
  }
  const auto count = static_cast<std::size_t>(std::ceil((hi - lo) / step)) + 1;
  const InversionRule rule = make_rule(spec, std::max(std::abs(lo), std::abs(hi)));
  values_.resize(count);
  for (std::size_t i = 0; i < count; ++i) values_[i] = invert(rule, lo + static_cast<double>(i) * step);
  // enforce monotonicity against quadrature ripple
  for (std::size_t i = 1; i < count; ++i) values_[i] = std::max(values_[i], values_[i - 1]);
}

double StableCdfTable::operator()(double x) const {
  const double pos = (x - lo_) / step_;
  if (pos < 0.0) return values_.front() * std::pow(lo_ / x, spec_.alpha());
  if (pos > static_cast<double>(values_.size() - 1)) return 1.0;
  const auto i = static_cast<std::size_t>(pos);
  if (i + 1 >= values_.size()) return values_.back();
  const double frac = pos - static_cast<double>(i);
  return values_[i] + frac * (values_[i + 1] - values_[i]);
}

Normalization::Normalization(const CoalescentParams& params, Regime regime)
    : params_(params), regime_(regime) {
  params_.validate();
  (void)centering_sequence(min_n(), params_, regime_);
}

std::int64_t Normalization::min_n() const {
  return regime_ == Regime::kCollisionsSubcritical ? 2 : 3;
}

double Normalization::centering(std::int64_t n) const {
  return centering_sequence(n, params_, regime_).first;
}

double Normalization::scaling(std::int64_t n) const {
  return centering_sequence(n, params_, regime_).second;
}

double Normalization::apply(double value, std::int64_t n) const {
  const auto [an, bn] = centering_sequence(n, params_, regime_);
  return (value - an) / bn;
}

StableSpec Normalization::limit() const {
  if (regime_ == Regime::kCollisionsSubcritical) return StableSpec::alpha_stable(2.0 - params_.a);
  return StableSpec::one_stable();
}

double normalize(double value, std::int64_t n, const CoalescentParams& params, Regime regime) {
  return Normalization(params, regime).apply(value, n);
}

}  // namespace betacoal
