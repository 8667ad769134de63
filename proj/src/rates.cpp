#include "betacoal/rates.h"

#include <cmath>
#include <string>

#include "betacoal/error.h"
#include "betacoal/special.h"

namespace betacoal {

namespace {

constexpr std::int64_t kAnchorStride = 128;

double log_binomial(double n, double k) {
  return log_gamma(n + 1.0) - log_gamma(k + 1.0) - log_gamma(n - k + 1.0);
}

// log w_k = log C(n, k+1) + log Be(a+k−1, n−k+b−1) − log Be(a, b)
double log_jump_weight(std::int64_t n, std::int64_t k, const CoalescentParams& p) {
  const auto nd = static_cast<double>(n);
  const auto kd = static_cast<double>(k);
  return log_binomial(nd, kd + 1.0) + log_beta(p.a + kd - 1.0, nd - kd + p.b - 1.0) -
         log_beta(p.a, p.b);
}

void require_state(std::int64_t n, const char* who) {
  if (n < 2) {
    throw ArgumentError(std::string(who) + ": state must be >= 2, got " + std::to_string(n));
  }
}

}  // namespace

void CoalescentParams::validate() const {
  if (!(a > 0.0) || !std::isfinite(a)) throw ArgumentError("beta shape a must be positive");
  if (!(b > 0.0) || !std::isfinite(b)) throw ArgumentError("beta shape b must be positive");
  if (mutation_rate && !(*mutation_rate >= 0.0)) {
    throw ArgumentError("mutation rate must be nonnegative");
  }
}

void CoalescentParams::require_stable_regime() const {
  validate();
  if (a > 1.0) {
    throw RegimeError("operation requires a in (0, 1], got a = " + std::to_string(a));
  }
}

double log_collision_rate(std::int64_t n, std::int64_t k, const CoalescentParams& params) {
  params.validate();
  if (k < 2 || k > n) {
    throw ArgumentError("collision_rate: need 2 <= k <= n");
  }
  const auto nd = static_cast<double>(n);
  const auto kd = static_cast<double>(k);
  return log_beta(params.a + kd - 2.0, nd - kd + params.b) - log_beta(params.a, params.b);
}

double collision_rate(std::int64_t n, std::int64_t k, const CoalescentParams& params) {
  return std::exp(log_collision_rate(n, k, params));
}

std::vector<double> jump_weights(std::int64_t n, const CoalescentParams& params) {
  params.validate();
  require_state(n, "jump_weights");
  std::vector<double> w(static_cast<std::size_t>(n - 1));
  const auto nd = static_cast<double>(n);
  double current = 0.0;
  for (std::int64_t k = 1; k <= n - 1; ++k) {
    if ((k - 1) % kAnchorStride == 0) {
      current = std::exp(log_jump_weight(n, k, params));
    } else {
      current *= decrement_ratio(nd, static_cast<double>(k - 1), params.a, params.b);
    }
    w[static_cast<std::size_t>(k - 1)] = current;
  }
  return w;
}

double total_rate_generic(std::int64_t n, const CoalescentParams& params) {
  CompensatedSum sum;
  for (double w : jump_weights(n, params)) sum += w;
  return static_cast<double>(sum.value());
}

double total_rate_a_one(std::int64_t n, double b) {
  if (n < 2) throw ArgumentError("total_rate: state must be >= 2");
  if (!(b > 0.0)) throw ArgumentError("beta shape b must be positive");
  const auto nd = static_cast<double>(n);
  if (b == 1.0) return nd - 1.0;
  // Small n: direct sum is exact enough and avoids digamma differencing.
  if (n <= 64) {
    CompensatedSum s;
    for (std::int64_t k = 1; k <= n - 1; ++k) {
      const auto kd = static_cast<long double>(k);
      s += kd / (b + kd - 1.0L);
    }
    return static_cast<double>(b * s.value());
  }
  return b * (nd - 1.0) - b * (b - 1.0) * (digamma(nd + b - 1.0) - digamma(b));
}

double total_rate(std::int64_t n, const CoalescentParams& params) {
  params.validate();
  require_state(n, "total_rate");
  if (params.is_a_one()) return total_rate_a_one(n, params.b);
  return total_rate_generic(n, params);
}

DecrementLaw::DecrementLaw(std::int64_t n, const CoalescentParams& params, std::int64_t dense_cap)
    : n_(n), params_(params), total_rate_(0.0) {
  params.validate();
  require_state(n, "decrement_law");
  if (n <= dense_cap) {
    probs_ = jump_weights(n, params);
    CompensatedSum sum;
    for (double w : probs_) sum += w;
    total_rate_ = static_cast<double>(sum.value());
    for (double& w : probs_) w /= total_rate_;
  } else {
    total_rate_ = betacoal::total_rate(n, params);
  }
}

double DecrementLaw::pmf(std::int64_t k) const {
  if (k < 1 || k > n_ - 1) return 0.0;
  if (is_dense()) return probs_[static_cast<std::size_t>(k - 1)];
  return std::exp(log_jump_weight(n_, k, params_) - std::log(total_rate_));
}

double DecrementLaw::mean() const {
  CompensatedSum s;
  for (std::int64_t k = 1; k <= n_ - 1; ++k) s += static_cast<long double>(k) * pmf(k);
  return static_cast<double>(s.value());
}

DecrementLaw decrement_law(std::int64_t n, const CoalescentParams& params) {
  return DecrementLaw(n, params);
}

double limit_step_pmf(double a, std::int64_t k) {
  if (!(a > 0.0 && a <= 1.0)) {
    throw RegimeError("limit step law requires a in (0, 1]");
  }
  if (k < 1) throw ArgumentError("limit_step_pmf: k must be >= 1");
  const auto kd = static_cast<double>(k);
  if (a == 1.0) return 1.0 / (kd * (kd + 1.0));
  return std::exp(std::log(2.0 - a) + log_gamma(kd + a - 1.0) - log_gamma(a) -
                  log_gamma(kd + 2.0));
}

double limit_step_tail(double a, std::int64_t k) {
  if (!(a > 0.0 && a <= 1.0)) {
    throw RegimeError("limit step law requires a in (0, 1]");
  }
  if (k <= 0) return 1.0;
  const auto kd = static_cast<double>(k);
  if (a == 1.0) return 1.0 / (kd + 1.0);
  return std::exp(log_gamma(kd + a) - log_gamma(a) - log_gamma(kd + 2.0));
}

LimitStepLaw::LimitStepLaw(double a, std::int64_t horizon) : a_(a) {
  if (!(a > 0.0 && a <= 1.0)) {
    throw RegimeError("limit step law requires a in (0, 1]");
  }
  if (horizon < 1) throw ArgumentError("LimitStepLaw: horizon must be >= 1");
  pmf_.resize(static_cast<std::size_t>(horizon));
  cdf_.resize(static_cast<std::size_t>(horizon));
  for (std::int64_t k = 1; k <= horizon; ++k) {
    const auto i = static_cast<std::size_t>(k - 1);
    pmf_[i] = limit_step_pmf(a, k);
    // Complement of the closed-form tail; avoids accumulating the partial sum.
    cdf_[i] = 1.0 - limit_step_tail(a, k);
  }
}

double LimitStepLaw::pmf(std::int64_t k) const {
  if (k < 1) return 0.0;
  if (k <= horizon()) return pmf_[static_cast<std::size_t>(k - 1)];
  return limit_step_pmf(a_, k);
}

double LimitStepLaw::cdf(std::int64_t k) const {
  if (k < 1) return 0.0;
  if (k <= horizon()) return cdf_[static_cast<std::size_t>(k - 1)];
  return 1.0 - limit_step_tail(a_, k);
}

double LimitStepLaw::tail(std::int64_t k) const { return limit_step_tail(a_, k); }

double decrement_deviation(std::int64_t n, double q, const CoalescentParams& params) {
  params.require_stable_regime();
  if (!(q > 0.0 && q <= 1.0)) throw RegimeError("decrement_deviation: q must lie in (0, 1]");
  if (!(q + params.a > 1.0)) throw RegimeError("decrement_deviation: requires q + a > 1");
  const DecrementLaw law(n, params, n);
  CompensatedSum s;
  for (std::int64_t k = 1; k <= n - 1; ++k) {
    const double diff = std::abs(law.pmf(k) - limit_step_pmf(params.a, k));
    s += std::pow(static_cast<double>(k), q) * diff;
  }
  return static_cast<double>(s.value());
}

RateTable::RateTable(const CoalescentParams& params, std::int64_t n_max)
    : params_(params), n_max_(n_max) {
  params.validate();
  if (n_max < 1) throw ArgumentError("RateTable: n_max must be >= 1");
  const auto size = static_cast<std::size_t>(std::max<std::int64_t>(n_max, 2) + 1);
  rate_.assign(size, 0.0);
  first_.assign(size, 0.0);
  const double a = params.a;
  const double b = params.b;
  const double log_beta_ab = log_beta(a, b);
  long double rate = 0.0L;  // λ_1
  for (std::int64_t m = 2; m <= n_max; ++m) {
    const auto md = static_cast<double>(m);
    if (params.is_a_one()) {
      rate_[static_cast<std::size_t>(m)] = total_rate_a_one(m, b);
    } else {
      // λ_m = λ_{m−1} + (m−1) Be(a, m+b−2)/Be(a,b)
      rate += (md - 1.0) * std::exp(static_cast<long double>(log_beta(a, md + b - 2.0) - log_beta_ab));
      rate_[static_cast<std::size_t>(m)] = static_cast<double>(rate);
    }
    // P{I_m = 1} = C(m,2) Be(a, m+b−2)/(Be(a,b) λ_m)
    const double log_w1 = std::log(0.5 * md * (md - 1.0)) + log_beta(a, md + b - 2.0) - log_beta_ab;
    first_[static_cast<std::size_t>(m)] =
        std::exp(log_w1 - std::log(rate_[static_cast<std::size_t>(m)]));
  }
}

}  // namespace betacoal
