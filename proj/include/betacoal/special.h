#pragma once

// Special functions used throughout: log-gamma, log-beta, digamma and a
// compensated accumulator for long sums.

namespace betacoal {

/// log Γ(x) for x > 0. Throws DomainError otherwise.
double log_gamma(double x);

/// log Be(x, y) = log Γ(x) + log Γ(y) − log Γ(x + y), for x, y > 0.
double log_beta(double x, double y);

/// Ψ(x) = Γ'(x)/Γ(x) for x > 0. Upward recurrence to x ≥ 10, then the
/// asymptotic series with eight Bernoulli terms. Throws DomainError for x ≤ 0.
double digamma(double x);

/// Euler–Mascheroni constant.
inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

// Neumaier variant of Kahan summation, carried in long double.
class CompensatedSum {
 public:
  void add(long double x) {
    long double t = sum_ + x;
    if ((sum_ >= 0 ? sum_ : -sum_) >= (x >= 0 ? x : -x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(long double x) {
    add(x);
    return *this;
  }
  [[nodiscard]] long double value() const { return sum_ + comp_; }

 private:
  long double sum_ = 0;
  long double comp_ = 0;
};

}  // namespace betacoal
