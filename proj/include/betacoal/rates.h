#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace betacoal {

/// Parameters of the beta(a, b) coalescent, plus the optional mutation rate
/// used for segregating sites.
struct CoalescentParams {
  double a = 1.0;
  double b = 1.0;
  std::optional<double> mutation_rate;

  /// Throws ArgumentError unless a > 0, b > 0 and mutation_rate >= 0.
  void validate() const;
  /// Throws RegimeError unless a ∈ (0, 1].
  void require_stable_regime() const;
  [[nodiscard]] bool is_a_one() const { return a == 1.0; }
};

/// λ_{n,k}: rate at which a given k-tuple out of n particles merges,
/// Be(a+k−2, n−k+b)/Be(a,b). Requires 2 ≤ k ≤ n.
double collision_rate(std::int64_t n, std::int64_t k, const CoalescentParams& params);
double log_collision_rate(std::int64_t n, std::int64_t k, const CoalescentParams& params);

/// Total jump rate λ_n out of state n. Uses the closed form when a = 1,
/// otherwise the sum over merger sizes.
double total_rate(std::int64_t n, const CoalescentParams& params);
/// λ_n = Σ_{k=2}^n C(n,k) λ_{n,k}, summed directly.
double total_rate_generic(std::int64_t n, const CoalescentParams& params);
/// λ_n = b Σ_{k=1}^{n−1} k/(b+k−1) for the beta(1, b) coalescent, evaluated as
/// b(n−1) − b(b−1)(Ψ(n+b−1) − Ψ(b)).
double total_rate_a_one(std::int64_t n, double b);

/// Unnormalized jump weights w_k = C(n,k+1) λ_{n,k+1}, k = 1..n−1, returned in
/// a vector indexed by k−1. Generated by the ratio recursion with log-space
/// re-anchoring. The sum of the weights is λ_n.
std::vector<double> jump_weights(std::int64_t n, const CoalescentParams& params);

/// Law of the first decrement I_n. Rows up to `dense_cap` are stored densely;
/// beyond it each probability is evaluated on demand in log space.
class DecrementLaw {
 public:
  static constexpr std::int64_t kDefaultDenseCap = 20000;

  DecrementLaw(std::int64_t n, const CoalescentParams& params,
               std::int64_t dense_cap = kDefaultDenseCap);

  [[nodiscard]] std::int64_t n() const { return n_; }
  [[nodiscard]] bool is_dense() const { return !probs_.empty(); }
  /// P{I_n = k}, k ∈ {1, …, n−1}; zero outside.
  [[nodiscard]] double pmf(std::int64_t k) const;
  /// Dense probabilities indexed by k−1 (empty when not dense).
  [[nodiscard]] const std::vector<double>& probs() const { return probs_; }
  [[nodiscard]] double total_rate() const { return total_rate_; }
  [[nodiscard]] double mean() const;

 private:
  std::int64_t n_;
  CoalescentParams params_;
  double total_rate_;
  std::vector<double> probs_;
};

DecrementLaw decrement_law(std::int64_t n, const CoalescentParams& params);

/// p^{(a)}_k = (2−a)Γ(k+a−1)/(Γ(a)(k+1)!), the limit of P{I_n = k}.
/// Requires a ∈ (0, 1] and k ≥ 1.
double limit_step_pmf(double a, std::int64_t k);
/// P{ξ > k} = Γ(k+a)/(Γ(a)Γ(k+2)); equals 1 at k = 0.
double limit_step_tail(double a, std::int64_t k);

/// The limiting step law with a prefix CDF cached up to `horizon`.
class LimitStepLaw {
 public:
  explicit LimitStepLaw(double a, std::int64_t horizon = 1 << 16);

  [[nodiscard]] double a() const { return a_; }
  [[nodiscard]] std::int64_t horizon() const { return static_cast<std::int64_t>(pmf_.size()); }
  [[nodiscard]] double pmf(std::int64_t k) const;
  /// P{ξ ≤ k}.
  [[nodiscard]] double cdf(std::int64_t k) const;
  /// P{ξ > k}.
  [[nodiscard]] double tail(std::int64_t k) const;

 private:
  double a_;
  std::vector<double> pmf_;  // index k-1
  std::vector<double> cdf_;  // index k-1
};

/// Δ_n(q) = Σ_{k=1}^{n−1} k^q |P{I_n=k} − p^{(a)}_k|. Requires a ∈ (0,1],
/// q ∈ (0,1] and q + a > 1.
double decrement_deviation(std::int64_t n, double q, const CoalescentParams& params);

/// Per-state quantities for the simulator: λ_m and P{I_m = 1} for
/// 2 ≤ m ≤ n_max. For a ≠ 1 the rates come from the increment identity
/// λ_{m+1} − λ_m = m Be(a, m+b−1)/Be(a,b).
class RateTable {
 public:
  RateTable(const CoalescentParams& params, std::int64_t n_max);

  [[nodiscard]] const CoalescentParams& params() const { return params_; }
  [[nodiscard]] std::int64_t n_max() const { return n_max_; }
  [[nodiscard]] double total_rate(std::int64_t m) const { return rate_[static_cast<std::size_t>(m)]; }
  [[nodiscard]] double first_jump_prob(std::int64_t m) const {
    return first_[static_cast<std::size_t>(m)];
  }

 private:
  CoalescentParams params_;
  std::int64_t n_max_;
  std::vector<double> rate_;   // index m
  std::vector<double> first_;  // index m
};

/// Ratio P{I_n = k+1}/P{I_n = k} = (n−k−1)(a+k−1)/((k+2)(n−k+b−2)).
inline double decrement_ratio(double n, double k, double a, double b) {
  return (n - k - 1.0) * (a + k - 1.0) / ((k + 2.0) * (n - k + b - 2.0));
}

}  // namespace betacoal
