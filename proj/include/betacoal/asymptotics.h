#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "betacoal/exact.h"
#include "betacoal/stable.h"

namespace betacoal {

// Coefficients of the moment expansions for the beta(1, b) coalescent.

/// κ_j = (j+b−1)Ψ(j+b) + j − (b−1)Ψ(b).
double kappa(int j, double b);
/// m_0 = 0, m_j = m_{j−1} + κ_j/j.
double m_coeff(int j, double b);
/// m_j = 2j + Σ_{i<j} Ψ(b+i) Σ_{l=i+1}^{j} 1/l.
double m_coeff_closed_form(int j, double b);
/// c_{b,α,p} = (α+b−1)Ψ(α+b−1) + p + 1 + (1−b)Ψ(b). Requires α+b−1 > 0.
double c_coeff(double b, double alpha, double p);
/// The equivalent form (α+b−1)Ψ(α+b) + p − (b−1)Ψ(b).
double c_coeff_alt(double b, double alpha, double p);

class ExpansionCoefficients {
 public:
  ExpansionCoefficients(double b, int j_max);

  [[nodiscard]] double b() const { return b_; }
  [[nodiscard]] int j_max() const { return static_cast<int>(kappa_.size()) - 1; }
  [[nodiscard]] double kappa(int j) const { return kappa_.at(static_cast<std::size_t>(j)); }
  [[nodiscard]] double m(int j) const { return m_.at(static_cast<std::size_t>(j)); }

 private:
  double b_;
  std::vector<double> kappa_;
  std::vector<double> m_;
};

/// Σ_i C(j,i)(−1)^{j−i} m_i, accumulated in compensated long double.
double inversion_lhs(int j, double b);
/// (−1)^j Be(b, j−1)/j.
double inversion_rhs(int j, double b);
/// |lhs − rhs|, j ≥ 2.
double inversion_residual(int j, double b);

enum class FormulaId {
  kMomentX,
  kMomentL,
  kCentralMomentX,
  kCentralMomentL,
};

/// A predicted value together with the order of its neglected remainder. The
/// error order is descriptive only and never enters `value`.
struct ExpansionPrediction {
  double value = 0.0;
  std::string error_order;
  std::int64_t n = 0;
  FormulaId formula = FormulaId::kMomentX;
};

/// n^j/log^j n (1 + m_j/log n).
ExpansionPrediction predict_moment_X(std::int64_t n, int j, double b);
/// b^{−j} n^j/log^j n (1 + m_j/log n).
ExpansionPrediction predict_moment_L(std::int64_t n, int j, double b);
/// (−1)^j Be(b,j−1)/j · n^j/log^{j+1} n, divided by b^j for L. j ≥ 2.
ExpansionPrediction predict_central_moment(std::int64_t n, int j, double b, Functional functional);

/// bn − b(b−1) log n − b + b(b−1)Ψ(b).
double total_rate_expansion(std::int64_t n, double b);
/// (bn)^{−1}(1 + (b−1) log n/n + (1 − (b−1)Ψ(b))/n).
double inverse_total_rate_expansion(std::int64_t n, double b);

/// Σ_{m=2}^{n−1} m^α/((n−m)(n−m+1) log^p m), compensated.
double weighted_sum_exact(std::int64_t n, double alpha, double p);
/// Σ_{m=2}^{n−1} p^{(1)}_{n,m} m^α/log^p m for the beta(1, b) coalescent.
double decrement_weighted_sum_exact(std::int64_t n, double alpha, double p, double b);

/// n^α/log^p n (1 − α log n/n + (αΨ(α)+p)/n), α > 0.
double weighted_sum_expansion(std::int64_t n, double alpha, double p);
/// n^α/log^p n (1 − α log n/n), any real α.
double weighted_sum_simple_expansion(std::int64_t n, double alpha, double p);
/// n^α/log^p n (1 − α log n/n + c_{b,α,p}/n).
double decrement_weighted_sum_expansion(std::int64_t n, double alpha, double p, double b);

/// |exact·log^p n/n^α − 1 + α log n/n − c/n| · n log n, with c = αΨ(α)+p.
double weighted_sum_scaled_residual(std::int64_t n, double alpha, double p);
/// Same with c = c_{b,α,p} and the decrement-weighted sum.
double decrement_weighted_sum_scaled_residual(std::int64_t n, double alpha, double p, double b);

/// (a_n, b_n) of the limit statement for `regime`. Throws RegimeError for
/// a > 1 or a mismatched regime.
std::pair<double, double> centering_sequence(std::int64_t n, const CoalescentParams& params,
                                             Regime regime);

/// Boundedness diagnostics for a residual sequence on an increasing grid.
/// All comparisons use absolute values.
struct GrowthCheck {
  double median = 0.0;
  double last = 0.0;
  double max_upper_half = 0.0;
  /// last ≤ 2·median
  [[nodiscard]] bool last_within(double factor = 2.0) const { return last <= factor * median; }
  /// max over the upper half of the grid ≤ 2·median
  [[nodiscard]] bool upper_half_within(double factor = 2.0) const {
    return max_upper_half <= factor * median;
  }
};

GrowthCheck growth_check(std::span<const double> values);

/// Dyadic grid 2^lo, …, 2^hi, optionally followed by `extra` when it exceeds
/// the last power.
std::vector<std::int64_t> dyadic_grid(int lo, int hi, std::int64_t extra = 0);

}  // namespace betacoal
