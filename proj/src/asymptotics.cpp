#include "betacoal/asymptotics.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "betacoal/error.h"
#include "betacoal/rates.h"
#include "betacoal/special.h"

namespace betacoal {

namespace {

void require_b(double b) {
  if (!(b > 0.0)) throw ArgumentError("b must be positive");
}

long double binomial(int n, int k) {
  long double r = 1.0L;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

long double kappa_ld(int j, double b) {
  return (j + b - 1.0L) * digamma(j + b) + j - (b - 1.0L) * digamma(b);
}

std::string order_tag(int j) {
  return "O(n^" + std::to_string(j) + "/log^" + std::to_string(j + 2) + " n)";
}

double log_n_checked(std::int64_t n) {
  if (n < 3) throw ArgumentError("expansion requires n >= 3");
  return std::log(static_cast<double>(n));
}

}  // namespace

double kappa(int j, double b) {
  require_b(b);
  if (j < 0) throw ArgumentError("kappa: j must be >= 0");
  return static_cast<double>(kappa_ld(j, b));
}

double m_coeff(int j, double b) {
  require_b(b);
  if (j < 0) throw ArgumentError("m_coeff: j must be >= 0");
  long double m = 0.0L;
  for (int l = 1; l <= j; ++l) m += kappa_ld(l, b) / l;
  return static_cast<double>(m);
}

double m_coeff_closed_form(int j, double b) {
  require_b(b);
  if (j < 0) throw ArgumentError("m_coeff_closed_form: j must be >= 0");
  CompensatedSum s;
  s += 2.0L * j;
  for (int i = 0; i < j; ++i) {
    long double harmonic = 0.0L;
    for (int l = i + 1; l <= j; ++l) harmonic += 1.0L / l;
    s += static_cast<long double>(digamma(b + i)) * harmonic;
  }
  return static_cast<double>(s.value());
}

double c_coeff(double b, double alpha, double p) {
  require_b(b);
  const double s = alpha + b - 1.0;
  if (!(s > 0.0)) throw RegimeError("c_coeff: requires alpha + b - 1 > 0");
  return s * digamma(s) + p + 1.0 + (1.0 - b) * digamma(b);
}

double c_coeff_alt(double b, double alpha, double p) {
  require_b(b);
  const double s = alpha + b - 1.0;
  if (!(s > 0.0)) throw RegimeError("c_coeff: requires alpha + b - 1 > 0");
  return s * digamma(alpha + b) + p - (b - 1.0) * digamma(b);
}

ExpansionCoefficients::ExpansionCoefficients(double b, int j_max) : b_(b) {
  require_b(b);
  if (j_max < 0) throw ArgumentError("ExpansionCoefficients: j_max must be >= 0");
  kappa_.resize(static_cast<std::size_t>(j_max + 1));
  m_.resize(static_cast<std::size_t>(j_max + 1));
  long double m = 0.0L;
  for (int j = 0; j <= j_max; ++j) {
    const long double k = kappa_ld(j, b);
    if (j > 0) m += k / j;
    kappa_[static_cast<std::size_t>(j)] = static_cast<double>(k);
    m_[static_cast<std::size_t>(j)] = static_cast<double>(m);
  }
}

double inversion_lhs(int j, double b) {
  require_b(b);
  if (j < 0) throw ArgumentError("inversion_lhs: j must be >= 0");
  // m_i kept in long double; the alternating sum cancels roughly 2^j-fold.
  std::vector<long double> m(static_cast<std::size_t>(j + 1), 0.0L);
  for (int i = 1; i <= j; ++i) m[static_cast<std::size_t>(i)] = m[static_cast<std::size_t>(i - 1)] + kappa_ld(i, b) / i;
  CompensatedSum s;
  for (int i = 0; i <= j; ++i) {
    const long double sign = ((j - i) % 2 == 0) ? 1.0L : -1.0L;
    s += sign * binomial(j, i) * m[static_cast<std::size_t>(i)];
  }
  return static_cast<double>(s.value());
}

double inversion_rhs(int j, double b) {
  require_b(b);
  if (j < 2) throw ArgumentError("inversion_rhs: j must be >= 2");
  const double sign = (j % 2 == 0) ? 1.0 : -1.0;
  return sign * std::exp(log_beta(b, j - 1.0)) / j;
}

double inversion_residual(int j, double b) {
  return std::abs(inversion_lhs(j, b) - inversion_rhs(j, b));
}

ExpansionPrediction predict_moment_X(std::int64_t n, int j, double b) {
  require_b(b);
  if (j < 0) throw ArgumentError("predict_moment_X: j must be >= 0");
  const double log_n = log_n_checked(n);
  ExpansionPrediction pred;
  pred.n = n;
  pred.formula = FormulaId::kMomentX;
  pred.error_order = order_tag(j);
  if (j == 0) {
    pred.value = 1.0;
    return pred;
  }
  const double scale = std::pow(static_cast<double>(n) / log_n, j);
  pred.value = scale * (1.0 + m_coeff(j, b) / log_n);
  return pred;
}

ExpansionPrediction predict_moment_L(std::int64_t n, int j, double b) {
  ExpansionPrediction pred = predict_moment_X(n, j, b);
  pred.formula = FormulaId::kMomentL;
  pred.value /= std::pow(b, j);
  return pred;
}

ExpansionPrediction predict_central_moment(std::int64_t n, int j, double b, Functional functional) {
  require_b(b);
  if (j < 2) throw ArgumentError("predict_central_moment: j must be >= 2");
  if (functional == Functional::kAbsorptionTime) {
    throw ArgumentError("predict_central_moment: only X and L have an expansion");
  }
  const double log_n = log_n_checked(n);
  const double sign = (j % 2 == 0) ? 1.0 : -1.0;
  double value = sign / j * std::exp(log_beta(b, j - 1.0)) *
                 std::exp(j * std::log(static_cast<double>(n)) - (j + 1) * std::log(log_n));
  ExpansionPrediction pred;
  pred.n = n;
  pred.error_order = order_tag(j);
  pred.formula = FormulaId::kCentralMomentX;
  if (functional == Functional::kBranchLength) {
    value /= std::pow(b, j);
    pred.formula = FormulaId::kCentralMomentL;
  }
  pred.value = value;
  return pred;
}

double total_rate_expansion(std::int64_t n, double b) {
  require_b(b);
  if (n < 2) throw ArgumentError("total_rate_expansion: n must be >= 2");
  const auto nd = static_cast<double>(n);
  return b * nd - b * (b - 1.0) * std::log(nd) - b + b * (b - 1.0) * digamma(b);
}

double inverse_total_rate_expansion(std::int64_t n, double b) {
  require_b(b);
  if (n < 2) throw ArgumentError("inverse_total_rate_expansion: n must be >= 2");
  const auto nd = static_cast<double>(n);
  return (1.0 + (b - 1.0) * std::log(nd) / nd + (1.0 - (b - 1.0) * digamma(b)) / nd) / (b * nd);
}

double weighted_sum_exact(std::int64_t n, double alpha, double p) {
  if (n < 3) throw ArgumentError("weighted_sum_exact: n must be >= 3");
  if (!(p >= 0.0)) throw RegimeError("weighted_sum_exact: p must be >= 0");
  CompensatedSum s;
  const auto nd = static_cast<long double>(n);
  for (std::int64_t m = 2; m <= n - 1; ++m) {
    const auto md = static_cast<long double>(m);
    s += std::pow(md, static_cast<long double>(alpha)) /
         ((nd - md) * (nd - md + 1.0L) * std::pow(std::log(md), static_cast<long double>(p)));
  }
  return static_cast<double>(s.value());
}

double decrement_weighted_sum_exact(std::int64_t n, double alpha, double p, double b) {
  require_b(b);
  if (n < 3) throw ArgumentError("decrement_weighted_sum_exact: n must be >= 3");
  if (!(p >= 0.0)) throw RegimeError("decrement_weighted_sum_exact: p must be >= 0");
  if (!(alpha + b - 1.0 > 0.0)) throw RegimeError("decrement_weighted_sum_exact: requires alpha + b - 1 > 0");
  const CoalescentParams params{1.0, b, std::nullopt};
  const auto weights = jump_weights(n, params);  // index k−1, target state m = n − k
  CompensatedSum total;
  for (double w : weights) total += w;
  CompensatedSum s;
  for (std::int64_t m = 2; m <= n - 1; ++m) {
    const auto md = static_cast<long double>(m);
    s += static_cast<long double>(weights[static_cast<std::size_t>(n - m - 1)]) *
         std::pow(md, static_cast<long double>(alpha)) /
         std::pow(std::log(md), static_cast<long double>(p));
  }
  return static_cast<double>(s.value() / total.value());
}

double weighted_sum_expansion(std::int64_t n, double alpha, double p) {
  if (!(alpha > 0.0)) throw RegimeError("weighted_sum_expansion: requires alpha > 0");
  const double log_n = log_n_checked(n);
  const auto nd = static_cast<double>(n);
  return std::pow(nd, alpha) / std::pow(log_n, p) *
         (1.0 - alpha * log_n / nd + (alpha * digamma(alpha) + p) / nd);
}

double weighted_sum_simple_expansion(std::int64_t n, double alpha, double p) {
  const double log_n = log_n_checked(n);
  const auto nd = static_cast<double>(n);
  return std::pow(nd, alpha) / std::pow(log_n, p) * (1.0 - alpha * log_n / nd);
}

double decrement_weighted_sum_expansion(std::int64_t n, double alpha, double p, double b) {
  const double log_n = log_n_checked(n);
  const auto nd = static_cast<double>(n);
  return std::pow(nd, alpha) / std::pow(log_n, p) *
         (1.0 - alpha * log_n / nd + c_coeff(b, alpha, p) / nd);
}

namespace {

double scaled_residual(double exact, std::int64_t n, double alpha, double p, double c) {
  const long double log_n = std::log(static_cast<long double>(n));
  const auto nd = static_cast<long double>(n);
  const long double ratio = exact * std::pow(log_n, static_cast<long double>(p)) /
                            std::pow(nd, static_cast<long double>(alpha));
  const long double r = ratio - 1.0L + alpha * log_n / nd - c / nd;
  return static_cast<double>(std::abs(r) * nd * log_n);
}

}  // namespace

double weighted_sum_scaled_residual(std::int64_t n, double alpha, double p) {
  if (!(alpha > 0.0)) throw RegimeError("weighted_sum_scaled_residual: requires alpha > 0");
  return scaled_residual(weighted_sum_exact(n, alpha, p), n, alpha, p,
                         alpha * digamma(alpha) + p);
}

double decrement_weighted_sum_scaled_residual(std::int64_t n, double alpha, double p, double b) {
  return scaled_residual(decrement_weighted_sum_exact(n, alpha, p, b), n, alpha, p,
                         c_coeff(b, alpha, p));
}

std::pair<double, double> centering_sequence(std::int64_t n, const CoalescentParams& params,
                                             Regime regime) {
  params.validate();
  if (params.a > 1.0) throw RegimeError("no stable normalization for a > 1");
  const auto nd = static_cast<double>(n);
  if (regime == Regime::kCollisionsSubcritical) {
    if (!(params.a < 1.0)) throw RegimeError("subcritical collision regime requires a < 1");
    if (n < 2) throw ArgumentError("normalization requires n >= 2");
    const double c = 1.0 - params.a;
    return {c * nd, c * std::pow(nd, 1.0 / (2.0 - params.a))};
  }
  if (!params.is_a_one()) throw RegimeError("this normalization requires a = 1");
  if (n < 3) throw ArgumentError("normalization with log log n requires n >= 3");
  const double log_n = std::log(nd);
  const double log_log_n = std::log(log_n);
  double an = nd / log_n + nd * log_log_n / (log_n * log_n);
  double bn = nd / (log_n * log_n);
  switch (regime) {
    case Regime::kCollisionsCritical:
      break;
    case Regime::kBranchLength:
      an /= params.b;
      bn /= params.b;
      break;
    case Regime::kSegregatingSites: {
      if (!params.mutation_rate || !(*params.mutation_rate > 0.0)) {
        throw RegimeError("segregating-sites normalization requires a positive mutation rate");
      }
      const double r = *params.mutation_rate;
      an *= r / params.b;
      bn *= r / params.b;
      break;
    }
    case Regime::kCollisionsSubcritical:
      break;
  }
  return {an, bn};
}

GrowthCheck growth_check(std::span<const double> values) {
  if (values.empty()) throw ArgumentError("growth_check: empty sequence");
  std::vector<double> abs_values(values.size());
  std::transform(values.begin(), values.end(), abs_values.begin(),
                 [](double v) { return std::abs(v); });
  GrowthCheck out;
  out.last = abs_values.back();
  const std::size_t half = abs_values.size() / 2;
  out.max_upper_half = *std::max_element(abs_values.begin() + static_cast<std::ptrdiff_t>(half),
                                         abs_values.end());
  std::vector<double> sorted = abs_values;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  out.median = sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  return out;
}

std::vector<std::int64_t> dyadic_grid(int lo, int hi, std::int64_t extra) {
  std::vector<std::int64_t> grid;
  for (int e = lo; e <= hi; ++e) grid.push_back(std::int64_t{1} << e);
  if (extra > 0 && (grid.empty() || extra > grid.back())) grid.push_back(extra);
  return grid;
}

}  // namespace betacoal
