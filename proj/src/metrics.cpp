#include "betacoal/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "betacoal/error.h"

namespace betacoal {

namespace {

void check_chi_args(double T, int grid_points) {
  if (!(T > 0.0)) throw ArgumentError("chi_T: T must be positive");
  if (grid_points < 3) throw ArgumentError("chi_T: grid_points must be >= 3");
}

// Nonnegative half of the uniform grid on [−T, T] with `grid_points` nodes.
struct HalfGrid {
  double step;
  std::size_t count;
};

HalfGrid half_grid(double T, int grid_points) {
  const double step = 2.0 * T / (grid_points - 1);
  const auto count = static_cast<std::size_t>(std::floor(T / step + 1e-9)) + 1;
  return {step, count};
}

// φ at t_k = k·step, k < count, for the weighted atoms (x_i, w_i).
std::vector<std::complex<double>> weighted_cf_grid(const std::vector<double>& x,
                                                   const std::vector<double>* w, double scale,
                                                   const HalfGrid& grid) {
  std::vector<std::complex<double>> acc(grid.count, {0.0, 0.0});
  constexpr std::size_t kReanchor = 64;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double weight = w ? (*w)[i] : 1.0;
    const std::complex<double> rot = std::polar(1.0, grid.step * x[i]);
    std::complex<double> z(weight, 0.0);
    for (std::size_t k = 0; k < grid.count; ++k) {
      if (k % kReanchor == 0) z = std::polar(weight, static_cast<double>(k) * grid.step * x[i]);
      acc[k] += z;
      z *= rot;
    }
  }
  for (auto& v : acc) v *= scale;
  return acc;
}

double refine(const std::function<double(double)>& gap, const std::vector<double>& grid_gap,
              const HalfGrid& grid, double T) {
  const auto it = std::max_element(grid_gap.begin(), grid_gap.end());
  const auto k = static_cast<std::size_t>(it - grid_gap.begin());
  double best = *it;
  const double lo = std::max(0.0, static_cast<double>(k) * grid.step - grid.step);
  const double hi = std::min(T, static_cast<double>(k) * grid.step + grid.step);
  if (hi > lo) {
    const auto found = boost::math::tools::brent_find_minima(
        [&](double t) { return -gap(t); }, lo, hi, std::numeric_limits<double>::digits / 2);
    best = std::max(best, -found.second);
    best = std::max(best, gap(hi));
  }
  return best;
}

double chi_from_grid(const std::vector<std::complex<double>>& lhs_grid,
                     const std::function<std::complex<double>(double)>& lhs_point,
                     const CharacteristicFunction& rhs, const HalfGrid& grid, double T) {
  std::vector<double> gaps(grid.count);
  for (std::size_t k = 0; k < grid.count; ++k) {
    gaps[k] = std::abs(lhs_grid[k] - rhs(static_cast<double>(k) * grid.step));
  }
  return refine([&](double t) { return std::abs(lhs_point(t) - rhs(t)); }, gaps, grid, T);
}

}  // namespace

EmpiricalSample::EmpiricalSample(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw ArgumentError("EmpiricalSample: empty sample");
  std::sort(values_.begin(), values_.end());
}

double EmpiricalSample::mean() const {
  long double s = 0.0L;
  for (double v : values_) s += v;
  return static_cast<double>(s / static_cast<long double>(values_.size()));
}

std::complex<double> empirical_cf(const EmpiricalSample& sample, double t) {
  double re = 0.0;
  double im = 0.0;
  for (double x : sample.values()) {
    re += std::cos(t * x);
    im += std::sin(t * x);
  }
  const auto n = static_cast<double>(sample.size());
  return {re / n, im / n};
}

std::complex<double> law_cf(const DiscreteLaw& law, double t) {
  std::complex<double> s(0.0, 0.0);
  const auto& x = law.support();
  const auto& p = law.probs();
  for (std::size_t i = 0; i < x.size(); ++i) s += std::polar(p[i], t * x[i]);
  return s;
}

CharacteristicFunction characteristic_function(const DiscreteLaw& law) {
  return [law](double t) { return law_cf(law, t); };
}

double chi_T(const EmpiricalSample& sample, const CharacteristicFunction& reference, double T,
             int grid_points) {
  check_chi_args(T, grid_points);
  const HalfGrid grid = half_grid(T, grid_points);
  const auto lhs = weighted_cf_grid(sample.values(), nullptr,
                                    1.0 / static_cast<double>(sample.size()), grid);
  return chi_from_grid(lhs, [&](double t) { return empirical_cf(sample, t); }, reference, grid, T);
}

double chi_T(const DiscreteLaw& law, const CharacteristicFunction& reference, double T,
             int grid_points) {
  check_chi_args(T, grid_points);
  if (law.size() == 0) throw ArgumentError("chi_T: empty law");
  const HalfGrid grid = half_grid(T, grid_points);
  const auto lhs = weighted_cf_grid(law.support(), &law.probs(), 1.0, grid);
  return chi_from_grid(lhs, [&](double t) { return law_cf(law, t); }, reference, grid, T);
}

double chi_T(const CharacteristicFunction& lhs, const CharacteristicFunction& rhs, double T,
             int grid_points) {
  check_chi_args(T, grid_points);
  const HalfGrid grid = half_grid(T, grid_points);
  std::vector<std::complex<double>> values(grid.count);
  for (std::size_t k = 0; k < grid.count; ++k) values[k] = lhs(static_cast<double>(k) * grid.step);
  return chi_from_grid(values, lhs, rhs, grid, T);
}

double wasserstein_q_discrete(const DiscreteLaw& p, const DiscreteLaw& q_law, double q) {
  if (!(q > 0.0 && q <= 1.0)) throw ArgumentError("wasserstein_q_discrete: q must lie in (0, 1]");
  if (p.size() == 0 || q_law.size() == 0) throw ArgumentError("wasserstein_q_discrete: empty law");
  if (q < 1.0) return optimal_transport_cost(p, q_law, q);
  const auto& xp = p.support();
  const auto& pp = p.probs();
  const auto& xq = q_law.support();
  const auto& pq = q_law.probs();
  std::size_t i = 0;
  std::size_t j = 0;
  long double fp = 0.0L;
  long double fq = 0.0L;
  long double total = 0.0L;
  double prev = std::min(xp.front(), xq.front());
  while (i < xp.size() || j < xq.size()) {
    const double next = (j >= xq.size() || (i < xp.size() && xp[i] <= xq[j])) ? xp[i] : xq[j];
    total += std::abs(fp - fq) * (static_cast<long double>(next) - prev);
    if (i < xp.size() && xp[i] == next) fp += pp[i++];
    if (j < xq.size() && xq[j] == next) fq += pq[j++];
    prev = next;
  }
  return static_cast<double>(total);
}

double wasserstein_1_empirical(const EmpiricalSample& a, const EmpiricalSample& b) {
  if (a.size() != b.size()) {
    throw ArgumentError("wasserstein_1_empirical: samples must have equal size");
  }
  long double s = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a.values()[i] - b.values()[i]);
  return static_cast<double>(s / static_cast<long double>(a.size()));
}

double ks_distance(const EmpiricalSample& sample, const CumulativeDistribution& reference) {
  const auto& x = sample.values();
  const auto n = static_cast<double>(x.size());
  double worst = 0.0;
  std::size_t i = 0;
  while (i < x.size()) {
    std::size_t j = i;
    while (j + 1 < x.size() && x[j + 1] == x[i]) ++j;
    // left limits against left limits, values against values
    const double f = reference(x[i]);
    const double f_left = reference(std::nextafter(x[i], -INFINITY));
    const double below = static_cast<double>(i) / n;
    const double at = static_cast<double>(j + 1) / n;
    worst = std::max({worst, std::abs(f_left - below), std::abs(f - at)});
    i = j + 1;
  }
  return std::min(worst, 1.0);
}

double sine_power_sup(double q) {
  if (!(q > 0.0 && q <= 1.0)) throw ArgumentError("sine_power_sup: q must lie in (0, 1]");
  if (q == 1.0) return 1.0;
  // the supremum sits in the first arch (0, π)
  const auto found = boost::math::tools::brent_find_minima(
      [q](double u) { return -std::sin(u) * std::pow(u, -q); }, 1e-9, std::numbers::pi, std::numeric_limits<double>::digits / 2);
  return -found.second;
}

double chi_domination_constant(double T, double q) {
  if (!(T > 0.0)) throw ArgumentError("chi_domination_constant: T must be positive");
  return std::pow(2.0, 1.0 - q) * sine_power_sup(q) * std::pow(T, q);
}

}  // namespace betacoal
