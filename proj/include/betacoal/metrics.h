#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "betacoal/discrete_law.h"

namespace betacoal {

using CharacteristicFunction = std::function<std::complex<double>(double)>;
using CumulativeDistribution = std::function<double(double)>;

/// Sorted sample of real values.
class EmpiricalSample {
 public:
  explicit EmpiricalSample(std::vector<double> values);

  [[nodiscard]] const std::vector<double>& values() const { return values_; }
  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] double mean() const;

 private:
  std::vector<double> values_;
};

std::complex<double> empirical_cf(const EmpiricalSample& sample, double t);
std::complex<double> law_cf(const DiscreteLaw& law, double t);
CharacteristicFunction characteristic_function(const DiscreteLaw& law);

inline constexpr int kDefaultChiGrid = 2048;

/// sup_{|t|≤T} |φ_X(t) − ψ(t)|: maximum over a uniform grid, then
/// golden-section refinement around the grid argmax. Both sides are taken to
/// be characteristic functions of real variables, so only t ≥ 0 is scanned.
double chi_T(const EmpiricalSample& sample, const CharacteristicFunction& reference, double T,
             int grid_points = kDefaultChiGrid);
double chi_T(const DiscreteLaw& law, const CharacteristicFunction& reference, double T,
             int grid_points = kDefaultChiGrid);
double chi_T(const CharacteristicFunction& lhs, const CharacteristicFunction& rhs, double T,
             int grid_points = kDefaultChiGrid);

inline constexpr std::size_t kTransportAtomCap = 512;

/// d_q between finitely supported laws, q ∈ (0, 1]. q = 1 integrates |F_P − F_Q|
/// over the merged support; q < 1 solves the transport problem exactly.
double wasserstein_q_discrete(const DiscreteLaw& p, const DiscreteLaw& q_law, double q);

/// Exact optimal transport cost with ground cost |x − y|^q by successive
/// shortest paths. Throws ResourceError when the combined support exceeds
/// `max_atoms`.
double optimal_transport_cost(const DiscreteLaw& p, const DiscreteLaw& q_law, double q,
                              std::size_t max_atoms = kTransportAtomCap);

/// Mean of |A_(i) − B_(i)|; both samples must have the same size.
double wasserstein_1_empirical(const EmpiricalSample& a, const EmpiricalSample& b);

/// sup over sample points of |F̂ − F|, both one-sided limits of F̂ included.
double ks_distance(const EmpiricalSample& sample, const CumulativeDistribution& reference);

/// M_q = sup_{u>0} |sin u| u^{−q}, q ∈ (0, 1].
double sine_power_sup(double q);

/// 2^{1−q} M_q T^q: the constant with χ_T ≤ C·d_q.
double chi_domination_constant(double T, double q);

}  // namespace betacoal
