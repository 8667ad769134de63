#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "betacoal/rates.h"
#include "betacoal/rng.h"

namespace betacoal {

/// Spectrally negative stable laws appearing as limits:
///   S_α, 1 < α < 2:  z ↦ exp{|z|^α (cos(πα/2) + i sin(πα/2) sgn z)}
///   S_1:             z ↦ exp{−|z| (π/2 − i log|z| sgn z)}
class StableSpec {
 public:
  enum class Form { kAlphaStable, kOneStable };

  static StableSpec alpha_stable(double alpha);
  static StableSpec one_stable();
  /// S_{2−a}: the limit for the collision count with parameter a ∈ (0, 1].
  static StableSpec for_collisions(double a);

  [[nodiscard]] double alpha() const { return alpha_; }
  [[nodiscard]] Form form() const { return form_; }

 private:
  StableSpec(double alpha, Form form) : alpha_(alpha), form_(form) {}
  double alpha_;
  Form form_;
};

std::complex<double> stable_cf(const StableSpec& spec, double z);

/// Chambers–Mallows–Stuck draw in the Samorodnitsky–Taqqu parametrization with
/// β = −1, mapped to the forms above: σ = (−cos(πα/2))^{1/α} for S_α and
/// σ = π/2 for S_1, no shift.
double sample_stable(const StableSpec& spec, Rng& rng);

/// CDF by Gil-Pelaez inversion, F(x) = 1/2 − (1/π)∫_0^∞ Im(e^{−itx}φ(t))/t dt.
double stable_cdf(const StableSpec& spec, double x);

/// stable_cdf tabulated on a uniform grid with linear interpolation inside
/// [lo, hi]. Below lo the left tail F(lo)(lo/x)^α is used, above hi the value 1.
/// Requires lo < 0.
class StableCdfTable {
 public:
  StableCdfTable(const StableSpec& spec, double lo, double hi, double step);
  double operator()(double x) const;

 private:
  StableSpec spec_;
  double lo_;
  double step_;
  std::vector<double> values_;
};

/// Which limit statement a normalization belongs to.
enum class Regime {
  kCollisionsSubcritical,  // X_n, 0 < a < 1
  kCollisionsCritical,     // X_n, a = 1
  kBranchLength,           // L_n, a = 1
  kSegregatingSites,       // M_n, a = 1, mutation rate r
};

/// Affine normalization (value − a_n)/b_n of one limit statement.
class Normalization {
 public:
  /// Throws RegimeError if `regime` does not match `params`.
  Normalization(const CoalescentParams& params, Regime regime);

  [[nodiscard]] Regime regime() const { return regime_; }
  /// Smallest admissible n: 2 for a < 1, 3 when log log n is needed.
  [[nodiscard]] std::int64_t min_n() const;
  [[nodiscard]] double centering(std::int64_t n) const;
  [[nodiscard]] double scaling(std::int64_t n) const;
  [[nodiscard]] double apply(double value, std::int64_t n) const;
  /// Limit law of the normalized functional.
  [[nodiscard]] StableSpec limit() const;

 private:
  CoalescentParams params_;
  Regime regime_;
};

/// (value − a_n)/b_n for the given regime.
double normalize(double value, std::int64_t n, const CoalescentParams& params, Regime regime);

}  // namespace betacoal
