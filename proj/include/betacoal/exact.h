#pragma once

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "betacoal/discrete_law.h"
#include "betacoal/rates.h"

namespace betacoal {

enum class Functional { kCollisions, kBranchLength, kAbsorptionTime };

/// "X", "L" or "tau".
std::string_view functional_name(Functional f);

/// Raw moments E[F_n^j] for 1 ≤ n ≤ n_max and 0 ≤ j ≤ j_max of one functional.
class MomentTable {
 public:
  MomentTable(const CoalescentParams& params, Functional functional, std::int64_t n_max, int j_max);

  [[nodiscard]] const CoalescentParams& params() const { return params_; }
  [[nodiscard]] Functional functional() const { return functional_; }
  [[nodiscard]] std::int64_t n_max() const { return n_max_; }
  [[nodiscard]] int j_max() const { return j_max_; }

  [[nodiscard]] double at(std::int64_t n, int j) const;
  /// E[F_m^j] for m = 0..n_max (index m; entry 0 unused).
  [[nodiscard]] const std::vector<double>& column(int j) const;
  std::vector<double>& mutable_column(int j);

 private:
  CoalescentParams params_;
  Functional functional_;
  std::int64_t n_max_;
  int j_max_;
  std::vector<std::vector<double>> columns_;  // [j][n]
};

inline constexpr std::int64_t kDefaultMomentCap = 20000;
inline constexpr std::int64_t kDefaultLawCap = 2000;

/// E X_n^j = Σ_{i<j} C(j,i)(−1)^{j−1−i} E X_n^i + Σ_m p_{n,m} E X_m^j.
MomentTable exact_moments_X(std::int64_t n_max, int j_max, const CoalescentParams& params,
                            std::int64_t cap = kDefaultMomentCap);
/// E L_n^j = Σ_i C(j,i) n^i (i!/λ_n^i) Σ_m p_{n,m} E L_m^{j−i}.
MomentTable exact_moments_L(std::int64_t n_max, int j_max, const CoalescentParams& params,
                            std::int64_t cap = kDefaultMomentCap);
/// E τ_n^j = Σ_i C(j,i) (i!/λ_n^i) Σ_m p_{n,m} E τ_m^{j−i}.
MomentTable exact_moments_tau(std::int64_t n_max, int j_max, const CoalescentParams& params,
                              std::int64_t cap = kDefaultMomentCap);
/// E τ_n for n = 0..n_max (entries 0 and 1 are zero).
std::vector<double> exact_mean_tau(std::int64_t n_max, const CoalescentParams& params,
                                   std::int64_t cap = kDefaultMomentCap);

/// Dense laws of X_m for m = 0..n: element m holds P{X_m = k}, k = 0..m−1
/// (element 0 is empty).
std::vector<std::vector<double>> exact_law_X_table(std::int64_t n, const CoalescentParams& params,
                                                   std::int64_t cap = kDefaultLawCap);
DiscreteLaw exact_law_X(std::int64_t n, const CoalescentParams& params,
                        std::int64_t cap = kDefaultLawCap);

/// E(F_n − E F_n)^j from the raw moments, with compensated long double
/// accumulation.
double central_moments(const MomentTable& table, std::int64_t n, int j);

/// CSV rows `n,j,functional,value`, header included.
void write_moment_table_csv(std::ostream& out, const MomentTable& table);

}  // namespace betacoal
