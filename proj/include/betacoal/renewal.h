#pragma once

#include <cstdint>
#include <vector>

#include "betacoal/discrete_law.h"
#include "betacoal/rates.h"
#include "betacoal/rng.h"

namespace betacoal {

/// Zero-delayed random walk with i.i.d. steps ξ ~ p^{(a)} and its
/// first-passage counts N_n = inf{k ≥ 0 : S_k ≥ n}.
class RenewalWalk {
 public:
  explicit RenewalWalk(double a);

  [[nodiscard]] double a() const { return a_; }
  /// ξ ∧ cap by sequential-scan inversion (cap ≥ 1).
  std::int64_t sample_step(std::int64_t cap, Rng& rng) const;
  /// Exact draw of N_n; N_0 = 0.
  std::int64_t sample_first_passage(std::int64_t n, Rng& rng) const;

 private:
  double a_;
};

std::int64_t sample_first_passage(std::int64_t n, const CoalescentParams& params, Rng& rng);

/// Law of N_n on {1, …, n}.
struct FirstPassageLaw {
  std::int64_t n = 0;
  std::vector<double> probs;  // index j−1 ↦ P{N_n = j}

  [[nodiscard]] double mean() const;
  [[nodiscard]] DiscreteLaw to_discrete_law() const;
};

inline constexpr std::int64_t kDefaultFirstPassageCap = 2000;

/// Laws of N_m for every m ≤ n via N_m = 1 + N'_{m − ξ∧m}; element m−1 of the
/// result is the law of N_m. Throws ResourceError above `cap`.
std::vector<FirstPassageLaw> exact_first_passage_laws(std::int64_t n, const CoalescentParams& params,
                                                      std::int64_t cap = kDefaultFirstPassageCap);
FirstPassageLaw exact_first_passage_law(std::int64_t n, const CoalescentParams& params,
                                        std::int64_t cap = kDefaultFirstPassageCap);

}  // namespace betacoal
