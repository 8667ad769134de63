#include "betacoal/renewal.h"

#include <cmath>
#include <string>

#include "betacoal/error.h"
#include "betacoal/special.h"

namespace betacoal {

RenewalWalk::RenewalWalk(double a) : a_(a) {
  if (!(a > 0.0 && a <= 1.0)) throw RegimeError("renewal walk requires a in (0, 1]");
}

std::int64_t RenewalWalk::sample_step(std::int64_t cap, Rng& rng) const {
  // p_1 = (2−a)/2, p_{k+1}/p_k = (k+a−1)/(k+2)
  double u = rng.uniform();
  double p = 1.0 - 0.5 * a_;
  std::int64_t k = 1;
  while (u >= p && k < cap) {
    u -= p;
    const auto kd = static_cast<double>(k);
    p *= (kd + a_ - 1.0) / (kd + 2.0);
    ++k;
  }
  return k;
}

std::int64_t RenewalWalk::sample_first_passage(std::int64_t n, Rng& rng) const {
  if (n < 0) throw ArgumentError("sample_first_passage: n must be >= 0");
  std::int64_t remaining = n;
  std::int64_t steps = 0;
  while (remaining > 0) {
    remaining -= sample_step(remaining, rng);
    ++steps;
  }
  return steps;
}

std::int64_t sample_first_passage(std::int64_t n, const CoalescentParams& params, Rng& rng) {
  params.require_stable_regime();
  return RenewalWalk(params.a).sample_first_passage(n, rng);
}

double FirstPassageLaw::mean() const {
  CompensatedSum s;
  for (std::size_t j = 0; j < probs.size(); ++j) s += static_cast<long double>(j + 1) * probs[j];
  return static_cast<double>(s.value());
}

DiscreteLaw FirstPassageLaw::to_discrete_law() const { return DiscreteLaw::from_dense(1, probs); }

std::vector<FirstPassageLaw> exact_first_passage_laws(std::int64_t n, const CoalescentParams& params,
                                                      std::int64_t cap) {
  params.require_stable_regime();
  if (n < 1) throw ArgumentError("exact_first_passage_law: n must be >= 1");
  if (n > cap) {
    throw ResourceError("exact_first_passage_law: n = " + std::to_string(n) +
                        " exceeds cap " + std::to_string(cap));
  }
  const double a = params.a;
  std::vector<double> step(static_cast<std::size_t>(n));  // index k−1
  for (std::int64_t k = 1; k <= n; ++k) step[static_cast<std::size_t>(k - 1)] = limit_step_pmf(a, k);

  std::vector<FirstPassageLaw> laws(static_cast<std::size_t>(n));
  for (std::int64_t m = 1; m <= n; ++m) {
    auto& law = laws[static_cast<std::size_t>(m - 1)];
    law.n = m;
    // All terms are nonnegative, so plain double accumulation is accurate.
    std::vector<double> acc(static_cast<std::size_t>(m), 0.0);
    acc[0] = limit_step_tail(a, m - 1);  // P{ξ ≥ m}: one step crosses
    for (std::int64_t k = 1; k <= m - 1; ++k) {
      const double pk = step[static_cast<std::size_t>(k - 1)];
      const auto& prev = laws[static_cast<std::size_t>(m - k - 1)].probs;  // law of N_{m−k}
      for (std::size_t j = 0; j < prev.size(); ++j) acc[j + 1] += pk * prev[j];
    }
    law.probs = std::move(acc);
  }
  return laws;
}

FirstPassageLaw exact_first_passage_law(std::int64_t n, const CoalescentParams& params,
                                        std::int64_t cap) {
  auto laws = exact_first_passage_laws(n, params, cap);
  return std::move(laws.back());
}

}  // namespace betacoal
