#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "betacoal/rates.h"
#include "betacoal/rng.h"

namespace betacoal {

/// One realization of the block-counting chain started from n.
struct FunctionalSample {
  std::int64_t n = 1;
  std::int64_t collisions = 0;        // X_n
  double absorption_time = 0.0;       // τ_n
  double branch_length = 0.0;         // L_n
  std::optional<std::int64_t> segregating_sites;  // M_n
  std::int64_t path_length = 1;       // states visited, X_n + 1
};

/// Exact draw of the first decrement I_n by a sequential CDF scan from k = 1.
/// `scan_steps`, when given, receives the number of pmf terms inspected.
std::int64_t sample_decrement(std::int64_t n, const CoalescentParams& params, Rng& rng,
                              std::int64_t* scan_steps = nullptr);

/// Poisson(r·L) count of mutations on a tree of total length L.
std::int64_t sample_segregating_sites(double branch_length, double mutation_rate, Rng& rng);

/// Simulates paths of Π_n for n ≤ n_max, sharing one precomputed RateTable.
class ChainSimulator {
 public:
  ChainSimulator(const CoalescentParams& params, std::int64_t n_max);

  [[nodiscard]] const CoalescentParams& params() const { return table_.params(); }
  [[nodiscard]] std::int64_t n_max() const { return table_.n_max(); }
  [[nodiscard]] const RateTable& rates() const { return table_; }

  std::int64_t sample_decrement(std::int64_t m, Rng& rng, std::int64_t* scan_steps = nullptr) const;
  /// Full path: holding times, X, τ, L and (if a mutation rate is set) M.
  FunctionalSample simulate_path(std::int64_t n, Rng& rng) const;
  /// X_n only; skips the holding times.
  std::int64_t sample_collisions(std::int64_t n, Rng& rng) const;

 private:
  RateTable table_;
};

FunctionalSample simulate_path(std::int64_t n, const CoalescentParams& params, Rng& rng);

struct SimulationConfig {
  CoalescentParams params;
  std::int64_t n = 2;
  std::int64_t replicates = 1;
  std::uint64_t master_seed = 0;
  bool record_paths = true;
  unsigned workers = 1;

  void validate() const;
};

/// Streaming mean/variance/extremes (Welford); merge() is the parallel
/// combination rule.
class RunningStats {
 public:
  void add(double x);
  void merge(const RunningStats& other);
  [[nodiscard]] std::int64_t count() const { return count_; }
  [[nodiscard]] double mean() const { return mean_; }
  /// Unbiased sample variance (0 for fewer than two observations).
  [[nodiscard]] double variance() const;
  [[nodiscard]] double standard_error() const;
  [[nodiscard]] double min() const { return min_; }
  [[nodiscard]] double max() const { return max_; }

 private:
  std::int64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double min_ = 0.0;
  double max_ = 0.0;
};

struct MonteCarloSummary {
  RunningStats collisions;
  RunningStats absorption_time;
  RunningStats branch_length;
  RunningStats segregating_sites;

  void add(const FunctionalSample& s);
  void merge(const MonteCarloSummary& other);
};

/// Receives samples in replicate order.
using SampleSink = std::function<void(std::int64_t replicate, const FunctionalSample&)>;

/// Runs `replicates` independent paths. Replicate i uses
/// Rng::for_replicate(master_seed, i), so output is independent of `workers`.
/// Samples reach `sink` in replicate order; the returned summary is accumulated
/// in that same order.
MonteCarloSummary monte_carlo(const SimulationConfig& config, const SampleSink& sink = {});

/// Convenience: all samples in replicate order.
std::vector<FunctionalSample> monte_carlo_samples(const SimulationConfig& config);

enum class Observable { kCollisions, kAbsorptionTime, kBranchLength, kSegregatingSites };

/// One functional per replicate, in replicate order, seeded as in monte_carlo.
/// kCollisions uses the jump-only path, so its values are not the X column of
/// monte_carlo for the same seed.
std::vector<double> sample_observable(const SimulationConfig& config, Observable observable);

/// Runs fn(i) for i in [0, count) on `workers` threads with static
/// contiguous blocks. Results must be written to per-index storage.
void parallel_for(std::int64_t count, unsigned workers, const std::function<void(std::int64_t)>& fn);

/// CSV writer for raw samples: header `replicate,n,a,b,X,tau,L,M`.
void write_sample_csv_header(std::ostream& out);
void write_sample_csv_row(std::ostream& out, std::int64_t replicate, const CoalescentParams& params,
                          const FunctionalSample& s);

}  // namespace betacoal
