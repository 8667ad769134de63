#include "betacoal/simulate.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <thread>

#include "betacoal/error.h"
#include "betacoal/format.h"

namespace betacoal {

namespace {

// Scan from k = 1 with P{I_m = k+1} = P{I_m = k}·ratio. The last atom absorbs
// any rounding shortfall in the running CDF.
inline std::int64_t scan_decrement(std::int64_t m, double first, double a, double b, Rng& rng,
                                   std::int64_t* scan_steps) {
  double u = rng.uniform();
  double p = first;
  const auto md = static_cast<double>(m);
  std::int64_t k = 1;
  while (u >= p && k < m - 1) {
    u -= p;
    p *= decrement_ratio(md, static_cast<double>(k), a, b);
    ++k;
  }
  if (scan_steps) *scan_steps = k;
  return k;
}

}  // namespace

std::int64_t sample_decrement(std::int64_t n, const CoalescentParams& params, Rng& rng,
                              std::int64_t* scan_steps) {
  params.validate();
  if (n < 2) throw ArgumentError("sample_decrement: state must be >= 2");
  const DecrementLaw law(n, params, 0);
  return scan_decrement(n, law.pmf(1), params.a, params.b, rng, scan_steps);
}

std::int64_t sample_segregating_sites(double branch_length, double mutation_rate, Rng& rng) {
  if (!(branch_length >= 0.0) || !(mutation_rate >= 0.0)) {
    throw ArgumentError("sample_segregating_sites: inputs must be nonnegative");
  }
  return sample_poisson(branch_length * mutation_rate, rng);
}

ChainSimulator::ChainSimulator(const CoalescentParams& params, std::int64_t n_max)
    : table_(params, n_max) {}

std::int64_t ChainSimulator::sample_decrement(std::int64_t m, Rng& rng,
                                              std::int64_t* scan_steps) const {
  if (m < 2 || m > n_max()) throw ArgumentError("ChainSimulator: state out of range");
  const auto& p = table_.params();
  return scan_decrement(m, table_.first_jump_prob(m), p.a, p.b, rng, scan_steps);
}

FunctionalSample ChainSimulator::simulate_path(std::int64_t n, Rng& rng) const {
  if (n < 1 || n > n_max()) throw ArgumentError("simulate_path: n out of range");
  const auto& p = table_.params();
  FunctionalSample s;
  s.n = n;
  long double tau = 0.0L;
  long double length = 0.0L;
  std::int64_t m = n;
  std::int64_t jumps = 0;
  while (m > 1) {
    // Holding time and jump are independent given the state.
    const double hold = rng.exponential() / table_.total_rate(m);
    tau += hold;
    length += static_cast<long double>(m) * hold;
    m -= scan_decrement(m, table_.first_jump_prob(m), p.a, p.b, rng, nullptr);
    ++jumps;
  }
  s.collisions = jumps;
  s.path_length = jumps + 1;
  s.absorption_time = static_cast<double>(tau);
  s.branch_length = static_cast<double>(length);
  if (p.mutation_rate) {
    s.segregating_sites = sample_segregating_sites(s.branch_length, *p.mutation_rate, rng);
  }
  return s;
}

std::int64_t ChainSimulator::sample_collisions(std::int64_t n, Rng& rng) const {
  if (n < 1 || n > n_max()) throw ArgumentError("sample_collisions: n out of range");
  const auto& p = table_.params();
  std::int64_t m = n;
  std::int64_t jumps = 0;
  while (m > 1) {
    m -= scan_decrement(m, table_.first_jump_prob(m), p.a, p.b, rng, nullptr);
    ++jumps;
  }
  return jumps;
}

FunctionalSample simulate_path(std::int64_t n, const CoalescentParams& params, Rng& rng) {
  return ChainSimulator(params, std::max<std::int64_t>(n, 2)).simulate_path(n, rng);
}

void SimulationConfig::validate() const {
  params.validate();
  if (n < 1) throw ConfigError("n must be >= 1");
  if (replicates < 1) throw ConfigError("replicates must be >= 1");
  if (workers < 1) throw ConfigError("workers must be >= 1");
}

void RunningStats::add(double x) {
  if (count_ == 0) {
    min_ = max_ = x;
  } else {
    min_ = std::min(min_, x);
    max_ = std::max(max_, x);
  }
  ++count_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (x - mean_);
}

void RunningStats::merge(const RunningStats& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  const auto na = static_cast<double>(count_);
  const auto nb = static_cast<double>(other.count_);
  const double total = na + nb;
  const double delta = other.mean_ - mean_;
  mean_ += delta * nb / total;
  m2_ += other.m2_ + delta * delta * na * nb / total;
  count_ += other.count_;
  min_ = std::min(min_, other.min_);
  max_ = std::max(max_, other.max_);
}

double RunningStats::variance() const {
  return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
}

double RunningStats::standard_error() const {
  return count_ > 0 ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
}

void MonteCarloSummary::add(const FunctionalSample& s) {
  collisions.add(static_cast<double>(s.collisions));
  absorption_time.add(s.absorption_time);
  branch_length.add(s.branch_length);
  if (s.segregating_sites) segregating_sites.add(static_cast<double>(*s.segregating_sites));
}

void MonteCarloSummary::merge(const MonteCarloSummary& other) {
  collisions.merge(other.collisions);
  absorption_time.merge(other.absorption_time);
  branch_length.merge(other.branch_length);
  segregating_sites.merge(other.segregating_sites);
}

void parallel_for(std::int64_t count, unsigned workers,
                  const std::function<void(std::int64_t)>& fn) {
  if (count <= 0) return;
  const auto w = static_cast<std::int64_t>(std::max(1u, workers));
  if (w == 1 || count == 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> threads;
  const std::int64_t block = (count + w - 1) / w;
  for (std::int64_t t = 0; t < w; ++t) {
    const std::int64_t lo = t * block;
    const std::int64_t hi = std::min(count, lo + block);
    if (lo >= hi) break;
    threads.emplace_back([lo, hi, &fn] {
      for (std::int64_t i = lo; i < hi; ++i) fn(i);
    });
  }
}

MonteCarloSummary monte_carlo(const SimulationConfig& config, const SampleSink& sink) {
  config.validate();
  const ChainSimulator sim(config.params, std::max<std::int64_t>(config.n, 2));
  MonteCarloSummary summary;
  constexpr std::int64_t kBatch = 4096;
  std::vector<FunctionalSample> batch;
  for (std::int64_t start = 0; start < config.replicates; start += kBatch) {
    const std::int64_t size = std::min(kBatch, config.replicates - start);
    batch.assign(static_cast<std::size_t>(size), FunctionalSample{});
    parallel_for(size, config.workers, [&](std::int64_t i) {
      Rng rng = Rng::for_replicate(config.master_seed, static_cast<std::uint64_t>(start + i));
      batch[static_cast<std::size_t>(i)] = sim.simulate_path(config.n, rng);
    });
    for (std::int64_t i = 0; i < size; ++i) {
      const auto& s = batch[static_cast<std::size_t>(i)];
      summary.add(s);
      if (sink) sink(start + i, s);
    }
  }
  return summary;
}

std::vector<double> sample_observable(const SimulationConfig& config, Observable observable) {
  config.validate();
  if (observable == Observable::kSegregatingSites && !config.params.mutation_rate) {
    throw ConfigError("segregating sites require a mutation rate");
  }
  const ChainSimulator sim(config.params, std::max<std::int64_t>(config.n, 2));
  std::vector<double> out(static_cast<std::size_t>(config.replicates));
  parallel_for(config.replicates, config.workers, [&](std::int64_t i) {
    Rng rng = Rng::for_replicate(config.master_seed, static_cast<std::uint64_t>(i));
    double v = 0.0;
    if (observable == Observable::kCollisions) {
      v = static_cast<double>(sim.sample_collisions(config.n, rng));
    } else {
      const FunctionalSample s = sim.simulate_path(config.n, rng);
      switch (observable) {
        case Observable::kAbsorptionTime:
          v = s.absorption_time;
          break;
        case Observable::kBranchLength:
          v = s.branch_length;
          break;
        case Observable::kSegregatingSites:
          v = static_cast<double>(*s.segregating_sites);
          break;
        case Observable::kCollisions:
          break;
      }
    }
    out[static_cast<std::size_t>(i)] = v;
  });
  return out;
}

std::vector<FunctionalSample> monte_carlo_samples(const SimulationConfig& config) {
  std::vector<FunctionalSample> out;
  out.reserve(static_cast<std::size_t>(std::max<std::int64_t>(config.replicates, 0)));
  monte_carlo(config, [&](std::int64_t, const FunctionalSample& s) { out.push_back(s); });
  return out;
}

void write_sample_csv_header(std::ostream& out) { out << "replicate,n,a,b,X,tau,L,M\n"; }

void write_sample_csv_row(std::ostream& out, std::int64_t replicate, const CoalescentParams& params,
                          const FunctionalSample& s) {
  out << replicate << ',' << s.n << ',' << format_real(params.a) << ',' << format_real(params.b)
      << ',' << s.collisions << ',' << format_real(s.absorption_time) << ','
      << format_real(s.branch_length) << ',';
  if (s.segregating_sites) out << *s.segregating_sites;
  out << '\n';
}

}  // namespace betacoal
