#include "cli.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <utility>

#include "betacoal/asymptotics.h"
#include "betacoal/error.h"
#include "betacoal/exact.h"
#include "betacoal/format.h"
#include "betacoal/metrics.h"
#include "betacoal/renewal.h"
#include "betacoal/simulate.h"
#include "betacoal/stable.h"

namespace betacoal::cli {

namespace {

using AlphaP = std::pair<double, double>;

// Typed, strict access to one command's JSON object.
class Reader {
 public:
  Reader(const Json& config, std::initializer_list<const char*> allowed, std::string command)
      : config_(config), command_(std::move(command)) {
    if (!config_.is_object()) fail("config must be a JSON object");
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& item : config_.items()) {
      if (!keys.contains(item.key())) fail("unknown key '" + item.key() + "'");
    }
  }

  [[nodiscard]] bool has(const char* key) const { return config_.contains(key); }

  [[nodiscard]] double real(const char* key) const {
    const Json& v = at(key);
    if (!v.is_number()) fail(std::string(key) + " must be a number");
    return v.get<double>();
  }
  [[nodiscard]] double real(const char* key, double fallback) const {
    return has(key) ? real(key) : fallback;
  }

  [[nodiscard]] std::int64_t integer(const char* key) const {
    const Json& v = at(key);
    if (!v.is_number_integer()) fail(std::string(key) + " must be an integer");
    return v.get<std::int64_t>();
  }
  [[nodiscard]] std::int64_t integer(const char* key, std::int64_t fallback) const {
    return has(key) ? integer(key) : fallback;
  }

  [[nodiscard]] std::uint64_t seed(const Options& options) const {
    if (options.seed) return *options.seed;
    if (!has("seed")) return 0;
    const Json& v = at("seed");
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      fail("seed must be a nonnegative integer");
    }
    return v.get<std::uint64_t>();
  }

  [[nodiscard]] bool boolean(const char* key, bool fallback) const {
    if (!has(key)) return fallback;
    const Json& v = at(key);
    if (!v.is_boolean()) fail(std::string(key) + " must be a boolean");
    return v.get<bool>();
  }

  [[nodiscard]] std::string string(const char* key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const Json& v = at(key);
    if (!v.is_string()) fail(std::string(key) + " must be a string");
    return v.get<std::string>();
  }

  [[nodiscard]] std::vector<std::int64_t> integer_list(const char* key) const {
    const Json& v = at(key);
    if (!v.is_array()) fail(std::string(key) + " must be an array");
    std::vector<std::int64_t> out;
    for (const auto& e : v) {
      if (!e.is_number_integer()) fail(std::string(key) + " must hold integers");
      out.push_back(e.get<std::int64_t>());
    }
    return out;
  }

  [[nodiscard]] std::vector<double> real_list(const char* key, std::vector<double> fallback) const {
    if (!has(key)) return fallback;
    const Json& v = at(key);
    if (!v.is_array()) fail(std::string(key) + " must be an array");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) fail(std::string(key) + " must hold numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  [[nodiscard]] std::vector<std::string> string_list(const char* key,
                                                     std::vector<std::string> fallback) const {
    if (!has(key)) return fallback;
    const Json& v = at(key);
    if (!v.is_array()) fail(std::string(key) + " must be an array");
    std::vector<std::string> out;
    for (const auto& e : v) {
      if (!e.is_string()) fail(std::string(key) + " must hold strings");
      out.push_back(e.get<std::string>());
    }
    return out;
  }

  [[nodiscard]] std::vector<AlphaP> alpha_p_list(const char* key, std::vector<AlphaP> fallback) const {
    if (!has(key)) return fallback;
    const Json& v = at(key);
    if (!v.is_array()) fail(std::string(key) + " must be an array of [alpha, p] pairs");
    std::vector<AlphaP> out;
    for (const auto& e : v) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        fail(std::string(key) + " must be an array of [alpha, p] pairs");
      }
      out.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return out;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError(command_ + ": " + what);
  }

 private:
  const Json& at(const char* key) const {
    if (!has(key)) fail(std::string("missing key '") + key + "'");
    return config_.at(key);
  }

  const Json& config_;
  std::string command_;
};

std::vector<std::int64_t> n_grid(const Reader& r, const char* key, std::int64_t min_n) {
  auto grid = r.integer_list(key);
  if (grid.empty()) r.fail(std::string(key) + " must not be empty");
  for (auto n : grid) {
    if (n < min_n) r.fail(std::string(key) + " entries must be >= " + std::to_string(min_n));
  }
  return grid;
}

CoalescentParams read_params(const Reader& r, double default_a) {
  CoalescentParams params{r.real("a", default_a), r.real("b"), std::nullopt};
  if (r.has("mutation_rate")) params.mutation_rate = r.real("mutation_rate");
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    r.fail(e.what());
  }
  return params;
}

std::int64_t positive(const Reader& r, const char* key, std::int64_t value) {
  if (value < 1) r.fail(std::string(key) + " must be >= 1");
  return value;
}

class Stopwatch {
 public:
  [[nodiscard]] double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string optional_real(std::optional<double> v) { return v ? format_real(*v) : std::string(); }

void report_growth(std::ostream& log, const std::string& label, std::span<const double> values) {
  if (values.empty()) return;
  const GrowthCheck g = growth_check(values);
  log << label << ": median " << format_real(g.median) << ", last " << format_real(g.last)
      << ", max upper half " << format_real(g.max_upper_half)
      << (g.last_within() ? ", bounded" : ", growing") << '\n';
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"simulate",        "exact-moments",
                                                 "limit-check",     "branch-identity",
                                                 "expansion-check", "coefficients"};
  return names;
}

void cmd_simulate(const Json& config, const Options& options, std::ostream& out, std::ostream& log) {
  const Reader r(config, {"a", "b", "n", "replicates", "seed", "mutation_rate"}, "simulate");
  if (!r.has("a")) r.fail("missing key 'a'");
  SimulationConfig sim;
  sim.params = read_params(r, 1.0);
  sim.n = positive(r, "n", r.integer("n"));
  sim.replicates = positive(r, "replicates", r.integer("replicates"));
  sim.master_seed = r.seed(options);
  sim.workers = options.workers;
  const Stopwatch clock;
  write_sample_csv_header(out);
  const auto summary = monte_carlo(sim, [&](std::int64_t i, const FunctionalSample& s) {
    write_sample_csv_row(out, i, sim.params, s);
  });
  log << "simulate: " << sim.replicates << " replicates, mean X " << format_real(summary.collisions.mean())
      << ", " << clock.seconds() << " s\n";
}

void cmd_exact_moments(const Json& config, const Options&, std::ostream& out, std::ostream& log) {
  const Reader r(config, {"a", "b", "functional", "j_max", "n_grid"}, "exact-moments");
  const CoalescentParams params = read_params(r, 1.0);
  if (!params.is_a_one()) throw RegimeError("exact-moments: the moment expansion requires a = 1");
  const std::string name = r.string("functional", "X");
  if (name != "X" && name != "L") r.fail("functional must be \"X\" or \"L\"");
  const auto j_max = static_cast<int>(r.integer("j_max", 3));
  if (j_max < 0) r.fail("j_max must be >= 0");
  const auto grid = n_grid(r, "n_grid", 3);
  const std::int64_t n_max = *std::max_element(grid.begin(), grid.end());
  const Stopwatch clock;
  const MomentTable table = name == "X" ? exact_moments_X(n_max, j_max, params)
                                        : exact_moments_L(n_max, j_max, params);
  log << "exact-moments: table to n = " << n_max << " in " << clock.seconds() << " s\n";
  out << "n,j,functional,exact,prediction,residual_scaled\n";
  const ExpansionCoefficients coef(params.b, j_max);
  for (const auto n : grid) {
    const double log_n = std::log(static_cast<double>(n));
    for (int j = 0; j <= j_max; ++j) {
      const double exact = table.at(n, j);
      const auto pred = name == "X" ? predict_moment_X(n, j, params.b) : predict_moment_L(n, j, params.b);
      double scale = std::pow(static_cast<double>(n) / log_n, j);
      if (name == "L") scale /= std::pow(params.b, j);
      const double residual = (exact / scale - 1.0 - coef.m(j) / log_n) * log_n * log_n;
      out << n << ',' << j << ',' << name << ',' << format_real(exact) << ','
          << format_real(pred.value) << ',' << format_real(residual) << '\n';
    }
  }
}

void cmd_limit_check(const Json& config, const Options& options, std::ostream& out,
                     std::ostream& log) {
  const Reader r(config,
                 {"a", "b", "mutation_rate", "functional", "n_grid", "replicates", "seed", "metrics",
                  "T", "grid_points", "cdf_step", "exact_law_n_grid"},
                 "limit-check");
  const CoalescentParams params = read_params(r, 1.0);
  params.require_stable_regime();
  const std::string name = r.string("functional", "X");
  Regime regime{};
  Observable observable{};
  if (name == "X") {
    regime = params.a < 1.0 ? Regime::kCollisionsSubcritical : Regime::kCollisionsCritical;
    observable = Observable::kCollisions;
  } else if (name == "L") {
    regime = Regime::kBranchLength;
    observable = Observable::kBranchLength;
  } else if (name == "M") {
    regime = Regime::kSegregatingSites;
    observable = Observable::kSegregatingSites;
  } else {
    r.fail("functional must be \"X\", \"L\" or \"M\"");
  }
  const Normalization norm(params, regime);
  const auto metrics = r.string_list("metrics", {"chi_T", "ks"});
  for (const auto& m : metrics) {
    if (m != "chi_T" && m != "ks") r.fail("unknown metric '" + m + "'");
  }
  // n_grid may be left out when only the exact-law comparison is requested
  std::vector<std::int64_t> grid;
  if (!metrics.empty() || r.has("n_grid")) grid = n_grid(r, "n_grid", norm.min_n());
  const double T = r.real("T", 2.0);
  if (!(T > 0.0)) r.fail("T must be positive");
  const auto grid_points = static_cast<int>(r.integer("grid_points", kDefaultChiGrid));
  if (grid_points < 3) r.fail("grid_points must be >= 3");
  const double cdf_step = r.real("cdf_step", 0.01);
  if (!(cdf_step > 0.0)) r.fail("cdf_step must be positive");
  const std::int64_t replicates = positive(r, "replicates", r.integer("replicates", 10000));
  const std::uint64_t seed = r.seed(options);
  std::vector<std::int64_t> exact_grid;
  if (r.has("exact_law_n_grid")) exact_grid = n_grid(r, "exact_law_n_grid", 1);
  if (grid.empty() && exact_grid.empty()) r.fail("nothing to do: give metrics with n_grid or exact_law_n_grid");

  out << "n,metric,value\n";
  const StableSpec limit = norm.limit();
  const CharacteristicFunction reference = [limit](double t) { return stable_cf(limit, t); };
  std::optional<StableCdfTable> cdf;
  if (std::find(metrics.begin(), metrics.end(), "ks") != metrics.end()) {
    cdf.emplace(limit, -30.0, 30.0, cdf_step);
  }
  if (!metrics.empty()) {
    for (const auto n : grid) {
      const Stopwatch clock;
      SimulationConfig sim{params, n, replicates, seed, false, options.workers};
      auto values = sample_observable(sim, observable);
      for (double& v : values) v = norm.apply(v, n);
      const EmpiricalSample sample(std::move(values));
      for (const auto& m : metrics) {
        const double value = m == "chi_T" ? chi_T(sample, reference, T, grid_points)
                                          : ks_distance(sample, [&](double x) { return (*cdf)(x); });
        out << n << ',' << m << ',' << format_real(value) << '\n';
      }
      log << "limit-check: n = " << n << " in " << clock.seconds() << " s\n";
    }
  }
  if (!exact_grid.empty()) {
    if (!(params.a > 0.0 && params.a <= 1.0)) throw RegimeError("renewal comparison requires 0 < a <= 1");
    const std::int64_t n_max = *std::max_element(exact_grid.begin(), exact_grid.end());
    const Stopwatch clock;
    const auto laws_x = exact_law_X_table(n_max, params);
    const auto laws_n = exact_first_passage_laws(n_max, params);
    for (const auto n : exact_grid) {
      const DiscreteLaw x = DiscreteLaw::from_dense(0, laws_x[static_cast<std::size_t>(n)]);
      const DiscreteLaw renewal = laws_n[static_cast<std::size_t>(n - 1)].to_discrete_law();
      const double d1 = wasserstein_q_discrete(x, renewal, 1.0);
      out << n << ",d1_exact," << format_real(d1) << '\n';
      out << n << ",d1_exact_over_n_pow_a,"
          << format_real(d1 / std::pow(static_cast<double>(n), params.a)) << '\n';
    }
    log << "limit-check: exact laws to n = " << n_max << " in " << clock.seconds() << " s\n";
  }
}

void cmd_branch_identity(const Json& config, const Options& options, std::ostream& out,
                         std::ostream& log) {
  const Reader r(config, {"a", "b", "n_grid", "replicates", "seed"}, "branch-identity");
  const CoalescentParams params = read_params(r, 1.0);
  if (!params.is_a_one()) throw RegimeError("branch-identity requires a = 1");
  const auto grid = n_grid(r, "n_grid", 2);
  const std::int64_t replicates = positive(r, "replicates", r.integer("replicates"));
  if (replicates < 100) {
    log << "branch-identity: warning: " << replicates << " replicates give a noisy estimate\n";
  }
  const std::uint64_t seed = r.seed(options);
  out << "n,estimate\n";
  for (const auto n : grid) {
    const Stopwatch clock;
    SimulationConfig sim{params, n, replicates, seed, false, options.workers};
    RunningStats stats;
    monte_carlo(sim, [&](std::int64_t, const FunctionalSample& s) {
      const double d = params.b * s.branch_length - static_cast<double>(s.collisions);
      stats.add(d * d);
    });
    out << n << ',' << format_real(stats.mean() / static_cast<double>(n)) << '\n';
    log << "branch-identity: n = " << n << " in " << clock.seconds() << " s\n";
  }
}

void cmd_expansion_check(const Json& config, const Options&, std::ostream& out, std::ostream& log) {
  const Reader r(config, {"b_values", "alpha_p", "min_exponent", "max_exponent", "suites"},
                 "expansion-check");
  const auto b_values = r.real_list("b_values", {0.5, 1.0, 2.0});
  const auto alpha_p = r.alpha_p_list("alpha_p", {{1.0, 1.0}, {2.0, 2.0}, {1.5, 0.0}});
  const auto lo = static_cast<int>(r.integer("min_exponent", 7));
  const auto hi = static_cast<int>(r.integer("max_exponent", 17));
  if (lo < 2 || hi < lo || hi > 24) r.fail("need 2 <= min_exponent <= max_exponent <= 24");
  const auto suites = r.string_list(
      "suites", {"weighted_sum", "decrement_weighted_sum", "total_rate", "inverse_total_rate"});
  for (double b : b_values) {
    if (!(b > 0.0)) r.fail("b_values must be positive");
  }
  const auto grid = dyadic_grid(lo, hi);
  out << "suite,b,alpha,p,n,value\n";
  auto emit = [&](const std::string& suite, std::optional<double> b, std::optional<double> alpha,
                  std::optional<double> p, const std::vector<double>& values) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      out << suite << ',' << optional_real(b) << ',' << optional_real(alpha) << ','
          << optional_real(p) << ',' << grid[i] << ',' << format_real(values[i]) << '\n';
    }
    std::string label = suite;
    if (b) label += " b=" + format_real(*b);
    if (alpha) label += " alpha=" + format_real(*alpha) + " p=" + format_real(*p);
    report_growth(log, label, values);
  };
  for (const auto& suite : suites) {
    if (suite == "weighted_sum") {
      for (const auto& [alpha, p] : alpha_p) {
        std::vector<double> v;
        for (auto n : grid) v.push_back(weighted_sum_scaled_residual(n, alpha, p));
        emit(suite, std::nullopt, alpha, p, v);
      }
    } else if (suite == "decrement_weighted_sum") {
      for (double b : b_values) {
        for (const auto& [alpha, p] : alpha_p) {
          std::vector<double> v;
          for (auto n : grid) v.push_back(decrement_weighted_sum_scaled_residual(n, alpha, p, b));
          emit(suite, b, alpha, p, v);
        }
      }
    } else if (suite == "total_rate" || suite == "inverse_total_rate") {
      for (double b : b_values) {
        std::vector<double> v;
        for (auto n : grid) {
          const double exact = total_rate_a_one(n, b);
          const auto nd = static_cast<double>(n);
          if (suite == "total_rate") {
            v.push_back(std::abs(exact - total_rate_expansion(n, b)) * nd);
          } else {
            const double log_n = std::log(nd);
            v.push_back(std::abs(1.0 / exact - inverse_total_rate_expansion(n, b)) * nd * nd * nd /
                        (log_n * log_n));
          }
        }
        emit(suite, b, std::nullopt, std::nullopt, v);
      }
    } else {
      r.fail("unknown suite '" + suite + "'");
    }
  }
}

void cmd_coefficients(const Json& config, const Options&, std::ostream& out, std::ostream&) {
  const Reader r(config, {"b_values", "j_max", "alpha_p"}, "coefficients");
  const auto b_values = r.real_list("b_values", {0.3, 1.0, 2.7});
  const auto j_max = static_cast<int>(r.integer("j_max", 12));
  if (j_max < 0) r.fail("j_max must be >= 0");
  const auto alpha_p = r.alpha_p_list("alpha_p", {{1.0, 1.0}, {2.0, 2.0}, {1.5, 0.0}});
  for (double b : b_values) {
    if (!(b > 0.0)) r.fail("b_values must be positive");
  }
  out << "quantity,b,j,alpha,p,value\n";
  for (double b : b_values) {
    const std::string bs = format_real(b);
    const ExpansionCoefficients coef(b, j_max);
    for (int j = 0; j <= j_max; ++j) {
      out << "kappa," << bs << ',' << j << ",,," << format_real(coef.kappa(j)) << '\n';
      out << "m," << bs << ',' << j << ",,," << format_real(coef.m(j)) << '\n';
      out << "m_closed_form," << bs << ',' << j << ",,," << format_real(m_coeff_closed_form(j, b))
          << '\n';
      if (j >= 2) {
        out << "inversion_residual," << bs << ',' << j << ",,,"
            << format_real(inversion_residual(j, b)) << '\n';
      }
    }
    for (const auto& [alpha, p] : alpha_p) {
      const std::string tail = ',' + format_real(alpha) + ',' + format_real(p) + ',';
      out << "c," << bs << ',' << tail << format_real(c_coeff(b, alpha, p)) << '\n';
      out << "c_alt," << bs << ',' << tail << format_real(c_coeff_alt(b, alpha, p)) << '\n';
    }
  }
}

int run(const std::string& command, const Json& config, const Options& options, std::ostream& out,
        std::ostream& log) {
  try {
    if (command == "simulate") {
      cmd_simulate(config, options, out, log);
    } else if (command == "exact-moments") {
      cmd_exact_moments(config, options, out, log);
    } else if (command == "limit-check") {
      cmd_limit_check(config, options, out, log);
    } else if (command == "branch-identity") {
      cmd_branch_identity(config, options, out, log);
    } else if (command == "expansion-check") {
      cmd_expansion_check(config, options, out, log);
    } else if (command == "coefficients") {
      cmd_coefficients(config, options, out, log);
    } else {
      throw ConfigError("unknown command '" + command + "'");
    }
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ArgumentError& e) {
    log << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const RegimeError& e) {
    log << "regime error: " << e.what() << '\n';
    return kExitRegime;
  } catch (const ResourceError& e) {
    log << "resource error: " << e.what() << '\n';
    return kExitResource;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

Json parse_config(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON config: ") + e.what());
  }
}

}  // namespace betacoal::cli
