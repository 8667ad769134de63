#include "betacoal/exact.h"

#include <cmath>
#include <ostream>
#include <string>

#include "betacoal/error.h"
#include "betacoal/format.h"
#include "betacoal/special.h"

namespace betacoal {

namespace {

void check_cap(std::int64_t n, std::int64_t cap, const char* who) {
  if (n > cap) {
    throw ResourceError(std::string(who) + ": n = " + std::to_string(n) + " exceeds cap " +
                        std::to_string(cap));
  }
}

long double binomial(int n, int k) {
  long double r = 1.0L;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

struct Row {
  std::vector<double> probs;  // index k−1 ↦ P{I_n = k}
  double total_rate = 0.0;
};

// Decrement row of state n, normalized by its own sum. For a = 1 the reported
// total rate is the closed form.
Row decrement_row(std::int64_t n, const CoalescentParams& params) {
  Row row;
  row.probs = jump_weights(n, params);
  CompensatedSum sum;
  for (double w : row.probs) sum += w;
  const auto total = static_cast<double>(sum.value());
  for (double& w : row.probs) w /= total;
  row.total_rate = params.is_a_one() ? total_rate_a_one(n, params.b) : total;
  return row;
}

// acc[j] = Σ_k P{I_n = k} col_j[n − k] for j = 0..j_max.
void conditional_moments(const Row& row, std::int64_t n, const MomentTable& table,
                         std::vector<long double>& acc) {
  const int j_max = table.j_max();
  acc.assign(static_cast<std::size_t>(j_max + 1), 0.0L);
  for (int j = 0; j <= j_max; ++j) {
    const double* col = table.column(j).data();
    long double s = 0.0L;
    for (std::int64_t k = 1; k <= n - 1; ++k) {
      s += static_cast<long double>(row.probs[static_cast<std::size_t>(k - 1)]) * col[n - k];
    }
    acc[static_cast<std::size_t>(j)] = s;
  }
}

void validate_moment_request(std::int64_t n_max, int j_max, const CoalescentParams& params,
                             std::int64_t cap, const char* who) {
  params.validate();
  if (n_max < 1) throw ArgumentError(std::string(who) + ": n_max must be >= 1");
  if (j_max < 0) throw ArgumentError(std::string(who) + ": j_max must be >= 0");
  check_cap(n_max, cap, who);
}

// Moments of F_n = c_n·T_n + F'_{n−I_n} with T_n ~ Exp(λ_n) independent of I_n:
// E F_n^j = Σ_i C(j,i) c_n^i (i!/λ_n^i) E F'^{j−i}.
MomentTable timed_moments(std::int64_t n_max, int j_max, const CoalescentParams& params,
                          Functional functional) {
  MomentTable table(params, functional, n_max, j_max);
  std::vector<long double> cond;
  for (std::int64_t n = 2; n <= n_max; ++n) {
    const Row row = decrement_row(n, params);
    conditional_moments(row, n, table, cond);
    const long double weight = functional == Functional::kBranchLength
                                   ? static_cast<long double>(n) / row.total_rate
                                   : 1.0L / row.total_rate;
    for (int j = 1; j <= j_max; ++j) {
      // term_i = C(j,i) i! weight^i = j!/(j−i)! weight^i
      long double coef = 1.0L;
      long double value = 0.0L;
      for (int i = 0; i <= j; ++i) {
        value += coef * cond[static_cast<std::size_t>(j - i)];
        coef *= static_cast<long double>(j - i) * weight;
      }
      table.mutable_column(j)[static_cast<std::size_t>(n)] = static_cast<double>(value);
    }
  }
  return table;
}

}  // namespace

std::string_view functional_name(Functional f) {
  switch (f) {
    case Functional::kCollisions:
      return "X";
    case Functional::kBranchLength:
      return "L";
    case Functional::kAbsorptionTime:
      return "tau";
  }
  return "?";
}

MomentTable::MomentTable(const CoalescentParams& params, Functional functional, std::int64_t n_max,
                         int j_max)
    : params_(params), functional_(functional), n_max_(n_max), j_max_(j_max) {
  columns_.assign(static_cast<std::size_t>(j_max + 1),
                  std::vector<double>(static_cast<std::size_t>(n_max + 1), 0.0));
  for (std::int64_t n = 0; n <= n_max; ++n) columns_[0][static_cast<std::size_t>(n)] = 1.0;
}

double MomentTable::at(std::int64_t n, int j) const {
  if (n < 1 || n > n_max_ || j < 0 || j > j_max_) throw ArgumentError("MomentTable: index out of range");
  return columns_[static_cast<std::size_t>(j)][static_cast<std::size_t>(n)];
}

const std::vector<double>& MomentTable::column(int j) const {
  return columns_.at(static_cast<std::size_t>(j));
}

std::vector<double>& MomentTable::mutable_column(int j) {
  return columns_.at(static_cast<std::size_t>(j));
}

MomentTable exact_moments_X(std::int64_t n_max, int j_max, const CoalescentParams& params,
                            std::int64_t cap) {
  validate_moment_request(n_max, j_max, params, cap, "exact_moments_X");
  MomentTable table(params, Functional::kCollisions, n_max, j_max);
  std::vector<long double> cond;
  std::vector<long double> own(static_cast<std::size_t>(j_max + 1));
  for (std::int64_t n = 2; n <= n_max; ++n) {
    const Row row = decrement_row(n, params);
    conditional_moments(row, n, table, cond);
    own[0] = 1.0L;
    for (int j = 1; j <= j_max; ++j) {
      long double value = cond[static_cast<std::size_t>(j)];
      for (int i = 0; i < j; ++i) {
        const long double sign = ((j - 1 - i) % 2 == 0) ? 1.0L : -1.0L;
        value += sign * binomial(j, i) * own[static_cast<std::size_t>(i)];
      }
      own[static_cast<std::size_t>(j)] = value;
      table.mutable_column(j)[static_cast<std::size_t>(n)] = static_cast<double>(value);
    }
  }
  return table;
}

MomentTable exact_moments_L(std::int64_t n_max, int j_max, const CoalescentParams& params,
                            std::int64_t cap) {
  validate_moment_request(n_max, j_max, params, cap, "exact_moments_L");
  return timed_moments(n_max, j_max, params, Functional::kBranchLength);
}

MomentTable exact_moments_tau(std::int64_t n_max, int j_max, const CoalescentParams& params,
                              std::int64_t cap) {
  validate_moment_request(n_max, j_max, params, cap, "exact_moments_tau");
  return timed_moments(n_max, j_max, params, Functional::kAbsorptionTime);
}

std::vector<double> exact_mean_tau(std::int64_t n_max, const CoalescentParams& params,
                                   std::int64_t cap) {
  auto table = exact_moments_tau(n_max, 1, params, cap);
  auto out = table.column(1);
  out[0] = 0.0;
  return out;
}

std::vector<std::vector<double>> exact_law_X_table(std::int64_t n, const CoalescentParams& params,
                                                   std::int64_t cap) {
  params.validate();
  if (n < 1) throw ArgumentError("exact_law_X: n must be >= 1");
  check_cap(n, cap, "exact_law_X");
  std::vector<std::vector<double>> laws(static_cast<std::size_t>(n + 1));
  laws[1] = {1.0};
  for (std::int64_t s = 2; s <= n; ++s) {
    const Row row = decrement_row(s, params);
    std::vector<double> acc(static_cast<std::size_t>(s), 0.0);
    // P{X_s = k} = Σ_m p_{s,m} P{X_m = k−1}; terms are nonnegative.
    for (std::int64_t k = 1; k <= s - 1; ++k) {
      const double p = row.probs[static_cast<std::size_t>(k - 1)];
      const auto& prev = laws[static_cast<std::size_t>(s - k)];
      for (std::size_t i = 0; i < prev.size(); ++i) acc[i + 1] += p * prev[i];
    }
    laws[static_cast<std::size_t>(s)] = std::move(acc);
  }
  return laws;
}

DiscreteLaw exact_law_X(std::int64_t n, const CoalescentParams& params, std::int64_t cap) {
  const auto laws = exact_law_X_table(n, params, cap);
  return DiscreteLaw::from_dense(0, laws[static_cast<std::size_t>(n)]);
}

double central_moments(const MomentTable& table, std::int64_t n, int j) {
  if (j < 0 || j > table.j_max()) throw ArgumentError("central_moments: j exceeds table order");
  if (j == 0) return 1.0;
  if (j == 1) return 0.0;
  const long double mean = table.at(n, 1);
  CompensatedSum s;
  long double mean_power = 1.0L;  // mean^{j−i}, built from i = j downward
  for (int i = j; i >= 0; --i) {
    const long double sign = ((j - i) % 2 == 0) ? 1.0L : -1.0L;
    s += sign * binomial(j, i) * static_cast<long double>(table.at(n, i)) * mean_power;
    mean_power *= mean;
  }
  return static_cast<double>(s.value());
}

void write_moment_table_csv(std::ostream& out, const MomentTable& table) {
  out << "n,j,functional,value\n";
  const auto name = functional_name(table.functional());
  for (std::int64_t n = 1; n <= table.n_max(); ++n) {
    for (int j = 0; j <= table.j_max(); ++j) {
      out << n << ',' << j << ',' << name << ',' << format_real(table.at(n, j)) << '\n';
    }
  }
}

}  // namespace betacoal
