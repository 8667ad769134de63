#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "betacoal/error.h"
#include "betacoal/metrics.h"

namespace betacoal {

namespace {

constexpr double kMassEps = 1e-15;

// Bipartite transport from m supply atoms to n demand atoms, solved by
// successive shortest paths with Dijkstra on reduced costs. Node layout:
// 0 = source, 1..m supply, m+1..m+n demand, m+n+1 = sink.
class TransportSolver {
 public:
  TransportSolver(const DiscreteLaw& p, const DiscreteLaw& q, double power)
      : m_(p.size()), n_(q.size()), supply_(p.probs()), demand_(q.probs()) {
    cost_.resize(m_ * n_);
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        cost_[i * n_ + j] = std::pow(std::abs(p.support()[i] - q.support()[j]), power);
      }
    }
    flow_.assign(m_ * n_, 0.0);
    potential_.assign(node_count(), 0.0);
  }

  double solve() {
    const std::size_t max_rounds = 4 * (m_ + n_) * (m_ + n_) + 16;
    for (std::size_t round = 0; round < max_rounds; ++round) {
      if (!augment()) break;
    }
    long double total = 0.0L;
    for (std::size_t e = 0; e < flow_.size(); ++e) total += static_cast<long double>(flow_[e]) * cost_[e];
    return static_cast<double>(total);
  }

 private:
  [[nodiscard]] std::size_t node_count() const { return m_ + n_ + 2; }
  [[nodiscard]] std::size_t sink() const { return m_ + n_ + 1; }

  double reduced(std::size_t u, std::size_t v, double c) const {
    return c + potential_[u] - potential_[v];
  }

  bool augment() {
    const std::size_t count = node_count();
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(count, inf);
    std::vector<std::size_t> parent(count, count);
    std::vector<char> done(count, 0);
    dist[0] = 0.0;
    for (;;) {
      std::size_t u = count;
      double best = inf;
      for (std::size_t v = 0; v < count; ++v) {
        if (!done[v] && dist[v] < best) {
          best = dist[v];
          u = v;
        }
      }
      if (u == count) break;
      done[u] = 1;
      auto relax = [&](std::size_t v, double c) {
        const double d = dist[u] + std::max(0.0, reduced(u, v, c));
        if (d < dist[v]) {
          dist[v] = d;
          parent[v] = u;
        }
      };
      if (u == 0) {
        for (std::size_t i = 0; i < m_; ++i) {
          if (supply_[i] > kMassEps) relax(1 + i, 0.0);
        }
      } else if (u <= m_) {
        const std::size_t i = u - 1;
        for (std::size_t j = 0; j < n_; ++j) relax(1 + m_ + j, cost_[i * n_ + j]);
      } else if (u < sink()) {
        const std::size_t j = u - 1 - m_;
        for (std::size_t i = 0; i < m_; ++i) {
          if (flow_[i * n_ + j] > kMassEps) relax(1 + i, -cost_[i * n_ + j]);
        }
        if (demand_[j] > kMassEps) relax(sink(), 0.0);
      }
    }
    if (!std::isfinite(dist[sink()])) return false;
    for (std::size_t v = 0; v < count; ++v) {
      if (std::isfinite(dist[v])) potential_[v] += dist[v];
    }
    // bottleneck along the path
    double amount = inf;
    std::size_t v = sink();
    while (v != 0) {
      const std::size_t u = parent[v];
      if (u == 0) {
        amount = std::min(amount, supply_[v - 1]);
      } else if (v == sink()) {
        amount = std::min(amount, demand_[u - 1 - m_]);
      } else if (u > m_) {
        amount = std::min(amount, flow_[(v - 1) * n_ + (u - 1 - m_)]);
      }
      v = u;
    }
    v = sink();
    while (v != 0) {
      const std::size_t u = parent[v];
      if (u == 0) {
        supply_[v - 1] -= amount;
      } else if (v == sink()) {
        demand_[u - 1 - m_] -= amount;
      } else if (u <= m_) {
        flow_[(u - 1) * n_ + (v - 1 - m_)] += amount;
      } else {
        flow_[(v - 1) * n_ + (u - 1 - m_)] -= amount;
      }
      v = u;
    }
    return true;
  }

  std::size_t m_;
  std::size_t n_;
  std::vector<double> supply_;
  std::vector<double> demand_;
  std::vector<double> cost_;
  std::vector<double> flow_;
  std::vector<double> potential_;
};

}  // namespace

double optimal_transport_cost(const DiscreteLaw& p, const DiscreteLaw& q_law, double q,
                              std::size_t max_atoms) {
  if (!(q > 0.0 && q <= 1.0)) throw ArgumentError("optimal_transport_cost: q must lie in (0, 1]");
  if (p.size() == 0 || q_law.size() == 0) throw ArgumentError("optimal_transport_cost: empty law");
  if (p.size() + q_law.size() > max_atoms) {
    throw ResourceError("optimal_transport_cost: combined support " +
                        std::to_string(p.size() + q_law.size()) + " exceeds " +
                        std::to_string(max_atoms));
  }
  return TransportSolver(p, q_law, q).solve();
}

}  // namespace betacoal
