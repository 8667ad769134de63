#include "betacoal/discrete_law.h"

#include <algorithm>
#include <cmath>

#include "betacoal/error.h"
#include "betacoal/special.h"

namespace betacoal {

DiscreteLaw::DiscreteLaw(std::vector<double> support, std::vector<double> probs)
    : support_(std::move(support)), probs_(std::move(probs)) {
  if (support_.empty()) throw ArgumentError("DiscreteLaw: empty support");
  if (support_.size() != probs_.size()) throw ArgumentError("DiscreteLaw: size mismatch");
  CompensatedSum total;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    if (!(probs_[i] >= 0.0)) throw ArgumentError("DiscreteLaw: negative probability");
    if (i > 0 && !(support_[i] > support_[i - 1])) {
      throw ArgumentError("DiscreteLaw: support must be strictly increasing");
    }
    total += probs_[i];
  }
  if (std::abs(static_cast<double>(total.value()) - 1.0) > 1e-12) {
    throw ArgumentError("DiscreteLaw: probabilities must sum to 1");
  }
}

DiscreteLaw DiscreteLaw::from_dense(std::int64_t offset, const std::vector<double>& probs) {
  std::vector<double> s;
  std::vector<double> p;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0.0) {
      s.push_back(static_cast<double>(offset + static_cast<std::int64_t>(i)));
      p.push_back(probs[i]);
    }
  }
  return DiscreteLaw(std::move(s), std::move(p));
}

DiscreteLaw DiscreteLaw::point_mass(double x) { return DiscreteLaw({x}, {1.0}); }

double DiscreteLaw::pmf(double x) const {
  const auto it = std::lower_bound(support_.begin(), support_.end(), x);
  if (it == support_.end() || *it != x) return 0.0;
  return probs_[static_cast<std::size_t>(it - support_.begin())];
}

double DiscreteLaw::raw_moment(int j) const {
  CompensatedSum s;
  for (std::size_t i = 0; i < support_.size(); ++i) {
    s += std::pow(static_cast<long double>(support_[i]), j) * probs_[i];
  }
  return static_cast<double>(s.value());
}

double DiscreteLaw::mean() const { return raw_moment(1); }

double DiscreteLaw::variance() const {
  const long double mu = mean();
  CompensatedSum s;
  for (std::size_t i = 0; i < support_.size(); ++i) {
    const long double d = support_[i] - mu;
    s += d * d * probs_[i];
  }
  return static_cast<double>(s.value());
}

DiscreteLaw DiscreteLaw::affine(double scale, double shift) const {
  if (scale == 0.0) throw ArgumentError("DiscreteLaw::affine: scale must be nonzero");
  std::vector<double> s(support_.size());
  std::vector<double> p = probs_;
  std::transform(support_.begin(), support_.end(), s.begin(),
                 [&](double x) { return scale * x + shift; });
  if (scale < 0.0) {
    std::reverse(s.begin(), s.end());
    std::reverse(p.begin(), p.end());
  }
  DiscreteLaw out;
  out.support_ = std::move(s);
  out.probs_ = std::move(p);
  return out;
}

}  // namespace betacoal
