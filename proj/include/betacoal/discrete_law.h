#pragma once

#include <cstdint>
#include <vector>

namespace betacoal {

/// Finitely supported distribution. Support points are strictly increasing;
/// laws produced by the exact recursions have integer support stored as double
/// so that affine maps (scaling, shifting) stay within the type.
class DiscreteLaw {
 public:
  DiscreteLaw() = default;
  /// Validates ordering, nonnegativity and unit mass (within 1e−12, after
  /// which the probabilities are left as given).
  DiscreteLaw(std::vector<double> support, std::vector<double> probs);

  /// Law on {offset, offset+1, …} from a dense pmf; zero atoms are dropped.
  static DiscreteLaw from_dense(std::int64_t offset, const std::vector<double>& probs);
  static DiscreteLaw point_mass(double x);

  [[nodiscard]] const std::vector<double>& support() const { return support_; }
  [[nodiscard]] const std::vector<double>& probs() const { return probs_; }
  [[nodiscard]] std::size_t size() const { return support_.size(); }

  /// P{X = x} (0 if x is not an atom).
  [[nodiscard]] double pmf(double x) const;
  [[nodiscard]] double mean() const;
  [[nodiscard]] double variance() const;
  [[nodiscard]] double raw_moment(int j) const;

  /// Image under x ↦ scale·x + shift (scale ≠ 0).
  [[nodiscard]] DiscreteLaw affine(double scale, double shift) const;

 private:
  std::vector<double> support_;
  std::vector<double> probs_;
};

}  // namespace betacoal
