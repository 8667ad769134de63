#include "betacoal/special.h"

#include <cmath>
#include <string>

#include "betacoal/error.h"

namespace betacoal {

double log_gamma(double x) {
  if (!(x > 0.0)) {
    throw DomainError("log_gamma: argument must be positive, got " + std::to_string(x));
  }
  // glibc lgamma is accurate to a few ulp on (0, inf); the sign output is
  // irrelevant for positive arguments.
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

double log_beta(double x, double y) {
  if (!(x > 0.0) || !(y > 0.0)) {
    throw DomainError("log_beta: arguments must be positive");
  }
  return log_gamma(x) + log_gamma(y) - log_gamma(x + y);
}

double digamma(double x) {
  if (!(x > 0.0)) {
    throw DomainError("digamma: argument must be positive, got " + std::to_string(x));
  }
  long double shift = 0.0L;
  long double z = x;
  while (z < 10.0L) {
    shift += 1.0L / z;
    z += 1.0L;
  }
  // Ψ(z) ~ log z − 1/(2z) − Σ B_{2k}/(2k z^{2k})
  static constexpr long double kCoef[8] = {
      1.0L / 12.0L,     -1.0L / 120.0L,  1.0L / 252.0L,      -1.0L / 240.0L,
      1.0L / 132.0L,    -691.0L / 32760.0L, 1.0L / 12.0L,   -3617.0L / 8160.0L,
  };
  const long double inv2 = 1.0L / (z * z);
  long double series = 0.0L;
  long double power = inv2;
  for (long double c : kCoef) {
    series += c * power;
    power *= inv2;
  }
  const long double result = std::log(z) - 0.5L / z - series - shift;
  return static_cast<double>(result);
}

}  // namespace betacoal
