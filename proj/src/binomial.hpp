#pragma once

#include <cmath>
#include <numbers>

// Log of the binomial pmf using the saddle-point expansion of C. Loader,
// "Fast and Accurate Computation of Binomial Probabilities" (2000). Stays
// accurate to a few ulp where lgamma differences lose ~log10(N) digits.
namespace cpb::detail {

// log(n!) - log(sqrt(2 pi n) (n/e)^n)
inline double stirling_error(double n) {
  constexpr double s0 = 1.0 / 12.0;
  constexpr double s1 = 1.0 / 360.0;
  constexpr double s2 = 1.0 / 1260.0;
  constexpr double s3 = 1.0 / 1680.0;
  constexpr double s4 = 1.0 / 1188.0;
  if (n <= 15.0) {
    return std::lgamma(n + 1.0) - (n + 0.5) * std::log(n) + n -
           0.5 * std::log(2.0 * std::numbers::pi);
  }
  const double nn = n * n;
  if (n > 500.0) return (s0 - s1 / nn) / n;
  if (n > 80.0) return (s0 - (s1 - s2 / nn) / nn) / n;
  if (n > 35.0) return (s0 - (s1 - (s2 - s3 / nn) / nn) / nn) / n;
  return (s0 - (s1 - (s2 - (s3 - s4 / nn) / nn) / nn) / nn) / n;
}

// x log(x / np) + np - x, without cancellation when x ~ np.
inline double deviance_term(double x, double np) {
  if (std::abs(x - np) < 0.1 * (x + np)) {
    double v = (x - np) / (x + np);
    double s = (x - np) * v;
    double ej = 2.0 * x * v;
    v *= v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v;
      const double s1 = s + ej / (2 * j + 1);
      if (s1 == s) return s1;
      s = s1;
    }
    return s;
  }
  return x * std::log(x / np) + np - x;
}

// log P(X = x) for X ~ Binomial(n, p), with q = 1 - p passed separately.
inline double log_binomial_pmf(double x, double n, double p, double q) {
  if (p == 0.0) return x == 0.0 ? 0.0 : -INFINITY;
  if (q == 0.0) return x == n ? 0.0 : -INFINITY;
  if (x == 0.0) {
    if (n == 0.0) return 0.0;
    return p < 0.1 ? -deviance_term(n, n * q) - n * p : n * std::log(q);
  }
  if (x == n) {
    return q < 0.1 ? -deviance_term(n, n * p) - n * q : n * std::log(p);
  }
  const double lc = stirling_error(n) - stirling_error(x) - stirling_error(n - x) -
                    deviance_term(x, n * p) - deviance_term(n - x, n * q);
  const double lf = std::log(2.0 * std::numbers::pi) + std::log(x) + std::log1p(-x / n);
  return lc - 0.5 * lf;
}

}  // namespace cpb::detail
