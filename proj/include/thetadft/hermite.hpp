#pragma once

#include <cmath>
#include <string>

#include "thetadft/errors.hpp"
#include "thetadft/polyseries.hpp"
#include "thetadft/residual.hpp"

namespace thetadft {

inline constexpr int kMaxHermiteDegree = 64;

/// Physicists' Hermite polynomial H_n(x) by the three-term recurrence.
inline double hermite(int n, double x) {
  if (n < 0 || n > kMaxHermiteDegree)
    throw DomainError("hermite: degree " + std::to_string(n) + " outside [0, 64]");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 2.0 * x;
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * x * cur - 2.0 * k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Compares hermite(n, x) against n! [t^n] exp(2 x t - t^2) expanded to `order`.
inline ResidualReport hermite_generating_check(int n, double x, int order, double tol = 1e-9) {
  if (n < 0 || order < n || order > 20)
    throw DomainError("hermite_generating_check: need 0 <= n <= order <= 20");
  TaylorSeries1 exponent(order);
  if (order >= 1) exponent[1] = 2.0 * x;
  if (order >= 2) exponent[2] = -1.0;
  const TaylorSeries1 generating = series_exp(exponent);
  const Complex extracted = generating[n] * factorial(n);
  const Complex direct = hermite(n, x);
  return make_report("hermite_generating", {{"n", n}, {"x", x}, {"order", order}}, direct,
                     extracted, relative(direct, extracted), tol);
}

}  // namespace thetadft
