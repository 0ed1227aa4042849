#pragma once

// Dense truncated Taylor series in one formal variable t, or two (t, s), with
// complex coefficients. Derivatives at the origin are read off as
// n! m! [t^n s^m].

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "thetadft/errors.hpp"
#include "thetadft/summation.hpp"
#include "thetadft/theta.hpp"

namespace thetadft {

inline double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

/// coeffs[p] is the coefficient of t^p, p = 0..order.
class TaylorSeries1 {
 public:
  explicit TaylorSeries1(int order = 0) : coeffs_(static_cast<size_t>(check(order)) + 1) {}
  TaylorSeries1(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_.resize(1);
  }

  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  Complex& operator[](int p) { return coeffs_.at(static_cast<size_t>(p)); }
  const Complex& operator[](int p) const { return coeffs_.at(static_cast<size_t>(p)); }
  const std::vector<Complex>& coeffs() const { return coeffs_; }

  /// p-th derivative at t = 0.
  Complex derivative(int p) const {
    if (p < 0 || p > order()) throw UnsupportedOrderError("TaylorSeries1: derivative order exceeded");
    return coeffs_[static_cast<size_t>(p)] * factorial(p);
  }

 private:
  static int check(int order) {
    if (order < 0) throw DomainError("TaylorSeries1: negative order");
    return order;
  }
  std::vector<Complex> coeffs_;
};

/// Entry (p, q) is the coefficient of t^p s^q, grid (P+1) x (Q+1).
class TaylorSeries2 {
 public:
  TaylorSeries2(int order_t = 0, int order_s = 0)
      : order_t_(order_t), order_s_(order_s) {
    if (order_t < 0 || order_s < 0) throw DomainError("TaylorSeries2: negative order");
    coeffs_.assign(static_cast<size_t>(order_t + 1) * static_cast<size_t>(order_s + 1), Complex{});
  }

  int order_t() const { return order_t_; }
  int order_s() const { return order_s_; }

  Complex& operator()(int p, int q) { return coeffs_.at(index(p, q)); }
  const Complex& operator()(int p, int q) const { return coeffs_.at(index(p, q)); }

 private:
  size_t index(int p, int q) const {
    if (p < 0 || q < 0 || p > order_t_ || q > order_s_)
      throw UnsupportedOrderError("TaylorSeries2: index outside carrier");
    return static_cast<size_t>(p) * static_cast<size_t>(order_s_ + 1) + static_cast<size_t>(q);
  }
  int order_t_, order_s_;
  std::vector<Complex> coeffs_;
};

inline TaylorSeries1 series_mul(const TaylorSeries1& a, const TaylorSeries1& b) {
  const int order = std::min(a.order(), b.order());
  TaylorSeries1 out(order);
  for (int p = 0; p <= order; ++p) {
    CompensatedSum acc;
    for (int i = 0; i <= p; ++i) acc += a[i] * b[p - i];
    out[p] = acc.value();
  }
  return out;
}

inline TaylorSeries2 series_mul(const TaylorSeries2& a, const TaylorSeries2& b) {
  const int pt = std::min(a.order_t(), b.order_t());
  const int qs = std::min(a.order_s(), b.order_s());
  TaylorSeries2 out(pt, qs);
  for (int p = 0; p <= pt; ++p)
    for (int q = 0; q <= qs; ++q) {
      CompensatedSum acc;
      for (int i = 0; i <= p; ++i)
        for (int k = 0; k <= q; ++k) acc += a(i, k) * b(p - i, q - k);
      out(p, q) = acc.value();
    }
  return out;
}

/// exp(c t s): entry (p, p) = c^p / p!.
inline TaylorSeries2 exp_bilinear(Complex c, int order_t, int order_s) {
  TaylorSeries2 out(order_t, order_s);
  Complex power{1.0, 0.0};
  for (int p = 0; p <= std::min(order_t, order_s); ++p) {
    out(p, p) = power / factorial(p);
    power *= c;
  }
  return out;
}

/// exp(c t^2) to the given order.
inline TaylorSeries1 exp_square(Complex c, int order) {
  TaylorSeries1 out(order);
  Complex power{1.0, 0.0};
  for (int k = 0; 2 * k <= order; ++k) {
    out[2 * k] = power / factorial(k);
    power *= c;
  }
  return out;
}

/// exp(a(t)) by the recurrence b_k = (1/k) sum_{j=1}^k j a_j b_{k-j}.
inline TaylorSeries1 series_exp(const TaylorSeries1& a) {
  TaylorSeries1 out(a.order());
  out[0] = std::exp(a[0]);
  for (int k = 1; k <= a.order(); ++k) {
    CompensatedSum acc;
    for (int j = 1; j <= k; ++j) acc += static_cast<double>(j) * a[j] * out[k - j];
    out[k] = acc.value() / static_cast<double>(k);
  }
  return out;
}

/// g(a t + b s) for a series g(u), truncated to orders (P, Q):
/// [t^p s^q] = g_{p+q} C(p+q, p) a^p b^q.
inline TaylorSeries2 substitute_linear(const TaylorSeries1& g, Complex a, Complex b, int order_t,
                                       int order_s) {
  if (order_t + order_s > g.order())
    throw UnsupportedOrderError("substitute_linear: source series too short");
  TaylorSeries2 out(order_t, order_s);
  for (int p = 0; p <= order_t; ++p)
    for (int q = 0; q <= order_s; ++q)
      out(p, q) = g[p + q] * binomial(p + q, p) * std::pow(a, p) * std::pow(b, q);
  return out;
}

/// n! m! [t^n s^m] = d^n/dt^n d^m/ds^m at t = s = 0.
inline Complex extract_mixed_derivative(const TaylorSeries2& series, int n, int m) {
  if (n < 0 || m < 0 || n > series.order_t() || m > series.order_s())
    throw UnsupportedOrderError("extract_mixed_derivative: (" + std::to_string(n) + ", " +
                                std::to_string(m) + ") outside carrier");
  return series(n, m) * factorial(n) * factorial(m);
}

namespace detail {

template <typename Weight>
TaylorSeries1 theta_taylor_impl(Complex shift, Complex scale, Complex tau, int order,
                                const TruncationPolicy& policy, Weight weight) {
  require_upper_half_plane(tau);
  policy.validate();
  if (order < 0) throw DomainError("theta_taylor: negative order");
  if (order > kMaxDerivativeOrder)
    throw UnsupportedOrderError("theta_taylor: order " + std::to_string(order) + " exceeds cap " +
                                std::to_string(kMaxDerivativeOrder));
  tau = reduce_tau_real(tau);
  shift = reduce_z_real(shift);
  const long long extent = lattice_extent(shift, tau, order, policy);
  std::vector<CompensatedSum> acc(static_cast<size_t>(order) + 1);
  for (long long k = 0; k <= 2 * extent; ++k) {
    const long long a = (k % 2 == 1) ? (k + 1) / 2 : -(k / 2);
    const double ad = static_cast<double>(a);
    const Complex w = std::exp(kI * kPi * tau * (ad * ad) + 2.0 * kI * kPi * ad * shift);
    const Complex rate = 2.0 * kI * kPi * ad * scale;
    Complex power = weight(w);
    for (int p = 0; p <= order; ++p) {
      acc[static_cast<size_t>(p)] += power;
      power *= weight(rate) / static_cast<double>(p + 1);
    }
  }
  std::vector<Complex> coeffs(acc.size());
  for (size_t p = 0; p < acc.size(); ++p) coeffs[p] = acc[p].value();
  return TaylorSeries1(std::move(coeffs));
}

}  // namespace detail

/// Taylor expansion in t of theta3(shift + scale t, tau):
/// [t^p] = sum_a exp(i pi tau a^2 + 2 pi i a shift) (2 pi i a scale)^p / p!.
inline TaylorSeries1 theta_taylor(Complex shift, Complex scale, Complex tau, int order,
                                  const TruncationPolicy& policy = {}) {
  return detail::theta_taylor_impl(shift, scale, tau, order, policy, [](Complex v) { return v; });
}

/// Same lattice with every term replaced by its modulus; bounds the size of the
/// contributions that cancel inside theta_taylor.
inline TaylorSeries1 theta_taylor_majorant(Complex shift, Complex scale, Complex tau, int order,
                                           const TruncationPolicy& policy = {}) {
  return detail::theta_taylor_impl(shift, scale, tau, order, policy,
                                   [](Complex v) { return Complex{std::abs(v), 0.0}; });
}

}  // namespace thetadft
