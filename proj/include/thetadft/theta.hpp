#pragma once

// Jacobi theta functions in Vilenkin's normalization:
//
//   theta3(z, tau) = sum_a exp(i pi tau a^2) exp(2 pi i a z),   Im tau > 0
//   theta4(z, tau) = theta3(z + 1/2, tau)
//   theta2(z, tau) = exp(i pi tau / 4 + i pi z) theta3(z + tau/2, tau)
//
// The lattice sum is truncated symmetrically at |a| <= A where the Gaussian
// tail drops below the policy tolerance. For small Im tau the value route goes
// through the modular transform tau -> -1/tau.

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "thetadft/errors.hpp"
#include "thetadft/residual.hpp"
#include "thetadft/summation.hpp"

namespace thetadft {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

/// Highest z-derivative order served by theta3_z_derivative and theta_taylor.
inline constexpr int kMaxDerivativeOrder = 16;

/// Im tau below which theta3 evaluates through the modular transform.
inline constexpr double kModularRouteThreshold = 0.05;

struct TruncationPolicy {
  double tol = 1e-17;       // target absolute tail bound, relative to the peak term
  int max_terms = 100000;   // hard cap on |a|

  void validate() const {
    if (!(tol > 0.0)) throw DomainError("TruncationPolicy: tol must be > 0");
    if (max_terms < 1) throw DomainError("TruncationPolicy: max_terms must be >= 1");
  }
};

struct ThetaArgs {
  Complex z{};
  Complex tau{0.0, 1.0};
  TruncationPolicy policy{};
};

/// theta3(z, tau) = prefactor * theta3(z0, tau) with z = z0 + m + n tau.
struct QuasiPeriodReduction {
  Complex z0{};
  Complex prefactor{1.0, 0.0};
  long long m = 0;
  long long n = 0;
};

namespace detail {

inline void require_upper_half_plane(Complex tau) {
  if (!(tau.imag() > 0.0))
    throw DomainError("theta: Im(tau) must be > 0, got " + std::to_string(tau.imag()));
}

/// exp(i pi tau a^2) is invariant under tau -> tau + 2 for integer a.
inline Complex reduce_tau_real(Complex tau) {
  const double shift = 2.0 * std::round(tau.real() / 2.0);
  return {tau.real() - shift, tau.imag()};
}

inline Complex reduce_z_real(Complex z) { return {z.real() - std::round(z.real()), z.imag()}; }

/// Summation extent A for sum_{|a|<=A} exp(i pi tau a^2 + 2 pi i a z) (2 pi i a)^order.
inline long long lattice_extent(Complex z, Complex tau, int order, const TruncationPolicy& policy) {
  const double t = tau.imag();
  const double log_tol = std::log(1.0 / policy.tol);
  const double centre = std::abs(z.imag()) / t;
  double extent = std::ceil(std::sqrt(log_tol / (kPi * t))) + 2.0 + std::ceil(centre);
  if (order > 0) {
    // polynomial weight (2 pi a)^p pushes the tail outwards
    const double grow = order * std::log(2.0 * kPi * extent + 1.0);
    extent = std::ceil(std::sqrt((log_tol + grow) / (kPi * t))) + 2.0 + std::ceil(centre);
  }
  if (!std::isfinite(extent) || extent > static_cast<double>(policy.max_terms))
    throw TruncationError("theta: tail bound needs |a| <= " + std::to_string(extent) +
                          " but max_terms = " + std::to_string(policy.max_terms));
  return static_cast<long long>(extent);
}

/// sum_a exp(i pi tau a^2 + 2 pi i a z) (2 pi i a)^order, no routing.
inline Complex lattice_sum(Complex z, Complex tau, int order, const TruncationPolicy& policy) {
  require_upper_half_plane(tau);
  policy.validate();
  tau = reduce_tau_real(tau);
  z = reduce_z_real(z);
  const long long extent = lattice_extent(z, tau, order, policy);
  CompensatedSum sum;
  for (long long k = 0; k <= 2 * extent; ++k) {
    // order 0, 1, -1, 2, -2, ...
    const long long a = (k % 2 == 1) ? (k + 1) / 2 : -(k / 2);
    const double ad = static_cast<double>(a);
    Complex term = std::exp(kI * kPi * tau * (ad * ad) + 2.0 * kI * kPi * ad * z);
    if (order > 0) term *= std::pow(2.0 * kI * kPi * ad, order);
    sum += term;
  }
  return sum.value();
}

}  // namespace detail

/// Direct lattice sum with no modular routing; the reference path used by the
/// transform checks so that neither side of a check borrows the other.
inline Complex theta3_series(const ThetaArgs& args) {
  return detail::lattice_sum(args.z, args.tau, 0, args.policy);
}

inline Complex theta3(const ThetaArgs& args) {
  detail::require_upper_half_plane(args.tau);
  const Complex tau = detail::reduce_tau_real(args.tau);
  if (tau.imag() < kModularRouteThreshold) {
    const Complex dual_tau = -1.0 / tau;
    if (dual_tau.imag() > tau.imag()) {
      const Complex z = detail::reduce_z_real(args.z);
      // theta3(z, tau) = (-i tau)^(-1/2) exp(-i pi z^2 / tau) theta3(z / tau, -1 / tau)
      const Complex factor = std::exp(-kI * kPi * z * z / tau) / std::sqrt(-kI * tau);
      return factor * detail::lattice_sum(z / tau, dual_tau, 0, args.policy);
    }
  }
  return detail::lattice_sum(args.z, tau, 0, args.policy);
}

inline Complex theta3(Complex z, Complex tau, const TruncationPolicy& policy = {}) {
  return theta3(ThetaArgs{z, tau, policy});
}

inline Complex theta4(const ThetaArgs& args) {
  return theta3(ThetaArgs{args.z + 0.5, args.tau, args.policy});
}

inline Complex theta4(Complex z, Complex tau, const TruncationPolicy& policy = {}) {
  return theta4(ThetaArgs{z, tau, policy});
}

inline Complex theta2(const ThetaArgs& args) {
  detail::require_upper_half_plane(args.tau);
  const Complex prefactor = std::exp(kI * kPi * args.tau / 4.0 + kI * kPi * args.z);
  return prefactor * theta3(ThetaArgs{args.z + args.tau / 2.0, args.tau, args.policy});
}

inline Complex theta2(Complex z, Complex tau, const TruncationPolicy& policy = {}) {
  return theta2(ThetaArgs{z, tau, policy});
}

/// p-th z-derivative of theta3: sum_a exp(i pi tau a^2)(2 pi i a)^p exp(2 pi i a z).
inline Complex theta3_z_derivative(const ThetaArgs& args, int order) {
  if (order < 0) throw DomainError("theta3_z_derivative: order must be >= 0");
  if (order > kMaxDerivativeOrder)
    throw UnsupportedOrderError("theta3_z_derivative: order " + std::to_string(order) +
                                " exceeds cap " + std::to_string(kMaxDerivativeOrder));
  if (order == 0) return theta3(args);
  return detail::lattice_sum(args.z, args.tau, order, args.policy);
}

inline QuasiPeriodReduction reduce_quasi_period(Complex z, Complex tau) {
  detail::require_upper_half_plane(tau);
  QuasiPeriodReduction r;
  r.n = std::llround(z.imag() / tau.imag());
  const Complex shifted = z - static_cast<double>(r.n) * tau;
  r.m = std::llround(shifted.real());
  r.z0 = shifted - static_cast<double>(r.m);
  const double n = static_cast<double>(r.n);
  // theta3(z0 + m + n tau) = exp(-i pi tau n^2) exp(-2 pi i n z0) theta3(z0)
  r.prefactor = std::exp(-kI * kPi * tau * (n * n) - 2.0 * kI * kPi * n * r.z0);
  return r;
}

/// theta3(z, i t) = t^(-1/2) exp(-pi z^2 / t) theta3(z / (i t), i / t), both
/// sides by direct series. Residual relative to |lhs|.
inline ResidualReport modular_transform_check(Complex z, double tau_pos, double tol = 1e-11,
                                              const TruncationPolicy& policy = {}) {
  if (!(tau_pos > 0.0)) throw DomainError("modular_transform_check: tau must be > 0");
  const Complex lhs = theta3_series({z, Complex{0.0, tau_pos}, policy});
  const Complex rhs = std::exp(-kPi * z * z / tau_pos) / std::sqrt(tau_pos) *
                      theta3_series({z / (kI * tau_pos), Complex{0.0, 1.0 / tau_pos}, policy});
  return make_report("modular_transform",
                     {{"z_re", z.real()}, {"z_im", z.imag()}, {"tau", tau_pos}}, lhs, rhs,
                     relative(lhs, rhs), tol);
}

/// theta3(z/L, i/sigma^2) = sigma sum_a exp(-pi (sigma/L)^2 (a L + z)^2) for real z.
inline ResidualReport gaussian_sum_check(double z, double period, double sigma,
                                         double tol = 1e-11, const TruncationPolicy& policy = {}) {
  if (!(period > 0.0) || !(sigma > 0.0))
    throw DomainError("gaussian_sum_check: L and sigma must be > 0");
  const Complex lhs = theta3_series({z / period, Complex{0.0, 1.0 / (sigma * sigma)}, policy});
  const double width = period / sigma;
  const double reach = std::sqrt(std::log(1.0 / policy.tol) / kPi) * width;
  const long long extent = static_cast<long long>(std::ceil((reach + std::abs(z)) / period)) + 2;
  CompensatedSum sum;
  for (long long a = -extent; a <= extent; ++a) {
    const double x = static_cast<double>(a) * period + z;
    sum += std::exp(-kPi * (sigma / period) * (sigma / period) * x * x);
  }
  const Complex rhs = sigma * sum.value();
  return make_report("gaussian_sum", {{"z", z}, {"L", period}, {"sigma", sigma}}, lhs, rhs,
                     relative(lhs, rhs), tol);
}

}  // namespace thetadft
