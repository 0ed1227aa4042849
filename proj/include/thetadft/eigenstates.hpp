#pragma once

// DFT eigenstates f_n(j), j = 0..N-1, built three independent ways:
//
//   direct   f_n(j) = sum_a exp(-pi (aN + j)^2 / N) H_n(eps (aN + j)),   eps = sqrt(2 pi / N)
//   dual     f_n(j) = N^(-1/2) (-i)^n sum_a exp(-pi a^2 / N + 2 pi i j a / N) H_n(eps a)
//   taylor   f_n(j) = N^(-1/2) d^n/dt^n [theta3(j/N - eps t / pi, i/N) exp(t^2)] at t = 0
//
// and the width family
//
//   f_n(j, xi) = sqrt(xi / N) d^n/dt^n [theta3(j/N - eps xi t / pi, i xi^2 / N) exp(t^2)] at t = 0
//
// which equals the direct form at xi = 1 and satisfies dft(f_n(., xi)) = i^n f_n(., 1/xi).
// With this library's dft (positive exponent, 1/sqrt(N)) every f_n obeys
// dft(f_n) = i^n f_n.

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "thetadft/errors.hpp"
#include "thetadft/hermite.hpp"
#include "thetadft/polyseries.hpp"
#include "thetadft/residual.hpp"
#include "thetadft/summation.hpp"
#include "thetadft/theta.hpp"

namespace thetadft {

/// Norm-to-mass ratio at or below which a state counts as degenerate.
inline constexpr double kDegenerateRatio = 1e-12;

struct EigenstateSpec {
  int N = 1;
  int n = 0;
  double xi = 1.0;

  void validate() const {
    if (N < 1) throw DomainError("EigenstateSpec: N must be >= 1");
    if (n < 0) throw DomainError("EigenstateSpec: n must be >= 0");
    if (!(xi > 0.0) || !std::isfinite(xi)) throw DomainError("EigenstateSpec: xi must be > 0");
  }
  double epsilon() const { return std::sqrt(2.0 * kPi / N); }
};

struct StateVector {
  std::vector<Complex> values;
  EigenstateSpec spec;
  // l2 norm over j of the summed term magnitudes; the scale against which
  // cancellation to zero is judged
  double mass = 0.0;

  size_t size() const { return values.size(); }
  const Complex& operator[](size_t j) const { return values[j]; }

  double norm() const {
    double s = 0.0;
    for (const Complex& v : values) s += std::norm(v);
    return std::sqrt(s);
  }
  double max_imag() const {
    double m = 0.0;
    for (const Complex& v : values) m = std::max(m, std::abs(v.imag()));
    return m;
  }
  bool degenerate(double ratio = kDegenerateRatio) const { return norm() <= ratio * mass; }
};

namespace detail {

/// Hermite-Gaussian reach: smallest u with exp(-u^2/2) |H_n(u)| below tol.
inline double hermite_gaussian_reach(int n, double tol) {
  const double log_tol = std::log(1.0 / tol);
  double u = std::sqrt(2.0 * log_tol);
  for (int it = 0; it < 8; ++it) u = std::sqrt(2.0 * (log_tol + n * std::log(2.0 * u + 2.0 * n + 1.0)));
  return u;
}

inline long long direct_extent(const EigenstateSpec& spec, double tol) {
  const double log_tol = std::log(1.0 / tol);
  const double coarse = 2.0 + spec.n + std::ceil(std::sqrt(spec.N * log_tol / kPi) / spec.N);
  const double fine = std::ceil(hermite_gaussian_reach(spec.n, tol) / spec.epsilon() / spec.N) + 2.0;
  return static_cast<long long>(std::max(coarse, fine));
}

/// exp(2 pi i r / N) for r = 0..N-1; callers reduce the integer phase first.
inline std::vector<Complex> roots_of_unity(int N) {
  std::vector<Complex> w(static_cast<size_t>(N));
  for (int r = 0; r < N; ++r) {
    const double angle = 2.0 * kPi * r / N;
    w[static_cast<size_t>(r)] = {std::cos(angle), std::sin(angle)};
  }
  return w;
}

inline long long mod(long long a, long long n) {
  const long long r = a % n;
  return r < 0 ? r + n : r;
}

inline Complex i_power(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

/// sqrt(prefactor_sq) n! [t^n] theta3(j/N + scale t, tau) exp(t^2), plus the
/// matching majorant.
inline std::pair<Complex, double> theta_taylor_entry(int j, int N, int n, Complex scale, Complex tau,
                                                     const TruncationPolicy& policy) {
  const Complex shift = static_cast<double>(j) / N;
  const TaylorSeries1 theta = theta_taylor(shift, scale, tau, n, policy);
  const TaylorSeries1 bound = theta_taylor_majorant(shift, scale, tau, n, policy);
  const TaylorSeries1 gauss = exp_square(1.0, n);
  const Complex value = series_mul(theta, gauss)[n] * factorial(n);
  double mass = 0.0;
  for (int p = 0; p <= n; ++p) mass += bound[p].real() * std::abs(gauss[n - p]);
  return {value, mass * factorial(n)};
}

}  // namespace detail

/// f_n(j) by the periodized Gaussian-Hermite comb; for xi != 1 the width family.
inline StateVector eigenstate_width(const EigenstateSpec& spec, const TruncationPolicy& policy = {});

inline StateVector eigenstate_direct(const EigenstateSpec& spec, const TruncationPolicy& policy = {}) {
  spec.validate();
  policy.validate();
  if (spec.n > kMaxHermiteDegree) throw DomainError("eigenstate_direct: n must be <= 64");
  if (spec.xi != 1.0) return eigenstate_width(spec, policy);
  const int N = spec.N;
  const double eps = spec.epsilon();
  const long long extent = detail::direct_extent(spec, policy.tol);
  StateVector out{std::vector<Complex>(static_cast<size_t>(N)), spec, 0.0};
  double mass_sq = 0.0;
  for (int j = 0; j < N; ++j) {
    CompensatedSum sum;
    double mass = 0.0;
    for (long long a = -extent; a <= extent; ++a) {
      const double x = static_cast<double>(a * N + j);
      const double gauss = std::exp(-kPi * x * x / N);
      if (gauss == 0.0) continue;
      const double term = gauss * hermite(spec.n, eps * x);
      sum += term;
      mass += std::abs(term);
    }
    out.values[static_cast<size_t>(j)] = sum.value();
    mass_sq += mass * mass;
  }
  out.mass = std::sqrt(mass_sq);
  return out;
}

/// Dual (Poisson-resummed) form of f_n; carries 1/sqrt(N) in front of the sum.
/// Terms a and -a are paired (H_n has parity (-1)^n), which leaves a real cosine
/// sum for even n and a real sine sum for odd n.
inline StateVector eigenstate_dual(const EigenstateSpec& spec, const TruncationPolicy& policy = {}) {
  spec.validate();
  policy.validate();
  if (spec.xi != 1.0) throw DomainError("eigenstate_dual: requires xi = 1");
  if (spec.n > kMaxHermiteDegree) throw DomainError("eigenstate_dual: n must be <= 64");
  const int N = spec.N;
  const double eps = spec.epsilon();
  const long long extent =
      static_cast<long long>(std::ceil(detail::hermite_gaussian_reach(spec.n, policy.tol) / eps)) + 2;
  const auto roots = detail::roots_of_unity(N);
  const bool odd = spec.n % 2 == 1;
  // (-i)^n for even n; (-i)^n * i for odd n, absorbing the i of the sine pairing
  const double front = (((odd ? spec.n - 1 : spec.n) / 2) % 2 == 0 ? 1.0 : -1.0) / std::sqrt(static_cast<double>(N));
  StateVector out{std::vector<Complex>(static_cast<size_t>(N)), spec, 0.0};
  double mass_sq = 0.0;
  for (int j = 0; j < N; ++j) {
    CompensatedSum sum;
    const double centre = odd ? 0.0 : hermite(spec.n, 0.0);  // a = 0
    sum += centre;
    double mass = std::abs(centre);
    for (long long a = 1; a <= extent; ++a) {
      const double ad = static_cast<double>(a);
      const double gauss = std::exp(-kPi * ad * ad / N);
      if (gauss == 0.0) break;
      const double weight = gauss * hermite(spec.n, eps * ad);
      const Complex root = roots[static_cast<size_t>(detail::mod(a * j, N))];
      sum += 2.0 * weight * (odd ? root.imag() : root.real());
      mass += 2.0 * std::abs(weight);
    }
    out.values[static_cast<size_t>(j)] = front * sum.value();
    mass_sq += mass * mass;
  }
  out.mass = std::sqrt(mass_sq) / std::sqrt(static_cast<double>(N));
  return out;
}

/// f_n from derivatives of theta3 through truncated Taylor arithmetic.
inline StateVector eigenstate_theta_taylor(const EigenstateSpec& spec,
                                           const TruncationPolicy& policy = {}) {
  spec.validate();
  if (spec.xi != 1.0) throw DomainError("eigenstate_theta_taylor: requires xi = 1");
  if (spec.n > kMaxDerivativeOrder)
    throw UnsupportedOrderError("eigenstate_theta_taylor: n must be <= 16");
  return eigenstate_width(spec, policy);
}

inline StateVector eigenstate_width(const EigenstateSpec& spec, const TruncationPolicy& policy) {
  spec.validate();
  if (spec.n > kMaxDerivativeOrder)
    throw UnsupportedOrderError("eigenstate_width: n must be <= 16");
  const int N = spec.N;
  const Complex scale = -spec.epsilon() * spec.xi / kPi;
  const Complex tau{0.0, spec.xi * spec.xi / N};
  const double front = std::sqrt(spec.xi / N);
  StateVector out{std::vector<Complex>(static_cast<size_t>(N)), spec, 0.0};
  double mass_sq = 0.0;
  for (int j = 0; j < N; ++j) {
    const auto [value, mass] = detail::theta_taylor_entry(j, N, spec.n, scale, tau, policy);
    out.values[static_cast<size_t>(j)] = front * value;
    mass_sq += (front * mass) * (front * mass);
  }
  out.mass = std::sqrt(mass_sq);
  return out;
}

/// (1/sqrt N) sum_k v(k) exp(+2 pi i k j / N).
inline std::vector<Complex> dft(std::span<const Complex> v) {
  const int N = static_cast<int>(v.size());
  std::vector<Complex> out(v.size());
  if (N == 0) return out;
  const auto roots = detail::roots_of_unity(N);
  const double scale = 1.0 / std::sqrt(static_cast<double>(N));
  for (int j = 0; j < N; ++j) {
    CompensatedSum sum;
    for (int k = 0; k < N; ++k)
      sum += v[static_cast<size_t>(k)] * roots[static_cast<size_t>(detail::mod(1LL * k * j, N))];
    out[static_cast<size_t>(j)] = scale * sum.value();
  }
  return out;
}

inline StateVector dft(const StateVector& v) {
  StateVector out = v;
  out.values = dft(std::span<const Complex>(v.values));
  return out;
}

inline double l2_distance(std::span<const Complex> a, std::span<const Complex> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

/// ||dft f_n(., xi) - i^n f_n(., 1/xi)|| / ||f_n(., xi)||.
///
/// Extra params record the two literal readings that do not hold with this
/// library's conventions: "eq1_literal" is ||f - i^n dft f|| / ||f|| (the
/// eigenvalue sign flips for odd n), "mg_literal" applies the width relation
/// without 1/sqrt(N) to states scaled by sqrt(N/xi).
inline ResidualReport eigen_residual(const EigenstateSpec& spec, double tol = 1e-9,
                                     const TruncationPolicy& policy = {}) {
  spec.validate();
  const bool unit_width = spec.xi == 1.0;
  const StateVector f = eigenstate_direct(spec, policy);
  const StateVector g =
      unit_width ? f : eigenstate_direct(EigenstateSpec{spec.N, spec.n, 1.0 / spec.xi}, policy);
  const Complex eigenvalue = detail::i_power(spec.n);
  const auto transformed = dft(std::span<const Complex>(f.values));

  std::vector<Complex> expected(g.values.size());
  for (size_t j = 0; j < expected.size(); ++j) expected[j] = eigenvalue * g.values[j];

  const double fnorm = f.norm();
  const double dist = l2_distance(transformed, expected);

  std::vector<std::pair<std::string, double>> params{
      {"N", spec.N}, {"n", spec.n}, {"xi", spec.xi}, {"norm", fnorm}, {"mass", f.mass}};

  // literal readings, reported only
  std::vector<Complex> lhs_literal(f.size());
  if (unit_width) {
    for (size_t j = 0; j < f.size(); ++j) lhs_literal[j] = eigenvalue * transformed[j];
    params.emplace_back("eq1_literal", fnorm > 0 ? l2_distance(f.values, lhs_literal) / fnorm : 0.0);
  } else {
    const double to_literal_f = spec.N / spec.xi;
    const double to_literal_g = spec.N * spec.xi;
    const double rootN = std::sqrt(static_cast<double>(spec.N));
    std::vector<Complex> g_literal(g.size());
    for (size_t j = 0; j < f.size(); ++j) {
      lhs_literal[j] = eigenvalue * rootN * to_literal_f * transformed[j];
      g_literal[j] = to_literal_g * g.values[j];
    }
    const double gn = g.norm() * to_literal_g;
    params.emplace_back("mg_literal", gn > 0 ? l2_distance(g_literal, lhs_literal) / gn : 0.0);
  }

  const double residual = fnorm > 0 ? dist / fnorm : 0.0;
  ResidualReport report = make_report(unit_width ? "dft_eigenrelation" : "dft_width_inversion",
                                      std::move(params), Complex{fnorm}, Complex{dist}, residual, tol,
                                      "dft(f_n(.,xi)) = i^n f_n(.,1/xi); f_n(.,xi) scaled by sqrt(xi/N)");
  if (f.degenerate()) {
    report.degenerate = true;
    report.pass = false;
    report.note = "degenerate state: norm/mass <= 1e-12, not scored";
  }
  return report;
}

}  // namespace thetadft
