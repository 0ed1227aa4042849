#pragma once

// Residual checks for theta3 identities obtained by splitting the lattice sum
// into residue classes. Finite sums run over one full residue system
// j = 0..N-1 (or 0..xi-1). Residuals use |lhs - rhs| / (1 + |lhs|).
//
// Three displays carry constants that do not survive numerical evaluation;
// each is checked twice, with the printed constant and with one fitted by
// least squares across a parameter grid:
//   inverse relation      printed sqrt(N/xi^2), resolves to xi/sqrt(N)
//   k = 0 collapse        printed sqrt(N/xi^2), resolves to 1/N
//   DFT width inversion   printed 1/sqrt(N),    resolves to 1/(xi sqrt(N))

#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "thetadft/errors.hpp"
#include "thetadft/residual.hpp"
#include "thetadft/summation.hpp"
#include "thetadft/theta.hpp"

namespace thetadft {

struct IdentityParams {
  Complex z{};
  double xi = 1.0;      // width
  int N = 1;
  int k = 0;            // reduced mod N
  double L = 1.0;       // period
  double sigma = 1.0;   // inverse width
  int xi_int = 1;       // integer width for the residue-class splittings

  void validate() const {
    if (N < 1) throw DomainError("IdentityParams: N must be >= 1");
    if (!(xi > 0.0)) throw DomainError("IdentityParams: xi must be > 0");
    if (!(L > 0.0)) throw DomainError("IdentityParams: L must be > 0");
    if (!(sigma > 0.0)) throw DomainError("IdentityParams: sigma must be > 0");
    if (xi_int < 1) throw DomainError("IdentityParams: integer xi must be >= 1");
  }
  int k_reduced() const { return ((k % N) + N) % N; }
};

/// Printed constant vs. a least-squares constant c minimizing sum |lhs - c rhs_sum|^2.
struct ConstantFit {
  std::string identity;
  std::vector<std::pair<std::string, double>> params;
  Complex literal_constant{};
  Complex fitted_constant{};
  Complex resolved_constant{};   // closed form the fit is compared against
  double literal_residual = 0.0; // max over the grid
  double fitted_residual = 0.0;
  double fit_vs_resolved = 0.0;  // |fitted - resolved| / |resolved|
  int samples = 0;
  double tol = 0.0;
  bool pass = false;             // fitted_residual <= tol and fit_vs_resolved <= tol
};

namespace detail {

inline Complex unit_phase(long long numerator, int N) {
  const long long r = ((numerator % N) + N) % N;
  const double angle = 2.0 * kPi * static_cast<double>(r) / N;
  return {std::cos(angle), std::sin(angle)};
}

inline std::vector<std::pair<std::string, double>> describe(const IdentityParams& p) {
  return {{"z_re", p.z.real()}, {"z_im", p.z.imag()}, {"xi", p.xi}, {"N", p.N}, {"k", p.k_reduced()}};
}

struct LinearSample {
  Complex lhs;
  Complex sum;  // rhs without its constant
};

inline ConstantFit fit_constant(std::string identity,
                                std::vector<std::pair<std::string, double>> params,
                                const std::vector<LinearSample>& samples, Complex literal,
                                Complex resolved, double tol) {
  CompensatedSum num, den;
  for (const auto& s : samples) {
    num += std::conj(s.sum) * s.lhs;
    den += std::norm(s.sum);
  }
  ConstantFit fit;
  fit.identity = std::move(identity);
  fit.params = std::move(params);
  fit.literal_constant = literal;
  fit.resolved_constant = resolved;
  fit.fitted_constant = den.value().real() > 0 ? num.value() / den.value().real() : Complex{};
  for (const auto& s : samples) {
    fit.literal_residual = std::max(fit.literal_residual, soft_relative(s.lhs, literal * s.sum));
    fit.fitted_residual = std::max(fit.fitted_residual, soft_relative(s.lhs, fit.fitted_constant * s.sum));
  }
  fit.fit_vs_resolved = std::abs(fit.fitted_constant - resolved) / std::abs(resolved);
  fit.samples = static_cast<int>(samples.size());
  fit.tol = tol;
  fit.pass = fit.fitted_residual <= tol && fit.fit_vs_resolved <= tol;
  return fit;
}

inline LinearSample inverse_relation_sample(Complex z, int N, double xi, int k,
                                            const TruncationPolicy& policy) {
  const double xi2 = xi * xi;
  const Complex lhs = theta3(kI * z / xi2 - static_cast<double>(k) / N, Complex{0.0, 1.0 / (N * xi2)}, policy);
  CompensatedSum sum;
  const Complex gauss = std::exp(kPi * N * z * z / xi2);
  for (int j = 0; j < N; ++j)
    sum += theta3(z + static_cast<double>(j) / N, Complex{0.0, xi2 / N}, policy) * gauss *
           unit_phase(-1LL * j * k, N);
  return {lhs, sum.value()};
}

inline LinearSample k0_collapse_sample(Complex z, int N, double xi, const TruncationPolicy& policy) {
  const double xi2 = xi * xi;
  const Complex lhs = theta3(static_cast<double>(N) * z, Complex{0.0, N * xi2}, policy);
  CompensatedSum sum;
  for (int j = 0; j < N; ++j) sum += theta3(z + static_cast<double>(j) / N, Complex{0.0, xi2 / N}, policy);
  return {lhs, sum.value()};
}

inline LinearSample width_inversion_sample(int k, int N, double xi, const TruncationPolicy& policy) {
  const double xi2 = xi * xi;
  const Complex lhs = theta3(static_cast<double>(k) / N, Complex{0.0, xi2 / N}, policy);
  CompensatedSum sum;
  for (int j = 0; j < N; ++j)
    sum += theta3(static_cast<double>(j) / N, Complex{0.0, 1.0 / (N * xi2)}, policy) *
           unit_phase(1LL * j * k, N);
  return {lhs, sum.value()};
}

}  // namespace detail

/// theta3(z + k/N, i xi^2/N)
///   = (N xi^2)^(-1/2) sum_j theta3(i z/xi^2 - j/N, i/(N xi^2)) exp(-pi N z^2/xi^2 + 2 pi i j k/N)
inline ResidualReport verify_fractional_shift(const IdentityParams& p, double tol = 1e-9,
                                              const TruncationPolicy& policy = {}) {
  p.validate();
  const int N = p.N, k = p.k_reduced();
  const double xi2 = p.xi * p.xi;
  const Complex lhs = theta3(p.z + static_cast<double>(k) / N, Complex{0.0, xi2 / N}, policy);
  CompensatedSum sum;
  const Complex gauss = std::exp(-kPi * N * p.z * p.z / xi2);
  for (int j = 0; j < N; ++j)
    sum += theta3(kI * p.z / xi2 - static_cast<double>(j) / N, Complex{0.0, 1.0 / (N * xi2)}, policy) *
           gauss * detail::unit_phase(1LL * j * k, N);
  const Complex rhs = sum.value() / std::sqrt(N * xi2);
  return make_report("fractional_shift", detail::describe(p), lhs, rhs, soft_relative(lhs, rhs), tol);
}

/// theta3(i z/xi^2 - k/N, i/(N xi^2)) = C sum_j theta3(z + j/N, i xi^2/N) exp(pi N z^2/xi^2 - 2 pi i j k/N)
/// with C = xi/sqrt(N). The printed C = sqrt(N/xi^2) is reported as "literal_residual".
inline ResidualReport verify_inverse_relation(const IdentityParams& p, double tol = 1e-9,
                                              const TruncationPolicy& policy = {}) {
  p.validate();
  const auto s = detail::inverse_relation_sample(p.z, p.N, p.xi, p.k_reduced(), policy);
  const double resolved = p.xi / std::sqrt(static_cast<double>(p.N));
  const double literal = std::sqrt(p.N / (p.xi * p.xi));
  auto params = detail::describe(p);
  params.emplace_back("constant", resolved);
  params.emplace_back("literal_residual", soft_relative(s.lhs, literal * s.sum));
  return make_report("inverse_relation", std::move(params), s.lhs, resolved * s.sum,
                     soft_relative(s.lhs, resolved * s.sum), tol, "constant xi/sqrt(N)");
}

/// theta3(k/N, i xi^2/N) = C sum_j theta3(j/N, i/(N xi^2)) exp(2 pi i j k/N), C = 1/(xi sqrt N);
/// also reports the two Gaussian-sum widths (in units of sqrt N): xi and 1/xi.
inline ResidualReport verify_width_inversion_dft(int k, int N, double xi, double tol = 1e-9,
                                                 const TruncationPolicy& policy = {}) {
  const IdentityParams p{0.0, xi, N, k};
  p.validate();
  const auto s = detail::width_inversion_sample(p.k_reduced(), N, xi, policy);
  const double rootN = std::sqrt(static_cast<double>(N));
  const double resolved = 1.0 / (xi * rootN);
  const double literal = 1.0 / rootN;
  // theta3(x/L, i/sigma^2) has Gaussian width L/sigma; here L = N, sigma = 1/sqrt(Im tau)
  const double width_lhs = N * std::sqrt(xi * xi / N) / rootN;
  const double width_rhs = N * std::sqrt(1.0 / (N * xi * xi)) / rootN;
  auto params = detail::describe(p);
  params.emplace_back("constant", resolved);
  params.emplace_back("literal_residual", soft_relative(s.lhs, literal * s.sum));
  params.emplace_back("width_lhs", width_lhs);
  params.emplace_back("width_rhs", width_rhs);
  return make_report("width_inversion_dft", std::move(params), s.lhs, resolved * s.sum,
                     soft_relative(s.lhs, resolved * s.sum), tol, "constant 1/(xi sqrt(N))");
}

/// theta3(N z, i N xi^2) = C sum_j theta3(z + j/N, i xi^2/N) with C = 1/N.
inline ResidualReport verify_k0_collapse(Complex z, int N, double xi, double tol = 1e-9,
                                         const TruncationPolicy& policy = {}) {
  const IdentityParams p{z, xi, N};
  p.validate();
  const auto s = detail::k0_collapse_sample(z, N, xi, policy);
  const double resolved = 1.0 / N;
  const double literal = std::sqrt(N / (xi * xi));
  auto params = detail::describe(p);
  params.emplace_back("constant", resolved);
  params.emplace_back("literal_residual", soft_relative(s.lhs, literal * s.sum));
  return make_report("k0_collapse", std::move(params), s.lhs, resolved * s.sum,
                     soft_relative(s.lhs, resolved * s.sum), tol, "constant 1/N");
}

inline ConstantFit fit_inverse_relation_constant(std::span<const Complex> zs, int N, double xi,
                                                 double tol = 1e-9, const TruncationPolicy& policy = {}) {
  std::vector<detail::LinearSample> samples;
  for (Complex z : zs)
    for (int k = 0; k < N; ++k) samples.push_back(detail::inverse_relation_sample(z, N, xi, k, policy));
  return detail::fit_constant("inverse_relation", {{"N", N}, {"xi", xi}}, samples,
                              std::sqrt(N / (xi * xi)), xi / std::sqrt(static_cast<double>(N)), tol);
}

inline ConstantFit fit_k0_collapse_constant(std::span<const Complex> zs, int N, double xi,
                                            double tol = 1e-9, const TruncationPolicy& policy = {}) {
  std::vector<detail::LinearSample> samples;
  for (Complex z : zs) samples.push_back(detail::k0_collapse_sample(z, N, xi, policy));
  return detail::fit_constant("k0_collapse", {{"N", N}, {"xi", xi}}, samples, std::sqrt(N / (xi * xi)),
                              1.0 / N, tol);
}

inline ConstantFit fit_width_inversion_constant(int N, double xi, double tol = 1e-9,
                                                const TruncationPolicy& policy = {}) {
  std::vector<detail::LinearSample> samples;
  for (int k = 0; k < N; ++k) samples.push_back(detail::width_inversion_sample(k, N, xi, policy));
  const double rootN = std::sqrt(static_cast<double>(N));
  return detail::fit_constant("width_inversion_dft", {{"N", N}, {"xi", xi}}, samples, 1.0 / rootN,
                              1.0 / (xi * rootN), tol);
}

/// theta3(z/L, i xi^2/L) = (1/xi) sum_{j<xi} theta3((z + j L)/(xi L), i/L)
inline ResidualReport verify_equivalence_class_split(Complex z, double L, int xi, double tol = 1e-9,
                                                     const TruncationPolicy& policy = {}) {
  IdentityParams p{z, 1.0, 1, 0, L, 1.0, xi};
  p.validate();
  const double x = xi;
  const Complex lhs = theta3(z / L, Complex{0.0, x * x / L}, policy);
  CompensatedSum sum;
  for (int j = 0; j < xi; ++j) sum += theta3((z + j * L) / (x * L), Complex{0.0, 1.0 / L}, policy);
  const Complex rhs = sum.value() / x;
  return make_report("equivalence_class_split",
                     {{"z_re", z.real()}, {"z_im", z.imag()}, {"L", L}, {"xi", x}}, lhs, rhs,
                     soft_relative(lhs, rhs), tol);
}

/// theta3(z/L, i/L) = (1/xi) sum_{j<xi} theta3(z/(xi L) + j/xi, i/(L xi^2))
inline ResidualReport verify_complementary_split(Complex z, double L, int xi, double tol = 1e-9,
                                                 const TruncationPolicy& policy = {}) {
  IdentityParams p{z, 1.0, 1, 0, L, 1.0, xi};
  p.validate();
  const double x = xi;
  const Complex lhs = theta3(z / L, Complex{0.0, 1.0 / L}, policy);
  CompensatedSum sum;
  for (int j = 0; j < xi; ++j) sum += theta3(z / (x * L) + j / x, Complex{0.0, 1.0 / (L * x * x)}, policy);
  const Complex rhs = sum.value() / x;
  return make_report("complementary_split",
                     {{"z_re", z.real()}, {"z_im", z.imag()}, {"L", L}, {"xi", x}}, lhs, rhs,
                     soft_relative(lhs, rhs), tol);
}

/// theta3(z xi/L, i xi^2/L) = (1/xi^2) sum_{j,j'<xi} theta3(z/(xi L) + j'/xi + j/xi^2, i/(L xi^2))
inline ResidualReport verify_combined_inversion(Complex z, double L, int xi, double tol = 1e-9,
                                                const TruncationPolicy& policy = {}) {
  IdentityParams p{z, 1.0, 1, 0, L, 1.0, xi};
  p.validate();
  const double x = xi;
  const Complex lhs = theta3(z * x / L, Complex{0.0, x * x / L}, policy);
  CompensatedSum sum;
  for (int j = 0; j < xi; ++j)
    for (int jp = 0; jp < xi; ++jp)
      sum += theta3(z / (x * L) + jp / x + j / (x * x), Complex{0.0, 1.0 / (L * x * x)}, policy);
  const Complex rhs = sum.value() / (x * x);
  return make_report("combined_inversion",
                     {{"z_re", z.real()}, {"z_im", z.imag()}, {"L", L}, {"xi", x}}, lhs, rhs,
                     soft_relative(lhs, rhs), tol);
}

/// theta3(2z/L, 4i/L) = (1/2)[theta3(z/L, i/L) + theta4(z/L, i/L)]
inline ResidualReport verify_duplication(Complex z, double L, double tol = 1e-9,
                                         const TruncationPolicy& policy = {}) {
  const Complex tau{0.0, 1.0 / L};
  const Complex lhs = theta3(2.0 * z / L, 4.0 * tau, policy);
  const Complex rhs = 0.5 * (theta3(z / L, tau, policy) + theta4(z / L, tau, policy));
  return make_report("duplication", {{"z_re", z.real()}, {"z_im", z.imag()}, {"L", L}}, lhs, rhs,
                     soft_relative(lhs, rhs), tol);
}

/// theta3(z/L, i/L) = (1/2)[theta3(z/(2L), i/(4L)) + theta4(z/(2L), i/(4L))]
inline ResidualReport verify_complementary_duplication(Complex z, double L, double tol = 1e-9,
                                                       const TruncationPolicy& policy = {}) {
  const Complex lhs = theta3(z / L, Complex{0.0, 1.0 / L}, policy);
  const Complex quarter{0.0, 1.0 / (4.0 * L)};
  const Complex rhs = 0.5 * (theta3(z / (2.0 * L), quarter, policy) + theta4(z / (2.0 * L), quarter, policy));
  return make_report("complementary_duplication", {{"z_re", z.real()}, {"z_im", z.imag()}, {"L", L}},
                     lhs, rhs, soft_relative(lhs, rhs), tol);
}

/// Default parameter grid for the identity suite.
struct IdentityGrid {
  std::vector<Complex> z{0.0, 0.1, -0.1, 0.37, -0.37};
  std::vector<int> N{1, 2, 3, 5, 8, 12};
  std::vector<double> xi{0.5, 1.0, 1.3, 2.0};
  std::vector<double> L{0.8, 1.0, 2.5};
  std::vector<int> xi_int{1, 2, 3, 5};
};

struct IdentitySuiteResult {
  std::vector<ResidualReport> reports;
  std::vector<ConstantFit> fits;

  bool pass() const {
    for (const auto& r : reports)
      if (!r.pass) return false;
    for (const auto& f : fits)
      if (!f.pass) return false;
    return true;
  }
  double max_residual(const std::string& name) const {
    double m = 0.0;
    for (const auto& r : reports)
      if (r.name == name) m = std::max(m, r.residual);
    return m;
  }
};

inline const std::vector<std::string>& identity_suite_names() {
  static const std::vector<std::string> names{
      "fractional_shift",  "inverse_relation",    "width_inversion_dft",       "k0_collapse",
      "equivalence_class_split", "complementary_split", "combined_inversion", "duplication",
      "complementary_duplication"};
  return names;
}

/// Runs one named identity (or "all") over the grid.
inline IdentitySuiteResult run_identity_suite(const std::string& suite, double tol = 1e-9,
                                              const IdentityGrid& grid = {},
                                              const TruncationPolicy& policy = {}) {
  const bool all = suite == "all";
  bool known = all;
  for (const auto& n : identity_suite_names()) known = known || n == suite;
  if (!known) throw DomainError("unknown identity suite '" + suite + "'");
  auto wants = [&](const char* name) { return all || suite == name; };

  IdentitySuiteResult out;
  for (int N : grid.N)
    for (double xi : grid.xi) {
      if (wants("fractional_shift"))
        for (Complex z : grid.z)
          for (int k = 0; k < N; ++k)
            out.reports.push_back(verify_fractional_shift({z, xi, N, k}, tol, policy));
      if (wants("inverse_relation")) {
        for (Complex z : grid.z)
          for (int k = 0; k < N; ++k)
            out.reports.push_back(verify_inverse_relation({z, xi, N, k}, tol, policy));
        out.fits.push_back(fit_inverse_relation_constant(grid.z, N, xi, tol, policy));
      }
      if (wants("width_inversion_dft")) {
        for (int k = 0; k < N; ++k) out.reports.push_back(verify_width_inversion_dft(k, N, xi, tol, policy));
        out.fits.push_back(fit_width_inversion_constant(N, xi, tol, policy));
      }
      if (wants("k0_collapse")) {
        for (Complex z : grid.z) out.reports.push_back(verify_k0_collapse(z, N, xi, tol, policy));
        out.fits.push_back(fit_k0_collapse_constant(grid.z, N, xi, tol, policy));
      }
    }
  for (double L : grid.L)
    for (Complex z : grid.z) {
      for (int x : grid.xi_int) {
        if (wants("equivalence_class_split"))
          out.reports.push_back(verify_equivalence_class_split(z, L, x, tol, policy));
        if (wants("complementary_split"))
          out.reports.push_back(verify_complementary_split(z, L, x, tol, policy));
        if (wants("combined_inversion"))
          out.reports.push_back(verify_combined_inversion(z, L, x, tol, policy));
      }
      if (wants("duplication")) out.reports.push_back(verify_duplication(z, L, tol, policy));
      if (wants("complementary_duplication"))
        out.reports.push_back(verify_complementary_duplication(z, L, tol, policy));
    }
  return out;
}

}  // namespace thetadft
