#pragma once

// Inner products (f_n, f_m) = sum_j conj(f_n(j)) f_m(j), directly and through
// the theta-function closed forms. With N = 2h + k, u = eps/pi, tau = 2i/N:
//
//   k = 0:  (f_n, f_m) = sqrt(2/N) d^n_t d^m_s [ theta3(iu(t+s), tau) theta3(u(t-s), tau) e^{-2ts} ]
//   k = 1:  subtract (1/2) theta4(iu(t+s)/2, i/2N) theta4(u(t-s)/2, i/2N) inside the bracket
//
// all derivatives at t = s = 0.

#include <algorithm>
#include <cmath>
#include <complex>
#include <future>
#include <string>
#include <thread>
#include <vector>

#include "thetadft/eigenstates.hpp"
#include "thetadft/errors.hpp"
#include "thetadft/polyseries.hpp"
#include "thetadft/theta.hpp"

namespace thetadft {

/// Highest n + m accepted by gram_closed_form.
inline constexpr int kMaxClosedFormOrder = 16;

/// Which constants the closed form uses. `literal` keeps the printed prefactor
/// pi^(3/2)/N and the -2 weight on the theta4 product; it does not reproduce the
/// direct sums and exists only for comparison output.
enum class ClosedFormReading { resolved, literal };

inline Complex inner_product(std::span<const Complex> a, std::span<const Complex> b) {
  CompensatedSum sum;
  for (size_t j = 0; j < a.size(); ++j) sum += std::conj(a[j]) * b[j];
  return sum.value();
}

inline Complex inner_product(const StateVector& a, const StateVector& b) {
  return inner_product(std::span<const Complex>(a.values), std::span<const Complex>(b.values));
}

inline Complex inner_product_direct(int N, int n, int m, const TruncationPolicy& policy = {}) {
  const StateVector fn = eigenstate_direct({N, n, 1.0}, policy);
  const StateVector fm = eigenstate_direct({N, m, 1.0}, policy);
  if (fn.degenerate() || fm.degenerate())
    throw DegenerateStateError("inner_product_direct: degenerate state for N=" + std::to_string(N) +
                               " n=" + std::to_string(fn.degenerate() ? n : m));
  return inner_product(fn, fm);
}

inline Complex gram_closed_form(int N, int n, int m,
                                ClosedFormReading reading = ClosedFormReading::resolved,
                                const TruncationPolicy& policy = {}) {
  if (N < 1) throw DomainError("gram_closed_form: N must be >= 1");
  if (n < 0 || m < 0) throw DomainError("gram_closed_form: negative index");
  if (n + m > kMaxClosedFormOrder)
    throw UnsupportedOrderError("gram_closed_form: n + m must be <= 16");
  const int order = n + m;
  const int parity = N % 2;
  const double eps = std::sqrt(2.0 * kPi / N);
  const double u = eps / kPi;

  const TaylorSeries1 theta3_u = theta_taylor(0.0, 1.0, Complex{0.0, 2.0 / N}, order, policy);
  TaylorSeries2 bracket = series_mul(substitute_linear(theta3_u, kI * u, kI * u, n, m),
                                     substitute_linear(theta3_u, u, -u, n, m));
  if (parity == 1) {
    const TaylorSeries1 theta4_u =
        theta_taylor(0.5, 1.0, Complex{0.0, 1.0 / (2.0 * N)}, order, policy);
    const TaylorSeries2 correction =
        series_mul(substitute_linear(theta4_u, kI * u / 2.0, kI * u / 2.0, n, m),
                   substitute_linear(theta4_u, u / 2.0, -u / 2.0, n, m));
    const double weight = reading == ClosedFormReading::resolved ? 0.5 : 2.0;
    for (int p = 0; p <= n; ++p)
      for (int q = 0; q <= m; ++q) bracket(p, q) -= weight * correction(p, q);
  }
  const TaylorSeries2 full = series_mul(bracket, exp_bilinear(-2.0, n, m));
  const double prefactor = reading == ClosedFormReading::resolved ? std::sqrt(2.0 / N)
                                                                  : std::pow(kPi, 1.5) / N;
  return prefactor * extract_mixed_derivative(full, n, m);
}

/// (f_4, f_0) for even N from theta3 derivatives at the origin:
///   sqrt(2/N) (eps/pi)^4 [2 theta3 theta3'''' - 6 (theta3'')^2] at (0, 2i/N).
/// Each t-derivative acting on theta3(eps t / pi, .) contributes one factor
/// eps/pi to the z-derivative, hence (eps/pi)^4.
struct F4F0Closed {
  Complex value;              // agrees with the direct sum
  Complex literal;            // pi^(3/2)/N [ ... ], no chain-rule factor
  double chain_rule_factor;   // (eps/pi)^4
};

inline F4F0Closed f4_f0_closed(int N, const TruncationPolicy& policy = {}) {
  if (N < 2 || N % 2 != 0) throw DomainError("f4_f0_closed: N must be even");
  const Complex tau{0.0, 2.0 / N};
  const ThetaArgs origin{0.0, tau, policy};
  const Complex t0 = theta3_z_derivative(origin, 0);
  const Complex t2 = theta3_z_derivative(origin, 2);
  const Complex t4 = theta3_z_derivative(origin, 4);
  const Complex bracket = 2.0 * t0 * t4 - 6.0 * t2 * t2;
  const double eps = std::sqrt(2.0 * kPi / N);
  const double chain = std::pow(eps / kPi, 4);
  return {std::sqrt(2.0 / N) * chain * bracket, std::pow(kPi, 1.5) / N * bracket, chain};
}

struct GramReport {
  int N = 0;
  int k = 0;        // N mod 2
  int n_max = 0;    // indices 0..n_max, n_max <= N - 1
  std::vector<Complex> normalized_gram;  // row-major (n_max+1)^2, (f_n,f_m)/(|f_n||f_m|)
  std::vector<bool> degenerate;
  std::vector<double> norms;
  double max_off_mod4 = 0.0;          // max |entry|, n != m (mod 4)
  double conjecture_violation = 0.0;  // max |entry|, n == m (mod 4), n != m
  int violation_n = -1;
  int violation_m = -1;
  double closed_form_max_error = 0.0;  // max |closed - direct| / (|f_n||f_m|), n + m <= 16
  int closed_form_cells = 0;

  int dim() const { return n_max + 1; }
  Complex entry(int n, int m) const {
    return normalized_gram.at(static_cast<size_t>(n * dim() + m));
  }
  bool cell_scored(int n, int m) const {
    return !degenerate.at(static_cast<size_t>(n)) && !degenerate.at(static_cast<size_t>(m));
  }
};

/// Normalized Gram matrix of {f_n}, n = 0..min(n_max, N-1), with conjecture metrics.
inline GramReport gram_report(int N, int n_max, bool cross_check = true,
                              const TruncationPolicy& policy = {}) {
  if (N < 1) throw DomainError("gram_report: N must be >= 1");
  if (n_max < 0 || n_max > 12) throw DomainError("gram_report: n_max must be in [0, 12]");
  GramReport r;
  r.N = N;
  r.k = N % 2;
  r.n_max = std::min(n_max, N - 1);
  const int dim = r.dim();
  std::vector<StateVector> states;
  for (int n = 0; n < dim; ++n) {
    states.push_back(eigenstate_direct({N, n, 1.0}, policy));
    r.norms.push_back(states.back().norm());
    r.degenerate.push_back(states.back().degenerate());
  }
  r.normalized_gram.assign(static_cast<size_t>(dim * dim), Complex{});
  for (int n = 0; n < dim; ++n)
    for (int m = 0; m < dim; ++m) {
      if (!r.cell_scored(n, m)) continue;
      const double scale = r.norms[static_cast<size_t>(n)] * r.norms[static_cast<size_t>(m)];
      const Complex direct = inner_product(states[static_cast<size_t>(n)], states[static_cast<size_t>(m)]);
      const Complex value = direct / scale;
      r.normalized_gram[static_cast<size_t>(n * dim + m)] = value;
      if (n == m) continue;
      const double mag = std::abs(value);
      if ((n - m) % 4 != 0) {
        r.max_off_mod4 = std::max(r.max_off_mod4, mag);
      } else if (mag > r.conjecture_violation) {
        r.conjecture_violation = mag;
        r.violation_n = n;
        r.violation_m = m;
      }
    }
  if (cross_check) {
    for (int n = 0; n < dim; ++n)
      for (int m = 0; m < dim; ++m) {
        if (!r.cell_scored(n, m) || n + m > kMaxClosedFormOrder) continue;
        const double scale = r.norms[static_cast<size_t>(n)] * r.norms[static_cast<size_t>(m)];
        const Complex closed = gram_closed_form(N, n, m, ClosedFormReading::resolved, policy);
        const Complex direct = r.entry(n, m) * scale;
        r.closed_form_max_error = std::max(r.closed_form_max_error, std::abs(closed - direct) / scale);
        ++r.closed_form_cells;
      }
  }
  return r;
}

/// gram_report for every N in [N_min, N_max]; sorted by N regardless of threading.
inline std::vector<GramReport> conjecture_sweep(int N_min, int N_max, int n_max,
                                                bool cross_check = true,
                                                const TruncationPolicy& policy = {}) {
  if (N_min < 1 || N_max < N_min) throw DomainError("conjecture_sweep: need 1 <= N_min <= N_max");
  if (n_max < 0 || n_max > 12) throw DomainError("conjecture_sweep: n_max must be in [0, 12]");
  const int count = N_max - N_min + 1;
  std::vector<GramReport> out(static_cast<size_t>(count));
  const int workers = std::max(1, std::min<int>(count, static_cast<int>(std::thread::hardware_concurrency())));
  std::vector<std::future<void>> tasks;
  for (int w = 0; w < workers; ++w)
    tasks.push_back(std::async(std::launch::async, [&, w] {
      for (int i = w; i < count; i += workers)
        out[static_cast<size_t>(i)] = gram_report(N_min + i, n_max, cross_check, policy);
    }));
  for (auto& t : tasks) t.get();
  return out;
}

}  // namespace thetadft
