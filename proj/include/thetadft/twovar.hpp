#pragma once

// Two-variable states
//
//   F_{m,n}(j, l) = sum_k f_m(k) f_n(k - l) exp(2 pi i j k / N),   k - l taken mod N
//
// and the properties claimed for them. The printed conjugation and |F|^2
// relations are ambiguous, so each check evaluates a fixed list of readings
// (the printed one first) and names every reading that holds.

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "thetadft/eigenstates.hpp"
#include "thetadft/errors.hpp"
#include "thetadft/gram.hpp"
#include "thetadft/residual.hpp"

namespace thetadft {

struct TwoVarState {
  int N = 0;
  int m = 0;
  int n = 0;
  std::vector<Complex> values;  // row-major, (j, l)
  double norm_m = 0.0;          // |f_m|
  double norm_n = 0.0;          // |f_n|

  Complex operator()(long long j, long long l) const {
    return values[static_cast<size_t>(detail::mod(j, N) * N + detail::mod(l, N))];
  }
  /// |F(j, l)|^2 grid.
  std::vector<double> intensity() const {
    std::vector<double> out(values.size());
    for (size_t i = 0; i < values.size(); ++i) out[i] = std::norm(values[i]);
    return out;
  }
};

struct VariantResult {
  std::string name;
  double residual = 0.0;
  bool holds = false;
};

/// Readings of one ambiguous relation, in fixed order, literal first.
struct VariantTable {
  std::string check;
  int N = 0, m = 0, n = 0;
  double tol = 0.0;
  std::vector<VariantResult> variants;

  bool literal_holds() const { return !variants.empty() && variants.front().holds; }
  std::optional<std::string> first_holding() const {
    for (const auto& v : variants)
      if (v.holds) return v.name;
    return std::nullopt;
  }
};

inline TwoVarState two_var_state(int N, int m, int n, const TruncationPolicy& policy = {}) {
  if (N < 1 || m < 0 || n < 0) throw DomainError("two_var_state: need N >= 1, m, n >= 0");
  const StateVector fm = eigenstate_direct({N, m, 1.0}, policy);
  const StateVector fn = eigenstate_direct({N, n, 1.0}, policy);
  if (fm.degenerate() || fn.degenerate())
    throw DegenerateStateError("two_var_state: degenerate input state for N=" + std::to_string(N));
  const auto roots = detail::roots_of_unity(N);
  TwoVarState s{N, m, n, std::vector<Complex>(static_cast<size_t>(N) * static_cast<size_t>(N)),
                fm.norm(), fn.norm()};
  for (int j = 0; j < N; ++j)
    for (int l = 0; l < N; ++l) {
      CompensatedSum sum;
      for (int k = 0; k < N; ++k)
        sum += fm[static_cast<size_t>(k)] * fn[static_cast<size_t>(detail::mod(k - l, N))] *
               roots[static_cast<size_t>(detail::mod(1LL * j * k, N))];
      s.values[static_cast<size_t>(j * N + l)] = sum.value();
    }
  return s;
}

/// |sum |F|^2 - N |f_m|^2 |f_n|^2| / (N |f_m|^2 |f_n|^2).
inline ResidualReport parseval_residual(const TwoVarState& s, double tol = 1e-9) {
  double total = 0.0;
  for (const Complex& v : s.values) total += std::norm(v);
  const double expected = s.N * s.norm_m * s.norm_m * s.norm_n * s.norm_n;
  return make_report("twovar_parseval", {{"N", s.N}, {"m", s.m}, {"n", s.n}}, Complex{total},
                     Complex{expected}, relative(total, expected), tol);
}

/// Readings of conj(F(j,l)) = sign * F(j, +-l) * phase, residuals scaled by max |F|:
///   phase in {exp(+2 pi i jl/N), exp(-2 pi i jl/N), 1}, index in {l, -l},
///   sign in {1, (-1)^(m+n)}. The printed relation is (+, l, 1).
inline VariantTable conjugation_residual(const TwoVarState& s, double tol = 1e-9) {
  VariantTable table{"conjugation", s.N, s.m, s.n, tol, {}};
  double scale = 0.0;
  for (const Complex& v : s.values) scale = std::max(scale, std::abs(v));
  const auto roots = detail::roots_of_unity(s.N);
  const double parity_sign = ((s.m + s.n) % 2 == 0) ? 1.0 : -1.0;
  struct Phase { int dir; const char* label; };
  const Phase phases[] = {{1, "exp(+2pi i jl/N)"}, {-1, "exp(-2pi i jl/N)"}, {0, "1"}};
  for (const Phase& ph : phases)
    for (int index_dir : {1, -1})
      for (bool signed_parity : {false, true}) {
        double worst = 0.0;
        for (int j = 0; j < s.N; ++j)
          for (int l = 0; l < s.N; ++l) {
            Complex rhs = s(j, index_dir * l);
            if (ph.dir != 0) rhs *= roots[static_cast<size_t>(detail::mod(1LL * ph.dir * j * l, s.N))];
            if (signed_parity) rhs *= parity_sign;
            worst = std::max(worst, std::abs(std::conj(s(j, l)) - rhs));
          }
        VariantResult v;
        v.name = std::string("conj F(j,l) = ") + (signed_parity ? "(-1)^(m+n) " : "") +
                 (index_dir == 1 ? "F(j,l)" : "F(j,-l)") + " * " + ph.label;
        v.residual = scale > 0 ? worst / scale : 0.0;
        v.holds = v.residual <= tol;
        table.variants.push_back(std::move(v));
      }
  return table;
}

/// Readings of the |F|^2 relation, residuals scaled by max |F|^2:
///   literal:   |F(j,l)|^2 = ((-i)^(m+n)/N) sum_ab |F(a,b)|^2 exp(2 pi i (m a + n b)/N)
///   dft2d(lambda): |F(j,l)|^2 = lambda (1/N) sum_ab |F(a,b)|^2 exp(2 pi i (j a + l b)/N)
///   for lambda = i^(m+n), (-i)^(m+n), 1.
inline VariantTable eigen2d_residual(const TwoVarState& s, double tol = 1e-8) {
  VariantTable table{"eigen2d", s.N, s.m, s.n, tol, {}};
  const int N = s.N;
  const std::vector<double> a2 = s.intensity();
  const double scale = a2.empty() ? 0.0 : *std::max_element(a2.begin(), a2.end());
  const auto roots = detail::roots_of_unity(N);
  auto at = [&](int j, int l) { return a2[static_cast<size_t>(j * N + l)]; };

  std::vector<Complex> transformed(a2.size());
  for (int p = 0; p < N; ++p)
    for (int q = 0; q < N; ++q) {
      CompensatedSum sum;
      for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b)
          sum += at(a, b) * roots[static_cast<size_t>(detail::mod(1LL * p * a + 1LL * q * b, N))];
      transformed[static_cast<size_t>(p * N + q)] = sum.value() / static_cast<double>(N);
    }

  auto finish = [&](std::string name, double worst) {
    VariantResult v{std::move(name), scale > 0 ? worst / scale : 0.0, false};
    v.holds = v.residual <= tol;
    table.variants.push_back(std::move(v));
  };

  {
    CompensatedSum sum;
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b)
        sum += at(a, b) * roots[static_cast<size_t>(detail::mod(1LL * s.m * a + 1LL * s.n * b, N))];
    const Complex rhs = detail::i_power(-(s.m + s.n)) * sum.value() / static_cast<double>(N);
    double worst = 0.0;
    for (int j = 0; j < N; ++j)
      for (int l = 0; l < N; ++l) worst = std::max(worst, std::abs(at(j, l) - rhs));
    finish("literal: |F|^2 = ((-i)^(m+n)/N) sum |F(a,b)|^2 exp(2pi i(ma+nb)/N)", worst);
  }
  struct Eigenvalue { Complex value; const char* label; };
  const Eigenvalue eigenvalues[] = {{detail::i_power(s.m + s.n), "i^(m+n)"},
                                    {detail::i_power(-(s.m + s.n)), "(-i)^(m+n)"},
                                    {Complex{1.0, 0.0}, "1"}};
  for (const Eigenvalue& ev : eigenvalues) {
    double worst = 0.0;
    for (int j = 0; j < N; ++j)
      for (int l = 0; l < N; ++l)
        worst = std::max(worst, std::abs(at(j, l) - ev.value * transformed[static_cast<size_t>(j * N + l)]));
    finish(std::string("dft2d: |F|^2 = ") + ev.label + " * DFT2(|F|^2)", worst);
  }
  return table;
}

/// sum_{j,l} |F_{m,n}(j,l)|^2 |F_{m',n'}(j,l)|^2.
inline Complex overlap_sum(int N, int m, int n, int m2, int n2, const TruncationPolicy& policy = {}) {
  const std::vector<double> a = two_var_state(N, m, n, policy).intensity();
  const std::vector<double> b = two_var_state(N, m2, n2, policy).intensity();
  CompensatedSum sum;
  for (size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum.value();
}

/// overlap_sum / sqrt(sum |F|^4 sum |F'|^4), in [0, 1].
inline double overlap_sum_normalized(int N, int m, int n, int m2, int n2,
                                     const TruncationPolicy& policy = {}) {
  const Complex cross = overlap_sum(N, m, n, m2, n2, policy);
  const double self_a = overlap_sum(N, m, n, m, n, policy).real();
  const double self_b = overlap_sum(N, m2, n2, m2, n2, policy).real();
  return std::abs(cross) / std::sqrt(self_a * self_b);
}

/// sum_{j,l} conj(F_{m,n}) F_{m',n'} / (N |f_m||f_n||f_m'||f_n'|); equals the
/// product of normalized Gram entries (f_m, f_m')(f_n, f_n').
inline Complex overlap_bilinear_normalized(int N, int m, int n, int m2, int n2,
                                           const TruncationPolicy& policy = {}) {
  const TwoVarState a = two_var_state(N, m, n, policy);
  const TwoVarState b = two_var_state(N, m2, n2, policy);
  CompensatedSum sum;
  for (size_t i = 0; i < a.values.size(); ++i) sum += std::conj(a.values[i]) * b.values[i];
  return sum.value() / (N * a.norm_m * a.norm_n * b.norm_m * b.norm_n);
}

}  // namespace thetadft
