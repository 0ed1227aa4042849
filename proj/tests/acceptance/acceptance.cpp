// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
//   acceptance <path-to-thetadft-cli> <golden-dir>
//
// Every tolerance is a named constant below. Criteria that fail here fail
// because the measured numbers disagree with the stated target; nothing is
// loosened to make them pass.

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "thetadft/thetadft.hpp"

using namespace thetadft;

namespace {

constexpr double kEigenTol = 1e-9;          // 1, 2
constexpr double kNormFloor = 1e-8;         // 1: states below this norm are not scored
constexpr double kRepresentationTol = 1e-9; // 3
constexpr double kOrthogonalityTol = 1e-10; // 4, 6 zero cells
constexpr double kF4F0Low = 1e-7;           // 5
constexpr double kF4F0High = 1e-5;          // 5
constexpr double kViolationFloor = 1e-8;    // 5
constexpr double kLargeNTol = 1e-10;        // 5
constexpr double kClosedFormTol = 1e-8;     // 5, 6
constexpr double kIdentityTol = 1e-9;       // 7
constexpr double kThetaTol = 1e-11;         // 8
constexpr double kParsevalTol = 1e-9;       // 9
constexpr double kOverlapTol = 1e-9;        // 9
constexpr double kVariantTol = 1e-8;        // 9
constexpr double kContinuumTol = 1e-8;      // 10

int failures = 0;

void verdict(int id, bool ok, const std::string& detail) {
  std::printf("criterion %2d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double relative_norm(const StateVector& a, const StateVector& b) {
  return l2_distance(a.values, b.values) / std::max(a.norm(), b.norm());
}

void eigenrelation() {
  double worst = 0.0;
  int scored = 0, skipped = 0;
  for (int N = 1; N <= 32; ++N)
    for (int n = 0; n <= std::min(N - 1, 10); ++n) {
      const auto r = eigen_residual({N, n, 1.0}, kEigenTol);
      if (r.degenerate || r.lhs.real() <= kNormFloor) {
        ++skipped;
        continue;
      }
      ++scored;
      worst = std::max(worst, r.residual);
    }
  verdict(1, worst <= kEigenTol,
          fmt("dft f_n = i^n f_n: max residual %.2e over %d states (%d below norm floor), tol %.0e", worst,
              scored, skipped, kEigenTol));
}

void width_eigenrelation() {
  double worst = 0.0, literal_worst = 0.0;
  int scored = 0, degenerate = 0;
  for (int N : {4, 8, 15})
    for (int n = 0; n <= 6; ++n)
      for (double xi : {0.5, 2.0}) {
        const auto r = eigen_residual({N, n, xi}, kEigenTol);
        if (r.degenerate) {
          ++degenerate;
          continue;
        }
        ++scored;
        worst = std::max(worst, r.residual);
        for (const auto& [k, v] : r.params)
          if (k == "mg_literal") literal_worst = std::max(literal_worst, v);
      }
  verdict(2, worst <= kEigenTol && degenerate == 0,
          fmt("dft f_n(.,xi) = i^n f_n(.,1/xi), states scaled sqrt(xi/N): max residual %.2e over %d cases "
              "(%d degenerate); printed normalization leaves %.2e",
              worst, scored, degenerate, literal_worst));
}

void representations() {
  double worst = 0.0;
  int scored = 0, degenerate = 0;
  for (int N = 1; N <= 16; ++N)
    for (int n = 0; n <= 8; ++n) {
      const auto d = eigenstate_direct({N, n});
      if (d.degenerate()) {
        ++degenerate;
        continue;
      }
      ++scored;
      worst = std::max({worst, relative_norm(d, eigenstate_dual({N, n})),
                        relative_norm(d, eigenstate_theta_taylor({N, n}))});
    }
  verdict(3, worst <= kRepresentationTol,
          fmt("comb vs dual vs theta-Taylor: max norm-relative gap %.2e over %d states (%d degenerate skipped)",
              worst, scored, degenerate));
}

void mod4_orthogonality() {
  double worst = 0.0;
  for (const auto& g : conjecture_sweep(1, 20, 12, false)) worst = std::max(worst, g.max_off_mod4);
  verdict(4, worst <= kOrthogonalityTol,
          fmt("max normalized |(f_n,f_m)|, n != m mod 4, N <= 20, n,m <= min(N-1,12): %.2e", worst));
}

void conjecture_failure() {
  const auto sweep = conjecture_sweep(5, 10, 4, false);
  const double at10 = std::abs(sweep.back().entry(4, 0));
  double peak = 0.0;
  int peak_N = 0;
  for (const auto& g : sweep)
    if (std::abs(g.entry(4, 0)) > peak) {
      peak = std::abs(g.entry(4, 0));
      peak_N = g.N;
    }
  const auto g50 = gram_report(50, 4, false);
  const double at50 = std::abs(g50.entry(4, 0));
  double closed_worst = 0.0;
  for (int N = 6; N <= 16; N += 2) {
    const Complex direct = inner_product_direct(N, 4, 0);
    closed_worst = std::max(closed_worst, std::abs(f4_f0_closed(N).value - direct) / std::abs(direct));
  }
  const bool in_band = at10 >= kF4F0Low && at10 <= kF4F0High;
  const bool significant = peak > kViolationFloor;
  const bool large_n = at50 <= kLargeNTol;
  const bool closed = closed_worst <= kClosedFormTol;
  verdict(5, in_band && significant && large_n && closed,
          fmt("|(f4,f0)| normalized: N=10 %.3e (band [%.0e,%.0e] %s); max over N in [5,10] %.2e at N=%d (%s); "
              "N=50 %.2e (%s); closed form vs direct, even N in [6,16] %.2e (%s)",
              at10, kF4F0Low, kF4F0High, in_band ? "in" : "OUT", peak, peak_N, significant ? "ok" : "FAIL",
              at50, large_n ? "ok" : "FAIL", closed_worst, closed ? "ok" : "FAIL"));
}

void closed_form_gram() {
  double same_worst = 0.0, zero_worst = 0.0, odd_row = 0.0, two_zero = 0.0;
  int cells = 0;
  for (int N = 1; N <= 12; ++N)
    for (int n = 0; n <= 8; ++n)
      for (int m = 0; n + m <= 8; ++m) {
        const auto fn = eigenstate_direct({N, n}), fm = eigenstate_direct({N, m});
        if (fn.degenerate() || fm.degenerate()) continue;
        ++cells;
        const double scale = fn.norm() * fm.norm();
        const Complex direct = inner_product(fn, fm);
        const Complex closed = gram_closed_form(N, n, m);
        if ((n - m) % 4 == 0) {
          same_worst = std::max(same_worst, std::abs(closed - direct) / std::abs(direct));
        } else {
          const double z = std::max(std::abs(closed), std::abs(direct)) / scale;
          zero_worst = std::max(zero_worst, z);
          if (n % 2 == 1 && m == 0 && N % 2 == 0) odd_row = std::max(odd_row, z);
          if (n == 2 && m == 0 && N % 2 == 0) two_zero = std::max(two_zero, z);
        }
      }
  verdict(6, same_worst <= kClosedFormTol && zero_worst <= kOrthogonalityTol,
          fmt("%d cells, N <= 12, n+m <= 8: same-class relative gap %.2e; zero cells %.2e (odd rows %.2e, "
              "(f2,f0) even N %.2e)",
              cells, same_worst, zero_worst, odd_row, two_zero));
}

void identity_suite() {
  const auto suite = run_identity_suite("all", kIdentityTol);
  double worst = 0.0;
  for (const auto& r : suite.reports) worst = std::max(worst, r.residual);
  double fit_worst = 0.0, literal_best = 1e300;
  int flagged = 0;
  for (const auto& f : suite.fits) {
    fit_worst = std::max({fit_worst, f.fitted_residual, f.fit_vs_resolved});
    const bool is_flagged = f.identity == "inverse_relation" || f.identity == "k0_collapse";
    flagged += is_flagged;
    // at N = 1 the printed and resolved constants coincide, so only N >= 2 says anything
    double n_points = 0.0;
    for (const auto& [key, value] : f.params)
      if (key == "N") n_points = value;
    if (is_flagged && n_points >= 2) literal_best = std::min(literal_best, f.literal_residual);
  }
  verdict(7, suite.pass() && flagged > 0,
          fmt("%zu residual checks, max %.2e; %zu constant fits (%d for the two flagged displays), worst fit "
              "%.2e; printed constants leave >= %.2e for N >= 2",
              suite.reports.size(), worst, suite.fits.size(), flagged, fit_worst, literal_best));
}

void theta_core() {
  double period = 0.0, even = 0.0, quasi = 0.0, modular = 0.0, gauss = 0.0, sound = 0.0;
  auto rel = [](Complex a, Complex b) { return std::abs(a - b) / std::abs(a); };
  for (double tre : {0.0, 0.3, -0.45})
    for (double tim : {0.1, 0.5, 1.0, 2.0, 5.0})
      for (double zr : {-0.8, -0.2, 0.0, 0.35, 0.9})
        for (double zi : {-0.3, 0.0, 0.4}) {
          const Complex z{zr, zi}, tau{tre, tim};
          const Complex v = theta3(z, tau);
          period = std::max(period, rel(v, theta3(z + 1.0, tau)));
          even = std::max(even, rel(v, theta3(-z, tau)));
          for (int n = -3; n <= 3; ++n) {
            const Complex shifted = z + 1.0 + double(n) * tau;
            const Complex factor = std::exp(-kI * kPi * tau * double(n * n) - 2.0 * kI * kPi * double(n) * z);
            quasi = std::max(quasi, rel(theta3(shifted, tau), factor * v));
          }
          TruncationPolicy doubled;
          doubled.max_terms *= 2;
          sound = std::max(sound, std::abs(theta3(z, tau, doubled) - v));
        }
  for (double t : {0.1, 0.17, 0.4, 1.0, 2.3, 6.0, 10.0})
    for (double r : {0.0, 0.5, 1.2, 2.0})
      for (double ang : {0.0, 0.7, 1.9, 3.1}) modular = std::max(modular, modular_transform_check(std::polar(r, ang), t).residual);
  for (double L : {0.5, 1.0, 2.5})
    for (double sigma : {0.5, 1.0, 2.0, 4.0})
      for (double z : {-0.9, 0.0, 0.3, 1.7}) gauss = std::max(gauss, gaussian_sum_check(z, L, sigma).residual);
  const bool ok = std::max({period, even, quasi, modular, gauss}) <= kThetaTol && sound <= TruncationPolicy{}.tol;
  verdict(8, ok,
          fmt("relative: period %.1e, evenness %.1e, quasi-period %.1e, modular %.1e, Gaussian sum %.1e; "
              "max_terms doubling moves values by %.1e",
              period, even, quasi, modular, gauss, sound));
}

bool same_tables(const VariantTable& a, const VariantTable& b) {
  if (a.variants.size() != b.variants.size()) return false;
  for (size_t i = 0; i < a.variants.size(); ++i)
    if (a.variants[i].name != b.variants[i].name || a.variants[i].residual != b.variants[i].residual)
      return false;
  return true;
}

void two_variable() {
  double parseval = 0.0, overlap = 0.0, bilinear = 0.0;
  int pairs = 0, conj_unresolved = 0, eig_unresolved = 0, eig_unresolved_equal = 0, states = 0;
  bool deterministic = true;
  std::vector<std::array<int, 2>> usable;
  for (int N = 1; N <= 8; ++N) {
    usable.clear();
    for (int m = 0; m <= 3; ++m)
      for (int n = 0; n <= 3; ++n)
        if (!eigenstate_direct({N, m}).degenerate() && !eigenstate_direct({N, n}).degenerate())
          usable.push_back({m, n});
    for (auto [m, n] : usable) {
      const auto s = two_var_state(N, m, n);
      ++states;
      parseval = std::max(parseval, parseval_residual(s, kParsevalTol).residual);
      const auto c1 = conjugation_residual(s, kVariantTol), c2 = conjugation_residual(s, kVariantTol);
      const auto e1 = eigen2d_residual(s, kVariantTol), e2 = eigen2d_residual(s, kVariantTol);
      deterministic = deterministic && same_tables(c1, c2) && same_tables(e1, e2);
      conj_unresolved += !c1.first_holding().has_value();
      if (!e1.first_holding().has_value()) {
        ++eig_unresolved;
        eig_unresolved_equal += m == n;
      }
    }
    for (auto [m, n] : usable)
      for (auto [m2, n2] : usable) {
        if ((m + n - m2 - n2) % 4 == 0) continue;
        ++pairs;
        overlap = std::max(overlap, overlap_sum_normalized(N, m, n, m2, n2));
        bilinear = std::max(bilinear, std::abs(overlap_bilinear_normalized(N, m, n, m2, n2)));
      }
  }
  const bool ok = parseval <= kParsevalTol && overlap <= kOverlapTol && deterministic && conj_unresolved == 0 &&
                  eig_unresolved == 0;
  verdict(9, ok,
          fmt("%d states, N <= 8, indices <= 3: Parseval %.1e; sum |F|^2|F'|^2 over %d mod-4-distinct pairs, "
              "normalized, up to %.3f (bilinear sum conj(F)F' up to %.1e); tables deterministic: %s; "
              "conjugation unresolved %d; |F|^2 relation unresolved %d (%d with m = n)",
              states, parseval, pairs, overlap, bilinear, deterministic ? "yes" : "NO", conj_unresolved,
              eig_unresolved, eig_unresolved_equal));
}

void continuum() {
  const int N = 200;
  const double eps = std::sqrt(2.0 * kPi / N);
  double worst = 0.0;
  for (int n = 0; n <= 4; ++n) {
    const auto f = eigenstate_direct({N, n});
    double peak = 0.0;
    std::vector<double> single;
    for (int j = -14; j <= 14; ++j) {
      single.push_back(std::exp(-kPi * j * j / N) * hermite(n, eps * j));
      peak = std::max(peak, std::abs(single.back()));
    }
    for (int j = -14; j <= 14; ++j)
      worst = std::max(worst, std::abs(f[size_t((j + N) % N)] - single[size_t(j + 14)]) / peak);
  }
  verdict(10, worst <= kContinuumTol,
          fmt("N=200, n <= 4, |j| <= 14: max gap to exp(-pi j^2/N) H_n(eps j), relative to peak, %.2e", worst));
}

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run_cli(const std::string& cli, const std::string& args) {
  CliRun r;
  const std::string cmd = "'" + cli + "' " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void cli_contract(const std::string& cli, const std::string& golden_dir) {
  struct Case {
    const char* args;
    const char* golden;
    int code;
  };
  const Case cases[] = {
      {"theta --z 0 --tau-im 1 --format json", "theta_origin.json", 0},
      {"sweep --n-min 4 --n-max 10 --index-max 6 --format csv", "sweep_4_10.csv", 0},
      {"gram --N 10 --index-max 6 --format csv", "gram_10.csv", 0},
      {"dft-check --N 8 --n 3 --xi 2 --format json", "dft_check_8_3.json", 0},
      {"identities --suite duplication --format csv", "identities_duplication.csv", 0},
      {"twovar --N 7 --m 1 --n 2 --format text", "twovar_7_1_2.txt", 1},
      {"theta --tau-im -1", "theta_domain_error.txt", 2},
      {"eigenstate --N 0", "usage_error.txt", 2},
  };
  int mismatched = 0, wrong_code = 0, unstable = 0;
  for (const auto& c : cases) {
    const auto a = run_cli(cli, c.args), b = run_cli(cli, c.args);
    unstable += a.out != b.out || a.code != b.code;
    wrong_code += a.code != c.code;
    mismatched += a.out != slurp(golden_dir + "/" + c.golden);
  }
  const auto all = run_cli(cli, "identities --suite all --tol 1e-9 --format csv");
  wrong_code += all.code != 0;

  // the sweep row (10,4,0) must carry the library's value to the last bit
  const auto sweep = run_cli(cli, "sweep --n-min 4 --n-max 10 --index-max 6 --format csv");
  const double library = std::abs(gram_report(10, 6, false).entry(4, 0));
  bool bit_exact = false;
  std::istringstream lines(sweep.out);
  for (std::string line; std::getline(lines, line);)
    if (line.rfind("10,4,0,", 0) == 0) {
      std::vector<std::string> f;
      std::stringstream ss(line);
      for (std::string x; std::getline(ss, x, ',');) f.push_back(x);
      bit_exact = f.size() > 5 && std::strtod(f[5].c_str(), nullptr) == library;
    }
  verdict(11, mismatched == 0 && wrong_code == 0 && unstable == 0 && bit_exact,
          fmt("%zu golden cases: %d output mismatches, %d exit-code mismatches, %d unstable reruns; sweep row "
              "(10,4,0) bit-identical to library: %s",
              std::size(cases), mismatched, wrong_code, unstable, bit_exact ? "yes" : "NO"));
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::fprintf(stderr, "usage: %s <thetadft-cli> <golden-dir>\n", argv[0]);
    return 2;
  }
  eigenrelation();
  width_eigenrelation();
  representations();
  mod4_orthogonality();
  conjecture_failure();
  closed_form_gram();
  identity_suite();
  theta_core();
  two_variable();
  continuum();
  cli_contract(argv[1], argv[2]);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
