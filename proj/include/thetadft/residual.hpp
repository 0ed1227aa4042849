#pragma once

#include <algorithm>
#include <complex>
#include <string>
#include <utility>
#include <vector>

namespace thetadft {

using Complex = std::complex<double>;

/// Outcome of one machine-checked identity: both sides, the residual under the
/// check's own normalization, and the verdict.
struct ResidualReport {
  std::string name;
  std::vector<std::pair<std::string, double>> params;  // insertion order is output order
  Complex lhs{};
  Complex rhs{};
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
  bool degenerate = false;  // flagged, not scored
  std::string note;
};

inline ResidualReport make_report(std::string name,
                                  std::vector<std::pair<std::string, double>> params,
                                  Complex lhs, Complex rhs, double residual, double tol,
                                  std::string note = {}) {
  ResidualReport r;
  r.name = std::move(name);
  r.params = std::move(params);
  r.lhs = lhs;
  r.rhs = rhs;
  r.residual = residual;
  r.tol = tol;
  r.pass = residual <= tol;
  r.note = std::move(note);
  return r;
}

/// |lhs - rhs| / (1 + |lhs|); stays finite near zeros of theta.
inline double soft_relative(Complex lhs, Complex rhs) {
  return std::abs(lhs - rhs) / (1.0 + std::abs(lhs));
}

inline double relative(Complex lhs, Complex rhs) {
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  return scale == 0.0 ? 0.0 : std::abs(lhs - rhs) / scale;
}

}  // namespace thetadft
