#pragma once

#include <cmath>
#include <complex>

namespace thetadft {

using Complex = std::complex<double>;

/// Neumaier-compensated accumulator, applied independently to the real and
/// imaginary parts.
class CompensatedSum {
 public:
  void add(Complex v) {
    add_part(re_, re_c_, v.real());
    add_part(im_, im_c_, v.imag());
  }
  CompensatedSum& operator+=(Complex v) {
    add(v);
    return *this;
  }
  Complex value() const { return {re_ + re_c_, im_ + im_c_}; }

 private:
  static void add_part(double& sum, double& comp, double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }

  double re_ = 0.0, re_c_ = 0.0;
  double im_ = 0.0, im_c_ = 0.0;
};

}  // namespace thetadft
