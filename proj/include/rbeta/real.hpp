#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <limits>

namespace rbeta {

/// 113-bit significand float used by the extended-precision mode.
using ext_real = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<113, boost::multiprecision::digit_base_2>,
    boost::multiprecision::et_off>;

template <class Real>
Real epsilon() {
  return std::numeric_limits<Real>::epsilon();
}

template <class Real>
Real ipow(Real x, int k) {
  Real r{1};
  bool neg = k < 0;
  if (neg) k = -k;
  while (k > 0) {
    if (k & 1) r *= x;
    x *= x;
    k >>= 1;
  }
  return neg ? Real{1} / r : r;
}

template <class Real>
Real golden_ratio() {
  using std::sqrt;
  return (Real{1} + sqrt(Real{5})) / Real{2};
}

template <class Real>
double to_double(const Real& x) {
  return static_cast<double>(x);
}

}  // namespace rbeta
