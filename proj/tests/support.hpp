#pragma once

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <complex>
#include <random>

namespace testing {

using cplx = std::complex<double>;

// Reference quadrature: fixed 30-point Gauss-Legendre on short panels, real
// and imaginary parts separately.
template <class F>
cplx reference_integral(F f, double a, double b, double panel = 0.5) {
  using boost::math::quadrature::gauss;
  cplx sum = 0.0;
  const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / panel)));
  const double h = (b - a) / pieces;
  for (int k = 0; k < pieces; ++k) {
    const double lo = a + k * h;
    const double hi = (k + 1 == pieces) ? b : lo + h;
    const double re = gauss<double, 30>::integrate([&](double x) { return std::real(f(x)); }, lo, hi);
    const double im = gauss<double, 30>::integrate([&](double x) { return std::imag(f(x)); }, lo, hi);
    sum += cplx(re, im);
  }
  return sum;
}

inline std::mt19937_64 rng(unsigned seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline double log_uniform(std::mt19937_64& g, double lo, double hi) {
  return std::exp(uniform(g, std::log(lo), std::log(hi)));
}

}  // namespace testing
