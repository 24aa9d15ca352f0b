#pragma once

// Globally adaptive Gauss-Kronrod (10/21 point) quadrature for real- and
// complex-valued integrands on finite intervals.

#include <array>
#include <cmath>
#include <complex>
#include <queue>
#include <sstream>
#include <type_traits>
#include <vector>

#include "drosc/errors.hpp"

namespace drosc::quad {

struct Tolerance {
  double abs = 1e-12;
  double rel = 1e-10;
  int max_segments = 4000;
};

template <class T>
struct Result {
  T value{};
  double error = 0.0;
  int segments = 0;
};

namespace detail {

// Kronrod abscissae on [0,1) for the 21-point rule, descending; odd indices
// (1,3,...,9) are the 10-point Gauss nodes.
inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980251020, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

inline bool finite(double v) { return std::isfinite(v); }
inline bool finite(const std::complex<double>& v) {
  return std::isfinite(v.real()) && std::isfinite(v.imag());
}

template <class T>
struct Segment {
  double a;
  double b;
  T value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class T, class F>
Segment<T> kronrod21(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const T fc = f(center);
  T gauss{};
  T kronrod = fc * kWgk[10];
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    const T f1 = f(center - dx);
    const T f2 = f(center + dx);
    kronrod += (f1 + f2) * kWgk[j];
    if (j % 2 == 1) gauss += (f1 + f2) * kWg[j / 2];
  }
  const T value = kronrod * half;
  const double err = magnitude((kronrod - gauss) * half);
  if (!finite(value)) {
    throw NumericError("quadrature: non-finite integrand on [" + std::to_string(a) + ", " +
                       std::to_string(b) + "]");
  }
  return {a, b, value, err};
}

}  // namespace detail

/// Integrates f over [a, b]. Throws NumericError (carrying the final error
/// estimate) when the tolerance cannot be met within max_segments bisections.
template <class F>
auto integrate(F&& f, double a, double b, const Tolerance& tol = {})
    -> Result<std::decay_t<decltype(f(a))>> {
  using T = std::decay_t<decltype(f(a))>;
  if (a == b) return {};
  if (b < a) {
    auto r = integrate(f, b, a, tol);
    r.value = -r.value;
    return r;
  }

  std::priority_queue<detail::Segment<T>> heap;
  auto first = detail::kronrod21<T>(f, a, b);
  T total = first.value;
  double total_err = first.error;
  heap.push(first);
  int segments = 1;

  auto target = [&] { return std::max(tol.abs, tol.rel * detail::magnitude(total)); };

  while (total_err > target()) {
    if (segments >= tol.max_segments) {
      std::ostringstream msg;
      msg << "quadrature did not converge on [" << a << ", " << b << "] after " << segments
          << " segments (error estimate " << total_err << ")";
      throw NumericError(msg.str(), total_err);
    }
    auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Interval can no longer be split in double precision.
      throw NumericError("quadrature: interval exhausted before tolerance was met", total_err);
    }
    auto left = detail::kronrod21<T>(f, worst.a, mid);
    auto right = detail::kronrod21<T>(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++segments;
  }

  // Re-sum to shed the drift of the incremental updates.
  T sum{};
  double err = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  return {sum, err, segments};
}

/// Integrates over [a, b] after pre-splitting it into `pieces` equal panels.
/// Useful for oscillatory integrands where the initial 21-point rule would
/// alias the oscillation and return an unreliable error estimate.
template <class F>
auto integrate_panels(F&& f, double a, double b, int pieces, const Tolerance& tol = {})
    -> Result<std::decay_t<decltype(f(a))>> {
  using T = std::decay_t<decltype(f(a))>;
  Result<T> out;
  if (pieces < 1) pieces = 1;
  const double width = (b - a) / pieces;
  Tolerance local = tol;
  local.abs = tol.abs / pieces;
  for (int k = 0; k < pieces; ++k) {
    const double lo = a + k * width;
    const double hi = (k + 1 == pieces) ? b : a + (k + 1) * width;
    auto r = integrate(f, lo, hi, local);
    out.value += r.value;
    out.error += r.error;
    out.segments += r.segments;
  }
  return out;
}

}  // namespace drosc::quad
