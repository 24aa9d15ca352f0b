#include "drosc/special_functions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "drosc/errors.hpp"

namespace drosc {
namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Beyond this radius the continued fraction is used unless z sits close to
// the positive real axis, where the power series has no cancellation.
constexpr double kSeriesRadius = 8.0;
// ln of the tolerated cancellation factor e^{|z| - Re z} in the series.
constexpr double kSeriesCancellation = 5.0;

void require_real_argument(double z, const char* name) {
  if (!std::isfinite(z) || z < 0.0) {
    std::ostringstream msg;
    msg << name << ": argument must be a finite real z >= 0, got " << z;
    throw DomainError(msg.str());
  }
}

// gamma + log_z + sum_k z^k / (k k!)
cplx ei_series(cplx z, cplx log_z) {
  cplx term = 1.0;
  cplx sum = 0.0;
  for (int k = 1; k < 5000; ++k) {
    term *= z / static_cast<double>(k);
    const cplx contrib = term / static_cast<double>(k);
    sum += contrib;
    if (std::abs(contrib) <= kEps * std::abs(sum)) {
      return kEulerGamma + log_z + sum;
    }
  }
  throw NumericError("ei: power series did not converge");
}

// E1(u) by the even continued fraction (modified Lentz), valid off the
// negative real axis.
cplx e1_continued_fraction(cplx u) {
  constexpr double tiny = 1e-300;
  cplx b = u + 1.0;
  cplx c = 1.0 / tiny;
  cplx d = 1.0 / b;
  cplx h = d;
  for (int i = 1; i < 20000; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const cplx del = c * d;
    h *= del;
    if (std::abs(del - 1.0) <= kEps) return h * std::exp(-u);
  }
  throw NumericError("ei: continued fraction did not converge");
}

}  // namespace

cplx ei(cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw DomainError("ei: non-finite argument");
  }
  if (z == cplx(0.0, 0.0)) throw DomainError("ei: pole at z = 0");
  if (z.real() > 700.0) {
    std::ostringstream msg;
    msg << "ei: Re(z) = " << z.real() << " overflows double precision";
    throw RangeError(msg.str());
  }

  const double r = std::abs(z);
  if (z.imag() == 0.0 && z.real() < 0.0) {
    // Principal value on the cut: real log of |z| instead of the principal log.
    if (r <= kSeriesRadius) return ei_series(z, std::log(r));
    return -e1_continued_fraction(cplx(r, 0.0)).real();
  }
  if (r <= kSeriesRadius || r - z.real() <= kSeriesCancellation) return ei_series(z, std::log(z));

  const double branch = z.imag() > 0.0 ? std::numbers::pi : -std::numbers::pi;
  return -e1_continued_fraction(-z) + cplx(0.0, branch);
}

double ei(double x) {
  if (x == 0.0) throw DomainError("ei: pole at x = 0");
  return ei(cplx(x, 0.0)).real();
}

cplx integral_i0(double z) {
  require_real_argument(z, "integral_i0");
  return 1.0 / cplx(z, -1.0) - cplx(0.0, 1.0);
}

cplx integral_i1(double z) {
  require_real_argument(z, "integral_i1");
  const cplx zc(z, -1.0);
  return z / zc - std::log(zc) - cplx(0.0, std::numbers::pi / 2.0);
}

cplx integral_ie(double z, double w) {
  require_real_argument(z, "integral_ie");
  if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("integral_ie: w must be positive");
  if (z == 0.0) return 0.0;
  const cplx i(0.0, 1.0);
  const double inv_w = 1.0 / w;
  const cplx ei_start = ei(inv_w);
  const cplx ei_end = ei(cplx(inv_w, z * inv_w));
  return (i * inv_w) * std::exp(-inv_w) * (ei_start - ei_end) +
         std::exp(i * (z * inv_w)) / cplx(z, -1.0) - i;
}

cplx integral_i0_limit() { return cplx(0.0, -1.0); }

cplx integral_i1_asymptotic(double z) {
  return cplx(1.0 - 0.5 * std::log1p(z * z), -std::numbers::pi / 2.0);
}

cplx integral_ie_limit(double w) {
  if (!(w > 0.0)) throw DomainError("integral_ie_limit: w must be positive");
  const cplx i(0.0, 1.0);
  const double inv_w = 1.0 / w;
  return (i * inv_w) * std::exp(-inv_w) * (ei(inv_w) - i * std::numbers::pi) - i;
}

}  // namespace drosc
