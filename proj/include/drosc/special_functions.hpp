#pragma once

#include <complex>

namespace drosc {

using cplx = std::complex<double>;

/// Exponential integral Ei(z) on the principal branch (cut along the
/// negative real axis). On the cut itself the real-valued Cauchy principal
/// value -E1(|z|) is returned, i.e. the mean of the two one-sided limits.
///
/// Throws DomainError for z = 0 or non-finite z, RangeError for Re z > 700.
cplx ei(cplx z);

/// Real exponential integral for x != 0.
double ei(double x);

/// I0(z) = int_0^z dx (1 + i x)^-2 = 1/(z - i) - i.
cplx integral_i0(double z);

/// I1(z) = int_0^z dx x (1 + i x)^-2 = z/(z - i) - ln(z - i) - i pi/2.
cplx integral_i1(double z);

/// Ie(z) = int_0^z dx e^{i x / w} (1 + i x)^-2, evaluated in closed form
/// through the complex exponential integral.
cplx integral_ie(double z, double w);

/// Large-z limits: I0 -> -i, I1(z) -> 1 - ln(1+z^2)/2 - i pi/2,
/// Ie -> (i/w) e^{-1/w} (Ei(1/w) - i pi) - i.
cplx integral_i0_limit();
cplx integral_i1_asymptotic(double z);
cplx integral_ie_limit(double w);

}  // namespace drosc
