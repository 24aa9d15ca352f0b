#pragma once

#include <complex>

namespace drosc {

using cplx = std::complex<double>;

/// The five dimensionless model parameters.
///
///   y        thermal energy in units of the oscillator quantum, 1/(beta hbar omega)
///   w        bath cutoff over system frequency, Omega/omega
///   eta      Ohmic coupling constant
///   script_t driving duration in units of 1/omega, omega T
///   delta_l  total displacement of the potential minimum in units of x0
struct ModelParams {
  double y = 0.1;
  double w = 4.0;
  double eta = 0.008;
  double script_t = 20.0;
  double delta_l = 10.0;

  /// Throws DomainError unless y, w, eta, script_t > 0 and delta_l is finite.
  void validate() const;

  /// eta * w >= 0.5: outside the regime where weak coupling is plausible.
  /// Advisory only; nothing refuses to run.
  bool weak_coupling_warning() const { return eta * w >= 0.5; }

  bool operator==(const ModelParams&) const = default;
};

/// Bath-derived constants in units of 1/T.
struct BathConstants {
  double n_th = 0.0;
  double gamma_bar = 0.0;
  double sigma_bar = 0.0;
  cplx alpha_bar;  // gamma_bar/2 + i sigma_bar
  cplx delta_bar;  // alpha_bar + i script_t

  /// gamma_bar (n_th + 1) and gamma_bar n_th: emission and absorption rates.
  double gamma_down() const { return gamma_bar * (n_th + 1.0); }
  double gamma_up() const { return gamma_bar * n_th; }
};

/// Planck occupation 1/(e^{1/y} - 1). Throws DomainError for y <= 0.
double n_th(double y);

/// Tgamma(omega) = 2 pi eta script_t e^{-1/w}.
double gamma_bar(const ModelParams& p);

/// Lamb-shift constant T Sigma(omega) = -PV int_0^inf dx eta script_t x e^{-x/w}/(x - 1),
/// evaluated by adaptive quadrature after folding the pole symmetrically.
/// Throws NumericError when the quadrature fails to converge.
double sigma_bar(const ModelParams& p);

/// Closed form -eta script_t (w - e^{-1/w} Ei(1/w)) of the same principal value.
double sigma_bar_closed_form(const ModelParams& p);

/// T alpha(omega) = script_t eta w Ie(infinity), via the exponential integral.
cplx alpha_bar(const ModelParams& p);

/// All constants at once. sigma_bar is taken from alpha_bar (closed form);
/// the quadrature route is only used for cross-checks.
BathConstants bath_constants(const ModelParams& p);

}  // namespace drosc
