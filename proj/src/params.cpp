#include "drosc/params.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "drosc/errors.hpp"
#include "drosc/quadrature.hpp"
#include "drosc/special_functions.hpp"

namespace drosc {

void ModelParams::validate() const {
  auto require_positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      std::ostringstream msg;
      msg << "ModelParams." << name << " must be positive and finite, got " << v;
      throw DomainError(msg.str());
    }
  };
  require_positive(y, "y");
  require_positive(w, "w");
  require_positive(eta, "eta");
  require_positive(script_t, "script_t");
  if (!std::isfinite(delta_l)) throw DomainError("ModelParams.delta_l must be finite");
}

namespace {

// The bath integrals only need a valid cutoff; eta = 0 is allowed and gives 0.
void require_cutoff(const ModelParams& p) {
  if (!(p.w > 0.0) || !std::isfinite(p.w)) {
    std::ostringstream msg;
    msg << "cutoff w must be positive and finite, got " << p.w;
    throw DomainError(msg.str());
  }
}

}  // namespace

double n_th(double y) {
  if (!(y > 0.0)) {
    std::ostringstream msg;
    msg << "n_th: y must be positive, got " << y;
    throw DomainError(msg.str());
  }
  return 1.0 / std::expm1(1.0 / y);
}

double gamma_bar(const ModelParams& p) {
  return 2.0 * std::numbers::pi * p.eta * p.script_t * std::exp(-1.0 / p.w);
}

double sigma_bar(const ModelParams& p) {
  require_cutoff(p);
  const double inv_w = 1.0 / p.w;
  // phi(x) = x e^{-x/w}; eta script_t is applied at the end.
  auto phi = [inv_w](double x) { return x * std::exp(-x * inv_w); };

  const quad::Tolerance tol{1e-14, 1e-13, 20000};

  // PV int_0^2 phi(x)/(x-1) dx = int_0^1 [phi(1+u) - phi(1-u)]/u du.
  auto folded = [&](double u) {
    if (u == 0.0) return 2.0 * (1.0 - inv_w) * std::exp(-inv_w);  // 2 phi'(1)
    return (phi(1.0 + u) - phi(1.0 - u)) / u;
  };
  const double near = quad::integrate(folded, 0.0, 1.0, tol).value;

  // Regular part out to X with e^{-X/w} < 1e-16; the remaining tail is below
  // double precision relative to the total.
  const double x_max = std::max(2.0, 2.0 + 37.0 * p.w);
  auto regular = [&](double x) { return phi(x) / (x - 1.0); };
  const int panels = std::max(1, static_cast<int>(std::ceil((x_max - 2.0) / (4.0 * p.w))));
  const double far = quad::integrate_panels(regular, 2.0, x_max, panels, tol).value;

  return -p.eta * p.script_t * (near + far);
}

double sigma_bar_closed_form(const ModelParams& p) {
  require_cutoff(p);
  const double inv_w = 1.0 / p.w;
  return -p.eta * p.script_t * (p.w - std::exp(-inv_w) * ei(inv_w));
}

cplx alpha_bar(const ModelParams& p) {
  require_cutoff(p);
  return p.script_t * p.eta * p.w * integral_ie_limit(p.w);
}

BathConstants bath_constants(const ModelParams& p) {
  p.validate();
  BathConstants c;
  c.n_th = n_th(p.y);
  c.gamma_bar = gamma_bar(p);
  c.sigma_bar = alpha_bar(p).imag();
  c.alpha_bar = cplx(0.5 * c.gamma_bar, c.sigma_bar);
  c.delta_bar = c.alpha_bar + cplx(0.0, p.script_t);
  return c;
}

}  // namespace drosc
