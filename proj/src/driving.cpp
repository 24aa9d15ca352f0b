#include "drosc/driving.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "drosc/errors.hpp"
#include "drosc/quadrature.hpp"
#include "drosc/special_functions.hpp"

namespace drosc {
namespace {

constexpr cplx kI(0.0, 1.0);

const quad::Tolerance kInnerTol{1e-12, 1e-10, 20000};
const quad::Tolerance kOuterTol{1e-11, 1e-9, 20000};

// Width of the kernel peak region in x = Omega s handled without panelling.
constexpr double kPeakWidth = 40.0;

int oscillation_panels(double length, double period) {
  return std::max(1, static_cast<int>(std::ceil(length / period)));
}

}  // namespace

DrivingProtocol DrivingProtocol::linear_ramp(double delta_l) {
  if (!std::isfinite(delta_l)) throw DomainError("linear_ramp: delta_l must be finite");
  DrivingProtocol p;
  p.kind_ = Kind::LinearRamp;
  p.name_ = "linear_ramp";
  p.delta_l_ = delta_l;
  return p;
}

DrivingProtocol DrivingProtocol::generic(Function lambda, Function lambda_dot, std::string name) {
  if (!lambda || !lambda_dot) throw DomainError("generic protocol: lambda and lambda_dot required");
  const double l0 = lambda(0.0);
  if (std::abs(l0) > 1e-14) {
    std::ostringstream msg;
    msg << "generic protocol '" << name << "': lambda(0) must be 0, got " << l0;
    throw DomainError(msg.str());
  }
  DrivingProtocol p;
  p.kind_ = Kind::Generic;
  p.name_ = std::move(name);
  p.lambda_ = std::move(lambda);
  p.lambda_dot_ = std::move(lambda_dot);
  p.delta_l_ = p.lambda_(1.0);
  return p;
}

DrivingProtocol DrivingProtocol::smoothstep(double delta_l) {
  if (!std::isfinite(delta_l)) throw DomainError("smoothstep: delta_l must be finite");
  return generic([delta_l](double t) { return delta_l * t * t * (3.0 - 2.0 * t); },
                 [delta_l](double t) { return 6.0 * delta_l * t * (1.0 - t); }, "smoothstep");
}

double DrivingProtocol::delta_l() const { return delta_l_; }

double DrivingProtocol::lambda(double tau) const {
  return kind_ == Kind::LinearRamp ? delta_l_ * tau : lambda_(tau);
}

double DrivingProtocol::lambda_dot(double tau) const {
  return kind_ == Kind::LinearRamp ? delta_l_ : lambda_dot_(tau);
}

DrivingProtocol DrivingProtocol::as_generic() const {
  if (kind_ == Kind::Generic) return *this;
  const double dl = delta_l_;
  return generic([dl](double t) { return dl * t; }, [dl](double) { return dl; },
                 "linear_ramp_quadrature");
}

std::string_view to_string(DrivingVariant v) {
  switch (v) {
    case DrivingVariant::Nonadiabatic: return "nonadiabatic";
    case DrivingVariant::Adiabatic: return "adiabatic";
    case DrivingVariant::WeaklyDriven: return "weakly_driven";
  }
  return "unknown";
}

DrivingVariant variant_from_string(std::string_view s) {
  if (s == "nonadiabatic") return DrivingVariant::Nonadiabatic;
  if (s == "adiabatic") return DrivingVariant::Adiabatic;
  if (s == "weakly_driven") return DrivingVariant::WeaklyDriven;
  throw DomainError("unknown driving variant '" + std::string(s) +
                    "' (expected nonadiabatic, adiabatic or weakly_driven)");
}

Driving::Driving(const ModelParams& p, DrivingProtocol proto)
    : params_(p), proto_(std::move(proto)), bath_(bath_constants(p)) {}

void Driving::check_tau(double tau) const {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    std::ostringstream msg;
    msg << "tau must lie in [0, 1], got " << tau;
    throw DomainError(msg.str());
  }
}

cplx Driving::a_bar(double tau) const {
  check_tau(tau);
  const double t = params_.script_t;
  if (proto_.kind() == DrivingProtocol::Kind::LinearRamp) {
    const cplx phase = std::exp(kI * (t * tau));
    return 0.5 * proto_.delta_l() * ((tau + kI / t) * phase - kI / t);
  }
  return a_bar_quadrature(tau);
}

cplx Driving::a_bar_quadrature(double tau) const {
  if (tau == 0.0) return 0.0;
  const double t = params_.script_t;
  auto integrand = [&](double u) { return proto_.lambda(u) * std::exp(kI * (t * u)); };
  const int panels = oscillation_panels(t * tau, 2.0 * std::numbers::pi);
  return 0.5 * kI * t * quad::integrate_panels(integrand, 0.0, tau, panels, kInnerTol).value;
}

cplx Driving::a_ad_bar(double tau) const {
  check_tau(tau);
  return 0.5 * proto_.lambda(tau) * std::exp(kI * (params_.script_t * tau));
}

cplx Driving::delta_a_bar(double tau) const {
  check_tau(tau);
  if (proto_.kind() == DrivingProtocol::Kind::LinearRamp) {
    const double t = params_.script_t;
    return 0.5 * proto_.delta_l() * (kI / t) * (std::exp(kI * (t * tau)) - 1.0);
  }
  return a_bar(tau) - a_ad_bar(tau);
}

cplx Driving::f_bar(double tau) const {
  check_tau(tau);
  if (proto_.kind() == DrivingProtocol::Kind::Generic) return f_bar_quadrature(tau);
  if (tau == 0.0) return 0.0;
  const double w = params_.w;
  const double t = params_.script_t;
  const double z = w * t * tau;
  const cplx bracket = (z + kI * w) * integral_i0(z) - integral_i1(z);
  const cplx phase = std::exp(kI * (t * tau));
  return 0.5 * params_.eta * proto_.delta_l() * (bracket * phase - kI * w * integral_ie(z, w));
}

cplx Driving::f_bar_quadrature(double tau) const {
  if (tau == 0.0) return 0.0;
  const double w = params_.w;
  const double t = params_.script_t;
  const double x_max = w * t * tau;
  // x = Omega s; the kernel 1/(1 + i x)^2 is peaked on a unit scale in x.
  auto integrand = [&](double x) {
    const double back = std::max(0.0, tau - x / (w * t));
    return std::exp(kI * (x / w)) * a_bar_quadrature(back) / ((1.0 + kI * x) * (1.0 + kI * x));
  };
  const double split = std::min(x_max, kPeakWidth);
  cplx sum = quad::integrate(integrand, 0.0, split, kOuterTol).value;
  if (x_max > split) {
    const int panels = oscillation_panels(x_max - split, 2.0 * std::numbers::pi * w);
    sum += quad::integrate_panels(integrand, split, x_max, panels, kOuterTol).value;
  }
  return params_.eta * w * t * sum;
}

cplx Driving::f_ad_bar(double tau) const {
  check_tau(tau);
  if (tau == 0.0) return 0.0;
  const double w = params_.w;
  const double t = params_.script_t;
  const double z = w * t * tau;
  if (proto_.kind() == DrivingProtocol::Kind::Generic) return f_ad_bar_quadrature(tau);
  return 0.5 * params_.eta * proto_.delta_l() * z * std::exp(kI * (t * tau)) * integral_i0(z);
}

cplx Driving::f_ad_bar_quadrature(double tau) const {
  const double w = params_.w;
  const double t = params_.script_t;
  const double x_max = w * t * tau;
  auto kernel = [](double x) { return 1.0 / ((1.0 + kI * x) * (1.0 + kI * x)); };
  const double split = std::min(x_max, kPeakWidth);
  cplx sum = quad::integrate(kernel, 0.0, split, kOuterTol).value;
  if (x_max > split) sum += quad::integrate(kernel, split, x_max, kOuterTol).value;
  return params_.eta * w * t * 0.5 * proto_.lambda(tau) * std::exp(kI * (t * tau)) * sum;
}

cplx Driving::delta_f_bar(double tau) const { return f_bar(tau) - f_ad_bar(tau); }

cplx Driving::g_bar(double tau) const {
  const cplx phase = std::exp(-kI * (params_.script_t * tau));
  return phase * (f_bar(tau) - bath_.alpha_bar * a_bar(tau));
}

cplx Driving::g_ad_bar(double tau) const {
  const cplx phase = std::exp(-kI * (params_.script_t * tau));
  return phase * (f_ad_bar(tau) - bath_.alpha_bar * a_ad_bar(tau));
}

cplx Driving::delta_g_bar(double tau) const {
  const cplx phase = std::exp(-kI * (params_.script_t * tau));
  return phase * (delta_f_bar(tau) - bath_.alpha_bar * delta_a_bar(tau));
}

// TODO: cache g_bar on a tau grid for generic protocols; every call here runs nested quadrature.
cplx Driving::h_bar(double tau, DrivingVariant variant) const {
  check_tau(tau);
  const double lambda = proto_.lambda(tau);
  const cplx hamiltonian = -0.5 * kI * params_.script_t * lambda;
  switch (variant) {
    case DrivingVariant::Nonadiabatic:
      return g_bar(tau) + hamiltonian;
    case DrivingVariant::Adiabatic:
      return g_ad_bar(tau) + hamiltonian - 0.5 * proto_.lambda_dot(tau);
    case DrivingVariant::WeaklyDriven:
      return hamiltonian;
  }
  throw DomainError("h_bar: unknown variant");
}

cplx Driving::a_ad_bar_two_time(double tau, double sigma) const {
  check_tau(tau);
  return 0.5 * proto_.lambda(tau) * std::exp(kI * (params_.script_t * (tau - sigma)));
}

cplx Driving::delta_a1_bar(double tau, double sigma) const {
  check_tau(tau);
  check_tau(tau - sigma);
  const double back = tau - sigma;
  return 0.5 * (proto_.lambda(back) - proto_.lambda(tau)) *
         std::exp(kI * (params_.script_t * back));
}

cplx Driving::delta_a2_bar(double tau, double sigma) const {
  check_tau(tau);
  check_tau(tau - sigma);
  const double back = tau - sigma;
  if (back == 0.0) return 0.0;
  const double t = params_.script_t;
  auto integrand = [&](double u) { return 0.5 * proto_.lambda_dot(u) * std::exp(kI * (t * u)); };
  const int panels = oscillation_panels(t * back, 2.0 * std::numbers::pi);
  return -quad::integrate_panels(integrand, 0.0, back, panels, kInnerTol).value;
}

cplx a_bar(double tau, const ModelParams& p, const DrivingProtocol& proto) {
  return Driving(p, proto).a_bar(tau);
}
cplx a_ad_bar(double tau, const ModelParams& p, const DrivingProtocol& proto) {
  return Driving(p, proto).a_ad_bar(tau);
}
cplx delta_a_bar(double tau, const ModelParams& p, const DrivingProtocol& proto) {
  return Driving(p, proto).delta_a_bar(tau);
}
cplx f_bar(double tau, const ModelParams& p, const DrivingProtocol& proto) {
  return Driving(p, proto).f_bar(tau);
}
cplx f_ad_bar(double tau, const ModelParams& p, const DrivingProtocol& proto) {
  return Driving(p, proto).f_ad_bar(tau);
}
cplx g_bar(double tau, const ModelParams& p, const DrivingProtocol& proto) {
  return Driving(p, proto).g_bar(tau);
}
cplx g_ad_bar(double tau, const ModelParams& p, const DrivingProtocol& proto) {
  return Driving(p, proto).g_ad_bar(tau);
}
cplx delta_g_bar(double tau, const ModelParams& p, const DrivingProtocol& proto) {
  return Driving(p, proto).delta_g_bar(tau);
}
cplx h_bar(double tau, const ModelParams& p, const DrivingProtocol& proto, DrivingVariant variant) {
  return Driving(p, proto).h_bar(tau, variant);
}

}  // namespace drosc
