#pragma once

#include <complex>
#include <functional>
#include <string>
#include <string_view>

#include "drosc/params.hpp"

namespace drosc {

/// Driving protocol lambda(tau) on tau in [0, 1], in units of x0.
///
/// The linear ramp lambda = delta_l tau has closed forms for every driving
/// function; any other protocol goes through quadrature of the defining
/// integrals. lambda(0) = 0 is required.
class DrivingProtocol {
 public:
  enum class Kind { LinearRamp, Generic };

  using Function = std::function<double(double)>;

  static DrivingProtocol linear_ramp(double delta_l);
  static DrivingProtocol generic(Function lambda, Function lambda_dot, std::string name = "generic");
  /// lambda = delta_l (3 tau^2 - 2 tau^3).
  static DrivingProtocol smoothstep(double delta_l);
  static DrivingProtocol undriven() { return linear_ramp(0.0); }

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  /// Ramp amplitude; for generic protocols, lambda(1).
  double delta_l() const;

  double lambda(double tau) const;
  double lambda_dot(double tau) const;

  /// The same protocol routed through the quadrature path.
  DrivingProtocol as_generic() const;

 private:
  DrivingProtocol() = default;

  Kind kind_ = Kind::LinearRamp;
  std::string name_ = "linear_ramp";
  double delta_l_ = 0.0;
  Function lambda_;
  Function lambda_dot_;
};

enum class DrivingVariant { Nonadiabatic, Adiabatic, WeaklyDriven };

std::string_view to_string(DrivingVariant v);
/// Accepts "nonadiabatic", "adiabatic", "weakly_driven". Throws DomainError otherwise.
DrivingVariant variant_from_string(std::string_view s);

/// Precomputed driving functions for one (params, protocol) pair. All
/// quantities are dimensionless (multiplied by T) and take tau = t/T in [0, 1].
///
/// Instances are immutable and safe to share between threads.
class Driving {
 public:
  Driving(const ModelParams& p, DrivingProtocol proto);

  const ModelParams& params() const { return params_; }
  const DrivingProtocol& protocol() const { return proto_; }
  const BathConstants& bath() const { return bath_; }

  cplx a_bar(double tau) const;
  cplx a_ad_bar(double tau) const;
  cplx delta_a_bar(double tau) const;

  cplx f_bar(double tau) const;
  cplx f_ad_bar(double tau) const;
  cplx delta_f_bar(double tau) const;

  cplx g_bar(double tau) const;
  cplx g_ad_bar(double tau) const;
  cplx delta_g_bar(double tau) const;

  cplx h_bar(double tau, DrivingVariant variant) const;

  // Pieces of A(tau - sigma) = A_ad(tau, sigma) + dA1(tau, sigma) + dA2(tau, sigma),
  // exposed for tests; sigma is the (dimensionless) memory time.
  cplx a_ad_bar_two_time(double tau, double sigma) const;
  cplx delta_a1_bar(double tau, double sigma) const;
  cplx delta_a2_bar(double tau, double sigma) const;

 private:
  void check_tau(double tau) const;
  cplx a_bar_quadrature(double tau) const;
  cplx f_bar_quadrature(double tau) const;
  cplx f_ad_bar_quadrature(double tau) const;

  ModelParams params_;
  DrivingProtocol proto_;
  BathConstants bath_;
};

// Free-function forms. Each constructs a Driving, so prefer the class in loops.
cplx a_bar(double tau, const ModelParams& p, const DrivingProtocol& proto);
cplx a_ad_bar(double tau, const ModelParams& p, const DrivingProtocol& proto);
cplx delta_a_bar(double tau, const ModelParams& p, const DrivingProtocol& proto);
cplx f_bar(double tau, const ModelParams& p, const DrivingProtocol& proto);
cplx f_ad_bar(double tau, const ModelParams& p, const DrivingProtocol& proto);
cplx g_bar(double tau, const ModelParams& p, const DrivingProtocol& proto);
cplx g_ad_bar(double tau, const ModelParams& p, const DrivingProtocol& proto);
cplx delta_g_bar(double tau, const ModelParams& p, const DrivingProtocol& proto);
cplx h_bar(double tau, const ModelParams& p, const DrivingProtocol& proto, DrivingVariant variant);

}  // namespace drosc
