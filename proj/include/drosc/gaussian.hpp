#pragma once

#include <vector>

#include "drosc/driving.hpp"
#include "drosc/params.hpp"

namespace drosc {

/// Gaussian state as (<a>, V_a = <a^2> - <a>^2, C = <a^dag a> - |<a>|^2).
struct ComplexMoments {
  cplx a_mean;
  cplx v_a;
  double c_aadag = 0.0;

  bool operator==(const ComplexMoments&) const = default;
};

/// Gaussian state as quadrature moments with x = a + a^dag, p = -i(a - a^dag).
/// The vacuum has v_x = v_p = 1.
struct RealMoments {
  double x_mean = 0.0;
  double p_mean = 0.0;
  double v_x = 1.0;
  double v_p = 1.0;
  double c_xp = 0.0;

  double det() const { return v_x * v_p - c_xp * c_xp; }
  /// mu = det^{-1/2}; 1 for pure states.
  double purity() const;

  bool operator==(const RealMoments&) const = default;
};

RealMoments to_real(const ComplexMoments& m);
ComplexMoments to_complex(const RealMoments& m);

/// Throws DomainError if v_x, v_p <= 0 or mu > 1 + slack.
void require_physical(const RealMoments& m, double slack = 1e-9);

/// (n+1) ln(n+1) - n ln n, with the n = 0 limit. n may dip 1e-12 below 0.
double occupation_entropy(double n);

/// Energy in units of hbar omega for the potential minimum at lambda.
double energy(const RealMoments& m, double lambda);

/// Von Neumann entropy in nats. Throws NumericError if mu > 1 + 1e-9.
double entropy(const RealMoments& m);

/// <n_t> for the number operator of the instantaneous Hamiltonian.
double energy_basis_occupation(const ComplexMoments& m, double lambda);

/// Relative entropy of coherence in the instantaneous energy eigenbasis.
double coherence_energy_basis(const ComplexMoments& m, double lambda);

/// <n~> for the number operator diagonal in the eigenbasis of the Gaussian
/// state ss, evaluated in the state m.
double ss_basis_occupation(const RealMoments& m, const RealMoments& ss);

/// Relative entropy of coherence in the eigenbasis of ss.
double coherence_ss_basis(const ComplexMoments& m, const RealMoments& ss);

RealMoments steady_state_moments(double tau, const Driving& drv, DrivingVariant variant);
RealMoments steady_state_moments(double tau, const ModelParams& p, const DrivingProtocol& proto,
                                 DrivingVariant variant);

RealMoments gibbs_moments(double tau, const ModelParams& p, const DrivingProtocol& proto);

/// Gaussian fidelity exp(-du^T V^-1 du / 2) / (sqrt(D + L) - sqrt(L)), V = V1 + V2,
/// D = det V / 4, L = (det V1 - 1)(det V2 - 1) / 4. Coherent states give
/// |<alpha|beta>|^2.
double fidelity(const RealMoments& s1, const RealMoments& s2);

/// Uniform grid of `count` points on [0, 1]; count >= 2.
std::vector<double> uniform_grid(int count);

/// Throws DomainError unless the grid is non-empty, strictly increasing and inside [0, 1].
void validate_grid(const std::vector<double>& grid);

struct TrajectoryPoint {
  double tau = 0.0;
  double lambda = 0.0;
  ComplexMoments complex;
  RealMoments real;
  double energy = 0.0;
  double entropy = 0.0;
  double coherence_energy = 0.0;
  double coherence_ss = 0.0;
  double fidelity_gibbs = 0.0;
  double fidelity_ss = 0.0;
};

struct Trajectory {
  DrivingVariant variant = DrivingVariant::Nonadiabatic;
  std::vector<TrajectoryPoint> points;
};

/// Right-hand side of d<a>/dtau = -delta_bar <a> - h_bar.
cplx first_moment_rhs(const Driving& drv, DrivingVariant variant, double tau, cplx a_mean);

/// Moments only, without observables. The <a> integral is done interval by
/// interval with adaptive quadrature; second moments use their closed forms.
std::vector<ComplexMoments> evolve_moments(const ComplexMoments& init, const Driving& drv,
                                           DrivingVariant variant, const std::vector<double>& grid);

/// Full trajectory with every observable. The initial state sits at tau = 0;
/// the grid need not contain 0.
Trajectory evolve(const ComplexMoments& init, const Driving& drv, DrivingVariant variant,
                  const std::vector<double>& grid);
Trajectory evolve(const ComplexMoments& init, const ModelParams& p, const DrivingProtocol& proto,
                  DrivingVariant variant, const std::vector<double>& grid);

}  // namespace drosc
