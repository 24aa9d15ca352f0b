#pragma once

#include <vector>

#include "drosc/driving.hpp"
#include "drosc/gaussian.hpp"

namespace drosc::oracle {

/// Parameters of rho = e^phi e^{alpha a^dag} e^{chi n} e^{conj(alpha) a} with z = e^chi.
struct MuftiState {
  double z = 0.0;
  cplx alpha;

  /// Normalisation e^phi = (1 - z) exp(|alpha|^2 / (z - 1)).
  double normalization() const;
  ComplexMoments moments() const;
};

/// Displaced thermal states only: requires V_a = 0 (to 1e-12) and C >= 0.
/// Throws AnsatzError otherwise.
MuftiState mufti_from_moments(const ComplexMoments& m);

/// Boltzmann factor e^{-1/y}, the stable root of gamma_down z^2 - 2 sigma z + gamma_up = 0.
double mufti_fixed_point(const BathConstants& bath);

struct MuftiTrajectory {
  std::vector<double> tau;
  std::vector<MuftiState> states;
  std::vector<ComplexMoments> moments;
};

/// Integrates the two ansatz ODEs from tau = 0 with an adaptive
/// Dormand-Prince stepper (absolute and relative tolerance `tol`).
/// Throws AnsatzError if z leaves [0, 1).
MuftiTrajectory evolve_mufti(const MuftiState& init, const Driving& drv, DrivingVariant variant,
                             const std::vector<double>& grid, double tol = 1e-12);

}  // namespace drosc::oracle
