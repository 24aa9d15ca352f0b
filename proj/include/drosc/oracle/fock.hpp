#pragma once

#include <Eigen/Dense>
#include <vector>

#include "drosc/driving.hpp"
#include "drosc/gaussian.hpp"

namespace drosc::oracle {

using Matrix = Eigen::MatrixXcd;

/// Dense density matrix in the lowest `dim` number states.
struct FockDensityMatrix {
  Matrix rho;

  int dim() const { return static_cast<int>(rho.rows()); }
  double trace() const { return rho.trace().real(); }
  double hermiticity_error() const { return (rho - rho.adjoint()).cwiseAbs().maxCoeff(); }
  double min_eigenvalue() const;
  /// Population of the highest retained level.
  double tail() const { return rho(dim() - 1, dim() - 1).real(); }

  /// Zero-padded copy in a larger basis.
  FockDensityMatrix padded(int new_dim) const;
};

/// Thermal state with occupation n, truncated and renormalised.
FockDensityMatrix thermal_state(double n, int dim);

/// Gaussian state D(beta) S(xi) rho_th S^dag D^dag with the given moments,
/// built in a padded basis and cropped to `dim`.
FockDensityMatrix gaussian_state(const ComplexMoments& m, int dim);

/// <a>, V_a and C from operator traces.
ComplexMoments fock_moments(const FockDensityMatrix& s);

/// Frozen-time generator
///   L[rho] = -i[H, rho] + g_down D[a] rho + g_up D[a^dag] rho,
///   H = omega n + drive a + conj(drive) a^dag,
/// acting on truncated matrices. The truncated a a^dag is diag(1, ..., N-1, 0),
/// which keeps the trace exactly conserved.
struct FockGenerator {
  double omega = 0.0;
  double gamma_down = 0.0;
  double gamma_up = 0.0;
  cplx drive;

  /// out = L[rho]; out must not alias rho.
  void apply(const Matrix& rho, Matrix& out) const;
  Matrix operator()(const Matrix& rho) const;
};

/// Generator of the selected master equation at time tau.
FockGenerator build_generator(double tau, const Driving& drv, DrivingVariant variant);

/// Undriven generator.
FockGenerator undriven_generator(const BathConstants& bath, double script_t);

struct FockOptions {
  int dim = 60;
  int max_dim = 240;
  /// Fixed RK4 step in tau; 0 selects min(1e-4, 0.1/gamma_bar) capped by stability.
  double step = 0.0;
  double tail_tolerance = 1e-6;
  /// Compute the smallest eigenvalue every this many output points (and at the last one).
  int eigen_stride = 10;
};

struct FockTrajectory {
  int dim = 0;
  double step = 0.0;
  std::vector<double> tau;
  std::vector<ComplexMoments> moments;
  double max_trace_drift = 0.0;
  double max_hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;
  double max_tail = 0.0;
  int restarts = 0;
};

/// Step used when FockOptions::step is 0.
double default_fock_step(const Driving& drv, DrivingVariant variant, int dim);

/// Classic RK4 integration of the master equation from tau = 0.
/// When the tail population exceeds the tolerance, the run restarts with the
/// dimension doubled (up to max_dim); beyond that TruncationError is thrown.
FockTrajectory evolve_fock(const FockDensityMatrix& init, const Driving& drv, DrivingVariant variant,
                           const std::vector<double>& grid, const FockOptions& opts = {});

/// Operator-norm residual of U^dag a U - e^{-i T tau}(A(tau) + a) on the lowest
/// `block` levels, with U = exp(-i T tau n) D(A(tau)) built in dimension `dim`.
double interaction_picture_check(double tau, const Driving& drv, int dim = 40, int block = 20);

/// Matrix elements of exp(beta a^dag - conj(beta) a) between the lowest `dim`
/// levels, exponentiated in a padded basis.
Matrix displacement(cplx beta, int dim);

/// Truncated annihilation operator.
Matrix annihilation(int dim);

}  // namespace drosc::oracle
