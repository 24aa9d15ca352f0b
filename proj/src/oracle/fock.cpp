#include "drosc/oracle/fock.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "drosc/errors.hpp"

namespace drosc::oracle {
namespace {

constexpr cplx kI(0.0, 1.0);

// exp(i G) for Hermitian G.
Matrix exp_i_hermitian(const Matrix& g) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(g);
  const Eigen::VectorXcd phases = (kI * es.eigenvalues().cast<cplx>()).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

int padded_dim(int dim) { return 2 * dim + 40; }

}  // namespace

double FockDensityMatrix::min_eigenvalue() const {
  const Matrix h = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

FockDensityMatrix FockDensityMatrix::padded(int new_dim) const {
  if (new_dim < dim()) throw DomainError("padded: new dimension is smaller");
  FockDensityMatrix out;
  out.rho = Matrix::Zero(new_dim, new_dim);
  out.rho.topLeftCorner(dim(), dim()) = rho;
  return out;
}

Matrix annihilation(int dim) {
  Matrix a = Matrix::Zero(dim, dim);
  for (int k = 1; k < dim; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

namespace {

// exp(beta a^dag - conj(beta) a) = exp(i G) with G Hermitian, in exactly `dim` levels.
Matrix truncated_displacement(cplx beta, int dim) {
  const Matrix a = annihilation(dim);
  const Matrix g = -kI * (beta * a.adjoint() - std::conj(beta) * a);
  return exp_i_hermitian(g);
}

}  // namespace

Matrix displacement(cplx beta, int dim) {
  return truncated_displacement(beta, padded_dim(dim)).topLeftCorner(dim, dim);
}

FockDensityMatrix thermal_state(double n, int dim) {
  if (dim < 2) throw DomainError("thermal_state: dim must be >= 2");
  if (n < 0.0) throw DomainError("thermal_state: negative occupation");
  FockDensityMatrix s;
  s.rho = Matrix::Zero(dim, dim);
  const double q = n / (n + 1.0);
  double p = 1.0;
  double total = 0.0;
  for (int k = 0; k < dim; ++k) {
    s.rho(k, k) = p;
    total += p;
    p *= q;
  }
  s.rho /= total;
  return s;
}

FockDensityMatrix gaussian_state(const ComplexMoments& m, int dim) {
  if (dim < 2) throw DomainError("gaussian_state: dim must be >= 2");
  const double two_c = 2.0 * m.c_aadag + 1.0;
  const double nu2 = two_c * two_c - 4.0 * std::norm(m.v_a);
  if (!(nu2 >= 1.0 - 1e-9)) throw DomainError("gaussian_state: unphysical moments");
  const double nu = std::sqrt(std::max(nu2, 1.0));
  const double n_thermal = 0.5 * (nu - 1.0);
  const double r = 0.5 * std::acosh(std::max(1.0, two_c / nu));
  const double theta = std::abs(m.v_a) > 0.0 ? std::arg(-m.v_a) : 0.0;
  const cplx xi = std::polar(r, theta);

  const int big = padded_dim(dim);
  const Matrix a = annihilation(big);
  const Matrix a2 = a * a;
  // S(xi) = exp((conj(xi) a^2 - xi a^dag^2)/2) = exp(i G).
  const Matrix g = -kI * 0.5 * (std::conj(xi) * a2 - xi * a2.adjoint());
  const Matrix u = truncated_displacement(m.a_mean, big) * exp_i_hermitian(g);
  const Matrix full = u * thermal_state(n_thermal, big).rho * u.adjoint();

  FockDensityMatrix s;
  s.rho = full.topLeftCorner(dim, dim);
  s.rho = 0.5 * (s.rho + s.rho.adjoint()).eval();
  s.rho /= s.rho.trace().real();
  return s;
}

ComplexMoments fock_moments(const FockDensityMatrix& s) {
  const int n = s.dim();
  cplx a = 0.0;
  cplx a2 = 0.0;
  double number = 0.0;
  for (int k = 0; k < n; ++k) {
    number += k * s.rho(k, k).real();
    if (k + 1 < n) a += std::sqrt(k + 1.0) * s.rho(k + 1, k);
    if (k + 2 < n) a2 += std::sqrt((k + 1.0) * (k + 2.0)) * s.rho(k + 2, k);
  }
  ComplexMoments m;
  m.a_mean = a;
  m.v_a = a2 - a * a;
  m.c_aadag = number - std::norm(a);
  return m;
}

void FockGenerator::apply(const Matrix& rho, Matrix& out) const {
  const int n = static_cast<int>(rho.rows());
  const int ld = n + 2;
  out.resize(n, n);

  // Zero border around rho removes the boundary branches from the kernel.
  thread_local std::vector<cplx> pad;
  thread_local std::vector<double> sq;
  thread_local std::vector<double> k_up;
  pad.assign(static_cast<std::size_t>(ld) * ld, cplx(0.0, 0.0));
  if (static_cast<int>(k_up.size()) != n) {
    sq.resize(n + 2);
    for (int k = 0; k < n + 2; ++k) sq[k] = std::sqrt(static_cast<double>(k));
    // Diagonal of the truncated a a^dag.
    k_up.resize(n);
    for (int k = 0; k < n; ++k) k_up[k] = k + 1 < n ? k + 1.0 : 0.0;
  }
  for (int c = 0; c < n; ++c) {
    std::copy(rho.data() + static_cast<std::size_t>(c) * n, rho.data() + static_cast<std::size_t>(c + 1) * n,
              pad.data() + static_cast<std::size_t>(c + 1) * ld + 1);
  }

  const cplx d = drive;
  const cplx dc = std::conj(drive);
  const cplx minus_i(0.0, -1.0);
  for (int c = 0; c < n; ++c) {
    const cplx* left = pad.data() + static_cast<std::size_t>(c) * ld;
    const cplx* mid = left + ld;
    const cplx* right = mid + ld;
    const cplx col_left = d * sq[c];
    const cplx col_right = dc * sq[c + 1];
    const double gain_down = gamma_down * sq[c + 1];
    const double gain_up = gamma_up * sq[c];
    cplx* dst = out.data() + static_cast<std::size_t>(c) * n;
    for (int r = 0; r < n; ++r) {
      const cplx comm = omega * (r - c) * mid[r + 1] + d * sq[r + 1] * mid[r + 2] +
                        dc * sq[r] * mid[r] - col_left * left[r + 1] - col_right * right[r + 1];
      const cplx diss = -0.5 * (gamma_down * (r + c) + gamma_up * (k_up[r] + k_up[c])) * mid[r + 1] +
                        gain_down * sq[r + 1] * right[r + 2] + gain_up * sq[r] * left[r];
      dst[r] = minus_i * comm + diss;
    }
  }
}

Matrix FockGenerator::operator()(const Matrix& rho) const {
  Matrix out;
  apply(rho, out);
  return out;
}

FockGenerator build_generator(double tau, const Driving& drv, DrivingVariant variant) {
  FockGenerator gen = undriven_generator(drv.bath(), drv.params().script_t);
  gen.drive = kI * std::conj(drv.h_bar(tau, variant));
  return gen;
}

FockGenerator undriven_generator(const BathConstants& bath, double script_t) {
  FockGenerator gen;
  gen.omega = script_t + bath.sigma_bar;
  gen.gamma_down = bath.gamma_down();
  gen.gamma_up = bath.gamma_up();
  return gen;
}

double default_fock_step(const Driving& drv, DrivingVariant variant, int dim) {
  const BathConstants& b = drv.bath();
  double drive_max = 0.0;
  for (int k = 0; k <= 20; ++k) drive_max = std::max(drive_max, std::abs(drv.h_bar(k / 20.0, variant)));
  const double omega = std::abs(drv.params().script_t + b.sigma_bar);
  const double bound = omega * (dim - 1) + 4.0 * drive_max * std::sqrt(static_cast<double>(dim)) +
                       (b.gamma_down() + b.gamma_up()) * dim;
  double step = 1e-4;
  if (b.gamma_bar > 0.0) step = std::min(step, 0.1 / b.gamma_bar);
  return std::min(step, 2.0 / bound);
}

namespace {

FockTrajectory run_fixed(const FockDensityMatrix& init, const Driving& drv, DrivingVariant variant,
                         const std::vector<double>& grid, const FockOptions& opts, int dim) {
  const double step = opts.step > 0.0 ? opts.step : default_fock_step(drv, variant, dim);
  FockTrajectory out;
  out.dim = dim;
  out.step = step;
  out.min_eigenvalue = 1.0;

  Matrix rho = init.rho;
  Matrix k1, k2, k3, k4, tmp;
  double t = 0.0;
  FockGenerator gen_now = build_generator(0.0, drv, variant);

  auto check_tail = [&](double tau) {
    const double tail = rho(dim - 1, dim - 1).real();
    out.max_tail = std::max(out.max_tail, tail);
    if (tail > opts.tail_tolerance) {
      std::ostringstream msg;
      msg << "Fock truncation too small: population " << tail << " in level " << dim - 1
          << " at tau = " << tau;
      throw TruncationError(msg.str(), tau, dim);
    }
  };
  check_tail(0.0);

  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const double target = grid[idx];
    const double span = target - t;
    if (span > 0.0) {
      const int steps = std::max(1, static_cast<int>(std::ceil(span / step - 1e-9)));
      const double h = span / steps;
      for (int s = 0; s < steps; ++s) {
        const double t0 = t + s * h;
        const double t1 = (s + 1 == steps) ? target : t0 + h;
        const FockGenerator gen_mid = build_generator(0.5 * (t0 + t1), drv, variant);
        const FockGenerator gen_end = build_generator(t1, drv, variant);
        gen_now.apply(rho, k1);
        tmp = rho + (0.5 * h) * k1;
        gen_mid.apply(tmp, k2);
        tmp = rho + (0.5 * h) * k2;
        gen_mid.apply(tmp, k3);
        tmp = rho + h * k3;
        gen_end.apply(tmp, k4);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        gen_now = gen_end;
        check_tail(t1);
      }
      t = target;
    }
    FockDensityMatrix snap{rho};
    out.tau.push_back(target);
    out.moments.push_back(fock_moments(snap));
    out.max_trace_drift = std::max(out.max_trace_drift, std::abs(snap.trace() - 1.0));
    out.max_hermiticity_error = std::max(out.max_hermiticity_error, snap.hermiticity_error());
    const int stride = std::max(1, opts.eigen_stride);
    if (idx % stride == 0 || idx + 1 == grid.size()) {
      out.min_eigenvalue = std::min(out.min_eigenvalue, snap.min_eigenvalue());
    }
  }
  return out;
}

}  // namespace

FockTrajectory evolve_fock(const FockDensityMatrix& init, const Driving& drv, DrivingVariant variant,
                           const std::vector<double>& grid, const FockOptions& opts) {
  validate_grid(grid);
  if (init.dim() < 2) throw DomainError("evolve_fock: dimension must be >= 2");
  if (std::abs(init.trace() - 1.0) > 1e-8) throw DomainError("evolve_fock: initial trace is not 1");
  if (init.hermiticity_error() > 1e-10) throw DomainError("evolve_fock: initial state not Hermitian");

  int dim = std::max(init.dim(), opts.dim);
  const int max_dim = std::max(dim, opts.max_dim);
  int restarts = 0;
  while (true) {
    try {
      auto out = run_fixed(init.padded(dim), drv, variant, grid, opts, dim);
      out.restarts = restarts;
      return out;
    } catch (const TruncationError& e) {
      if (dim >= max_dim) throw;
      dim = std::min(2 * dim, max_dim);
      ++restarts;
    }
  }
}

double interaction_picture_check(double tau, const Driving& drv, int dim, int block) {
  if (dim < 2 || block < 1 || block > dim) throw DomainError("interaction_picture_check: bad sizes");
  const double t = drv.params().script_t;
  const cplx big_a = drv.a_bar(tau);
  const Matrix a = annihilation(dim);
  Eigen::VectorXcd phase(dim);
  for (int k = 0; k < dim; ++k) phase(k) = std::exp(-kI * (t * tau * k));
  const Matrix u = phase.asDiagonal() * displacement(big_a, dim);
  const Matrix lhs = u.adjoint() * a * u;
  const Matrix rhs =
      std::exp(-kI * (t * tau)) * (big_a * Matrix::Identity(dim, dim) + a);
  const Matrix diff = (lhs - rhs).topLeftCorner(block, block);
  Eigen::JacobiSVD<Matrix> svd(diff);
  return svd.singularValues()(0);
}

}  // namespace drosc::oracle
