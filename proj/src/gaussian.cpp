#include "drosc/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "drosc/errors.hpp"
#include "drosc/quadrature.hpp"

namespace drosc {
namespace {

constexpr double kOccupationSlack = 1e-12;
constexpr double kPuritySlack = 1e-9;

const quad::Tolerance kMomentTol{1e-13, 1e-11, 20000};

double clamp_occupation(double n, const char* what) {
  if (n < -kOccupationSlack) {
    std::ostringstream msg;
    msg << what << ": negative occupation " << n;
    throw NumericError(msg.str(), n);
  }
  return std::max(n, 0.0);
}

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace

double RealMoments::purity() const { return 1.0 / std::sqrt(det()); }

RealMoments to_real(const ComplexMoments& m) {
  RealMoments r;
  r.x_mean = 2.0 * m.a_mean.real();
  r.p_mean = 2.0 * m.a_mean.imag();
  r.v_x = 2.0 * m.c_aadag + 1.0 + 2.0 * m.v_a.real();
  r.v_p = 2.0 * m.c_aadag + 1.0 - 2.0 * m.v_a.real();
  r.c_xp = 2.0 * m.v_a.imag();
  return r;
}

ComplexMoments to_complex(const RealMoments& m) {
  ComplexMoments c;
  c.a_mean = cplx(0.5 * m.x_mean, 0.5 * m.p_mean);
  c.v_a = cplx(0.25 * (m.v_x - m.v_p), 0.5 * m.c_xp);
  c.c_aadag = 0.25 * (m.v_x + m.v_p) - 0.5;
  return c;
}

void require_physical(const RealMoments& m, double slack) {
  if (!(m.v_x > 0.0) || !(m.v_p > 0.0)) {
    std::ostringstream msg;
    msg << "unphysical state: variances must be positive (v_x = " << m.v_x << ", v_p = " << m.v_p
        << ")";
    throw DomainError(msg.str());
  }
  const double mu = m.purity();
  if (!(mu <= 1.0 + slack)) {
    std::ostringstream msg;
    msg << "unphysical state: purity mu = " << mu << " exceeds 1";
    throw DomainError(msg.str());
  }
}

double occupation_entropy(double n) {
  n = clamp_occupation(n, "occupation_entropy");
  return xlogx(n + 1.0) - xlogx(n);
}

double energy(const RealMoments& m, double lambda) {
  return 0.25 * (m.p_mean * m.p_mean + m.x_mean * m.x_mean) - 0.5 * lambda * m.x_mean +
         0.25 * lambda * lambda + 0.25 * (m.v_p + m.v_x);
}

double entropy(const RealMoments& m) {
  const double d = m.det();
  if (!(d > 0.0)) throw NumericError("entropy: non-positive covariance determinant", d);
  const double nu = std::sqrt(d);
  if (1.0 / nu > 1.0 + kPuritySlack) {
    std::ostringstream msg;
    msg << "entropy: unphysical state, purity mu = " << 1.0 / nu;
    throw NumericError(msg.str(), 1.0 / nu - 1.0);
  }
  return xlogx(0.5 * (nu + 1.0)) - xlogx(std::max(0.0, 0.5 * (nu - 1.0)));
}

double energy_basis_occupation(const ComplexMoments& m, double lambda) {
  const double n = m.c_aadag + std::norm(m.a_mean) - lambda * m.a_mean.real() + 0.25 * lambda * lambda;
  return clamp_occupation(n, "energy_basis_occupation");
}

double coherence_energy_basis(const ComplexMoments& m, double lambda) {
  return occupation_entropy(energy_basis_occupation(m, lambda)) - entropy(to_real(m));
}

double ss_basis_occupation(const RealMoments& m, const RealMoments& ss) {
  const double nu = std::sqrt(ss.det());
  const double dx = m.x_mean - ss.x_mean;
  const double dp = m.p_mean - ss.p_mean;
  const double form = ss.v_p * (m.v_x + dx * dx) + ss.v_x * (m.v_p + dp * dp) -
                      2.0 * ss.c_xp * (m.c_xp + dx * dp);
  return clamp_occupation(0.25 * form / nu - 0.5, "ss_basis_occupation");
}

double coherence_ss_basis(const ComplexMoments& m, const RealMoments& ss) {
  const RealMoments r = to_real(m);
  return occupation_entropy(ss_basis_occupation(r, ss)) - entropy(r);
}

RealMoments steady_state_moments(double tau, const Driving& drv, DrivingVariant variant) {
  const BathConstants& b = drv.bath();
  const cplx a_ss = -drv.h_bar(tau, variant) / b.delta_bar;
  RealMoments r;
  r.x_mean = 2.0 * a_ss.real();
  r.p_mean = 2.0 * a_ss.imag();
  r.v_x = r.v_p = 2.0 * b.n_th + 1.0;
  r.c_xp = 0.0;
  return r;
}

RealMoments steady_state_moments(double tau, const ModelParams& p, const DrivingProtocol& proto,
                                 DrivingVariant variant) {
  return steady_state_moments(tau, Driving(p, proto), variant);
}

RealMoments gibbs_moments(double tau, const ModelParams& p, const DrivingProtocol& proto) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw DomainError("gibbs_moments: tau outside [0, 1]");
  RealMoments r;
  r.x_mean = proto.lambda(tau);
  r.p_mean = 0.0;
  r.v_x = r.v_p = 2.0 * n_th(p.y) + 1.0;
  return r;
}

double fidelity(const RealMoments& s1, const RealMoments& s2) {
  const double vx = s1.v_x + s2.v_x;
  const double vp = s1.v_p + s2.v_p;
  const double c = s1.c_xp + s2.c_xp;
  const double det = vx * vp - c * c;
  if (!(det > 0.0)) throw NumericError("fidelity: singular covariance sum", det);
  const double dx = s1.x_mean - s2.x_mean;
  const double dp = s1.p_mean - s2.p_mean;
  const double quad_form = (vp * dx * dx + vx * dp * dp - 2.0 * c * dx * dp) / det;
  const double big_delta = 0.25 * det;
  const double big_lambda = 0.25 * std::max(0.0, s1.det() - 1.0) * std::max(0.0, s2.det() - 1.0);
  const double norm = std::sqrt(big_delta + big_lambda) - std::sqrt(big_lambda);
  return std::exp(-0.5 * quad_form) / norm;
}

std::vector<double> uniform_grid(int count) {
  if (count < 2) throw DomainError("uniform_grid: need at least 2 points");
  std::vector<double> g(count);
  for (int k = 0; k < count; ++k) g[k] = static_cast<double>(k) / (count - 1);
  return g;
}

void validate_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw DomainError("grid is empty");
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!(grid[k] >= 0.0 && grid[k] <= 1.0)) throw DomainError("grid point outside [0, 1]");
    if (k > 0 && !(grid[k] > grid[k - 1])) throw DomainError("grid is not strictly increasing");
  }
}

cplx first_moment_rhs(const Driving& drv, DrivingVariant variant, double tau, cplx a_mean) {
  return -drv.bath().delta_bar * a_mean - drv.h_bar(tau, variant);
}

std::vector<ComplexMoments> evolve_moments(const ComplexMoments& init, const Driving& drv,
                                           DrivingVariant variant, const std::vector<double>& grid) {
  validate_grid(grid);
  require_physical(to_real(init));
  const BathConstants& b = drv.bath();
  const cplx delta = b.delta_bar;

  std::vector<ComplexMoments> out;
  out.reserve(grid.size());
  cplx a = init.a_mean;
  double prev = 0.0;
  for (double tau : grid) {
    if (tau > prev) {
      const double end = tau;
      auto integrand = [&](double s) { return std::exp(-delta * (end - s)) * drv.h_bar(s, variant); };
      const double span = tau - prev;
      const int panels = std::max(1, static_cast<int>(std::ceil(drv.params().script_t * span / std::numbers::pi)));
      a = a * std::exp(-delta * span) - quad::integrate_panels(integrand, prev, tau, panels, kMomentTol).value;
    }
    ComplexMoments m;
    m.a_mean = a;
    m.v_a = init.v_a * std::exp(-2.0 * delta * tau);
    const double decay = std::exp(-b.gamma_bar * tau);
    m.c_aadag = init.c_aadag * decay - b.n_th * std::expm1(-b.gamma_bar * tau);
    out.push_back(m);
    prev = tau;
  }
  return out;
}

Trajectory evolve(const ComplexMoments& init, const Driving& drv, DrivingVariant variant,
                  const std::vector<double>& grid) {
  const auto moments = evolve_moments(init, drv, variant, grid);
  Trajectory traj;
  traj.variant = variant;
  traj.points.reserve(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    TrajectoryPoint pt;
    pt.tau = grid[k];
    pt.lambda = drv.protocol().lambda(pt.tau);
    pt.complex = moments[k];
    pt.real = to_real(pt.complex);
    pt.energy = energy(pt.real, pt.lambda);
    pt.entropy = entropy(pt.real);
    pt.coherence_energy = coherence_energy_basis(pt.complex, pt.lambda);
    const RealMoments ss = steady_state_moments(pt.tau, drv, variant);
    const RealMoments gibbs = gibbs_moments(pt.tau, drv.params(), drv.protocol());
    pt.coherence_ss = coherence_ss_basis(pt.complex, ss);
    pt.fidelity_gibbs = fidelity(pt.real, gibbs);
    pt.fidelity_ss = fidelity(pt.real, ss);
    traj.points.push_back(pt);
  }
  return traj;
}

Trajectory evolve(const ComplexMoments& init, const ModelParams& p, const DrivingProtocol& proto,
                  DrivingVariant variant, const std::vector<double>& grid) {
  return evolve(init, Driving(p, proto), variant, grid);
}

}  // namespace drosc
