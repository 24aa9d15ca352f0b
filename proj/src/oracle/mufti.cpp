#include "drosc/oracle/mufti.hpp"

#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <sstream>

#include "drosc/errors.hpp"

namespace drosc::oracle {
namespace {

using State = std::array<double, 3>;  // z, Re alpha, Im alpha

void require_ansatz(double z, double tau) {
  if (!(z >= 0.0 && z < 1.0)) {
    std::ostringstream msg;
    msg << "Mufti ansatz left its validity region: z = " << z << " at tau = " << tau;
    throw AnsatzError(msg.str(), z);
  }
}

}  // namespace

double MuftiState::normalization() const {
  return (1.0 - z) * std::exp(std::norm(alpha) / (z - 1.0));
}

ComplexMoments MuftiState::moments() const {
  ComplexMoments m;
  m.a_mean = alpha / (1.0 - z);
  m.v_a = 0.0;
  m.c_aadag = z / (1.0 - z);
  return m;
}

MuftiState mufti_from_moments(const ComplexMoments& m) {
  if (std::abs(m.v_a) > 1e-12) throw AnsatzError("Mufti ansatz needs V_a = 0", std::abs(m.v_a));
  if (!(m.c_aadag >= 0.0)) throw AnsatzError("Mufti ansatz needs C >= 0", m.c_aadag);
  MuftiState s;
  s.z = m.c_aadag / (1.0 + m.c_aadag);
  s.alpha = m.a_mean * (1.0 - s.z);
  return s;
}

double mufti_fixed_point(const BathConstants& bath) { return bath.gamma_up() / bath.gamma_down(); }

MuftiTrajectory evolve_mufti(const MuftiState& init, const Driving& drv, DrivingVariant variant,
                             const std::vector<double>& grid, double tol) {
  namespace odeint = boost::numeric::odeint;
  validate_grid(grid);
  require_ansatz(init.z, 0.0);

  const BathConstants& b = drv.bath();
  const double g12 = b.gamma_down();
  const double g21 = b.gamma_up();
  const double sigma = 0.5 * (g12 + g21);
  const cplx rot(sigma, b.sigma_bar + drv.params().script_t);

  auto rhs = [&](const State& s, State& ds, double tau) {
    const double z = s[0];
    const cplx alpha(s[1], s[2]);
    ds[0] = -2.0 * sigma * z + g12 * z * z + g21;
    const cplx da = (g12 * z - rot) * alpha + drv.h_bar(tau, variant) * (z - 1.0);
    ds[1] = da.real();
    ds[2] = da.imag();
  };

  MuftiTrajectory out;
  State state{init.z, init.alpha.real(), init.alpha.imag()};
  auto stepper = odeint::make_controlled(tol, tol, odeint::runge_kutta_dopri5<State>());
  const double first_dt = 0.01 / std::max(1.0, std::abs(rot));
  double t = 0.0;
  for (double target : grid) {
    if (target > t) {
      odeint::integrate_adaptive(stepper, rhs, state, t, target, first_dt);
      t = target;
    }
    require_ansatz(state[0], target);
    MuftiState s;
    s.z = state[0];
    s.alpha = cplx(state[1], state[2]);
    out.tau.push_back(target);
    out.states.push_back(s);
    out.moments.push_back(s.moments());
  }
  return out;
}

}  // namespace drosc::oracle
