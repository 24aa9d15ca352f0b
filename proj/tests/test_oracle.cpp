#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "drosc/errors.hpp"
#include "drosc/gaussian.hpp"
#include "drosc/oracle/fock.hpp"
#include "drosc/oracle/mufti.hpp"
#include "support.hpp"

using drosc::cplx;
using drosc::ComplexMoments;
using drosc::Driving;
using drosc::DrivingProtocol;
using drosc::DrivingVariant;
using drosc::ModelParams;
using drosc::oracle::Matrix;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr cplx kI(0.0, 1.0);
const ModelParams kFig2{0.1, 4.0, 0.008, 20.0, 10.0};

ModelParams with_t(double script_t) {
  ModelParams p = kFig2;
  p.script_t = script_t;
  return p;
}

ComplexMoments fig2_initial(const ModelParams& p) {
  const cplx a(0.1, 0.1);
  return {a, 0.0, drosc::n_th(p.y) + 2.0 - std::norm(a)};
}

const DrivingVariant kVariants[] = {DrivingVariant::Nonadiabatic, DrivingVariant::Adiabatic,
                                    DrivingVariant::WeaklyDriven};

Matrix random_matrix(std::mt19937_64& g, int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cplx(testing::uniform(g, -1, 1), testing::uniform(g, -1, 1));
  return m;
}

// Exact for the truncated ladder operators, which are nilpotent.
Matrix nilpotent_exp(const Matrix& x) {
  Matrix term = Matrix::Identity(x.rows(), x.cols());
  Matrix sum = term;
  for (int k = 1; k < x.rows(); ++k) {
    term = term * x / static_cast<double>(k);
    sum += term;
  }
  return sum;
}

}  // namespace

TEST_CASE("generator preserves trace and Hermiticity", "[oracle][fock]") {
  auto g = testing::rng(31);
  const Driving drv(kFig2, DrivingProtocol::linear_ramp(10.0));
  for (auto v : kVariants) {
    const auto gen = drosc::oracle::build_generator(0.4, drv, v);
    for (int k = 0; k < 5; ++k) {
      const Matrix r = random_matrix(g, 30);
      const Matrix h = 0.5 * (r + r.adjoint());
      CHECK(std::abs(gen(h).trace()) < 1e-12 * gen(h).norm());
      CHECK((gen(r).adjoint() - gen(r.adjoint())).cwiseAbs().maxCoeff() < 1e-12 * gen(r).norm());
    }
  }
  const auto wd = drosc::oracle::build_generator(0.5, drv, DrivingVariant::WeaklyDriven);
  CHECK(std::abs(wd.drive - kI * std::conj(cplx(0.0, -50.0))) < 1e-13);
  CHECK_THAT(wd.omega, WithinRel(20.0 + drv.bath().sigma_bar, 1e-15));
}

TEST_CASE("undriven generator has the thermal fixed point", "[oracle][fock]") {
  for (double y : {0.1, 1.0, 3.0}) {
    ModelParams p = kFig2;
    p.y = y;
    const auto bath = drosc::bath_constants(p);
    const auto gen = drosc::oracle::undriven_generator(bath, p.script_t);
    const auto th = drosc::oracle::thermal_state(bath.n_th, 60);
    INFO("y = " << y);
    CHECK(gen(th.rho).cwiseAbs().maxCoeff() < 1e-12 + 10 * th.tail());
  }
}

TEST_CASE("Fock states from moments", "[oracle][fock]") {
  auto g = testing::rng(37);
  for (int k = 0; k < 10; ++k) {
    const double n = testing::uniform(g, 0.0, 1.0);
    const double r = testing::uniform(g, 0.0, 0.5);
    const double nu = 2 * n + 1;
    const ComplexMoments m{cplx(testing::uniform(g, -2, 2), testing::uniform(g, -2, 2)),
                           -0.5 * nu * std::sinh(2 * r) * std::polar(1.0, testing::uniform(g, -3, 3)),
                           0.5 * (nu * std::cosh(2 * r) - 1.0)};
    const auto s = drosc::oracle::gaussian_state(m, 120);
    const auto back = drosc::oracle::fock_moments(s);
    CHECK(std::abs(back.a_mean - m.a_mean) < 1e-6);
    CHECK(std::abs(back.v_a - m.v_a) < 1e-6);
    CHECK(std::abs(back.c_aadag - m.c_aadag) < 1e-6);
    CHECK(s.min_eigenvalue() > -1e-12);
    CHECK(s.hermiticity_error() < 1e-14);
  }
  CHECK_THROWS_AS(drosc::oracle::gaussian_state({0.0, 0.0, -0.3}, 10), drosc::DomainError);
}

TEST_CASE("coherent-state overlap agrees with the fidelity formula", "[oracle][gaussian]") {
  const cplx alpha(0.4, -0.3);
  for (cplx beta : {cplx(0.4, -0.3), cplx(1.0, 0.5), cplx(-0.8, 1.2), cplx(2.0, 0.0)}) {
    const ComplexMoments ma{alpha, 0.0, 0.0};
    const ComplexMoments mb{beta, 0.0, 0.0};
    const auto ra = drosc::oracle::gaussian_state(ma, 60);
    const auto rb = drosc::oracle::gaussian_state(mb, 60);
    const double overlap = (ra.rho * rb.rho).trace().real();
    const double f = drosc::fidelity(drosc::to_real(ma), drosc::to_real(mb));
    INFO("beta = " << beta);
    CHECK_THAT(f, WithinAbs(overlap, 1e-6));
    CHECK_THAT(f, WithinRel(std::exp(-std::norm(alpha - beta)), 1e-14));
  }
}

TEST_CASE("undriven vacuum relaxation in Fock space", "[oracle][fock]") {
  const Driving drv(kFig2, DrivingProtocol::undriven());
  drosc::oracle::FockOptions opts;
  opts.dim = 40;
  opts.max_dim = 40;
  const auto grid = drosc::uniform_grid(11);
  const auto fock = drosc::oracle::evolve_fock(drosc::oracle::thermal_state(0.0, 40), drv,
                                               DrivingVariant::Nonadiabatic, grid, opts);
  const auto& b = drv.bath();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double c = b.n_th * (1 - std::exp(-b.gamma_bar * grid[k]));
    CHECK_THAT(fock.moments[k].c_aadag, WithinAbs(c, 1e-6));
    CHECK(std::abs(fock.moments[k].a_mean) < 1e-14);
  }
  CHECK(fock.dim == 40);
  CHECK(fock.max_trace_drift <= 1e-8);
}

TEST_CASE("Fock oracle reproduces the moment solution", "[oracle][fock][slow]") {
  const Driving drv(with_t(10.0), DrivingProtocol::linear_ramp(10.0));
  const auto init = fig2_initial(drv.params());
  const auto grid = drosc::uniform_grid(21);
  const auto gauss = drosc::evolve_moments(init, drv, DrivingVariant::Nonadiabatic, grid);
  const auto fock = drosc::oracle::evolve_fock(drosc::oracle::gaussian_state(init, 60), drv,
                                               DrivingVariant::Nonadiabatic, grid);
  double dx = 0.0;
  double dv = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto a = drosc::to_real(gauss[k]);
    const auto b = drosc::to_real(fock.moments[k]);
    dx = std::max({dx, std::abs(a.x_mean - b.x_mean), std::abs(a.p_mean - b.p_mean)});
    dv = std::max({dv, std::abs(a.v_x - b.v_x), std::abs(a.v_p - b.v_p), std::abs(a.c_xp - b.c_xp)});
  }
  CHECK(dx < 1e-4);
  CHECK(dv < 1e-4);
  CHECK(fock.max_trace_drift <= 1e-8);
  CHECK(fock.min_eigenvalue >= -1e-7);
  CHECK(fock.max_tail <= 1e-6);
  CHECK(fock.restarts >= 0);
}

TEST_CASE("energy from the Fock oracle at fast driving", "[oracle][fock][slow]") {
  const Driving drv(with_t(5.0), DrivingProtocol::linear_ramp(10.0));
  const auto init = fig2_initial(drv.params());
  const auto traj = drosc::evolve(init, drv, DrivingVariant::Nonadiabatic, {1.0});
  const auto fock = drosc::oracle::evolve_fock(drosc::oracle::gaussian_state(init, 60), drv,
                                               DrivingVariant::Nonadiabatic, {1.0});
  const double e_fock = drosc::energy(drosc::to_real(fock.moments[0]), 10.0);
  CHECK_THAT(traj.points[0].energy, WithinAbs(e_fock, 1e-3));
}

TEST_CASE("truncation failure names tau and dimension", "[oracle][fock][errors]") {
  const Driving drv(kFig2, DrivingProtocol::linear_ramp(10.0));
  drosc::oracle::FockOptions opts;
  opts.dim = 4;
  opts.max_dim = 4;
  const auto init = drosc::oracle::gaussian_state(fig2_initial(kFig2), 4);
  try {
    drosc::oracle::evolve_fock(init, drv, DrivingVariant::Nonadiabatic, drosc::uniform_grid(5), opts);
    FAIL("expected TruncationError");
  } catch (const drosc::TruncationError& e) {
    CHECK(e.dim() == 4);
    CHECK(e.tau() >= 0.0);
    CHECK(e.tau() <= 1.0);
  }
  drosc::oracle::FockDensityMatrix bad{Matrix::Identity(3, 3)};
  CHECK_THROWS_AS(drosc::oracle::evolve_fock(bad, drv, DrivingVariant::Nonadiabatic, {0.5}), drosc::DomainError);
}

TEST_CASE("steady-state residual shrinks with the truncation", "[oracle][fock]") {
  const Driving drv(with_t(2000.0), DrivingProtocol::linear_ramp(10.0));
  for (double tau : {0.25, 0.75}) {
    const auto ss = drosc::steady_state_moments(tau, drv, DrivingVariant::Nonadiabatic);
    const auto gen = drosc::oracle::build_generator(tau, drv, DrivingVariant::Nonadiabatic);
    double prev = 1e300;
    for (int n : {8, 16, 24, 40, 80}) {
      const auto rho = drosc::oracle::gaussian_state(drosc::to_complex(ss), n);
      const double res = gen(rho.rho).norm();
      INFO("tau = " << tau << " N = " << n << " residual = " << res);
      // Decreasing until the roundoff floor of |L| ~ 2e3.
      CHECK(res <= std::max(prev, 1e-8));
      prev = res;
    }
    CHECK(prev < 1e-5);
  }
}

TEST_CASE("interaction-picture ladder operator", "[oracle][fock]") {
  const Driving drv(kFig2, DrivingProtocol::linear_ramp(10.0));
  CHECK(drosc::oracle::interaction_picture_check(0.0, drv) < 1e-13);
  const Driving free(kFig2, DrivingProtocol::undriven());
  CHECK(drosc::oracle::interaction_picture_check(0.5, free) < 1e-13);
  // |A(0.5)| = 2.68 needs more than 40 levels for a 20-level block.
  CHECK(drosc::oracle::interaction_picture_check(0.5, drv, 80, 20) < 1e-8);
  CHECK(drosc::oracle::interaction_picture_check(0.5, drv, 40, 10) < 1e-2);
}

TEST_CASE("displacement frame removes the driving", "[oracle][fock]") {
  // rho = D(z) rho' D(z)^dag with dz/dtau = -delta z - h turns the driven
  // generator into the undriven one:
  //   D^dag L[D rho' D^dag] D - [dz a^dag - conj(dz) a, rho'] = L0[rho'].
  ModelParams p = kFig2;
  p.delta_l = 4.0;
  const Driving drv(p, DrivingProtocol::linear_ramp(p.delta_l));
  const int n = 70;
  const int block = 12;
  const auto a = drosc::oracle::annihilation(n);
  const auto rho_p = drosc::oracle::thermal_state(0.2, n).rho;
  const auto l0 = drosc::oracle::undriven_generator(drv.bath(), p.script_t);
  const auto zetas = drosc::evolve_moments({cplx(0.3, -0.2), 0.0, 0.0}, drv, DrivingVariant::Nonadiabatic,
                                           {0.2, 0.5, 0.9});
  const double taus[] = {0.2, 0.5, 0.9};
  for (int k = 0; k < 3; ++k) {
    const cplx zeta = zetas[k].a_mean;
    const cplx dz = drosc::first_moment_rhs(drv, DrivingVariant::Nonadiabatic, taus[k], zeta);
    const auto d = drosc::oracle::displacement(zeta, n);
    const auto gen = drosc::oracle::build_generator(taus[k], drv, DrivingVariant::Nonadiabatic);
    const Matrix g = dz * a.adjoint() - std::conj(dz) * a;
    const Matrix lhs = d.adjoint() * gen(d * rho_p * d.adjoint()) * d - (g * rho_p - rho_p * g);
    const Matrix diff = (lhs - l0(rho_p)).topLeftCorner(block, block);
    INFO("tau = " << taus[k] << " |zeta| = " << std::abs(zeta));
    CHECK(diff.cwiseAbs().maxCoeff() < 1e-8 * std::max(1.0, gen(rho_p).norm()));
  }
}

TEST_CASE("Mufti fixed point is the Boltzmann factor", "[oracle][mufti]") {
  for (double y : {0.1, 0.5, 2.0}) {
    ModelParams p = kFig2;
    p.y = y;
    const auto b = drosc::bath_constants(p);
    const double z = drosc::oracle::mufti_fixed_point(b);
    CHECK_THAT(z, WithinRel(std::exp(-1.0 / y), 1e-12));
    const double sigma = 0.5 * (b.gamma_down() + b.gamma_up());
    CHECK(std::abs(b.gamma_down() * z * z - 2 * sigma * z + b.gamma_up()) < 1e-14 * b.gamma_down());
  }
}

TEST_CASE("Mufti state moments", "[oracle][mufti]") {
  const ComplexMoments m{cplx(0.7, -0.4), 0.0, 1.3};
  const auto s = drosc::oracle::mufti_from_moments(m);
  const auto back = s.moments();
  CHECK(std::abs(back.a_mean - m.a_mean) < 1e-15);
  CHECK_THAT(back.c_aadag, WithinRel(m.c_aadag, 1e-15));
  CHECK(back.v_a == cplx(0.0));
  // e^phi normalises e^{alpha a^dag} z^n e^{conj(alpha) a}; check against the Fock trace.
  const int n = 80;
  const auto a = drosc::oracle::annihilation(n);
  Matrix zn = Matrix::Zero(n, n);
  for (int k = 0; k < n; ++k) zn(k, k) = std::pow(s.z, k);
  const Matrix ea = nilpotent_exp(s.alpha * a.adjoint());
  const Matrix eb = nilpotent_exp(std::conj(s.alpha) * a);
  CHECK_THAT(s.normalization() * (ea * zn * eb).trace().real(), WithinRel(1.0, 1e-10));
  CHECK_THROWS_AS(drosc::oracle::mufti_from_moments({0.0, cplx(0.1, 0.0), 1.0}), drosc::AnsatzError);
  CHECK_THROWS_AS(drosc::oracle::mufti_from_moments({0.0, 0.0, -0.1}), drosc::AnsatzError);
}

TEST_CASE("undriven Mufti run keeps alpha at zero", "[oracle][mufti]") {
  const Driving drv(kFig2, DrivingProtocol::undriven());
  const auto grid = drosc::uniform_grid(11);
  const auto out = drosc::oracle::evolve_mufti({0.3, 0.0}, drv, DrivingVariant::Nonadiabatic, grid);
  const auto& b = drv.bath();
  const double c0 = 0.3 / 0.7;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CHECK(out.states[k].alpha == cplx(0.0));
    const double c = c0 * std::exp(-b.gamma_bar * grid[k]) + b.n_th * (1 - std::exp(-b.gamma_bar * grid[k]));
    CHECK_THAT(out.moments[k].c_aadag, WithinAbs(c, 1e-10));
  }
}

TEST_CASE("Mufti oracle reproduces the moment solution", "[oracle][mufti]") {
  for (double t : {10.0, 20.0}) {
    const Driving drv(with_t(t), DrivingProtocol::linear_ramp(10.0));
    const auto init = fig2_initial(drv.params());
    const auto grid = drosc::uniform_grid(51);
    for (auto v : kVariants) {
      const auto gauss = drosc::evolve_moments(init, drv, v, grid);
      const auto mufti = drosc::oracle::evolve_mufti(drosc::oracle::mufti_from_moments(init), drv, v, grid);
      double dev = 0.0;
      for (std::size_t k = 0; k < grid.size(); ++k) {
        dev = std::max({dev, std::abs(gauss[k].a_mean - mufti.moments[k].a_mean),
                        std::abs(gauss[k].c_aadag - mufti.moments[k].c_aadag)});
      }
      INFO("T = " << t << " " << drosc::to_string(v));
      CHECK(dev < 1e-6);
    }
  }
}
