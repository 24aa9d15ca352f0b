// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "drosc/driving.hpp"
#include "drosc/gaussian.hpp"
#include "drosc/oracle/fock.hpp"
#include "drosc/oracle/mufti.hpp"
#include "drosc/params.hpp"
#include "drosc/special_functions.hpp"
#include "support.hpp"

using namespace drosc;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const double kFig2Ts[] = {10.0, 20.0, 200.0, 2000.0};
const DrivingVariant kVariants[] = {DrivingVariant::Nonadiabatic, DrivingVariant::Adiabatic,
                                    DrivingVariant::WeaklyDriven};

ModelParams fig2(double script_t) { return {0.1, 4.0, 0.008, script_t, 10.0}; }

ComplexMoments fig2_initial(const ModelParams& p) {
  const cplx a(0.1, 0.1);
  return {a, 0.0, n_th(p.y) + 2.0 - std::norm(a)};
}

double max_real_diff(const RealMoments& a, const RealMoments& b, bool second) {
  if (!second) return std::max(std::abs(a.x_mean - b.x_mean), std::abs(a.p_mean - b.p_mean));
  return std::max({std::abs(a.v_x - b.v_x), std::abs(a.v_p - b.v_p), std::abs(a.c_xp - b.c_xp)});
}

Outcome bath_constants_grid() {
  const double ws[] = {0.5, 1.0, 2.0, 4.0, 10.0};
  const double etas[] = {1e-4, 1e-3, 4e-3, 8e-3, 2e-2};
  const double ts[] = {5.0, 10.0, 20.0, 200.0, 2000.0};
  double re_rel = 0, im_abs = 0;
  for (double w : ws)
    for (double eta : etas)
      for (double t : ts) {
        const ModelParams p{0.1, w, eta, t, 10.0};
        const auto b = bath_constants(p);
        re_rel = std::max(re_rel, std::abs(b.alpha_bar.real() - b.gamma_bar / 2) / b.gamma_bar);
        im_abs = std::max(im_abs, std::abs(b.alpha_bar.imag() - sigma_bar(p)));
      }
  return {re_rel <= 1e-10 && im_abs <= 1e-9,
          fmt("max|Re a - g/2|/g = %.2e (tol 1e-10), max|Im a - Sigma_PV| = %.2e (tol 1e-9), 125 points", re_rel,
              im_abs)};
}

Outcome closed_form_integrals() {
  std::vector<double> zs;
  for (int k = 0; k <= 100; ++k) zs.push_back(k);
  for (double z = 1e-3; z < 100; z *= 1.3) zs.push_back(z);
  double worst = 0;
  int count = 0;
  for (double z : zs) {
    auto kernel = [](double x) { return 1.0 / ((1.0 + cplx(0, x)) * (1.0 + cplx(0, x))); };
    const auto r0 = testing::reference_integral(kernel, 0.0, z, 0.25);
    const auto r1 = testing::reference_integral([&](double x) { return x * kernel(x); }, 0.0, z, 0.25);
    worst = std::max({worst, std::abs(integral_i0(z) - r0), std::abs(integral_i1(z) - r1)});
    count += 2;
    for (double w : {0.5, 1.0, 4.0, 10.0}) {
      const auto re = testing::reference_integral(
          [&](double x) { return std::exp(cplx(0, x / w)) * kernel(x); }, 0.0, z, 0.25);
      worst = std::max(worst, std::abs(integral_ie(z, w) - re));
      ++count;
    }
  }
  return {worst <= 1e-10, fmt("max abs error %.2e over %d evaluations (tol 1e-10)", worst, count)};
}

Outcome analytic_vs_generic() {
  double df = 0, dg = 0;
  for (double t : kFig2Ts) {
    const auto p = fig2(t);
    const Driving analytic(p, DrivingProtocol::linear_ramp(p.delta_l));
    const Driving generic(p, DrivingProtocol::linear_ramp(p.delta_l).as_generic());
    for (int k = 1; k <= 32; ++k) {
      const double tau = k / 32.0;
      df = std::max(df, std::abs(analytic.f_bar(tau) - generic.f_bar(tau)));
      dg = std::max(dg, std::abs(analytic.g_bar(tau) - generic.g_bar(tau)));
    }
  }
  return {df <= 1e-8 && dg <= 1e-8,
          fmt("max|f analytic - generic| = %.2e, max|g analytic - generic| = %.2e (tol 1e-8), T in {10,20,200,2000}",
              df, dg)};
}

Outcome adiabatic_convergence() {
  std::vector<double> sup;
  for (double t : kFig2Ts) {
    const Driving drv(fig2(t), DrivingProtocol::linear_ramp(10.0));
    double m = 0;
    for (int k = 0; k <= 4000; ++k) m = std::max(m, std::abs(drv.delta_g_bar(k / 4000.0)));
    sup.push_back(m / t);
  }
  bool decreasing = true;
  for (size_t k = 1; k < sup.size(); ++k) decreasing = decreasing && sup[k] < sup[k - 1];
  const double drop = sup.front() / sup.back();
  return {decreasing && drop >= 10.0,
          fmt("max|dg|/T = %.3e, %.3e, %.3e, %.3e; drop %.1fx (need strictly decreasing, >= 10x)", sup[0], sup[1],
              sup[2], sup[3], drop)};
}

Outcome cross_solver() {
  const auto start = std::chrono::steady_clock::now();
  const auto grid = uniform_grid(51);
  double fock1 = 0, fock2 = 0, mufti1 = 0, mufti2 = 0;
  int max_dim = 0;
  for (double t : {10.0, 20.0}) {
    const auto p = fig2(t);
    const Driving drv(p, DrivingProtocol::linear_ramp(p.delta_l));
    const auto init = fig2_initial(p);
    for (auto v : kVariants) {
      const auto g = evolve_moments(init, drv, v, grid);
      oracle::FockOptions opt;
      opt.dim = 60;
      const auto f = oracle::evolve_fock(oracle::gaussian_state(init, opt.dim), drv, v, grid, opt);
      const auto m = oracle::evolve_mufti(oracle::mufti_from_moments(init), drv, v, grid);
      max_dim = std::max(max_dim, f.dim);
      for (size_t k = 0; k < grid.size(); ++k) {
        const auto rg = to_real(g[k]);
        fock1 = std::max(fock1, max_real_diff(rg, to_real(f.moments[k]), false));
        fock2 = std::max(fock2, max_real_diff(rg, to_real(f.moments[k]), true));
        mufti1 = std::max(mufti1, max_real_diff(rg, to_real(m.moments[k]), false));
        mufti2 = std::max(mufti2, max_real_diff(rg, to_real(m.moments[k]), true));
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool ok = fock1 <= 1e-4 && mufti1 <= 1e-4 && fock2 <= 1e-4 && mufti2 <= 1e-4 && secs < 120.0;
  return {ok, fmt("Fock (N 60, grown to %d) first %.2e second %.2e; Mufti first %.2e second %.2e (tol 1e-4); "
                  "%.1f s (limit 120 s)",
                  max_dim, fock1, fock2, mufti1, mufti2, secs)};
}

Outcome variant_independence() {
  double worst = 0;
  for (double t : kFig2Ts) {
    const auto p = fig2(t);
    const Driving drv(p, DrivingProtocol::linear_ramp(p.delta_l));
    const auto grid = uniform_grid(2000);
    const auto ref = evolve(fig2_initial(p), drv, DrivingVariant::Nonadiabatic, grid);
    for (auto v : {DrivingVariant::Adiabatic, DrivingVariant::WeaklyDriven}) {
      const auto tr = evolve(fig2_initial(p), drv, v, grid);
      for (size_t k = 0; k < grid.size(); ++k) {
        const auto& a = ref.points[k];
        const auto& b = tr.points[k];
        worst = std::max({worst, std::abs(a.complex.v_a - b.complex.v_a),
                          std::abs(a.complex.c_aadag - b.complex.c_aadag), std::abs(a.entropy - b.entropy)});
      }
    }
  }
  return {worst <= 1e-12, fmt("max variant difference in V_a, C, S = %.2e (tol 1e-12)", worst)};
}

Outcome steady_state_residual() {
  const auto p = fig2(2000.0);
  const Driving drv(p, DrivingProtocol::linear_ramp(p.delta_l));
  double worst = 0;
  for (double tau : {0.25, 0.75})
    for (auto v : kVariants) {
      const auto ss = to_complex(steady_state_moments(tau, drv, v));
      const auto gen = oracle::build_generator(tau, drv, v);
      const auto rho = oracle::gaussian_state(ss, 80);
      worst = std::max(worst, gen(rho.rho).norm());
    }
  return {worst < 1e-5, fmt("max ||L[rho_ss]||_F = %.2e at N = 80, tau in {0.25, 0.75} (tol 1e-5)", worst)};
}

Outcome slow_driving() {
  const auto p = fig2(2000.0);
  const Driving drv(p, DrivingProtocol::linear_ramp(p.delta_l));
  const auto grid = uniform_grid(2000);
  double min_fss = 1, max_fg = 0, max_css = 0, min_gap = 1e300;
  for (auto v : {DrivingVariant::Nonadiabatic, DrivingVariant::Adiabatic}) {
    const auto tr = evolve(fig2_initial(p), drv, v, grid);
    for (const auto& pt : tr.points) {
      if (pt.tau < 0.2) continue;
      min_fss = std::min(min_fss, pt.fidelity_ss);
      max_fg = std::max(max_fg, pt.fidelity_gibbs);
      max_css = std::max(max_css, pt.coherence_ss);
      min_gap = std::min(min_gap, pt.coherence_energy - pt.coherence_ss);
    }
  }
  const bool ok = min_fss >= 0.999 && 1 - max_fg >= 1e-3 && max_css <= 1e-4 && min_gap > 0;
  return {ok, fmt("min F_ss = %.6f (>= 0.999), min 1-F_gibbs = %.3e (>= 1e-3), max C_ss = %.2e (<= 1e-4), "
                  "min C_e - C_ss = %.2e (> 0)",
                  min_fss, 1 - max_fg, max_css, min_gap)};
}

Outcome physicality() {
  auto g = testing::rng(20261016);
  double max_mu = 0, min_s = 1e300, min_coh = 1e300, max_drift = 0;
  int fock_runs = 0;
  const auto grid = uniform_grid(101);
  const auto fock_grid = uniform_grid(11);
  for (int k = 0; k < 100; ++k) {
    ModelParams p;
    p.y = testing::log_uniform(g, 0.05, 5.0);
    p.w = testing::log_uniform(g, 0.5, 10.0);
    p.eta = testing::log_uniform(g, 1e-4, 2e-2);
    p.script_t = testing::log_uniform(g, 1.0, 50.0);
    p.delta_l = testing::uniform(g, -3.0, 3.0);
    const auto proto = k % 10 == 0 ? DrivingProtocol::smoothstep(p.delta_l) : DrivingProtocol::linear_ramp(p.delta_l);
    const Driving drv(p, proto);
    const double n = testing::uniform(g, 0.0, 0.5);
    const double r = testing::uniform(g, 0.0, 0.3);
    const double theta = testing::uniform(g, -3.14, 3.14);
    ComplexMoments init;
    init.a_mean = cplx(testing::uniform(g, -0.5, 0.5), testing::uniform(g, -0.5, 0.5));
    init.c_aadag = 0.5 * ((2 * n + 1) * std::cosh(2 * r) - 1.0);
    init.v_a = -0.5 * (2 * n + 1) * std::sinh(2 * r) * std::polar(1.0, theta);
    for (auto v : kVariants) {
      const auto tr = evolve(init, drv, v, grid);
      for (const auto& pt : tr.points) {
        max_mu = std::max(max_mu, pt.real.purity());
        min_s = std::min(min_s, pt.entropy);
        min_coh = std::min({min_coh, pt.coherence_energy, pt.coherence_ss});
      }
    }
    oracle::FockOptions opt;
    opt.dim = 24;
    const auto v = kVariants[k % 3];
    const auto f = oracle::evolve_fock(oracle::gaussian_state(init, opt.dim), drv, v, fock_grid, opt);
    max_drift = std::max(max_drift, f.max_trace_drift);
    ++fock_runs;
  }
  const bool ok = max_mu <= 1 + 1e-10 && min_s >= 0 && min_coh >= -1e-12 && max_drift <= 1e-8;
  return {ok, fmt("100 configs: max mu - 1 = %.2e (<= 1e-10), min S = %.2e (>= 0), min coherence = %.2e "
                  "(>= -1e-12), max Fock trace drift = %.2e over %d runs (<= 1e-8)",
                  max_mu - 1, min_s, min_coh, max_drift, fock_runs)};
}

Outcome gradient_check() {
  // Richardson-extrapolated central difference with h T fixed.
  double worst = 0;
  int count = 0;
  for (double t : kFig2Ts) {
    const auto p = fig2(t);
    const Driving drv(p, DrivingProtocol::linear_ramp(p.delta_l));
    const auto init = fig2_initial(p);
    const double h = 0.02 / t;
    for (auto v : kVariants)
      for (int k = 1; k <= 16; ++k) {
        const double tau = 0.05 + 0.9 * (k - 1) / 15.0;
        const auto m = evolve_moments(init, drv, v, {tau - h, tau - h / 2, tau, tau + h / 2, tau + h});
        const cplx d1 = (m[4].a_mean - m[0].a_mean) / (2 * h);
        const cplx d2 = (m[3].a_mean - m[1].a_mean) / h;
        const cplx d4 = (4.0 * d2 - d1) / 3.0;
        const cplx rhs = first_moment_rhs(drv, v, tau, m[2].a_mean);
        worst = std::max(worst, std::abs(d4 - rhs) / std::abs(rhs));
        ++count;
      }
  }
  return {worst <= 1e-6, fmt("max relative error %.2e over %d points (tol 1e-6)", worst, count)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"bath_constants", bath_constants_grid},
      {"closed_form_integrals", closed_form_integrals},
      {"analytic_vs_generic_driving", analytic_vs_generic},
      {"adiabatic_convergence", adiabatic_convergence},
      {"cross_solver_agreement", cross_solver},
      {"variant_independence", variant_independence},
      {"steady_state_residual", steady_state_residual},
      {"slow_driving_fidelity_coherence", slow_driving},
      {"physicality", physicality},
      {"gradient_check", gradient_check},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %s: %s [%.1f s]\n", out.pass ? "PASS" : "FAIL", name, out.detail.c_str(), secs);
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
