#include "drosc/commands.hpp"

#include <cstdio>
#include <fstream>
#include <future>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "drosc/errors.hpp"
#include "drosc/oracle/fock.hpp"
#include "drosc/oracle/mufti.hpp"
#include "json.hpp"

namespace drosc {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

const char* kGridNote = "uniform grid on [0, 1] including both endpoints";

std::string csv_row(const std::vector<double>& values) {
  std::string line;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) line += ',';
    line += format_double(values[k]);
  }
  line += '\n';
  return line;
}

std::string csv_header(const std::vector<std::string>& cols) {
  std::string line;
  for (std::size_t k = 0; k < cols.size(); ++k) {
    if (k) line += ',';
    line += cols[k];
  }
  line += '\n';
  return line;
}

json params_json(const ModelParams& p) {
  return {{"y", p.y}, {"w", p.w}, {"eta", p.eta}, {"script_t", p.script_t}, {"delta_l", p.delta_l}};
}

json initial_json(const InitialStateSpec& s) {
  return {{"a_mean", {s.a_mean.real(), s.a_mean.imag()}},
          {"v_a", {s.v_a.real(), s.v_a.imag()}},
          {"delta_n0", s.delta_n0}};
}

std::string script_t_label(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", t);
  return buf;
}

enum class FigureKind { DeltaG, PositionMomentum, Energy, Entropy, Coherence };

struct FigurePreset {
  std::string id;
  FigureKind kind;
  std::vector<double> script_ts;
  double delta_l;
  std::vector<DrivingVariant> variants;
};

const std::vector<FigurePreset>& presets() {
  using V = DrivingVariant;
  static const std::vector<FigurePreset> all = {
      {"fig1", FigureKind::DeltaG, {10, 20, 200, 2000}, 10.0, {}},
      {"fig2", FigureKind::PositionMomentum, {2000, 200, 20, 10}, 10.0, {V::Nonadiabatic, V::Adiabatic}},
      {"fig3", FigureKind::Energy, {100, 20, 10, 5}, 10.0, {V::Nonadiabatic, V::Adiabatic}},
      {"fig4", FigureKind::Entropy, {20}, 10.0, {V::Nonadiabatic, V::Adiabatic}},
      {"fig5", FigureKind::Coherence, {2000, 200, 20, 10}, 10.0, {V::Nonadiabatic, V::Adiabatic}},
      {"appD1", FigureKind::PositionMomentum, {2000, 200, 20, 10}, 10.0, {V::Nonadiabatic, V::WeaklyDriven}},
      {"appD2", FigureKind::PositionMomentum, {2000, 200, 20, 10}, 0.1, {V::Nonadiabatic, V::WeaklyDriven}},
  };
  return all;
}

std::vector<std::string> figure_columns(const FigurePreset& f) {
  std::vector<std::string> cols{"tau"};
  if (f.kind == FigureKind::DeltaG) {
    cols.push_back("re_delta_g_over_omega");
    cols.push_back("minus_im_delta_g_over_omega");
    return cols;
  }
  if (f.kind == FigureKind::PositionMomentum) cols.push_back("lambda");
  for (auto v : f.variants) {
    const std::string s(to_string(v));
    switch (f.kind) {
      case FigureKind::PositionMomentum:
        cols.push_back("x_minus_lambda_" + s);
        cols.push_back("p_" + s);
        break;
      case FigureKind::Energy:
        cols.push_back("energy_" + s);
        break;
      case FigureKind::Entropy:
        cols.push_back("entropy_" + s);
        break;
      case FigureKind::Coherence:
        cols.push_back("coherence_energy_" + s);
        cols.push_back("coherence_ss_" + s);
        cols.push_back("fidelity_gibbs_" + s);
        cols.push_back("fidelity_ss_" + s);
        break;
      case FigureKind::DeltaG:
        break;
    }
  }
  return cols;
}

std::string figure_csv(const FigurePreset& f, const RunConfig& cfg, double script_t) {
  ModelParams p = cfg.params;
  p.script_t = script_t;
  p.delta_l = f.delta_l;
  const Driving drv(p, DrivingProtocol::linear_ramp(p.delta_l));
  const auto grid = cfg.make_grid();

  std::string out = csv_header(figure_columns(f));
  if (f.kind == FigureKind::DeltaG) {
    for (double tau : grid) {
      const cplx dg = drv.delta_g_bar(tau) / script_t;
      out += csv_row({tau, dg.real(), -dg.imag()});
    }
    return out;
  }

  std::vector<Trajectory> trajs;
  for (auto v : f.variants) trajs.push_back(evolve(cfg.initial_moments(), drv, v, grid));
  for (std::size_t k = 0; k < grid.size(); ++k) {
    std::vector<double> row{grid[k]};
    if (f.kind == FigureKind::PositionMomentum) row.push_back(trajs[0].points[k].lambda);
    for (const auto& t : trajs) {
      const TrajectoryPoint& pt = t.points[k];
      switch (f.kind) {
        case FigureKind::PositionMomentum:
          row.push_back(pt.real.x_mean - pt.lambda);
          row.push_back(pt.real.p_mean);
          break;
        case FigureKind::Energy:
          row.push_back(pt.energy);
          break;
        case FigureKind::Entropy:
          row.push_back(pt.entropy);
          break;
        case FigureKind::Coherence:
          row.push_back(pt.coherence_energy);
          row.push_back(pt.coherence_ss);
          row.push_back(pt.fidelity_gibbs);
          row.push_back(pt.fidelity_ss);
          break;
        case FigureKind::DeltaG:
          break;
      }
    }
    out += csv_row(row);
  }
  return out;
}

void max_into(double& dst, double v) { dst = std::max(dst, std::abs(v)); }

}  // namespace

int exit_code_for_current_exception(std::ostream& err) {
  try {
    throw;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const TruncationError& e) {
    err << "truncation error: " << e.what() << '\n';
    return kExitTruncation;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const RangeError& e) {
    err << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.close();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

const std::vector<std::string>& trajectory_columns() {
  static const std::vector<std::string> cols = {
      "tau", "re_a", "im_a", "x", "p", "v_x", "v_p", "c_xp", "energy", "entropy",
      "coherence_energy", "coherence_ss", "fidelity_gibbs", "fidelity_ss"};
  return cols;
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = csv_header(trajectory_columns());
  for (const auto& pt : traj.points) {
    out += csv_row({pt.tau, pt.complex.a_mean.real(), pt.complex.a_mean.imag(), pt.real.x_mean,
                    pt.real.p_mean, pt.real.v_x, pt.real.v_p, pt.real.c_xp, pt.energy, pt.entropy,
                    pt.coherence_energy, pt.coherence_ss, pt.fidelity_gibbs, pt.fidelity_ss});
  }
  return out;
}

std::vector<fs::path> run_trajectory(const RunConfig& cfg) {
  const fs::path dir = output_dir(cfg);
  const Driving drv(cfg.params, cfg.make_protocol());
  const auto grid = cfg.make_grid();
  const ComplexMoments init = cfg.initial_moments();

  std::vector<fs::path> files;
  json file_list = json::array();
  for (auto v : cfg.variants) {
    const Trajectory traj = evolve(init, drv, v, grid);
    const fs::path path = dir / (cfg.output.prefix + "_" + std::string(to_string(v)) + ".csv");
    write_file_atomic(path, trajectory_csv(traj));
    files.push_back(path);
    file_list.push_back(path.filename().string());
  }

  json sidecar;
  sidecar["schema_version"] = kConfigSchemaVersion;
  sidecar["drosc_version"] = kVersion;
  sidecar["command"] = "trajectory";
  sidecar["config"] = json::parse(serialize_config(cfg));
  sidecar["grid"] = {{"count", cfg.grid.count}, {"spacing", cfg.grid.spacing}, {"note", kGridNote}};
  sidecar["columns"] = trajectory_columns();
  sidecar["files"] = file_list;
  sidecar["weak_coupling_warning"] = cfg.params.weak_coupling_warning();
  write_file_atomic(dir / (cfg.output.prefix + ".json"), sidecar.dump(2) + "\n");
  return files;
}

const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> out;
    for (const auto& p : presets()) out.push_back(p.id);
    return out;
  }();
  return ids;
}

std::vector<fs::path> run_figures(const std::string& id, const fs::path& out,
                                  const std::optional<RunConfig>& overrides) {
  const FigurePreset* preset = nullptr;
  for (const auto& p : presets()) {
    if (p.id == id) preset = &p;
  }
  if (!preset) {
    std::string known;
    for (const auto& k : figure_ids()) known += (known.empty() ? "" : ", ") + k;
    throw ConfigError("figure", "unknown figure id '" + id + "' (known: " + known + ")");
  }

  const RunConfig defaults;
  RunConfig cfg = defaults;
  json overridden = json::array();
  if (overrides) {
    cfg.params.y = overrides->params.y;
    cfg.params.w = overrides->params.w;
    cfg.params.eta = overrides->params.eta;
    cfg.initial_state = overrides->initial_state;
    cfg.grid = overrides->grid;
    if (cfg.params.y != defaults.params.y) overridden.push_back("params.y");
    if (cfg.params.w != defaults.params.w) overridden.push_back("params.w");
    if (cfg.params.eta != defaults.params.eta) overridden.push_back("params.eta");
    if (!(cfg.initial_state == defaults.initial_state)) overridden.push_back("initial_state");
    if (!(cfg.grid == defaults.grid)) overridden.push_back("grid");
  }

  std::vector<std::future<std::string>> jobs;
  for (double t : preset->script_ts) {
    jobs.push_back(std::async(std::launch::async, [preset, &cfg, t] { return figure_csv(*preset, cfg, t); }));
  }

  std::vector<fs::path> files;
  json series = json::array();
  const auto cols = figure_columns(*preset);
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    const double t = preset->script_ts[k];
    const std::string name = preset->id + "_T" + script_t_label(t) + ".csv";
    write_file_atomic(out / name, jobs[k].get());
    files.push_back(out / name);
    series.push_back({{"file", name}, {"script_t", t}, {"columns", cols}});
  }

  json variants = json::array();
  for (auto v : preset->variants) variants.push_back(std::string(to_string(v)));
  ModelParams shown = cfg.params;
  shown.delta_l = preset->delta_l;
  json params = params_json(shown);
  params.erase("script_t");

  json manifest;
  manifest["schema_version"] = kConfigSchemaVersion;
  manifest["drosc_version"] = kVersion;
  manifest["figure"] = preset->id;
  manifest["parameters"] = params;
  manifest["script_t"] = preset->script_ts;
  manifest["variants"] = variants;
  manifest["initial_state"] = initial_json(cfg.initial_state);
  manifest["grid"] = {{"count", cfg.grid.count}, {"spacing", cfg.grid.spacing}, {"note", kGridNote}};
  manifest["series"] = series;
  manifest["overrides"] = overridden;
  write_file_atomic(out / "manifest.json", manifest.dump(2) + "\n");
  return files;
}

bool VerifyReport::passed() const {
  for (const auto& d : deviations) {
    if (!d.ok()) return false;
  }
  return true;
}

VerifyReport run_verify(const RunConfig& cfg) {
  VerifyReport report;
  const Driving drv(cfg.params, cfg.make_protocol());
  const auto grid = cfg.make_oracle_grid();
  const ComplexMoments init = cfg.initial_moments();
  const bool mufti_ok = std::abs(init.v_a) <= 1e-12;
  if (!mufti_ok) report.notes.push_back("Mufti oracle skipped: it needs V_a(0) = 0");

  oracle::FockOptions opts;
  opts.dim = cfg.oracle.dim;
  opts.max_dim = cfg.oracle_max_dim();
  opts.step = cfg.oracle.step;

  for (auto v : cfg.variants) {
    const std::string vname(to_string(v));
    const auto gauss = evolve_moments(init, drv, v, grid);

    auto compare = [&](const std::string& solver, const std::vector<ComplexMoments>& other,
                       double tol_first, double tol_second) {
      double dx = 0, dp = 0, dvx = 0, dvp = 0, dc = 0, de = 0, ds = 0;
      for (std::size_t k = 0; k < grid.size(); ++k) {
        const RealMoments a = to_real(gauss[k]);
        const RealMoments b = to_real(other[k]);
        const double lambda = drv.protocol().lambda(grid[k]);
        max_into(dx, a.x_mean - b.x_mean);
        max_into(dp, a.p_mean - b.p_mean);
        max_into(dvx, a.v_x - b.v_x);
        max_into(dvp, a.v_p - b.v_p);
        max_into(dc, a.c_xp - b.c_xp);
        max_into(de, energy(a, lambda) - energy(b, lambda));
        max_into(ds, entropy(a) - entropy(b));
      }
      const double tol_obs = cfg.oracle.tol_observable;
      for (auto [q, val, tol] : {std::tuple{"x", dx, tol_first}, std::tuple{"p", dp, tol_first},
                                 std::tuple{"v_x", dvx, tol_second}, std::tuple{"v_p", dvp, tol_second},
                                 std::tuple{"c_xp", dc, tol_second}, std::tuple{"energy", de, tol_obs},
                                 std::tuple{"entropy", ds, tol_obs}}) {
        report.deviations.push_back({solver, vname, q, val, tol});
      }
    };

    const auto fock = oracle::evolve_fock(oracle::gaussian_state(init, opts.dim), drv, v, grid, opts);
    compare("fock", fock.moments, cfg.oracle.tol_first_moment, cfg.oracle.tol_second_moment);
    report.deviations.push_back({"fock", vname, "trace_drift", fock.max_trace_drift, 1e-8});
    report.deviations.push_back({"fock", vname, "negative_eigenvalue", std::max(0.0, -fock.min_eigenvalue), 1e-7});
    std::ostringstream note;
    note << "fock " << vname << ": dim " << fock.dim << ", step " << fock.step << ", restarts "
         << fock.restarts << ", max tail " << fock.max_tail;
    report.notes.push_back(note.str());

    if (mufti_ok) {
      const auto mufti = oracle::evolve_mufti(oracle::mufti_from_moments(init), drv, v, grid);
      compare("mufti", mufti.moments, cfg.oracle.tol_mufti, cfg.oracle.tol_mufti);
    }
  }
  return report;
}

void print_report(const VerifyReport& report, std::ostream& os) {
  os << std::left << std::setw(7) << "solver" << std::setw(15) << "variant" << std::setw(21)
     << "quantity" << std::setw(14) << "max_abs_dev" << std::setw(12) << "tolerance"
     << "status\n";
  for (const auto& d : report.deviations) {
    os << std::left << std::setw(7) << d.solver << std::setw(15) << d.variant << std::setw(21)
       << d.quantity << std::setw(14) << std::scientific << std::setprecision(3) << d.value
       << std::setw(12) << d.tolerance << (d.ok() ? "ok" : "EXCEEDED") << '\n';
  }
  os << std::defaultfloat;
  for (const auto& n : report.notes) os << "# " << n << '\n';
  os << (report.passed() ? "verify: all deviations within tolerance\n"
                         : "verify: tolerance exceeded\n");
}

}  // namespace drosc
