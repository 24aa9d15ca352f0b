#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "drosc/commands.hpp"
#include "drosc/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Driven damped quantum oscillator: Gaussian-moment trajectories and oracles"};
  app.set_version_flag("--version", std::string(drosc::kVersion));
  app.require_subcommand(1);

  std::string traj_config;
  auto* traj = app.add_subcommand("trajectory", "Evolve the configured state and write CSV per variant");
  traj->add_option("--config", traj_config, "Run configuration (JSON)")->required();

  std::string figure_id;
  std::string figure_out;
  std::string figure_config;
  auto* figs = app.add_subcommand("figures", "Write the data series of one figure");
  figs->add_option("id", figure_id, "Figure id")->required()->check(CLI::IsMember(drosc::figure_ids()));
  figs->add_option("--out", figure_out, "Output directory")->required();
  figs->add_option("--config", figure_config, "Optional overrides for y, w, eta, initial state and grid");

  std::string verify_config;
  auto* verify = app.add_subcommand("verify", "Compare the moment solution with both oracles");
  verify->add_option("--config", verify_config, "Run configuration (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? drosc::kExitOk : drosc::kExitConfig;
  }

  try {
    if (*traj) {
      const auto cfg = drosc::load_config(traj_config);
      for (const auto& path : drosc::run_trajectory(cfg)) std::cout << path.string() << '\n';
      return drosc::kExitOk;
    }
    if (*figs) {
      std::optional<drosc::RunConfig> overrides;
      if (!figure_config.empty()) overrides = drosc::load_config(figure_config);
      for (const auto& path : drosc::run_figures(figure_id, figure_out, overrides)) {
        std::cout << path.string() << '\n';
      }
      return drosc::kExitOk;
    }
    if (*verify) {
      const auto cfg = drosc::load_config(verify_config);
      const auto report = drosc::run_verify(cfg);
      drosc::print_report(report, std::cout);
      return report.passed() ? drosc::kExitOk : drosc::kExitFailure;
    }
  } catch (...) {
    return drosc::exit_code_for_current_exception(std::cerr);
  }
  return drosc::kExitFailure;
}
