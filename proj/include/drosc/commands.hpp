#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "drosc/config.hpp"
#include "drosc/gaussian.hpp"

namespace drosc {

inline constexpr const char* kVersion = "0.1.0";

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitNumeric = 3,
  kExitTruncation = 4,
};

/// Maps the exception currently being handled to an exit code and prints it.
int exit_code_for_current_exception(std::ostream& err);

/// "%.16e": 17 significant digits, lossless for doubles.
std::string format_double(double v);

/// Writes to a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

const std::vector<std::string>& trajectory_columns();
std::string trajectory_csv(const Trajectory& traj);

/// One CSV per variant plus a JSON sidecar; returns the written paths.
std::vector<std::filesystem::path> run_trajectory(const RunConfig& cfg);

const std::vector<std::string>& figure_ids();

/// Writes every curve of the named figure and a manifest.json into `out`.
/// `overrides`, when given, replaces the preset's y, w, eta, initial state and
/// grid; the swept parameters stay fixed by the figure. Returns the CSV paths.
std::vector<std::filesystem::path> run_figures(const std::string& id, const std::filesystem::path& out,
                                               const std::optional<RunConfig>& overrides = std::nullopt);

struct Deviation {
  std::string solver;
  std::string variant;
  std::string quantity;
  double value = 0.0;
  double tolerance = 0.0;
  bool ok() const { return value <= tolerance; }
};

struct VerifyReport {
  std::vector<Deviation> deviations;
  std::vector<std::string> notes;
  bool passed() const;
};

/// Runs the Gaussian-moment solution, the Fock oracle and (for displaced
/// thermal starts) the Mufti oracle on the oracle grid.
VerifyReport run_verify(const RunConfig& cfg);
void print_report(const VerifyReport& report, std::ostream& os);

}  // namespace drosc
