#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "drosc/driving.hpp"
#include "drosc/gaussian.hpp"
#include "drosc/params.hpp"

namespace drosc {

inline constexpr int kConfigSchemaVersion = 1;

struct GridSpec {
  int count = 2000;
  std::string spacing = "uniform";

  bool operator==(const GridSpec&) const = default;
};

/// C(0) = n_th + delta_n0 - |a_mean|^2.
struct InitialStateSpec {
  cplx a_mean{0.1, 0.1};
  cplx v_a{0.0, 0.0};
  double delta_n0 = 2.0;

  bool operator==(const InitialStateSpec&) const = default;
};

struct OutputSpec {
  std::string dir = "out";
  std::string prefix = "trajectory";

  bool operator==(const OutputSpec&) const = default;
};

struct OracleSpec {
  int dim = 60;
  /// Defaults to 240 when dim is not given explicitly, otherwise to dim.
  std::optional<int> max_dim;
  /// 0 selects the automatic step.
  double step = 0.0;
  int grid_count = 51;
  double tol_first_moment = 1e-4;
  double tol_second_moment = 1e-4;
  double tol_mufti = 1e-6;
  double tol_observable = 1e-3;

  bool operator==(const OracleSpec&) const = default;
};

struct RunConfig {
  int schema_version = kConfigSchemaVersion;
  ModelParams params{0.1, 4.0, 0.008, 20.0, 10.0};
  /// linear_ramp, smoothstep or undriven.
  std::string protocol = "linear_ramp";
  std::vector<DrivingVariant> variants{DrivingVariant::Nonadiabatic, DrivingVariant::Adiabatic,
                                       DrivingVariant::WeaklyDriven};
  GridSpec grid;
  InitialStateSpec initial_state;
  OutputSpec output;
  OracleSpec oracle;

  DrivingProtocol make_protocol() const;
  ComplexMoments initial_moments() const;
  std::vector<double> make_grid() const;
  std::vector<double> make_oracle_grid() const;
  int oracle_max_dim() const;

  bool operator==(const RunConfig&) const = default;
};

/// Strict parse: unknown keys, wrong types and invalid values throw
/// ConfigError naming the field. Missing sections take the defaults above;
/// schema_version is required.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const RunConfig& cfg);

/// Output directory, honouring the DROSC_OUTPUT_DIR environment override.
std::filesystem::path output_dir(const RunConfig& cfg);

}  // namespace drosc
