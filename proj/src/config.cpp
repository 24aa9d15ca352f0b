#include "drosc/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "drosc/errors.hpp"
#include "json.hpp"

namespace drosc {
namespace {

using nlohmann::json;

constexpr int kDefaultMaxDim = 240;

void reject_unknown(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) {
      throw ConfigError(path.empty() ? key : path + "." + key, "unknown key");
    }
  }
}

const json& require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  return j;
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "must be finite");
  return v;
}

int get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<int>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

cplx get_complex(const json& j, const std::string& path) {
  if (j.is_number()) return {get_number(j, path), 0.0};
  if (!j.is_array() || j.size() != 2) throw ConfigError(path, "expected [re, im]");
  return {get_number(j[0], path + "[0]"), get_number(j[1], path + "[1]")};
}

double positive(double v, const std::string& path) {
  if (!(v > 0.0)) throw ConfigError(path, "must be positive");
  return v;
}

void parse_params(const json& j, ModelParams& p) {
  require_object(j, "params");
  reject_unknown(j, "params", {"y", "w", "eta", "script_t", "delta_l"});
  if (j.contains("y")) p.y = positive(get_number(j["y"], "params.y"), "params.y");
  if (j.contains("w")) p.w = positive(get_number(j["w"], "params.w"), "params.w");
  if (j.contains("eta")) p.eta = positive(get_number(j["eta"], "params.eta"), "params.eta");
  if (j.contains("script_t")) {
    p.script_t = positive(get_number(j["script_t"], "params.script_t"), "params.script_t");
  }
  if (j.contains("delta_l")) p.delta_l = get_number(j["delta_l"], "params.delta_l");
}

void parse_grid(const json& j, GridSpec& g) {
  require_object(j, "grid");
  reject_unknown(j, "grid", {"count", "spacing"});
  if (j.contains("count")) g.count = get_int(j["count"], "grid.count");
  if (j.contains("spacing")) g.spacing = get_string(j["spacing"], "grid.spacing");
  if (g.count == 0) throw ConfigError("grid.count", "grid is empty");
  if (g.count < 2) throw ConfigError("grid.count", "need at least 2 points");
  if (g.spacing != "uniform") throw ConfigError("grid.spacing", "only \"uniform\" is supported");
}

void parse_initial(const json& j, InitialStateSpec& s) {
  require_object(j, "initial_state");
  reject_unknown(j, "initial_state", {"a_mean", "v_a", "delta_n0"});
  if (j.contains("a_mean")) s.a_mean = get_complex(j["a_mean"], "initial_state.a_mean");
  if (j.contains("v_a")) s.v_a = get_complex(j["v_a"], "initial_state.v_a");
  if (j.contains("delta_n0")) s.delta_n0 = get_number(j["delta_n0"], "initial_state.delta_n0");
}

void parse_output(const json& j, OutputSpec& o) {
  require_object(j, "output");
  reject_unknown(j, "output", {"dir", "prefix"});
  if (j.contains("dir")) o.dir = get_string(j["dir"], "output.dir");
  if (j.contains("prefix")) o.prefix = get_string(j["prefix"], "output.prefix");
  if (o.dir.empty()) throw ConfigError("output.dir", "must not be empty");
  if (o.prefix.empty() || o.prefix.find('/') != std::string::npos) {
    throw ConfigError("output.prefix", "must be a non-empty file name");
  }
}

void parse_oracle(const json& j, OracleSpec& o) {
  require_object(j, "oracle");
  reject_unknown(j, "oracle", {"dim", "max_dim", "step", "grid_count", "tolerances"});
  if (j.contains("dim")) {
    o.dim = get_int(j["dim"], "oracle.dim");
    if (!j.contains("max_dim")) o.max_dim = o.dim;
  }
  if (j.contains("max_dim")) o.max_dim = get_int(j["max_dim"], "oracle.max_dim");
  if (j.contains("step")) o.step = get_number(j["step"], "oracle.step");
  if (j.contains("grid_count")) o.grid_count = get_int(j["grid_count"], "oracle.grid_count");
  if (j.contains("tolerances")) {
    const json& t = require_object(j["tolerances"], "oracle.tolerances");
    reject_unknown(t, "oracle.tolerances", {"first_moment", "second_moment", "mufti", "observable"});
    auto tol = [&](const char* key, double& dst) {
      if (!t.contains(key)) return;
      const std::string path = std::string("oracle.tolerances.") + key;
      dst = positive(get_number(t[key], path), path);
    };
    tol("first_moment", o.tol_first_moment);
    tol("second_moment", o.tol_second_moment);
    tol("mufti", o.tol_mufti);
    tol("observable", o.tol_observable);
  }
  if (o.dim < 2) throw ConfigError("oracle.dim", "must be >= 2");
  if (o.max_dim && *o.max_dim < o.dim) throw ConfigError("oracle.max_dim", "must be >= oracle.dim");
  if (o.step < 0.0) throw ConfigError("oracle.step", "must be >= 0");
  if (o.grid_count < 2) throw ConfigError("oracle.grid_count", "need at least 2 points");
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

}  // namespace

DrivingProtocol RunConfig::make_protocol() const {
  if (protocol == "linear_ramp") return DrivingProtocol::linear_ramp(params.delta_l);
  if (protocol == "smoothstep") return DrivingProtocol::smoothstep(params.delta_l);
  if (protocol == "undriven") return DrivingProtocol::undriven();
  throw ConfigError("protocol", "unknown protocol '" + protocol + "'");
}

ComplexMoments RunConfig::initial_moments() const {
  ComplexMoments m;
  m.a_mean = initial_state.a_mean;
  m.v_a = initial_state.v_a;
  m.c_aadag = n_th(params.y) + initial_state.delta_n0 - std::norm(initial_state.a_mean);
  return m;
}

std::vector<double> RunConfig::make_grid() const { return uniform_grid(grid.count); }

std::vector<double> RunConfig::make_oracle_grid() const { return uniform_grid(oracle.grid_count); }

int RunConfig::oracle_max_dim() const {
  return oracle.max_dim.value_or(std::max(oracle.dim, kDefaultMaxDim));
}

RunConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", std::string("invalid JSON: ") + e.what());
  }
  require_object(root, "<document>");
  reject_unknown(root, "", {"schema_version", "params", "protocol", "variants", "grid",
                            "initial_state", "output", "oracle"});

  RunConfig cfg;
  if (!root.contains("schema_version")) throw ConfigError("schema_version", "missing");
  cfg.schema_version = get_int(root["schema_version"], "schema_version");
  if (cfg.schema_version != kConfigSchemaVersion) {
    throw ConfigError("schema_version", "unsupported version " + std::to_string(cfg.schema_version));
  }
  if (root.contains("params")) parse_params(root["params"], cfg.params);
  if (root.contains("protocol")) {
    cfg.protocol = get_string(root["protocol"], "protocol");
    if (cfg.protocol != "linear_ramp" && cfg.protocol != "smoothstep" && cfg.protocol != "undriven") {
      throw ConfigError("protocol", "expected linear_ramp, smoothstep or undriven");
    }
  }
  if (root.contains("variants")) {
    const json& v = root["variants"];
    if (!v.is_array() || v.empty()) throw ConfigError("variants", "expected a non-empty array");
    cfg.variants.clear();
    for (std::size_t k = 0; k < v.size(); ++k) {
      const std::string path = "variants[" + std::to_string(k) + "]";
      try {
        cfg.variants.push_back(variant_from_string(get_string(v[k], path)));
      } catch (const DomainError& e) {
        throw ConfigError(path, e.what());
      }
    }
    std::set<DrivingVariant> seen(cfg.variants.begin(), cfg.variants.end());
    if (seen.size() != cfg.variants.size()) throw ConfigError("variants", "duplicate entry");
  }
  if (root.contains("grid")) parse_grid(root["grid"], cfg.grid);
  if (root.contains("initial_state")) parse_initial(root["initial_state"], cfg.initial_state);
  if (root.contains("output")) parse_output(root["output"], cfg.output);
  if (root.contains("oracle")) parse_oracle(root["oracle"], cfg.oracle);
  if (!cfg.oracle.max_dim) cfg.oracle.max_dim = std::max(cfg.oracle.dim, kDefaultMaxDim);

  try {
    require_physical(to_real(cfg.initial_moments()));
  } catch (const DomainError& e) {
    throw ConfigError("initial_state", e.what());
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& cfg) {
  json root;
  root["schema_version"] = cfg.schema_version;
  root["params"] = {{"y", cfg.params.y},
                    {"w", cfg.params.w},
                    {"eta", cfg.params.eta},
                    {"script_t", cfg.params.script_t},
                    {"delta_l", cfg.params.delta_l}};
  root["protocol"] = cfg.protocol;
  json variants = json::array();
  for (auto v : cfg.variants) variants.push_back(std::string(to_string(v)));
  root["variants"] = variants;
  root["grid"] = {{"count", cfg.grid.count}, {"spacing", cfg.grid.spacing}};
  root["initial_state"] = {{"a_mean", complex_json(cfg.initial_state.a_mean)},
                           {"v_a", complex_json(cfg.initial_state.v_a)},
                           {"delta_n0", cfg.initial_state.delta_n0}};
  root["output"] = {{"dir", cfg.output.dir}, {"prefix", cfg.output.prefix}};
  json oracle = {{"dim", cfg.oracle.dim},
                 {"step", cfg.oracle.step},
                 {"grid_count", cfg.oracle.grid_count},
                 {"tolerances",
                  {{"first_moment", cfg.oracle.tol_first_moment},
                   {"second_moment", cfg.oracle.tol_second_moment},
                   {"mufti", cfg.oracle.tol_mufti},
                   {"observable", cfg.oracle.tol_observable}}}};
  oracle["max_dim"] = cfg.oracle_max_dim();
  root["oracle"] = oracle;
  return root.dump(2);
}

std::filesystem::path output_dir(const RunConfig& cfg) {
  if (const char* env = std::getenv("DROSC_OUTPUT_DIR"); env && *env) return env;
  return cfg.output.dir;
}

}  // namespace drosc
