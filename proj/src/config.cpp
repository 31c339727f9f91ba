#include "shtc/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace shtc {

const char* to_string(Scheme scheme) { return scheme == Scheme::Htc ? "htc" : "simm"; }

Scheme parse_scheme(std::string_view name) {
  if (name == "htc") return Scheme::Htc;
  if (name == "simm") return Scheme::Simm;
  throw ConfigError("unknown scheme '" + std::string(name) + "' (expected htc or simm)");
}

void RunConfig::validate() const {
  if (nx <= 0 || ny <= 0) throw ConfigError("nx and ny must be positive");
  if (!(x1 > x0) || !(y1 > y0)) throw ConfigError("domain extents must be increasing");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ConfigError("t_end must be a finite non-negative number");
  if (dt.has_value() == cfl.has_value()) throw ConfigError("exactly one of dt and cfl must be set");
  if (scheme == Scheme::Simm && cfl) throw ConfigError("cfl applies to the htc scheme only; simm needs dt");
  if (scheme == Scheme::Htc && dt) throw ConfigError("dt applies to the simm scheme only; htc needs cfl");
  if (dt && !(*dt > 0.0)) throw ConfigError("dt must be positive");
  if (cfl && !(*cfl > 0.0 && *cfl <= 1.0)) throw ConfigError("cfl must lie in (0, 1]");
  if (tableau_file.empty() && (rk_order < 1 || rk_order > 4)) throw ConfigError("rk_order must be 1, 2, 3 or 4");
  if (gauss_points < 1 || gauss_points > 64) throw ConfigError("gauss_points must lie in [1, 64]");
  if (output_stride < 0) throw ConfigError("output_stride must be non-negative");
  for (double t : snapshot_times)
    if (!(t >= 0.0)) throw ConfigError("snapshot times must be non-negative");
  try {
    energy.validate();
    picard.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::vector<std::string> preset_names() { return {"maxwell_gaussian", "acoustic_gaussian", "glm_planar"}; }

RunConfig preset_config(std::string_view name) {
  RunConfig c;
  c.ic.preset = std::string(name);
  c.scheme = Scheme::Simm;
  if (name == "maxwell_gaussian") {
    c.system = SystemKind::Maxwell;
    c.energy.maxwell_eps = 0.01;
    c.x0 = c.y0 = -1.0;
    c.x1 = c.y1 = 1.0;
    c.nx = c.ny = 100;
    c.dt = 0.001;
    c.t_end = 0.5;
    c.ic.sigma = 0.1;
    c.ic.b0 = {0.0, 0.0, 1e-2};
    c.ic.d0 = {0.0, 0.0, 1e-2};
  } else if (name == "acoustic_gaussian") {
    c.system = SystemKind::Acoustics;
    c.energy.gamma = 1.4;
    c.x0 = c.y0 = -0.5;
    c.x1 = c.y1 = 0.5;
    c.nx = c.ny = 200;
    c.dt = 0.001;
    c.t_end = 0.25;
    c.ic.sigma = 0.05;
    c.ic.amplitude = 1.0;
    c.ic.background = 4.0;
  } else if (name == "glm_planar") {
    c.system = SystemKind::MaxwellGLM;
    c.energy.mu0 = 1.0;
    c.x0 = c.y0 = 0.0;
    c.x1 = c.y1 = 1.0;
    c.nx = c.ny = 64;
    c.dt = 0.0005;
    c.t_end = 0.5;
    c.ic.b0 = {0.125, 0.0, 0.5};
    c.ic.d0 = {0.25, 0.5, 0.0};
    c.ic.phi_amplitude = 0.125;
    c.ic.psi_amplitude = 0.25;
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "'");
  }
  return c;
}

namespace {

using json = nlohmann::json;

// Keys meaningful for every preset.
const std::set<std::string> kCommonKeys = {
    "preset",       "system",          "scheme",        "nx",          "ny",
    "x0",           "x1",              "y0",            "y1",          "t_end",
    "dt",           "cfl",             "rk_order",      "tableau_file", "gauss_points",
    "picard_tol",   "picard_max_iters", "krylov_tol",   "krylov_max_iters", "krylov_restart",
    "output_dir",   "output_stride",   "snapshot_times"};

std::set<std::string> preset_keys(const std::string& preset) {
  if (preset == "maxwell_gaussian") return {"maxwell_eps", "sigma", "b0", "d0"};
  if (preset == "acoustic_gaussian") return {"gamma", "sigma", "amplitude", "background"};
  return {"mu0", "b0", "d0", "phi_amplitude", "psi_amplitude"};
}

double get_real(const json& doc, const char* key) {
  const json& v = doc.at(key);
  if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

int get_int(const json& doc, const char* key) {
  const json& v = doc.at(key);
  if (!v.is_number_integer()) throw ConfigError(std::string("'") + key + "' must be an integer");
  const auto i = v.get<long long>();
  if (i < -2147483647LL || i > 2147483647LL) throw ConfigError(std::string("'") + key + "' is out of range");
  return static_cast<int>(i);
}

std::string get_string(const json& doc, const char* key) {
  const json& v = doc.at(key);
  if (!v.is_string()) throw ConfigError(std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

std::array<double, 3> get_vec3(const json& doc, const char* key) {
  const json& v = doc.at(key);
  if (!v.is_array() || v.size() != 3) throw ConfigError(std::string("'") + key + "' must be an array of 3 numbers");
  std::array<double, 3> out{};
  for (int i = 0; i < 3; ++i) {
    if (!v[i].is_number()) throw ConfigError(std::string("'") + key + "' must be an array of 3 numbers");
    out[i] = v[i].get<double>();
  }
  return out;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("configuration syntax error: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");

  std::vector<std::string> missing;
  for (const char* key : {"preset", "nx", "ny", "t_end"})
    if (!doc.contains(key)) missing.emplace_back(key);
  if (!doc.contains("dt") && !doc.contains("cfl")) missing.emplace_back("dt or cfl");
  if (!missing.empty()) {
    std::string msg = "missing required keys:";
    for (const auto& k : missing) msg += " " + k;
    throw ConfigError(msg);
  }

  const std::string preset = get_string(doc, "preset");
  RunConfig c = preset_config(preset);
  const std::set<std::string> extra = preset_keys(preset);
  for (const auto& item : doc.items()) {
    if (kCommonKeys.count(item.key()) || extra.count(item.key())) continue;
    bool other_preset = false;
    for (const auto& p : preset_names()) other_preset = other_preset || preset_keys(p).count(item.key()) > 0;
    if (other_preset) throw ConfigError("key '" + item.key() + "' does not apply to preset '" + preset + "'");
    throw ConfigError("unknown configuration key '" + item.key() + "'");
  }

  if (doc.contains("system")) {
    const SystemKind kind = parse_system_kind(get_string(doc, "system"));
    if (kind != c.system)
      throw ConfigError("system '" + get_string(doc, "system") + "' does not match preset '" + preset + "' (" +
                        to_string(c.system) + ")");
  }

  c.nx = get_int(doc, "nx");
  c.ny = get_int(doc, "ny");
  c.t_end = get_real(doc, "t_end");
  for (auto [key, field] : {std::pair{"x0", &c.x0}, {"x1", &c.x1}, {"y0", &c.y0}, {"y1", &c.y1}})
    if (doc.contains(key)) *field = get_real(doc, key);

  c.dt.reset();
  if (doc.contains("dt")) c.dt = get_real(doc, "dt");
  if (doc.contains("cfl")) c.cfl = get_real(doc, "cfl");
  if (doc.contains("scheme"))
    c.scheme = parse_scheme(get_string(doc, "scheme"));
  else
    c.scheme = c.cfl && !c.dt ? Scheme::Htc : Scheme::Simm;

  if (doc.contains("rk_order")) c.rk_order = get_int(doc, "rk_order");
  if (doc.contains("tableau_file")) c.tableau_file = get_string(doc, "tableau_file");
  if (doc.contains("gauss_points")) c.gauss_points = get_int(doc, "gauss_points");
  if (doc.contains("picard_tol")) c.picard.tol = get_real(doc, "picard_tol");
  if (doc.contains("picard_max_iters")) c.picard.max_iters = get_int(doc, "picard_max_iters");
  if (doc.contains("krylov_tol")) c.picard.krylov_tol = get_real(doc, "krylov_tol");
  if (doc.contains("krylov_max_iters")) c.picard.krylov_max_iters = get_int(doc, "krylov_max_iters");
  if (doc.contains("krylov_restart")) c.picard.krylov_restart = get_int(doc, "krylov_restart");

  if (doc.contains("gamma")) c.energy.gamma = get_real(doc, "gamma");
  if (doc.contains("maxwell_eps")) c.energy.maxwell_eps = get_real(doc, "maxwell_eps");
  if (doc.contains("mu0")) c.energy.mu0 = get_real(doc, "mu0");
  if (doc.contains("sigma")) c.ic.sigma = get_real(doc, "sigma");
  if (doc.contains("amplitude")) c.ic.amplitude = get_real(doc, "amplitude");
  if (doc.contains("background")) c.ic.background = get_real(doc, "background");
  if (doc.contains("b0")) c.ic.b0 = get_vec3(doc, "b0");
  if (doc.contains("d0")) c.ic.d0 = get_vec3(doc, "d0");
  if (doc.contains("phi_amplitude")) c.ic.phi_amplitude = get_real(doc, "phi_amplitude");
  if (doc.contains("psi_amplitude")) c.ic.psi_amplitude = get_real(doc, "psi_amplitude");
  if ((preset == "maxwell_gaussian" || preset == "acoustic_gaussian") && !(c.ic.sigma > 0.0))
    throw ConfigError("sigma must be positive");

  if (doc.contains("output_dir")) c.output_dir = get_string(doc, "output_dir");
  if (doc.contains("output_stride")) c.output_stride = get_int(doc, "output_stride");
  if (doc.contains("snapshot_times")) {
    const json& v = doc.at("snapshot_times");
    if (!v.is_array()) throw ConfigError("'snapshot_times' must be an array of numbers");
    for (const auto& t : v) {
      if (!t.is_number()) throw ConfigError("'snapshot_times' must be an array of numbers");
      c.snapshot_times.push_back(t.get<double>());
    }
    std::sort(c.snapshot_times.begin(), c.snapshot_times.end());
  }

  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open configuration file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

}  // namespace shtc
