#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shtc/simm.hpp"
#include "shtc/systems.hpp"

namespace shtc {

enum class Scheme { Htc, Simm };

const char* to_string(Scheme scheme);
Scheme parse_scheme(std::string_view name);

/// Initial data of one of the built-in experiments.
struct InitialCondition {
  std::string preset;  ///< maxwell_gaussian, acoustic_gaussian or glm_planar
  double sigma = 0.0;  ///< Gaussian width
  double amplitude = 0.0;
  double background = 0.0;
  std::array<double, 3> b0{};
  std::array<double, 3> d0{};
  double phi_amplitude = 0.0;
  double psi_amplitude = 0.0;
};

struct RunConfig {
  SystemKind system = SystemKind::Maxwell;
  Scheme scheme = Scheme::Simm;
  InitialCondition ic;
  EnergyParams energy;

  int nx = 0;
  int ny = 0;
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  double t_end = 0.0;
  std::optional<double> dt;   ///< semi-implicit scheme
  std::optional<double> cfl;  ///< explicit scheme

  int rk_order = 4;
  std::string tableau_file;  ///< overrides rk_order when set
  int gauss_points = 3;
  PicardConfig picard;

  std::string output_dir;  ///< empty: no files are written
  int output_stride = 0;   ///< 0: every step (simm) or every 10 steps (htc)
  std::vector<double> snapshot_times;

  int effective_stride() const { return output_stride > 0 ? output_stride : (scheme == Scheme::Simm ? 1 : 10); }
  /// Throws ConfigError on inconsistent settings.
  void validate() const;
};

/// Names of the built-in presets.
std::vector<std::string> preset_names();

/// Complete configuration of a preset at its default resolution, time step
/// and final time, using the semi-implicit scheme.
RunConfig preset_config(std::string_view name);

/// Parses a flat JSON object. Required keys: preset, nx, ny, t_end and
/// exactly one of dt (semi-implicit) or cfl (explicit). Everything else
/// defaults to the preset; unknown or inapplicable keys are errors.
RunConfig parse_config(const std::string& text);

/// Reads and parses a configuration file.
RunConfig load_config(const std::string& path);

}  // namespace shtc
