#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "shtc/config.hpp"
#include "shtc/driver.hpp"
#include "shtc/verify.hpp"

namespace {

int execute(const shtc::RunConfig& config) {
  try {
    const shtc::RunSummary s = shtc::run_simulation(config);
    std::cout << shtc::summary_line(s) << '\n';
    return 0;
  } catch (const shtc::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-conserving and involution-preserving solvers for SHTC systems"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run a simulation described by a JSON configuration file");
  run->add_option("config", config_path, "configuration file")->required();

  std::string preset;
  std::optional<int> nx, ny, stride, rk_order;
  std::optional<double> dt, cfl, tend;
  std::optional<std::string> out, scheme;
  auto* pre = app.add_subcommand("preset", "Run a built-in experiment");
  pre->add_option("name", preset, "maxwell_gaussian, acoustic_gaussian or glm_planar")->required();
  pre->add_option("--nx", nx, "cells in x");
  pre->add_option("--ny", ny, "cells in y");
  pre->add_option("--dt", dt, "time step (semi-implicit scheme)");
  pre->add_option("--cfl", cfl, "CFL number (explicit scheme)");
  pre->add_option("--tend", tend, "final time");
  pre->add_option("--out", out, "output directory");
  pre->add_option("--scheme", scheme, "simm or htc");
  pre->add_option("--stride", stride, "record every n-th step");
  pre->add_option("--rk-order", rk_order, "Runge-Kutta order for htc (1-4)");

  auto* verify = app.add_subcommand("verify", "Check the discrete identities and conservation properties");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return execute(shtc::load_config(config_path));

    if (*pre) {
      shtc::RunConfig c = shtc::preset_config(preset);
      if (nx) c.nx = *nx;
      if (ny) c.ny = *ny;
      if (tend) c.t_end = *tend;
      if (scheme) c.scheme = shtc::parse_scheme(*scheme);
      if (cfl || c.scheme == shtc::Scheme::Htc) {
        c.scheme = shtc::Scheme::Htc;
        c.dt.reset();
        c.cfl = cfl.value_or(c.system == shtc::SystemKind::Maxwell ? 0.5 : 0.4);
      }
      if (dt) c.dt = *dt;
      if (out) c.output_dir = *out;
      if (stride) c.output_stride = *stride;
      if (rk_order) c.rk_order = *rk_order;
      c.validate();
      return execute(c);
    }

    if (*verify) {
      bool ok = true;
      for (const auto& r : shtc::run_verification()) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << "  (" << r.detail << ")\n";
        ok = ok && r.passed;
      }
      return ok ? 0 : 1;
    }
  } catch (const shtc::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 64;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
