#include "shtc/presets.hpp"

#include <cmath>
#include <numbers>

namespace shtc {

StateVector initial_state(const RunConfig& c, double x, double y) {
  const InitialCondition& ic = c.ic;
  if (ic.preset == "maxwell_gaussian") {
    const double g = std::exp(-0.5 * (x * x + y * y) / (ic.sigma * ic.sigma));
    return {ic.b0[0] * g, ic.b0[1] * g, ic.b0[2] * g, ic.d0[0] * g, ic.d0[1] * g, ic.d0[2] * g};
  }
  if (ic.preset == "acoustic_gaussian") {
    const double g = std::exp(-0.5 * (x * x + y * y) / (ic.sigma * ic.sigma));
    return {0.0, 0.0, 0.0, ic.amplitude * g + ic.background};
  }
  if (ic.preset == "glm_planar") {
    const double w = std::sin(2.0 * std::numbers::pi * (x + y));
    return {ic.b0[0] * w, ic.b0[1] * w, ic.b0[2] * w, ic.phi_amplitude * w,
            ic.d0[0] * w, ic.d0[1] * w, ic.d0[2] * w, ic.psi_amplitude * w};
  }
  throw ConfigError("unknown preset '" + ic.preset + "'");
}

void check_periodic(const RunConfig& c) {
  constexpr int kSamples = 257;
  double scale = 1.0;
  double worst = 0.0;
  for (int s = 0; s < kSamples; ++s) {
    const double t = static_cast<double>(s) / (kSamples - 1);
    const double x = c.x0 + t * (c.x1 - c.x0);
    const double y = c.y0 + t * (c.y1 - c.y0);
    const std::array<std::pair<StateVector, StateVector>, 2> pairs = {
        std::pair{initial_state(c, c.x0, y), initial_state(c, c.x1, y)},
        std::pair{initial_state(c, x, c.y0), initial_state(c, x, c.y1)}};
    for (const auto& [a, b] : pairs) {
      scale = std::max({scale, a.norm_inf(), b.norm_inf()});
      worst = std::max(worst, (a - b).norm_inf());
    }
  }
  if (worst > 1e-12 * scale)
    throw ConfigError("initial data of preset '" + c.ic.preset +
                      "' are not periodic on the chosen domain (boundary mismatch " + std::to_string(worst) + ")");
}

StaggeredFields initialize_staggered(const RunConfig& c, const SystemModel& sys, const StaggeredMesh& mesh) {
  StaggeredFields f = make_staggered_fields(sys, mesh);
  for (Location loc : {Location::Cell, Location::Vertex}) {
    const auto idx = sys.block_indices(loc);
    for (int j = 0; j < mesh.ny(); ++j)
      for (int i = 0; i < mesh.nx(); ++i) {
        const auto x = mesh.position(loc, i, j);
        const StateVector q = initial_state(c, x[0], x[1]);
        auto b = f.block(loc, mesh.index(i, j));
        for (std::size_t k = 0; k < idx.size(); ++k) b[k] = q[idx[k]];
      }
  }
  return f;
}

CollocatedState initialize_collocated(const RunConfig& c, const SystemModel& sys, const StaggeredMesh& mesh) {
  CollocatedState s = make_collocated_state(sys, mesh);
  const int dim = sys.dim();
  for (int j = 0; j < mesh.ny(); ++j)
    for (int i = 0; i < mesh.nx(); ++i) {
      const auto x = mesh.cell_center(i, j);
      const StateVector q = initial_state(c, x[0], x[1]);
      for (int k = 0; k < dim; ++k) s.q[static_cast<std::size_t>(mesh.index(i, j)) * dim + k] = q[k];
    }
  return s;
}

}  // namespace shtc
