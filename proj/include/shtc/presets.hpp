#pragma once

#include "shtc/config.hpp"
#include "shtc/grid.hpp"
#include "shtc/htc.hpp"
#include "shtc/simm.hpp"

namespace shtc {

/// Full state of the preset's initial data at a point.
StateVector initial_state(const RunConfig& config, double x, double y);

/// Throws ConfigError unless the initial data agree on opposite sides of the
/// domain, which the periodic mesh requires.
void check_periodic(const RunConfig& config);

/// Staggered initial fields: cell blocks sampled at cell centres, vertex
/// blocks at vertices.
StaggeredFields initialize_staggered(const RunConfig& config, const SystemModel& sys, const StaggeredMesh& mesh);

/// Collocated initial state sampled at cell centres.
CollocatedState initialize_collocated(const RunConfig& config, const SystemModel& sys, const StaggeredMesh& mesh);

}  // namespace shtc
