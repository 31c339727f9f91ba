#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "shtc/config.hpp"
#include "shtc/diagnostics.hpp"

namespace shtc {

/// Outcome of a completed run.
struct RunSummary {
  DiagnosticSeries series;
  int steps = 0;
  double final_time = 0.0;

  double max_abs_rel_energy_error = 0.0;  ///< over every step, not only recorded ones
  std::optional<double> max_div_B;
  std::optional<double> max_div_D;
  std::optional<double> max_curl_v;
  /// Largest |.|_inf of the leading vector field (B or v) over all steps.
  double max_vector_field = 0.0;

  // Semi-implicit runs only.
  long total_picard_iters = 0;
  long total_krylov_iters = 0;
  int max_picard_iters = 0;
  std::vector<int> picard_iters_per_step;
  double max_roe_relative = 0.0;    ///< max over steps of roe_residual / roe_scale
  double max_chain_relative = 0.0;  ///< max over steps of chain_residual / chain_scale

  std::vector<std::string> written_files;

  double mean_picard_iters() const {
    return picard_iters_per_step.empty() ? 0.0
                                         : static_cast<double>(total_picard_iters) / picard_iters_per_step.size();
  }
};

/// Executes the configured run. When config.output_dir is set, writes
/// series.csv and the requested snapshots there; on a solver failure the
/// series recorded so far is still written before the error propagates.
/// Solver errors are rethrown with step and time context.
RunSummary run_simulation(const RunConfig& config);

/// One-line human-readable summary.
std::string summary_line(const RunSummary& summary);

/// Legacy-VTK structured-points snapshot of a staggered state: cell blocks as
/// CELL_DATA, vertex blocks as POINT_DATA on the (nx+1) x (ny+1) lattice.
void write_vtk(std::ostream& out, const SystemModel& sys, const StaggeredMesh& mesh, const StaggeredFields& state,
               double time);
/// Collocated state: every component as CELL_DATA.
void write_vtk(std::ostream& out, const SystemModel& sys, const StaggeredMesh& mesh, const CollocatedState& state);

}  // namespace shtc
