#include "shtc/driver.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "shtc/htc.hpp"
#include "shtc/presets.hpp"
#include "shtc/simm.hpp"

namespace shtc {

namespace {

struct FieldGroup {
  const char* name;
  int first;  // full-state index
  int ncomp;  // 1 or 3
};

std::vector<FieldGroup> field_groups(SystemKind kind) {
  switch (kind) {
    case SystemKind::Acoustics: return {{"v", 0, 3}, {"rho", 3, 1}};
    case SystemKind::Maxwell: return {{"B", 0, 3}, {"D", 3, 3}};
    case SystemKind::MaxwellGLM: return {{"B", 0, 3}, {"phi", 3, 1}, {"D", 4, 3}, {"psi", 7, 1}};
  }
  return {};
}

// Position of full-state index `full` inside the block at `loc`, or -1.
int block_position(const SystemModel& sys, Location loc, int full) {
  const auto idx = sys.block_indices(loc);
  for (std::size_t k = 0; k < idx.size(); ++k)
    if (idx[k] == full) return static_cast<int>(k);
  return -1;
}

template <class Value>
void write_group(std::ostream& out, const FieldGroup& g, int count, Value value) {
  if (g.ncomp == 3)
    out << "VECTORS " << g.name << " double\n";
  else
    out << "SCALARS " << g.name << " double 1\nLOOKUP_TABLE default\n";
  char buf[32];
  for (int l = 0; l < count; ++l) {
    for (int c = 0; c < g.ncomp; ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", value(l, c));
      out << (c ? " " : "") << buf;
    }
    out << '\n';
  }
}

void write_header(std::ostream& out, const StaggeredMesh& mesh, const SystemModel& sys, double time) {
  out << "# vtk DataFile Version 3.0\n"
      << to_string(sys.kind()) << " t=" << time << "\nASCII\nDATASET STRUCTURED_POINTS\n"
      << "DIMENSIONS " << mesh.nx() + 1 << ' ' << mesh.ny() + 1 << " 1\n"
      << "ORIGIN " << mesh.x0() << ' ' << mesh.y0() << " 0\n"
      << "SPACING " << mesh.dx() << ' ' << mesh.dy() << " 1\n";
}

std::string snapshot_name(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "snapshot_%.6f.vtk", t);
  return buf;
}

// Rethrows a solver error with step/time context, keeping its type.
[[noreturn]] void rethrow_with_context(int step, double time) {
  const std::string ctx = " [step " + std::to_string(step) + ", t=" + std::to_string(time) + "]";
  try {
    throw;
  } catch (const AdmissibilityError& e) {
    throw AdmissibilityError(e.what() + ctx);
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(e.what() + ctx);
  } catch (const SolverError& e) {
    throw SolverError(e.what() + ctx);
  }
}

class Recorder {
 public:
  Recorder(const RunConfig& cfg, RunSummary& summary) : cfg_(cfg), summary_(summary) {
    if (!cfg.output_dir.empty()) std::filesystem::create_directories(cfg.output_dir);
  }

  // Called for every step n (0 = initial data).
  void observe(int n, bool last, DiagnosticRecord r) {
    if (n == 0) e0_ = r.total_energy;
    const double rel = e0_ != 0.0 ? r.total_energy / e0_ - 1.0 : r.total_energy - e0_;
    summary_.max_abs_rel_energy_error = std::max(summary_.max_abs_rel_energy_error, std::abs(rel));
    auto track = [](std::optional<double>& acc, const std::optional<double>& v) {
      if (v) acc = std::max(acc.value_or(0.0), *v);
    };
    track(summary_.max_div_B, r.div_B_max);
    track(summary_.max_div_D, r.div_D_max);
    track(summary_.max_curl_v, r.curl_v_max);
    summary_.steps = n;
    summary_.final_time = r.time;
    if (n == 0 || last || n % cfg_.effective_stride() == 0) summary_.series.record(r);
  }

  // Writes one snapshot when requested times have been reached by time t.
  template <class Writer>
  void maybe_snapshot(double t, Writer writer) {
    const double reach = t * (1.0 + 1e-12) + 1e-14;
    if (cfg_.output_dir.empty() || next_ >= cfg_.snapshot_times.size() || cfg_.snapshot_times[next_] > reach) return;
    const std::string path = (std::filesystem::path(cfg_.output_dir) / snapshot_name(t)).string();
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    writer(f);
    summary_.written_files.push_back(path);
    while (next_ < cfg_.snapshot_times.size() && cfg_.snapshot_times[next_] <= reach) ++next_;
  }

  void flush() {
    if (cfg_.output_dir.empty()) return;
    const std::string path = (std::filesystem::path(cfg_.output_dir) / "series.csv").string();
    write_series_csv(path, summary_.series.records());
    summary_.written_files.push_back(path);
  }

 private:
  const RunConfig& cfg_;
  RunSummary& summary_;
  double e0_ = 0.0;
  std::size_t next_ = 0;
};

double leading_vector_norm(std::span<const double> values, int stride) {
  double m = 0.0;
  for (std::size_t l = 0; l + stride <= values.size(); l += stride)
    for (int c = 0; c < 3; ++c) m = std::max(m, std::abs(values[l + c]));
  return m;
}

void run_simm(const RunConfig& cfg, const SystemModel& sys, const StaggeredMesh& mesh, RunSummary& s) {
  const PathQuadrature quad(cfg.gauss_points);
  StaggeredFields state = initialize_staggered(cfg, sys, mesh);
  for (Location loc : {Location::Cell, Location::Vertex})
    for (int l = 0; l < mesh.num_locations(loc); ++l)
      if (!sys.block_admissible(loc, state.block(loc, l)))
        throw AdmissibilityError("initial data leave the admissible set");

  const int n_steps = cfg.t_end > 0.0 ? static_cast<int>(std::ceil(cfg.t_end / *cfg.dt - 1e-9)) : 0;
  Recorder rec(cfg, s);
  auto observe = [&](int n, double t, const StepStats* stats) {
    DiagnosticRecord r;
    r.time = t;
    r.total_energy = total_energy(sys, mesh, state);
    const InvolutionReport inv = involution_report(sys, mesh, state);
    r.div_B_max = inv.div_B;
    r.div_D_max = inv.div_D;
    r.curl_v_max = inv.curl_v;
    r.picard_iters = stats ? stats->picard_iters : 0;
    r.krylov_iters = stats ? stats->krylov_iters : 0;
    s.max_vector_field = std::max(s.max_vector_field, leading_vector_norm(state.cell.values(), state.cell.ncomp()));
    rec.observe(n, n == n_steps, r);
    rec.maybe_snapshot(t, [&](std::ostream& o) { write_vtk(o, sys, mesh, state, t); });
  };

  observe(0, 0.0, nullptr);
  for (int n = 1; n <= n_steps; ++n) {
    const double t_prev = cfg.t_end * (n - 1) / n_steps;
    const double t = cfg.t_end * n / n_steps;
    StepResult step;
    try {
      step = picard_step(sys, mesh, state, t - t_prev, cfg.picard, quad);
    } catch (const SolverError&) {
      rec.flush();
      rethrow_with_context(n, t_prev);
    }
    state = std::move(step.state);
    const StepStats& st = step.stats;
    s.total_picard_iters += st.picard_iters;
    s.total_krylov_iters += st.krylov_iters;
    s.max_picard_iters = std::max(s.max_picard_iters, st.picard_iters);
    s.picard_iters_per_step.push_back(st.picard_iters);
    if (st.roe_scale > 0.0) s.max_roe_relative = std::max(s.max_roe_relative, st.roe_residual / st.roe_scale);
    if (st.chain_scale > 0.0) s.max_chain_relative = std::max(s.max_chain_relative, st.chain_residual / st.chain_scale);
    observe(n, t, &st);
  }
  rec.flush();
}

void run_htc(const RunConfig& cfg, const SystemModel& sys, const StaggeredMesh& mesh, RunSummary& s) {
  const ButcherTableau tableau =
      cfg.tableau_file.empty() ? ButcherTableau::for_order(cfg.rk_order) : ButcherTableau::load(cfg.tableau_file);
  CollocatedState state = initialize_collocated(cfg, sys, mesh);
  for (int c = 0; c < mesh.num_cells(); ++c)
    if (!sys.admissible(state.at(sys, c))) throw AdmissibilityError("initial data leave the admissible set");

  Recorder rec(cfg, s);
  auto observe = [&](int n, bool last) {
    DiagnosticRecord r;
    r.time = state.time;
    r.total_energy = total_energy(sys, mesh, state);
    s.max_vector_field = std::max(s.max_vector_field, leading_vector_norm(state.q, sys.dim()));
    rec.observe(n, last, r);
    rec.maybe_snapshot(state.time, [&](std::ostream& o) { write_vtk(o, sys, mesh, state); });
  };

  observe(0, cfg.t_end <= 0.0);
  int n = 0;
  while (state.time < cfg.t_end) {
    ++n;
    try {
      double dt = cfl_dt(sys, mesh, state, *cfg.cfl);
      const bool last = state.time + dt >= cfg.t_end * (1.0 - 1e-12);
      if (last) dt = cfg.t_end - state.time;
      state = rk_step(sys, mesh, state, tableau, dt);
      if (last) state.time = cfg.t_end;
    } catch (const SolverError&) {
      rec.flush();
      rethrow_with_context(n, state.time);
    }
    observe(n, state.time >= cfg.t_end);
  }
  rec.flush();
}

}  // namespace

RunSummary run_simulation(const RunConfig& cfg) {
  cfg.validate();
  check_periodic(cfg);
  const SystemModel sys(cfg.system, cfg.energy);
  const StaggeredMesh mesh(cfg.nx, cfg.ny, cfg.x0, cfg.x1, cfg.y0, cfg.y1);
  RunSummary s;
  if (cfg.scheme == Scheme::Simm)
    run_simm(cfg, sys, mesh, s);
  else
    run_htc(cfg, sys, mesh, s);
  return s;
}

std::string summary_line(const RunSummary& s) {
  char buf[512];
  const double final_err = s.series.empty() ? 0.0 : s.series.records().back().rel_energy_error;
  auto opt = [](const std::optional<double>& v) {
    if (!v) return std::string("n/a");
    char b[32];
    std::snprintf(b, sizeof b, "%.3e", *v);
    return std::string(b);
  };
  std::snprintf(buf, sizeof buf,
                "steps=%d t=%.6g final_rel_energy_error=%.3e max_rel_energy_error=%.3e max_div_B=%s max_div_D=%s "
                "max_curl_v=%s picard_iters=%ld krylov_iters=%ld",
                s.steps, s.final_time, final_err, s.max_abs_rel_energy_error, opt(s.max_div_B).c_str(),
                opt(s.max_div_D).c_str(), opt(s.max_curl_v).c_str(), s.total_picard_iters, s.total_krylov_iters);
  return buf;
}

void write_vtk(std::ostream& out, const SystemModel& sys, const StaggeredMesh& mesh, const StaggeredFields& state,
               double time) {
  write_header(out, mesh, sys, time);
  const auto groups = field_groups(sys.kind());
  out << "CELL_DATA " << mesh.num_cells() << '\n';
  for (const auto& g : groups) {
    const int pos = block_position(sys, Location::Cell, g.first);
    if (pos < 0) continue;
    write_group(out, g, mesh.num_cells(), [&](int l, int c) { return state.cell(l, pos + c); });
  }
  const int px = mesh.nx() + 1;
  const int npoints = px * (mesh.ny() + 1);
  out << "POINT_DATA " << npoints << '\n';
  for (const auto& g : groups) {
    const int pos = block_position(sys, Location::Vertex, g.first);
    if (pos < 0) continue;
    write_group(out, g, npoints,
                [&](int l, int c) { return state.vertex(mesh.index(l % px, l / px), pos + c); });
  }
}

void write_vtk(std::ostream& out, const SystemModel& sys, const StaggeredMesh& mesh, const CollocatedState& state) {
  write_header(out, mesh, sys, state.time);
  out << "CELL_DATA " << mesh.num_cells() << '\n';
  const int dim = sys.dim();
  for (const auto& g : field_groups(sys.kind()))
    write_group(out, g, mesh.num_cells(),
                [&](int l, int c) { return state.q[static_cast<std::size_t>(l) * dim + g.first + c]; });
}

}  // namespace shtc
