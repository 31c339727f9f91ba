// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "shtc/driver.hpp"
#include "shtc/grid.hpp"
#include "shtc/htc.hpp"
#include "shtc/presets.hpp"
#include "shtc/systems.hpp"

using namespace shtc;
namespace fs = std::filesystem;

namespace {

const SystemKind kAll[] = {SystemKind::Acoustics, SystemKind::Maxwell, SystemKind::MaxwellGLM};

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string sci(double v) { return fmt("%.3e", v); }

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body, double time_limit = 0.0) {
  Outcome o;
  const Timer t;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double s = t.seconds();
  if (time_limit > 0.0 && s > time_limit) {
    o.pass = false;
    o.detail += "; runtime " + fmt("%.2f", s) + " s exceeds " + fmt("%.0f", time_limit) + " s";
  }
  if (!o.pass) ++failures;
  std::printf("%s %2d %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str(), s);
  std::fflush(stdout);
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------- criterion 1

template <Location L>
void fill(MeshField<L>& f, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double& v : f.values()) v = u(rng);
}

Outcome identities() {
  Outcome o;
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (auto [nx, ny] : {std::pair{8, 8}, {17, 23}, {64, 64}}) {
    const StaggeredMesh mesh(nx, ny, 0.0, 1.0, 0.0, 1.0);
    const double h = std::min(mesh.dx(), mesh.dy());
    for (int t = 0; t < 50; ++t) {
      CellField phi_c(mesh, 1), a_c(mesh, 3);
      VertexField phi_p(mesh, 1), a_p(mesh, 3);
      fill(phi_c, rng);
      fill(phi_p, rng);
      fill(a_c, rng);
      fill(a_p, rng);
      // Each bound is relative to the field the outer operator differentiates.
      const VertexField g_p = grad_pc(mesh, phi_c);
      const CellField g_c = grad_cp(mesh, phi_p);
      const VertexField c_p = curl_pc(mesh, a_c);
      const CellField c_c = curl_cp(mesh, a_p);
      const double r[4] = {curl_cp(mesh, g_p).max_abs() / (g_p.max_abs() / h),
                           curl_pc(mesh, g_c).max_abs() / (g_c.max_abs() / h),
                           div_cp(mesh, c_p).max_abs() / (c_p.max_abs() / h),
                           div_pc(mesh, c_c).max_abs() / (c_c.max_abs() / h)};
      for (double v : r) worst = std::max(worst, v);
    }
  }
  o.pass = worst <= 1e-13;
  o.detail = "max residual / (|field|_inf / h) = " + sci(worst) + " (limit 1e-13)";
  return o;
}

// ---------------------------------------------------------------- criterion 2

Outcome flux_compatibility() {
  std::mt19937_64 rng(7);
  double worst = 0.0;
  for (SystemKind k : kAll) {
    const SystemModel sys(k);
    for (int d = 1; d <= 2; ++d) {
      const std::array<double, 2> n = d == 1 ? std::array<double, 2>{1.0, 0.0} : std::array<double, 2>{0.0, 1.0};
      for (int t = 0; t < 1000; ++t) {
        const StateVector ql = oracle::to_state(oracle::random_state(k, rng));
        const StateVector qr = oracle::to_state(oracle::random_state(k, rng));
        const StateVector f = abgrall_flux(sys, ql, qr, n);
        const DualVector pl = sys.dual(ql), pr = sys.dual(qr);
        const StateVector fl = sys.flux(ql, d), fr = sys.flux(qr, d);
        const double Fl = sys.energy_flux(ql, d), Fr = sys.energy_flux(qr, d);
        double r = -(Fr - Fl);
        double scale = std::abs(Fl) + std::abs(Fr);
        for (int i = 0; i < sys.dim(); ++i) {
          r += pl[i] * (f[i] - fl[i]) + pr[i] * (fr[i] - f[i]);
          scale += (std::abs(pl[i]) + std::abs(pr[i])) * (std::abs(f[i]) + std::abs(fl[i]) + std::abs(fr[i]));
        }
        worst = std::max(worst, std::abs(r) / scale);
      }
    }
  }
  return {worst <= 1e-13, "max residual / scale = " + sci(worst) + " over 3 systems x 2 axes x 1000 pairs (limit 1e-13)"};
}

// ---------------------------------------------------------------- criterion 3

Outcome godunov_form() {
  std::mt19937_64 rng(11);
  double worst_f = 0.0, worst_F = 0.0;
  for (SystemKind k : kAll) {
    const SystemModel sys(k);
    for (int t = 0; t < 100; ++t) {
      const StateVector q = oracle::to_state(oracle::random_state(k, rng));
      const DualVector p = sys.dual(q);
      for (int d = 1; d <= 2; ++d) {
        const HMatrix& h = sys.h_matrix(d);
        const StateVector f = sys.flux(q, d);
        double half_php = 0.0, scale_F = 0.0;
        double scale_f = 0.0, err_f = 0.0;
        for (int i = 0; i < sys.dim(); ++i) {
          double hp = 0.0, hp_abs = 0.0;
          for (int j = 0; j < sys.dim(); ++j) {
            hp += h(i, j) * p[j];
            hp_abs += std::abs(h(i, j) * p[j]);
          }
          err_f = std::max(err_f, std::abs(f[i] - hp));
          scale_f = std::max(scale_f, hp_abs);
          half_php += 0.5 * p[i] * hp;
          scale_F += 0.5 * std::abs(p[i]) * hp_abs;
        }
        worst_f = std::max(worst_f, err_f / std::max(scale_f, 1e-300));
        if (scale_F > 0.0) worst_F = std::max(worst_F, std::abs(sys.energy_flux(q, d) - half_php) / scale_F);
      }
    }
  }
  return {worst_f <= 1e-14 && worst_F <= 1e-14,
          "f_k vs H_k p: " + sci(worst_f) + ", F_k vs p.H_k p/2: " + sci(worst_F) + " (limit 1e-14)"};
}

// ---------------------------------------------------------------- criterion 4

Outcome derivatives() {
  std::mt19937_64 rng(13);
  double worst_dual = 0.0, worst_hess = 0.0;
  for (SystemKind k : kAll) {
    const SystemModel sys(k);
    for (int t = 0; t < 50; ++t) {
      const std::vector<double> q = oracle::random_state(k, rng);
      const auto e = [&](const std::vector<double>& x) { return oracle::energy(k, sys.params(), x); };
      const std::vector<double> g = oracle::fd_gradient(e, q, 1e-5);
      const DualVector p = sys.dual(oracle::to_state(q));
      for (int i = 0; i < sys.dim(); ++i) worst_dual = std::max(worst_dual, std::abs(p[i] - g[i]));

      const auto dual = [&](const std::vector<double>& x) { return oracle::to_std(sys.dual(oracle::to_state(x)).span()); };
      const auto jac = oracle::fd_jacobian(dual, q, 1e-5);
      const SmallMatrix hm = sys.hessian(oracle::to_state(q));
      for (int i = 0; i < sys.dim(); ++i)
        for (int j = 0; j < sys.dim(); ++j) worst_hess = std::max(worst_hess, std::abs(hm(i, j) - jac[i][j]));
    }
  }
  return {worst_dual <= 1e-6 && worst_hess <= 1e-5,
          "dual vs FD gradient " + sci(worst_dual) + " (limit 1e-6), hessian vs FD Jacobian " + sci(worst_hess) +
              " (limit 1e-5)"};
}

// ---------------------------------------------------------- semi-implicit runs

struct Run {
  RunConfig config;
  RunSummary summary;
  double seconds = 0.0;
};

RunConfig acceptance_config(const std::string& preset, const fs::path& out) {
  RunConfig c = preset_config(preset);
  if (preset == "maxwell_gaussian") {
    c.nx = c.ny = 50;
    c.dt = 0.001;
    c.t_end = 1.0;
  } else if (preset == "acoustic_gaussian") {
    c.nx = c.ny = 64;
    c.dt = 0.001;
    c.t_end = 1.0;
  } else {
    c.nx = c.ny = 64;
    c.dt = 0.0005;
    c.t_end = 0.5;
  }
  c.output_dir = out.string();
  return c;
}

Run execute(const RunConfig& c) {
  Run r{c, {}, 0.0};
  const Timer t;
  r.summary = run_simulation(c);
  r.seconds = t.seconds();
  return r;
}

// ---------------------------------------------------------------- criterion 9

double htc_energy(const SystemModel& sys, const StaggeredMesh& mesh, const CollocatedState& s) {
  double e = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto b = s.q.begin() + static_cast<std::ptrdiff_t>(c) * sys.dim();
    e += mesh.cell_volume() * oracle::energy(sys.kind(), sys.params(), std::vector<double>(b, b + sys.dim()));
  }
  return e;
}

Outcome htc_order() {
  RunConfig c = preset_config("acoustic_gaussian");
  c.nx = c.ny = 32;
  c.scheme = Scheme::Htc;
  c.dt.reset();
  c.cfl = 0.4;
  const double t_end = 0.25;
  const SystemModel sys(c.system, c.energy);
  const StaggeredMesh mesh(c.nx, c.ny, c.x0, c.x1, c.y0, c.y1);
  const CollocatedState q0 = initialize_collocated(c, sys, mesh);
  const double e0 = htc_energy(sys, mesh, q0);
  const int n0 = static_cast<int>(std::ceil(t_end / cfl_dt(sys, mesh, q0, *c.cfl)));
  const ButcherTableau rk4 = ButcherTableau::classic_rk4();

  std::vector<double> drift;
  for (int refine : {1, 2, 4}) {
    const int n = n0 * refine;
    const double dt = t_end / n;
    CollocatedState q = q0;
    for (int s = 0; s < n; ++s) q = rk_step(sys, mesh, q, rk4, dt);
    drift.push_back(std::abs(htc_energy(sys, mesh, q) / e0 - 1.0));
  }
  const double r1 = drift[0] / drift[1], r2 = drift[1] / drift[2];
  return {r1 >= 12.0 && r2 >= 12.0, "|E(T)/E0-1| = " + sci(drift[0]) + ", " + sci(drift[1]) + ", " + sci(drift[2]) +
                                        " at dt0=T/" + std::to_string(n0) + ", /2, /4; ratios " + fmt("%.2f", r1) +
                                        ", " + fmt("%.2f", r2) + " (limit 12)"};
}

}  // namespace

int main() {
  const fs::path root = fs::temp_directory_path() / "shtc_acceptance";
  fs::remove_all(root);
  fs::create_directories(root);

  report(1, "mimetic identities", identities, 1.0);
  report(2, "Abgrall flux compatibility", flux_compatibility, 1.0);
  report(3, "Godunov form", godunov_form);
  report(4, "derivatives", derivatives);

  const char* presets[] = {"maxwell_gaussian", "acoustic_gaussian", "glm_planar"};
  std::vector<Run> runs;
  std::string run_error;
  for (const char* p : presets) {
    try {
      runs.push_back(execute(acceptance_config(p, root / (std::string(p) + "_a"))));
    } catch (const std::exception& e) {
      run_error += std::string(p) + ": " + e.what() + "; ";
    }
  }
  const bool runs_ok = runs.size() == 3;
  auto need_runs = [&]() {
    if (!runs_ok) throw std::runtime_error("preset runs failed: " + run_error);
  };

  report(5, "semi-implicit energy conservation", [&]() {
    need_runs();
    Outcome o;
    for (const Run& r : runs) {
      const bool ok = r.summary.max_abs_rel_energy_error <= 5e-12 && r.seconds <= 300.0;
      o.pass = o.pass && ok;
      o.detail += r.config.ic.preset + " " + sci(r.summary.max_abs_rel_energy_error) + " in " +
                  fmt("%.1f", r.seconds) + " s; ";
    }
    o.detail += "limits 5e-12 and 300 s";
    return o;
  });

  report(6, "Maxwell divergence preservation", [&]() {
    need_runs();
    const Run& r = runs[0];
    const StaggeredMesh mesh(r.config.nx, r.config.ny, r.config.x0, r.config.x1, r.config.y0, r.config.y1);
    const double limit = 1e-12 * r.summary.max_vector_field / mesh.dx();
    const double b = r.summary.max_div_B.value(), d = r.summary.max_div_D.value();
    return Outcome{b <= limit && d <= limit,
                   "max div B " + sci(b) + ", max div D " + sci(d) + " (limit " + sci(limit) + ")"};
  });

  report(7, "acoustic curl preservation", [&]() {
    need_runs();
    const Run& r = runs[1];
    const StaggeredMesh mesh(r.config.nx, r.config.ny, r.config.x0, r.config.x1, r.config.y0, r.config.y1);
    const double limit = 1e-12 * (r.summary.max_vector_field / mesh.dx() + 1e-16);
    const double c = r.summary.max_curl_v.value();
    return Outcome{c <= limit, "max curl v " + sci(c) + " (limit " + sci(limit) + ")"};
  });

  report(8, "Roe and chain-rule residuals", [&]() {
    need_runs();
    Outcome o;
    for (const Run* r : {&runs[0], &runs[2]}) {
      const bool ok = r->summary.max_roe_relative <= 1e-14 && r->summary.max_chain_relative <= 1e-14;
      o.pass = o.pass && ok;
      o.detail += r->config.ic.preset + " Roe " + sci(r->summary.max_roe_relative) + " chain " +
                  sci(r->summary.max_chain_relative) + "; ";
    }
    RunConfig c = runs[1].config;
    c.gauss_points = 5;
    c.output_dir.clear();
    const Run a = execute(c);
    o.pass = o.pass && a.summary.max_roe_relative <= 1e-6 && a.summary.max_chain_relative <= 1e-6;
    o.detail += "acoustics (5 points) Roe " + sci(a.summary.max_roe_relative) + " chain " +
                sci(a.summary.max_chain_relative) + "; limits 1e-14 and 1e-6";
    return o;
  });

  report(9, "explicit scheme temporal order", htc_order, 120.0);

  report(10, "Picard convergence", [&]() {
    need_runs();
    RunConfig c = runs[0].config;
    c.energy.maxwell_eps = 0.0;
    c.output_dir.clear();
    const Run lin = execute(c);
    Outcome o;
    o.pass = lin.summary.max_picard_iters <= 2;
    o.detail = "Maxwell eps=0 max " + std::to_string(lin.summary.max_picard_iters) + " per step; ";
    for (const Run& r : runs) {
      const bool ok = r.summary.mean_picard_iters() <= 10.0 && r.summary.max_picard_iters < r.config.picard.max_iters;
      o.pass = o.pass && ok;
      o.detail += r.config.ic.preset + " mean " + fmt("%.2f", r.summary.mean_picard_iters()) + " max " +
                  std::to_string(r.summary.max_picard_iters) + "; ";
    }
    o.detail += "limits 2, mean 10, max < " + std::to_string(runs[0].config.picard.max_iters);
    return o;
  });

  report(11, "determinism", [&]() {
    need_runs();
    Outcome o;
    for (const Run& r : runs) {
      RunConfig c = r.config;
      const fs::path again = root / (r.config.ic.preset + "_b");
      c.output_dir = again.string();
      execute(c);
      const std::string first = read_file(fs::path(r.config.output_dir) / "series.csv");
      const bool same = !first.empty() && first == read_file(again / "series.csv");
      o.pass = o.pass && same;
      o.detail += r.config.ic.preset + (same ? " identical; " : " DIFFERS; ");
    }
    o.detail += "series.csv compared byte for byte";
    return o;
  });

  fs::remove_all(root);
  std::printf("%s: %d criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
