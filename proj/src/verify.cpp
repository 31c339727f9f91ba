#include "shtc/verify.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "shtc/driver.hpp"
#include "shtc/grid.hpp"
#include "shtc/htc.hpp"
#include "shtc/simm.hpp"

namespace shtc {

namespace {

std::string fmt(const char* format, double a, double b) {
  char buf[128];
  std::snprintf(buf, sizeof buf, format, a, b);
  return buf;
}

StateVector random_state(const SystemModel& sys, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  StateVector q(sys.dim());
  for (int i = 0; i < q.size(); ++i) q[i] = 0.5 * u(rng);
  // density well inside the admissible and convex region
  if (sys.kind() == SystemKind::Acoustics) q[3] = 1.0 + 0.5 * (u(rng) + 1.0);
  return q;
}

VerifyResult identities() {
  double worst = 0.0;
  for (auto [nx, ny] : {std::pair{8, 8}, {17, 23}, {64, 64}}) {
    const StaggeredMesh mesh(nx, ny, 0.0, 1.0, 0.0, 1.3);
    const IdentityReport r = identity_suite(mesh, 10, 7);
    worst = std::max(worst, r.max() / r.scale);
  }
  return {"mimetic identities curl grad = 0, div curl = 0", worst <= 1e-13, fmt("max relative %.2e, tol %.0e", worst, 1e-13)};
}

VerifyResult compatibility() {
  std::mt19937_64 rng(11);
  double worst = 0.0;
  for (SystemKind k : {SystemKind::Acoustics, SystemKind::Maxwell, SystemKind::MaxwellGLM}) {
    const SystemModel sys(k);
    for (int t = 0; t < 200; ++t)
      for (const std::array<double, 2>& n : {std::array<double, 2>{1.0, 0.0}, std::array<double, 2>{0.0, 1.0}}) {
        const StateVector ql = random_state(sys, rng);
        const StateVector qr = random_state(sys, rng);
        const StateVector f = abgrall_flux(sys, ql, qr, n);
        const int d = n[0] != 0.0 ? 1 : 2;
        const double scale = std::abs(sys.energy_flux(ql, d)) + std::abs(sys.energy_flux(qr, d)) +
                             sys.dual(ql).norm_inf() * f.norm_inf() + sys.dual(qr).norm_inf() * f.norm_inf() + 1e-300;
        worst = std::max(worst, std::abs(compatibility_residual(sys, ql, qr, n, f)) / scale);
      }
  }
  return {"Abgrall flux compatibility", worst <= 1e-13, fmt("max relative %.2e, tol %.0e", worst, 1e-13)};
}

VerifyResult godunov_form() {
  std::mt19937_64 rng(13);
  double worst = 0.0;
  for (SystemKind k : {SystemKind::Acoustics, SystemKind::Maxwell, SystemKind::MaxwellGLM}) {
    const SystemModel sys(k);
    for (int t = 0; t < 100; ++t) {
      const StateVector q = random_state(sys, rng);
      const DualVector p = sys.dual(q);
      for (int d = 1; d <= 2; ++d) {
        const StateVector hp = sys.h_matrix(d).apply(p);
        const double scale = std::max(1.0, p.norm_inf());
        worst = std::max(worst, (sys.flux(q, d) - hp).norm_inf() / scale);
        const double ef = 0.5 * pairing(p, hp);
        worst = std::max(worst, std::abs(sys.energy_flux(q, d) - ef) / (scale * scale));
      }
    }
  }
  return {"fluxes in Godunov form f_k = H_k p, F_k = p.H_k p / 2", worst <= 1e-14,
          fmt("max relative %.2e, tol %.0e", worst, 1e-14)};
}

VerifyResult skew_coupling() {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  const StaggeredMesh mesh(12, 9, 0.0, 1.0, 0.0, 1.0);
  for (SystemKind k : {SystemKind::Acoustics, SystemKind::Maxwell, SystemKind::MaxwellGLM}) {
    const SystemModel sys(k);
    StaggeredFields p = make_staggered_fields(sys, mesh);
    for (double& v : p.cell.values()) v = u(rng);
    for (double& v : p.vertex.values()) v = u(rng);
    const StaggeredFields g = apply_coupling(sys, mesh, p);
    const double scale = std::sqrt(weighted_pairing(mesh, p, p) * weighted_pairing(mesh, g, g));
    worst = std::max(worst, std::abs(weighted_pairing(mesh, p, g)) / scale);
  }
  return {"staggered coupling operator is skew", worst <= 1e-14, fmt("max relative %.2e, tol %.0e", worst, 1e-14)};
}

VerifyResult short_run(const char* preset, double t_end) {
  RunConfig c = preset_config(preset);
  c.nx = c.ny = 32;
  c.t_end = t_end;
  const RunSummary s = run_simulation(c);
  const double h = std::min((c.x1 - c.x0) / c.nx, (c.y1 - c.y0) / c.ny);
  const double inv_tol = 1e-12 * (s.max_vector_field / h + 1e-16);
  bool ok = s.max_abs_rel_energy_error <= 5e-12;
  double inv = 0.0;
  if (c.system == SystemKind::Maxwell) inv = std::max(*s.max_div_B, *s.max_div_D);
  if (c.system == SystemKind::Acoustics) inv = *s.max_curl_v;
  if (c.system != SystemKind::MaxwellGLM) ok = ok && inv <= inv_tol;
  return {std::string("semi-implicit ") + preset + " conserves energy and involutions", ok,
          fmt("max |E/E0-1| %.2e, involution error %.2e", s.max_abs_rel_energy_error, inv)};
}

}  // namespace

std::vector<VerifyResult> run_verification() {
  std::vector<VerifyResult> out;
  out.push_back(identities());
  out.push_back(compatibility());
  out.push_back(godunov_form());
  out.push_back(skew_coupling());
  for (const char* p : {"maxwell_gaussian", "acoustic_gaussian", "glm_planar"}) {
    try {
      out.push_back(short_run(p, 0.05));
    } catch (const std::exception& e) {
      out.push_back({std::string("semi-implicit ") + p + " run", false, e.what()});
    }
  }
  return out;
}

}  // namespace shtc
