#include "shtc/htc.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace shtc {

// ---------------------------------------------------------------------------
// Butcher tableaux

void ButcherTableau::validate() const {
  if (stages <= 0) throw std::invalid_argument("tableau: stage count must be positive");
  const auto s = static_cast<std::size_t>(stages);
  if (a.size() != s * s || b.size() != s || c.size() != s) throw std::invalid_argument("tableau: inconsistent sizes");
  for (int i = 0; i < stages; ++i)
    for (int j = i; j < stages; ++j)
      if (coeff(i, j) != 0.0) throw std::invalid_argument("tableau: not explicit (a must be strictly lower triangular)");
  double sum = 0.0;
  for (double w : b) sum += w;
  if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("tableau: weights do not sum to one");
}

ButcherTableau ButcherTableau::euler() { return {1, 1, {0.0}, {1.0}, {0.0}}; }

ButcherTableau ButcherTableau::heun() { return {2, 2, {0.0, 0.0, 1.0, 0.0}, {0.5, 0.5}, {0.0, 1.0}}; }

ButcherTableau ButcherTableau::ssp_rk3() {
  return {3, 3, {0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.25, 0.25, 0.0}, {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0}, {0.0, 1.0, 0.5}};
}

ButcherTableau ButcherTableau::classic_rk4() {
  return {4,
          4,
          {0.0, 0.0, 0.0, 0.0,
           0.5, 0.0, 0.0, 0.0,
           0.0, 0.5, 0.0, 0.0,
           0.0, 0.0, 1.0, 0.0},
          {1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0},
          {0.0, 0.5, 0.5, 1.0}};
}

ButcherTableau ButcherTableau::for_order(int order) {
  switch (order) {
    case 1: return euler();
    case 2: return heun();
    case 3: return ssp_rk3();
    case 4: return classic_rk4();
    default: throw std::invalid_argument("no built-in Runge-Kutta tableau of order " + std::to_string(order));
  }
}

ButcherTableau ButcherTableau::parse(const std::string& text) {
  std::istringstream in(text);
  ButcherTableau t;
  if (!(in >> t.stages >> t.order) || t.stages <= 0) throw std::invalid_argument("tableau: bad header line");
  const auto s = static_cast<std::size_t>(t.stages);
  t.a.resize(s * s);
  t.b.resize(s);
  t.c.resize(s);
  for (double& v : t.a)
    if (!(in >> v)) throw std::invalid_argument("tableau: truncated a coefficients");
  for (double& v : t.b)
    if (!(in >> v)) throw std::invalid_argument("tableau: truncated b row");
  for (double& v : t.c)
    if (!(in >> v)) throw std::invalid_argument("tableau: truncated c row");
  t.validate();
  return t;
}

ButcherTableau ButcherTableau::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open tableau file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

// ---------------------------------------------------------------------------
// Flux

namespace {

struct CellData {
  DualVector p;
  StateVector f[2];
  double F[2];
};

CellData evaluate(const SystemModel& sys, const StateVector& q) {
  return {sys.dual(q), {sys.flux(q, 1), sys.flux(q, 2)}, {sys.energy_flux(q, 1), sys.energy_flux(q, 2)}};
}

StateVector normal_flux(const CellData& d, const std::array<double, 2>& n) { return n[0] * d.f[0] + n[1] * d.f[1]; }

double normal_energy_flux(const CellData& d, const std::array<double, 2>& n) { return n[0] * d.F[0] + n[1] * d.F[1]; }

// Flux from precomputed normal components.
StateVector abgrall(const DualVector& pl, const DualVector& pr, const StateVector& fl, const StateVector& fr, double Fl,
                    double Fr) {
  const int n = pl.size();
  const DualVector dp = pr - pl;
  const double dp2 = dp.squared_norm();
  const double guard = kAlphaGuard * std::max({1.0, pl.squared_norm(), pr.squared_norm()});
  double alpha = 0.0;
  if (!(dp2 < guard)) {
    double num = Fr - Fl;
    for (int i = 0; i < n; ++i) num += 0.5 * (pr[i] + pl[i]) * (fl[i] - fr[i]);
    alpha = num / dp2;
  }
  StateVector f(n);
  for (int i = 0; i < n; ++i) f[i] = 0.5 * (fl[i] + fr[i]) - alpha * dp[i];
  return f;
}

}  // namespace

StateVector abgrall_flux(const SystemModel& sys, const StateVector& ql, const StateVector& qr,
                         const std::array<double, 2>& n) {
  const CellData l = evaluate(sys, ql);
  const CellData r = evaluate(sys, qr);
  return abgrall(l.p, r.p, normal_flux(l, n), normal_flux(r, n), normal_energy_flux(l, n), normal_energy_flux(r, n));
}

double compatibility_residual(const SystemModel& sys, const StateVector& ql, const StateVector& qr,
                              const std::array<double, 2>& n, const StateVector& f) {
  const CellData l = evaluate(sys, ql);
  const CellData r = evaluate(sys, qr);
  const StateVector fl = normal_flux(l, n);
  const StateVector fr = normal_flux(r, n);
  return pairing(l.p, f - fl) + pairing(r.p, fr - f) - (normal_energy_flux(r, n) - normal_energy_flux(l, n));
}

// ---------------------------------------------------------------------------
// Semi-discrete operator and time integration

CollocatedState make_collocated_state(const SystemModel& sys, const StaggeredMesh& mesh) {
  CollocatedState s;
  s.q.assign(static_cast<std::size_t>(mesh.num_cells()) * sys.dim(), 0.0);
  return s;
}

std::vector<double> htc_rhs(const SystemModel& sys, const StaggeredMesh& mesh, const CollocatedState& state) {
  const int dim = sys.dim();
  const int nc = mesh.num_cells();
  if (state.q.size() != static_cast<std::size_t>(nc) * dim) throw std::invalid_argument("htc_rhs: state size mismatch");

  std::vector<CellData> cache(nc);
  for (int c = 0; c < nc; ++c) {
    const StateVector q = state.at(sys, c);
    if (!sys.admissible(q))
      throw AdmissibilityError("htc: inadmissible state in cell " + std::to_string(c));
    cache[c] = evaluate(sys, q);
  }

  // Face fluxes are computed once: fx[l] on the face between l and its +x
  // neighbour, fy[l] between l and its +y neighbour.
  std::vector<double> fx(state.q.size()), fy(state.q.size());
  for (int j = 0; j < mesh.ny(); ++j) {
    for (int i = 0; i < mesh.nx(); ++i) {
      const int l = mesh.index(i, j);
      const CellData& a = cache[l];
      const CellData& bx = cache[mesh.index(i + 1, j)];
      const CellData& by = cache[mesh.index(i, j + 1)];
      const StateVector f = abgrall(a.p, bx.p, a.f[0], bx.f[0], a.F[0], bx.F[0]);
      const StateVector g = abgrall(a.p, by.p, a.f[1], by.f[1], a.F[1], by.F[1]);
      for (int m = 0; m < dim; ++m) {
        fx[static_cast<std::size_t>(l) * dim + m] = f[m];
        fy[static_cast<std::size_t>(l) * dim + m] = g[m];
      }
    }
  }

  std::vector<double> dq(state.q.size());
  const double inv_x = 1.0 / mesh.dx(), inv_y = 1.0 / mesh.dy();
  for (int j = 0; j < mesh.ny(); ++j) {
    for (int i = 0; i < mesh.nx(); ++i) {
      const std::size_t l = static_cast<std::size_t>(mesh.index(i, j)) * dim;
      const std::size_t w = static_cast<std::size_t>(mesh.index(i - 1, j)) * dim;
      const std::size_t s = static_cast<std::size_t>(mesh.index(i, j - 1)) * dim;
      for (int m = 0; m < dim; ++m)
        dq[l + m] = inv_x * (fx[w + m] - fx[l + m]) + inv_y * (fy[s + m] - fy[l + m]);
    }
  }
  return dq;
}

CollocatedState rk_step(const SystemModel& sys, const StaggeredMesh& mesh, const CollocatedState& state,
                        const ButcherTableau& tableau, double dt) {
  if (!(dt >= 0.0)) throw std::invalid_argument("rk_step: dt must be non-negative");
  const int s = tableau.stages;
  const std::size_t n = state.q.size();
  std::vector<std::vector<double>> k(s);
  CollocatedState stage;
  for (int i = 0; i < s; ++i) {
    stage.q = state.q;
    stage.time = state.time + tableau.c[i] * dt;
    for (int j = 0; j < i; ++j) {
      const double w = dt * tableau.coeff(i, j);
      if (w == 0.0) continue;
      for (std::size_t t = 0; t < n; ++t) stage.q[t] += w * k[j][t];
    }
    try {
      k[i] = htc_rhs(sys, mesh, stage);
    } catch (const AdmissibilityError& e) {
      throw AdmissibilityError(std::string(e.what()) + " (RK stage " + std::to_string(i + 1) + ", t=" +
                               std::to_string(state.time) + ")");
    }
  }
  CollocatedState next;
  next.q = state.q;
  next.time = state.time + dt;
  for (int i = 0; i < s; ++i) {
    const double w = dt * tableau.b[i];
    if (w == 0.0) continue;
    for (std::size_t t = 0; t < n; ++t) next.q[t] += w * k[i][t];
  }
  for (int c = 0; c < mesh.num_cells(); ++c)
    if (!sys.admissible(next.at(sys, c)))
      throw AdmissibilityError("htc: inadmissible state in cell " + std::to_string(c) + " after step to t=" +
                               std::to_string(next.time));
  return next;
}

double cfl_dt(const SystemModel& sys, const StaggeredMesh& mesh, const CollocatedState& state, double cfl) {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw std::invalid_argument("cfl must lie in (0, 1]");
  double speed = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) speed = std::max(speed, sys.max_signal_speed(state.at(sys, c)));
  if (!(speed > 0.0)) throw SolverError("cfl_dt: zero signal speed");
  return cfl / (speed * (1.0 / mesh.dx() + 1.0 / mesh.dy()));
}

}  // namespace shtc
