#include "shtc/simm.hpp"

#include <array>
#include <cmath>
#include <string>

#include "shtc/krylov.hpp"

namespace shtc {

StaggeredFields make_staggered_fields(const SystemModel& sys, const StaggeredMesh& mesh) {
  return {CellField(mesh, sys.block_dim(Location::Cell)), VertexField(mesh, sys.block_dim(Location::Vertex))};
}

void PicardConfig::validate() const {
  if (!(tol > 0.0)) throw std::invalid_argument("picard tol must be positive");
  if (max_iters < 1) throw std::invalid_argument("picard max_iters must be at least 1");
  if (!(krylov_tol > 0.0)) throw std::invalid_argument("krylov tol must be positive");
  if (krylov_max_iters < 1) throw std::invalid_argument("krylov max_iters must be at least 1");
  if (krylov_restart < 1) throw std::invalid_argument("krylov restart must be at least 1");
}

DualVector path_average_dual(const SystemModel& sys, const StateVector& q_old, const StateVector& q_new,
                             const PathQuadrature& quad) {
  DualVector avg(sys.dim());
  const StateVector dq = q_new - q_old;
  for (int g = 0; g < quad.size(); ++g) avg += quad.weights()[g] * sys.dual(q_old + quad.nodes()[g] * dq);
  return avg;
}

SmallMatrix path_hessian(const SystemModel& sys, const StateVector& q_old, const StateVector& q_new,
                         const PathQuadrature& quad) {
  const int n = sys.dim();
  SmallMatrix m(n);
  const StateVector dq = q_new - q_old;
  for (int g = 0; g < quad.size(); ++g) {
    const SmallMatrix h = sys.hessian(q_old + quad.nodes()[g] * dq);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) += quad.weights()[g] * h(i, j);
  }
  std::array<double, kMaxDim * kMaxDim> f{};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) f[i * n + j] = m(i, j);
  if (!cholesky_factor(f.data(), n, n)) throw AdmissibilityError("path Hessian is not positive definite");
  return m;
}

StaggeredFields apply_coupling(const SystemModel& sys, const StaggeredMesh& mesh, const StaggeredFields& p) {
  const int bc = sys.block_dim(Location::Cell);
  const int bv = sys.block_dim(Location::Vertex);
  if (!p.cell.matches(mesh) || !p.vertex.matches(mesh) || p.cell.ncomp() != bc || p.vertex.ncomp() != bv)
    throw std::invalid_argument("apply_coupling: field shape does not match system and mesh");
  StaggeredFields out = make_staggered_fields(sys, mesh);
  const auto pc = p.cell.values();
  const auto pv = p.vertex.values();
  for (int j = 0; j < mesh.ny(); ++j)
    for (int i = 0; i < mesh.nx(); ++i) {
      const int idx = mesh.index(i, j);
      for (const Coupling& k : sys.couplings()) {
        if (k.row_location == Location::Cell)
          out.cell(idx, k.row) += k.sign * diff_cp(mesh, pv, bv, k.col, i, j, k.direction);
        else
          out.vertex(idx, k.row) += k.sign * diff_pc(mesh, pc, bc, k.col, i, j, k.direction);
      }
    }
  return out;
}

namespace {

void apply_blocks(std::span<const double> m, int n, std::span<const double> x, std::span<double> y) {
  const std::size_t count = x.size() / n;
  for (std::size_t l = 0; l < count; ++l) {
    const double* a = m.data() + l * n * n;
    for (int r = 0; r < n; ++r) {
      double s = 0.0;
      for (int c = 0; c < n; ++c) s += a[r * n + c] * x[l * n + c];
      y[l * n + r] = s;
    }
  }
}

void to_flat(const StaggeredFields& f, std::span<double> out) {
  const auto c = f.cell.values();
  const auto v = f.vertex.values();
  std::copy(c.begin(), c.end(), out.begin());
  std::copy(v.begin(), v.end(), out.begin() + static_cast<std::ptrdiff_t>(c.size()));
}

void from_flat(std::span<const double> in, StaggeredFields& f) {
  auto c = f.cell.values();
  auto v = f.vertex.values();
  std::copy(in.begin(), in.begin() + static_cast<std::ptrdiff_t>(c.size()), c.begin());
  std::copy(in.begin() + static_cast<std::ptrdiff_t>(c.size()), in.end(), v.begin());
}

// Path average of the dual block and of its Hessian between two block states.
void path_block(const SystemModel& sys, Location loc, std::span<const double> qo, std::span<const double> qm,
                const PathQuadrature& quad, std::span<double> p, std::span<double> m) {
  const int n = static_cast<int>(qo.size());
  std::array<double, kMaxDim> node{};
  std::array<double, kMaxDim> pn{};
  std::array<double, kMaxDim * kMaxDim> hn{};
  std::fill(p.begin(), p.end(), 0.0);
  std::fill(m.begin(), m.end(), 0.0);
  for (int g = 0; g < quad.size(); ++g) {
    const double s = quad.nodes()[g];
    const double w = quad.weights()[g];
    for (int i = 0; i < n; ++i) node[i] = qo[i] + s * (qm[i] - qo[i]);
    const std::span<const double> nb(node.data(), n);
    if (!sys.block_admissible(loc, nb)) throw AdmissibilityError("time-step path leaves the admissible set");
    sys.block_dual(loc, nb, {pn.data(), static_cast<std::size_t>(n)});
    sys.block_hessian(loc, nb, {hn.data(), static_cast<std::size_t>(n * n)});
    for (int i = 0; i < n; ++i) p[i] += w * pn[i];
    for (int i = 0; i < n * n; ++i) m[i] += w * hn[i];
  }
}

bool positive_definite(std::span<const double> m, int n) {
  std::array<double, kMaxDim * kMaxDim> f{};
  std::copy(m.begin(), m.end(), f.begin());
  return cholesky_factor(f.data(), n, n);
}

std::string where(const StaggeredMesh& mesh, Location loc, int index) {
  return std::string(to_string(loc)) + " (" + std::to_string(index % mesh.nx()) + ", " +
         std::to_string(index / mesh.nx()) + ")";
}

}  // namespace

StaggeredFields apply_system_operator(const SystemModel& sys, const StaggeredMesh& mesh, const BlockMatrices& blocks,
                                      const StaggeredFields& p, double dt) {
  StaggeredFields out = apply_coupling(sys, mesh, p);
  const int bc = sys.block_dim(Location::Cell);
  const int bv = sys.block_dim(Location::Vertex);
  if (blocks.cell.size() != static_cast<std::size_t>(mesh.num_cells()) * bc * bc ||
      blocks.vertex.size() != static_cast<std::size_t>(mesh.num_vertices()) * bv * bv)
    throw std::invalid_argument("apply_system_operator: block matrices do not match system and mesh");
  StaggeredFields mp = make_staggered_fields(sys, mesh);
  apply_blocks(blocks.cell, bc, p.cell.values(), mp.cell.values());
  apply_blocks(blocks.vertex, bv, p.vertex.values(), mp.vertex.values());
  auto oc = out.cell.values();
  auto ov = out.vertex.values();
  for (std::size_t i = 0; i < oc.size(); ++i) oc[i] = mp.cell.values()[i] + 0.5 * dt * oc[i];
  for (std::size_t i = 0; i < ov.size(); ++i) ov[i] = mp.vertex.values()[i] + 0.5 * dt * ov[i];
  return out;
}

double weighted_pairing(const StaggeredMesh& mesh, const StaggeredFields& a, const StaggeredFields& b) {
  double sc = 0.0;
  for (std::size_t i = 0; i < a.cell.values().size(); ++i) sc += a.cell.values()[i] * b.cell.values()[i];
  double sv = 0.0;
  for (std::size_t i = 0; i < a.vertex.values().size(); ++i) sv += a.vertex.values()[i] * b.vertex.values()[i];
  return mesh.cell_volume() * sc + mesh.dual_volume() * sv;
}

StepResult picard_step(const SystemModel& sys, const StaggeredMesh& mesh, const StaggeredFields& state, double dt,
                       const PicardConfig& config, const PathQuadrature& quad) {
  config.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("picard_step: dt must be positive");
  const int bc = sys.block_dim(Location::Cell);
  const int bv = sys.block_dim(Location::Vertex);
  if (!state.cell.matches(mesh) || !state.vertex.matches(mesh) || state.cell.ncomp() != bc ||
      state.vertex.ncomp() != bv)
    throw std::invalid_argument("picard_step: state shape does not match system and mesh");

  const Location locs[2] = {Location::Cell, Location::Vertex};
  const int bdim[2] = {bc, bv};
  const int count[2] = {mesh.num_cells(), mesh.num_vertices()};
  const std::size_t n_cell = state.cell.values().size();
  const std::size_t n_total = n_cell + state.vertex.values().size();

  StaggeredFields q = state;
  StaggeredFields pt = make_staggered_fields(sys, mesh);
  BlockMatrices m{std::vector<double>(static_cast<std::size_t>(count[0]) * bc * bc),
                  std::vector<double>(static_cast<std::size_t>(count[1]) * bv * bv)};
  std::vector<double> qn_flat(n_total), q_flat(n_total), r(n_total), y(n_total), dp_flat(n_total);
  to_flat(state, qn_flat);

  auto local_energy = [&](const StaggeredFields& f, int l, int idx) {
    return sys.block_energy(locs[l], f.block(locs[l], idx));
  };

  StepStats stats;
  bool converged = false;
  for (int it = 0; it < config.max_iters && !converged; ++it) {
    for (int l = 0; l < 2; ++l) {
      std::vector<double>& ml = l == 0 ? m.cell : m.vertex;
      const int n = bdim[l];
      for (int idx = 0; idx < count[l]; ++idx) {
        std::span<double> mb(ml.data() + static_cast<std::size_t>(idx) * n * n, static_cast<std::size_t>(n * n));
        try {
          path_block(sys, locs[l], state.block(locs[l], idx), q.block(locs[l], idx), quad, pt.block(locs[l], idx), mb);
        } catch (const AdmissibilityError& e) {
          throw AdmissibilityError(std::string(e.what()) + " at " + where(mesh, locs[l], idx));
        }
        if (!positive_definite(mb, n))
          throw AdmissibilityError("energy Hessian is not positive definite along the time-step path at " +
                                   where(mesh, locs[l], idx));
      }
    }

    const StaggeredFields gp = apply_coupling(sys, mesh, pt);
    to_flat(q, q_flat);
    to_flat(gp, r);
    bool zero_rhs = true;
    for (std::size_t i = 0; i < n_total; ++i) {
      r[i] = -(q_flat[i] - qn_flat[i]) - dt * r[i];
      if (r[i] != 0.0) zero_rhs = false;
    }

    // (L~ + dt/2 G) dp = r with dp = M y, i.e. (I + dt/2 G M) y = r.
    std::fill(dp_flat.begin(), dp_flat.end(), 0.0);
    if (!zero_rhs) {
      StaggeredFields work = make_staggered_fields(sys, mesh);
      auto op = [&](std::span<const double> x, std::span<double> out) {
        apply_blocks(m.cell, bc, x.subspan(0, n_cell), work.cell.values());
        apply_blocks(m.vertex, bv, x.subspan(n_cell), work.vertex.values());
        const StaggeredFields g = apply_coupling(sys, mesh, work);
        to_flat(g, out);
        for (std::size_t i = 0; i < n_total; ++i) out[i] = x[i] + 0.5 * dt * out[i];
      };
      GmresOptions opts;
      opts.restart = config.krylov_restart;
      opts.max_iters = config.krylov_max_iters;
      opts.rel_tol = config.krylov_tol;
      std::fill(y.begin(), y.end(), 0.0);
      const GmresResult res = gmres(op, r, y, opts);
      stats.krylov_iters += res.iterations;
      stats.krylov_residual = std::max(stats.krylov_residual, res.rel_residual);
      if (!res.converged)
        throw ConvergenceError("GMRES did not reach relative residual " + std::to_string(config.krylov_tol) +
                               " within " + std::to_string(config.krylov_max_iters) + " iterations (reached " +
                               std::to_string(res.rel_residual) + ")");
      apply_blocks(m.cell, bc, std::span<const double>(y).subspan(0, n_cell),
                   std::span<double>(dp_flat).subspan(0, n_cell));
      apply_blocks(m.vertex, bv, std::span<const double>(y).subspan(n_cell), std::span<double>(dp_flat).subspan(n_cell));
    }

    // q^{m+1} = q^n - dt G(p~ + dp/2)
    StaggeredFields dp = make_staggered_fields(sys, mesh);
    from_flat(dp_flat, dp);
    for (std::size_t i = 0; i < n_cell; ++i) pt.cell.values()[i] += 0.5 * dp.cell.values()[i];
    for (std::size_t i = 0; i < dp.vertex.values().size(); ++i) pt.vertex.values()[i] += 0.5 * dp.vertex.values()[i];
    const StaggeredFields g = apply_coupling(sys, mesh, pt);
    StaggeredFields next = state;
    for (std::size_t i = 0; i < n_cell; ++i) next.cell.values()[i] -= dt * g.cell.values()[i];
    for (std::size_t i = 0; i < next.vertex.values().size(); ++i) next.vertex.values()[i] -= dt * g.vertex.values()[i];

    // Energy change between iterates, summed from local differences so that
    // the test is not swamped by the round-off of the total.
    double de = 0.0;
    for (int l = 0; l < 2; ++l) {
      double s = 0.0;
      for (int idx = 0; idx < count[l]; ++idx) {
        if (!sys.block_admissible(locs[l], next.block(locs[l], idx)))
          throw AdmissibilityError("Picard iterate leaves the admissible set at " + where(mesh, locs[l], idx));
        s += local_energy(next, l, idx) - local_energy(q, l, idx);
      }
      de += mesh.volume(locs[l]) * s;
    }
    q = std::move(next);
    stats.picard_iters = it + 1;
    // A single iteration is only accepted when it is trivially exact; otherwise
    // the first energy difference compares against q^n and says nothing about
    // convergence of the fixed point.
    converged = std::abs(de) < config.tol && (it >= 1 || zero_rhs);
  }
  if (!converged)
    throw ConvergenceError("Picard iteration did not converge within " + std::to_string(config.max_iters) +
                           " iterations");

  // Roe and chain-rule residuals of the accepted step.
  for (int l = 0; l < 2; ++l) {
    const int n = bdim[l];
    std::array<double, kMaxDim> pa{}, po{}, pn{};
    std::array<double, kMaxDim * kMaxDim> mb{};
    for (int idx = 0; idx < count[l]; ++idx) {
      const auto qo = state.block(locs[l], idx);
      const auto qm = q.block(locs[l], idx);
      path_block(sys, locs[l], qo, qm, quad, {pa.data(), static_cast<std::size_t>(n)},
                 {mb.data(), static_cast<std::size_t>(n * n)});
      sys.block_dual(locs[l], qo, {po.data(), static_cast<std::size_t>(n)});
      sys.block_dual(locs[l], qm, {pn.data(), static_cast<std::size_t>(n)});
      const double eo = sys.block_energy(locs[l], qo);
      const double en = sys.block_energy(locs[l], qm);
      double chain = -(en - eo);
      for (int i = 0; i < n; ++i) {
        double mdq = 0.0;
        for (int j = 0; j < n; ++j) mdq += mb[i * n + j] * (qm[j] - qo[j]);
        stats.roe_residual = std::max(stats.roe_residual, std::abs(mdq - (pn[i] - po[i])));
        stats.roe_scale = std::max({stats.roe_scale, std::abs(po[i]), std::abs(pn[i])});
        chain += pa[i] * (qm[i] - qo[i]);
      }
      stats.chain_residual = std::max(stats.chain_residual, std::abs(chain));
      stats.chain_scale = std::max({stats.chain_scale, std::abs(eo), std::abs(en)});
    }
  }
  return {std::move(q), stats};
}

namespace {

// Leading three components of a block field.
template <Location L>
MeshField<L> vector_part(const StaggeredMesh& mesh, const MeshField<L>& f) {
  MeshField<L> out(mesh, 3);
  for (int i = 0; i < f.count(); ++i)
    for (int c = 0; c < 3; ++c) out(i, c) = f(i, c);
  return out;
}

}  // namespace

InvolutionReport involution_report(const SystemModel& sys, const StaggeredMesh& mesh, const StaggeredFields& state) {
  // In every system the leading three components of the cell block are v or
  // B, and those of the vertex block are D (Maxwell, GLM).
  InvolutionReport r;
  const CellField a = vector_part(mesh, state.cell);
  if (sys.kind() == SystemKind::Acoustics) {
    r.curl_v = curl_pc(mesh, a).max_abs();
  } else {
    r.div_B = div_pc(mesh, a).max_abs();
    r.div_D = div_cp(mesh, vector_part(mesh, state.vertex)).max_abs();
  }
  return r;
}

}  // namespace shtc
