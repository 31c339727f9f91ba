#pragma once

#include <optional>
#include <span>
#include <vector>

#include "shtc/grid.hpp"
#include "shtc/quadrature.hpp"
#include "shtc/systems.hpp"

namespace shtc {

/// Unknowns of the staggered scheme: the cell block of every primal cell and
/// the vertex block of every dual cell (see SystemModel::block_indices).
struct StaggeredFields {
  CellField cell;
  VertexField vertex;

  std::span<const double> block(Location loc, int index) const {
    return loc == Location::Cell ? cell.at(index) : vertex.at(index);
  }
  std::span<double> block(Location loc, int index) { return loc == Location::Cell ? cell.at(index) : vertex.at(index); }
};

StaggeredFields make_staggered_fields(const SystemModel& sys, const StaggeredMesh& mesh);

/// Per-location symmetric block matrices (row-major, block_dim^2 entries each).
struct BlockMatrices {
  std::vector<double> cell;
  std::vector<double> vertex;
};

struct PicardConfig {
  double tol = 1e-15;  ///< on |E^{m+1} - E^m|, energy units
  int max_iters = 50;
  double krylov_tol = 1e-13;
  int krylov_max_iters = 1000;
  int krylov_restart = 30;

  void validate() const;
};

/// Straight-line path average of the dual variables,
/// sum_g w_g dual(q_old + s_g (q_new - q_old)).
DualVector path_average_dual(const SystemModel& sys, const StateVector& q_old, const StateVector& q_new,
                             const PathQuadrature& quad);

/// Path-averaged Hessian M = sum_g w_g hessian(pi(s_g)); the inverse of the
/// averaged generating-potential Hessian. Throws AdmissibilityError if M is
/// not positive definite.
SmallMatrix path_hessian(const SystemModel& sys, const StateVector& q_old, const StateVector& q_new,
                         const PathQuadrature& quad);

/// Skew coupling part G(p): the mimetic discretisation of sum_k H_k d_k p.
/// Cell rows difference vertex data and vice versa.
StaggeredFields apply_coupling(const SystemModel& sys, const StaggeredMesh& mesh, const StaggeredFields& p);

/// blocks_i p_i + (dt/2) G(p)_i, the operator of the per-iteration linear
/// system. The solver passes the inverse path Hessians as `blocks`.
StaggeredFields apply_system_operator(const SystemModel& sys, const StaggeredMesh& mesh, const BlockMatrices& blocks,
                                      const StaggeredFields& p, double dt);

/// Volume-weighted pairing sum_c |Omega_c| a_c.b_c + sum_p |Omega_p| a_p.b_p.
double weighted_pairing(const StaggeredMesh& mesh, const StaggeredFields& a, const StaggeredFields& b);

struct StepStats {
  int picard_iters = 0;
  int krylov_iters = 0;          ///< summed over Picard iterations
  double krylov_residual = 0.0;  ///< largest final relative residual
  double roe_residual = 0.0;     ///< max over locations of |M dq - dp|_inf
  double roe_scale = 0.0;        ///< max |p|_inf at either time level
  double chain_residual = 0.0;   ///< max over locations of |p~.dq - dE|
  double chain_scale = 0.0;      ///< max |E| of a single location
};

struct StepResult {
  StaggeredFields state;
  StepStats stats;
};

/// One time step of the semi-implicit scheme
///
///   q^{n+1} - q^n + dt G(p~(q^n, q^{n+1})) = 0,
///
/// solved by Picard iteration. Each iteration linearises around the current
/// iterate q^m and solves (L~ + dt/2 G) dp = -(q^m - q^n) - dt G(p~^m) with
/// right-preconditioned GMRES, L~ being the inverse of the path Hessian. The
/// iterate is then updated as q^{m+1} = q^n - dt G(p~^m + dp/2), so every
/// iterate lies in the range of G and inherits its discrete involutions.
///
/// Throws ConvergenceError when the Picard or Krylov iteration fails and
/// AdmissibilityError if a state leaves the admissible set.
StepResult picard_step(const SystemModel& sys, const StaggeredMesh& mesh, const StaggeredFields& state, double dt,
                       const PicardConfig& config, const PathQuadrature& quad);

struct InvolutionReport {
  std::optional<double> div_B;   ///< max_p |div_pc B_c|
  std::optional<double> div_D;   ///< max_c |div_cp D_p|
  std::optional<double> curl_v;  ///< max_p |curl_pc v_c|_inf
};

/// Discrete involution errors of a staggered state. Maxwell and GLM report the
/// divergences of B and D (GLM has no such involution, so they need not
/// vanish); acoustics reports the curl of v.
InvolutionReport involution_report(const SystemModel& sys, const StaggeredMesh& mesh, const StaggeredFields& state);

}  // namespace shtc
