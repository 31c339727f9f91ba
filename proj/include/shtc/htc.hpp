#pragma once

#include <array>
#include <string>
#include <vector>

#include "shtc/grid.hpp"
#include "shtc/systems.hpp"

namespace shtc {

/// Explicit Runge-Kutta scheme in Butcher form.
struct ButcherTableau {
  int stages = 0;
  int order = 0;
  std::vector<double> a;  ///< stages x stages, row-major, strictly lower triangular
  std::vector<double> b;
  std::vector<double> c;

  double coeff(int i, int j) const { return a[static_cast<std::size_t>(i) * stages + j]; }
  /// Throws unless the tableau is explicit and consistent (sum b = 1).
  void validate() const;

  static ButcherTableau euler();
  static ButcherTableau heun();
  static ButcherTableau ssp_rk3();
  static ButcherTableau classic_rk4();
  /// Orders 1 to 4 map to the tableaux above.
  static ButcherTableau for_order(int order);
  /// Text format: "s order", then s rows of a, one row of b, one row of c.
  static ButcherTableau parse(const std::string& text);
  static ButcherTableau load(const std::string& path);
};

/// Cell-centred unknowns of the collocated scheme.
struct CollocatedState {
  std::vector<double> q;  ///< num_cells x dim, interleaved
  double time = 0.0;

  StateVector at(const SystemModel& sys, int cell) const {
    return StateVector::from({q.data() + static_cast<std::size_t>(cell) * sys.dim(), static_cast<std::size_t>(sys.dim())});
  }
};

CollocatedState make_collocated_state(const SystemModel& sys, const StaggeredMesh& mesh);

/// Threshold below which the Abgrall correction is dropped:
/// |p_r - p_l|^2 < 1e-12 max(1, |p_l|^2, |p_r|^2).
inline constexpr double kAlphaGuard = 1e-12;

/// Thermodynamically compatible Abgrall flux across a face with unit normal n
/// (pointing from the left to the right state). Satisfies the discrete
/// compatibility condition p_l.(f - f_l.n) + p_r.(f_r.n - f) = (F_r - F_l).n.
StateVector abgrall_flux(const SystemModel& sys, const StateVector& ql, const StateVector& qr,
                         const std::array<double, 2>& n);

/// Residual of the discrete compatibility condition for a given numerical flux.
double compatibility_residual(const SystemModel& sys, const StateVector& ql, const StateVector& qr,
                              const std::array<double, 2>& n, const StateVector& f);

/// Semi-discrete right-hand side dq/dt of the collocated finite-volume scheme.
std::vector<double> htc_rhs(const SystemModel& sys, const StaggeredMesh& mesh, const CollocatedState& state);

/// One explicit RK step; throws AdmissibilityError if a stage leaves the
/// admissible set.
CollocatedState rk_step(const SystemModel& sys, const StaggeredMesh& mesh, const CollocatedState& state,
                        const ButcherTableau& tableau, double dt);

/// dt = cfl / (max_cells speed * (1/dx + 1/dy)).
double cfl_dt(const SystemModel& sys, const StaggeredMesh& mesh, const CollocatedState& state, double cfl);

}  // namespace shtc
