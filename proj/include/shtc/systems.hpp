#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "shtc/common.hpp"
#include "shtc/linalg.hpp"

namespace shtc {

enum class SystemKind { Acoustics, Maxwell, MaxwellGLM };

const char* to_string(SystemKind kind);
/// Accepts "acoustics", "maxwell" and "maxwell_glm".
SystemKind parse_system_kind(std::string_view name);

/// Coefficients of the shipped energy potentials.
struct EnergyParams {
  double gamma = 1.4;         ///< acoustic exponent in rho^(gamma+1)
  double maxwell_eps = 0.01;  ///< coefficient of the cubic Maxwell terms
  double mu0 = 1.0;           ///< linear coefficient of the GLM B/D relations

  void validate() const;
};

/// Constant symmetric matrix H_k of the Godunov form, entries in {-1, 0, 1}.
class HMatrix {
 public:
  HMatrix() = default;
  HMatrix(int n, std::initializer_list<int> rows);

  int size() const { return n_; }
  int operator()(int i, int j) const { return e_[i * kMaxDim + j]; }
  bool is_symmetric() const;
  StateVector apply(const DualVector& p) const;

 private:
  std::array<int, kMaxDim * kMaxDim> e_{};
  int n_ = 0;
};

/// One nonzero entry of H_k viewed as a coupling between the two blocks of the
/// staggered layout: row component `row` of the block at `row_location`
/// receives sign * d/dx_direction of component `col` of the other block.
struct Coupling {
  Location row_location;
  int row;
  int direction;  // 1 or 2
  int col;
  int sign;
};

/// One of the three SHTC systems behind a common contract: state layout,
/// energy potential, dual variables, Hessian, fluxes and H_k matrices.
///
/// Every shipped energy is separable, E(q) = E_cell(q_cell) + E_vertex(q_vertex),
/// where the cell block holds the variables whose equation follows from the
/// definitions (v; B; B and psi) and the vertex block those obtained as
/// Euler-Lagrange equations (rho; D; D and phi). All full-state quantities are
/// assembled from the two block potentials.
class SystemModel {
 public:
  explicit SystemModel(SystemKind kind, EnergyParams params = {});

  SystemKind kind() const { return kind_; }
  const EnergyParams& params() const { return params_; }
  int dim() const;

  int block_dim(Location loc) const;
  /// Full-state indices of the block components, in block order.
  std::span<const int> block_indices(Location loc) const;

  double energy(const StateVector& q) const;
  DualVector dual(const StateVector& q) const;
  SmallMatrix hessian(const StateVector& q) const;
  /// False where the energy is not strictly convex at q.
  bool convex_at(const StateVector& q) const;

  /// Physical flux f_k(q), k in {1, 2}.
  StateVector flux(const StateVector& q, int k) const;
  /// Energy flux F_k(q), k in {1, 2}.
  double energy_flux(const StateVector& q, int k) const;
  /// Upper bound on the characteristic speeds over both in-plane directions.
  double max_signal_speed(const StateVector& q) const;

  /// k in {1, 2, 3}.
  const HMatrix& h_matrix(int k) const;
  std::span<const Coupling> couplings() const { return couplings_; }

  /// Throws if q has the wrong size or leaves the admissible set.
  void check_state(const StateVector& q) const;
  bool admissible(const StateVector& q) const;

  // Block potentials used by the staggered scheme. Spans are block-sized;
  // the Hessian is written row-major with leading dimension block_dim.
  double block_energy(Location loc, std::span<const double> qb) const;
  void block_dual(Location loc, std::span<const double> qb, std::span<double> pb) const;
  void block_hessian(Location loc, std::span<const double> qb, std::span<double> hb) const;
  bool block_admissible(Location loc, std::span<const double> qb) const;

  StateVector gather(const StateVector& q, Location loc) const;

 private:
  SystemKind kind_;
  EnergyParams params_;
  std::array<HMatrix, 3> h_;
  std::vector<Coupling> couplings_;
};

}  // namespace shtc
