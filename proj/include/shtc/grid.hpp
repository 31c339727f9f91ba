#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "shtc/common.hpp"

namespace shtc {

/// Periodic 2D Cartesian primal mesh together with its dual.
///
/// Cell (i, j) has centre (x0 + (i + 1/2) dx, y0 + (j + 1/2) dy); vertex (i, j)
/// sits at (x0 + i dx, y0 + j dy), the lower-left corner of cell (i, j). Under
/// periodic identification there are nx*ny cells and nx*ny vertices, both
/// indexed row-major as i + nx*j.
class StaggeredMesh {
 public:
  StaggeredMesh(int nx, int ny, double x0, double x1, double y0, double y1);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double x0() const { return x0_; }
  double x1() const { return x1_; }
  double y0() const { return y0_; }
  double y1() const { return y1_; }
  double dx() const { return dx_; }
  double dy() const { return dy_; }
  int num_cells() const { return nx_ * ny_; }
  int num_vertices() const { return nx_ * ny_; }
  int num_locations(Location loc) const { return loc == Location::Cell ? num_cells() : num_vertices(); }
  double cell_volume() const { return dx_ * dy_; }
  double dual_volume() const { return dx_ * dy_; }
  double volume(Location loc) const { return loc == Location::Cell ? cell_volume() : dual_volume(); }

  /// Row-major index with periodic wrap.
  int index(int i, int j) const {
    i %= nx_;
    j %= ny_;
    if (i < 0) i += nx_;
    if (j < 0) j += ny_;
    return i + nx_ * j;
  }
  std::array<double, 2> cell_center(int i, int j) const {
    return {x0_ + (i + 0.5) * dx_, y0_ + (j + 0.5) * dy_};
  }
  std::array<double, 2> vertex_position(int i, int j) const { return {x0_ + i * dx_, y0_ + j * dy_}; }
  std::array<double, 2> position(Location loc, int i, int j) const {
    return loc == Location::Cell ? cell_center(i, j) : vertex_position(i, j);
  }

  struct Corner {
    int index;             ///< neighbouring vertex (for a cell) or cell (for a vertex)
    std::array<double, 3> normal;  ///< l_pc n_pc (cell corners) or l_pc n_cp (vertex corners)
  };
  /// The four vertices of cell (i, j) with their corner normals.
  std::array<Corner, 4> cell_corners(int i, int j) const;
  /// The four cells around vertex (i, j) with the dual corner normals n_cp = -n_pc.
  std::array<Corner, 4> vertex_corners(int i, int j) const;

 private:
  int nx_, ny_;
  double x0_, x1_, y0_, y1_;
  double dx_, dy_;
};

/// Discrete field with `ncomp` interleaved components per mesh location.
template <Location L>
class MeshField {
 public:
  MeshField() = default;
  MeshField(const StaggeredMesh& mesh, int ncomp)
      : count_(mesh.num_locations(L)), ncomp_(ncomp), values_(static_cast<std::size_t>(count_) * ncomp, 0.0) {}

  static constexpr Location location = L;

  int count() const { return count_; }
  int ncomp() const { return ncomp_; }
  double& operator()(int loc, int c) { return values_[static_cast<std::size_t>(loc) * ncomp_ + c]; }
  double operator()(int loc, int c) const { return values_[static_cast<std::size_t>(loc) * ncomp_ + c]; }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  std::span<double> at(int loc) { return {values_.data() + static_cast<std::size_t>(loc) * ncomp_, static_cast<std::size_t>(ncomp_)}; }
  std::span<const double> at(int loc) const {
    return {values_.data() + static_cast<std::size_t>(loc) * ncomp_, static_cast<std::size_t>(ncomp_)};
  }
  double max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, v < 0 ? -v : v);
    return m;
  }
  bool matches(const StaggeredMesh& mesh) const { return count_ == mesh.num_locations(L); }

 private:
  int count_ = 0;
  int ncomp_ = 0;
  std::vector<double> values_;
};

using CellField = MeshField<Location::Cell>;
using VertexField = MeshField<Location::Vertex>;

// Mimetic operators. The _cp variants map vertex data to cells through the
// corner normals of the primal cells; the _pc variants map cell data to
// vertices through the dual corner normals. Only the in-plane normal
// components are nonzero, so all d/dx3 terms vanish.

CellField grad_cp(const StaggeredMesh& mesh, const VertexField& phi);
VertexField grad_pc(const StaggeredMesh& mesh, const CellField& phi);
CellField div_cp(const StaggeredMesh& mesh, const VertexField& a);
VertexField div_pc(const StaggeredMesh& mesh, const CellField& a);
CellField curl_cp(const StaggeredMesh& mesh, const VertexField& a);
VertexField curl_pc(const StaggeredMesh& mesh, const CellField& a);

/// Corner-normal difference in direction k (1 or 2) of component `comp` of a
/// vertex field evaluated at cell `cell`, i.e. the k-th entry of
/// (1/|Omega_c|) sum_p l_pc n_pc f_p. The dual version differences cell data
/// at a vertex. These are the primitives every operator above is built from.
double diff_cp(const StaggeredMesh& mesh, std::span<const double> vertex_values, int ncomp, int comp, int cell_i,
               int cell_j, int k);
double diff_pc(const StaggeredMesh& mesh, std::span<const double> cell_values, int ncomp, int comp, int vert_i,
               int vert_j, int k);

/// Maxima of the four composition identities on random fields.
struct IdentityReport {
  double curl_cp_grad_pc = 0.0;  ///< max |curl_cp grad_pc phi_c|
  double curl_pc_grad_cp = 0.0;  ///< max |curl_pc grad_cp phi_p|
  double div_cp_curl_pc = 0.0;   ///< max |div_cp curl_pc A_c|
  double div_pc_curl_cp = 0.0;   ///< max |div_pc curl_cp A_p|
  /// Largest |inner operator output| / min(dx, dy); natural round-off scale.
  double scale = 0.0;

  double max() const;
};

/// Evaluates the identities on `trials` random fields with entries in
/// [-amplitude, amplitude]. amplitude = 0 gives zero fields.
IdentityReport identity_suite(const StaggeredMesh& mesh, int trials = 1, std::uint64_t seed = 1, double amplitude = 1.0);

}  // namespace shtc
