#include "shtc/grid.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace shtc {

StaggeredMesh::StaggeredMesh(int nx, int ny, double x0, double x1, double y0, double y1)
    : nx_(nx), ny_(ny), x0_(x0), x1_(x1), y0_(y0), y1_(y1) {
  if (nx <= 0 || ny <= 0) throw std::invalid_argument("mesh dimensions must be positive");
  if (!(x1 > x0) || !(y1 > y0)) throw std::invalid_argument("mesh extents must be increasing");
  dx_ = (x1 - x0) / nx;
  dy_ = (y1 - y0) / ny;
}

std::array<StaggeredMesh::Corner, 4> StaggeredMesh::cell_corners(int i, int j) const {
  const double hx = 0.5 * dy_;
  const double hy = 0.5 * dx_;
  return {{{index(i, j), {-hx, -hy, 0.0}},
           {index(i + 1, j), {hx, -hy, 0.0}},
           {index(i, j + 1), {-hx, hy, 0.0}},
           {index(i + 1, j + 1), {hx, hy, 0.0}}}};
}

std::array<StaggeredMesh::Corner, 4> StaggeredMesh::vertex_corners(int i, int j) const {
  // Vertex (i, j) is the upper-right corner of cell (i-1, j-1) and so on;
  // n_cp = -n_pc points away from the vertex.
  const double hx = 0.5 * dy_;
  const double hy = 0.5 * dx_;
  return {{{index(i - 1, j - 1), {-hx, -hy, 0.0}},
           {index(i, j - 1), {hx, -hy, 0.0}},
           {index(i - 1, j), {-hx, hy, 0.0}},
           {index(i, j), {hx, hy, 0.0}}}};
}

namespace {

// Values at the four corners ordered (--, +-, -+, ++).
inline double diff4(double mm, double pm, double mp, double pp, int k, double dx, double dy) {
  if (k == 1) return ((pp + pm) - (mp + mm)) / (2.0 * dx);
  return ((pp + mp) - (pm + mm)) / (2.0 * dy);
}

template <Location Out, Location In>
void check_shape(const StaggeredMesh& mesh, const MeshField<In>& in, int ncomp, const char* op) {
  if (!in.matches(mesh)) throw std::invalid_argument(std::string(op) + ": field does not match mesh");
  if (in.ncomp() != ncomp)
    throw std::invalid_argument(std::string(op) + ": expected " + std::to_string(ncomp) + " components, got " +
                                std::to_string(in.ncomp()));
}

}  // namespace

double diff_cp(const StaggeredMesh& mesh, std::span<const double> v, int ncomp, int comp, int i, int j, int k) {
  auto at = [&](int ii, int jj) { return v[static_cast<std::size_t>(mesh.index(ii, jj)) * ncomp + comp]; };
  return diff4(at(i, j), at(i + 1, j), at(i, j + 1), at(i + 1, j + 1), k, mesh.dx(), mesh.dy());
}

double diff_pc(const StaggeredMesh& mesh, std::span<const double> c, int ncomp, int comp, int i, int j, int k) {
  auto at = [&](int ii, int jj) { return c[static_cast<std::size_t>(mesh.index(ii, jj)) * ncomp + comp]; };
  return diff4(at(i - 1, j - 1), at(i, j - 1), at(i - 1, j), at(i, j), k, mesh.dx(), mesh.dy());
}

CellField grad_cp(const StaggeredMesh& mesh, const VertexField& phi) {
  check_shape<Location::Cell>(mesh, phi, 1, "grad_cp");
  CellField out(mesh, 3);
  for (int j = 0; j < mesh.ny(); ++j)
    for (int i = 0; i < mesh.nx(); ++i) {
      const int c = mesh.index(i, j);
      out(c, 0) = diff_cp(mesh, phi.values(), 1, 0, i, j, 1);
      out(c, 1) = diff_cp(mesh, phi.values(), 1, 0, i, j, 2);
    }
  return out;
}

VertexField grad_pc(const StaggeredMesh& mesh, const CellField& phi) {
  check_shape<Location::Vertex>(mesh, phi, 1, "grad_pc");
  VertexField out(mesh, 3);
  for (int j = 0; j < mesh.ny(); ++j)
    for (int i = 0; i < mesh.nx(); ++i) {
      const int p = mesh.index(i, j);
      out(p, 0) = diff_pc(mesh, phi.values(), 1, 0, i, j, 1);
      out(p, 1) = diff_pc(mesh, phi.values(), 1, 0, i, j, 2);
    }
  return out;
}

CellField div_cp(const StaggeredMesh& mesh, const VertexField& a) {
  check_shape<Location::Cell>(mesh, a, 3, "div_cp");
  CellField out(mesh, 1);
  for (int j = 0; j < mesh.ny(); ++j)
    for (int i = 0; i < mesh.nx(); ++i)
      out(mesh.index(i, j), 0) =
          diff_cp(mesh, a.values(), 3, 0, i, j, 1) + diff_cp(mesh, a.values(), 3, 1, i, j, 2);
  return out;
}

VertexField div_pc(const StaggeredMesh& mesh, const CellField& a) {
  check_shape<Location::Vertex>(mesh, a, 3, "div_pc");
  VertexField out(mesh, 1);
  for (int j = 0; j < mesh.ny(); ++j)
    for (int i = 0; i < mesh.nx(); ++i)
      out(mesh.index(i, j), 0) =
          diff_pc(mesh, a.values(), 3, 0, i, j, 1) + diff_pc(mesh, a.values(), 3, 1, i, j, 2);
  return out;
}

// n x A with n = (n1, n2, 0): (n2 A3, -n1 A3, n1 A2 - n2 A1)
CellField curl_cp(const StaggeredMesh& mesh, const VertexField& a) {
  check_shape<Location::Cell>(mesh, a, 3, "curl_cp");
  CellField out(mesh, 3);
  const auto v = a.values();
  for (int j = 0; j < mesh.ny(); ++j)
    for (int i = 0; i < mesh.nx(); ++i) {
      const int c = mesh.index(i, j);
      out(c, 0) = diff_cp(mesh, v, 3, 2, i, j, 2);
      out(c, 1) = -diff_cp(mesh, v, 3, 2, i, j, 1);
      out(c, 2) = diff_cp(mesh, v, 3, 1, i, j, 1) - diff_cp(mesh, v, 3, 0, i, j, 2);
    }
  return out;
}

VertexField curl_pc(const StaggeredMesh& mesh, const CellField& a) {
  check_shape<Location::Vertex>(mesh, a, 3, "curl_pc");
  VertexField out(mesh, 3);
  const auto v = a.values();
  for (int j = 0; j < mesh.ny(); ++j)
    for (int i = 0; i < mesh.nx(); ++i) {
      const int p = mesh.index(i, j);
      out(p, 0) = diff_pc(mesh, v, 3, 2, i, j, 2);
      out(p, 1) = -diff_pc(mesh, v, 3, 2, i, j, 1);
      out(p, 2) = diff_pc(mesh, v, 3, 1, i, j, 1) - diff_pc(mesh, v, 3, 0, i, j, 2);
    }
  return out;
}

double IdentityReport::max() const {
  return std::max({curl_cp_grad_pc, curl_pc_grad_cp, div_cp_curl_pc, div_pc_curl_cp});
}

IdentityReport identity_suite(const StaggeredMesh& mesh, int trials, std::uint64_t seed, double amplitude) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const double h = std::min(mesh.dx(), mesh.dy());
  IdentityReport r;
  for (int t = 0; t < trials; ++t) {
    CellField phi_c(mesh, 1);
    VertexField phi_p(mesh, 1);
    CellField a_c(mesh, 3);
    VertexField a_p(mesh, 3);
    for (double& v : phi_c.values()) v = amplitude * dist(rng);
    for (double& v : phi_p.values()) v = amplitude * dist(rng);
    for (double& v : a_c.values()) v = amplitude * dist(rng);
    for (double& v : a_p.values()) v = amplitude * dist(rng);

    const VertexField g_p = grad_pc(mesh, phi_c);
    const CellField g_c = grad_cp(mesh, phi_p);
    const VertexField c_p = curl_pc(mesh, a_c);
    const CellField c_c = curl_cp(mesh, a_p);
    r.scale = std::max({r.scale, g_p.max_abs() / h, g_c.max_abs() / h, c_p.max_abs() / h, c_c.max_abs() / h});

    r.curl_cp_grad_pc = std::max(r.curl_cp_grad_pc, curl_cp(mesh, g_p).max_abs());
    r.curl_pc_grad_cp = std::max(r.curl_pc_grad_cp, curl_pc(mesh, g_c).max_abs());
    r.div_cp_curl_pc = std::max(r.div_cp_curl_pc, div_cp(mesh, c_p).max_abs());
    r.div_pc_curl_cp = std::max(r.div_pc_curl_cp, div_pc(mesh, c_c).max_abs());
  }
  return r;
}

}  // namespace shtc
