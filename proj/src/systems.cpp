#include "shtc/systems.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace shtc {

namespace {

// Block layouts: cell block first, vertex block second.
constexpr int kAcousticCell[] = {0, 1, 2};
constexpr int kAcousticVertex[] = {3};
constexpr int kMaxwellCell[] = {0, 1, 2};
constexpr int kMaxwellVertex[] = {3, 4, 5};
constexpr int kGlmCell[] = {0, 1, 2, 7};    // B, psi
constexpr int kGlmVertex[] = {4, 5, 6, 3};  // D, phi

std::array<HMatrix, 3> make_h_matrices(SystemKind kind) {
  switch (kind) {
    case SystemKind::Acoustics:
      return {HMatrix(4, {0, 0, 0, 1,
                          0, 0, 0, 0,
                          0, 0, 0, 0,
                          1, 0, 0, 0}),
              HMatrix(4, {0, 0, 0, 0,
                          0, 0, 0, 1,
                          0, 0, 0, 0,
                          0, 1, 0, 0}),
              HMatrix(4, {0, 0, 0, 0,
                          0, 0, 0, 0,
                          0, 0, 0, 1,
                          0, 0, 1, 0})};
    case SystemKind::Maxwell:
      return {HMatrix(6, {0,  0, 0, 0, 0,  0,
                          0,  0, 0, 0, 0, -1,
                          0,  0, 0, 0, 1,  0,
                          0,  0, 0, 0, 0,  0,
                          0,  0, 1, 0, 0,  0,
                          0, -1, 0, 0, 0,  0}),
              HMatrix(6, {0, 0,  0,  0, 0, 1,
                          0, 0,  0,  0, 0, 0,
                          0, 0,  0, -1, 0, 0,
                          0, 0, -1,  0, 0, 0,
                          0, 0,  0,  0, 0, 0,
                          1, 0,  0,  0, 0, 0}),
              HMatrix(6, { 0, 0, 0, 0, -1, 0,
                           0, 0, 0, 1,  0, 0,
                           0, 0, 0, 0,  0, 0,
                           0, 1, 0, 0,  0, 0,
                          -1, 0, 0, 0,  0, 0,
                           0, 0, 0, 0,  0, 0})};
    case SystemKind::MaxwellGLM:
      return {HMatrix(8, {0,  0, 0, 1, 0, 0,  0, 0,
                          0,  0, 0, 0, 0, 0, -1, 0,
                          0,  0, 0, 0, 0, 1,  0, 0,
                          1,  0, 0, 0, 0, 0,  0, 0,
                          0,  0, 0, 0, 0, 0,  0, 1,
                          0,  0, 1, 0, 0, 0,  0, 0,
                          0, -1, 0, 0, 0, 0,  0, 0,
                          0,  0, 0, 0, 1, 0,  0, 0}),
              HMatrix(8, {0, 0,  0, 0,  0, 0, 1, 0,
                          0, 0,  0, 1,  0, 0, 0, 0,
                          0, 0,  0, 0, -1, 0, 0, 0,
                          0, 1,  0, 0,  0, 0, 0, 0,
                          0, 0, -1, 0,  0, 0, 0, 0,
                          0, 0,  0, 0,  0, 0, 0, 1,
                          1, 0,  0, 0,  0, 0, 0, 0,
                          0, 0,  0, 0,  0, 1, 0, 0}),
              HMatrix(8, { 0, 0, 0, 0, 0, -1, 0, 0,
                           0, 0, 0, 0, 1,  0, 0, 0,
                           0, 0, 0, 1, 0,  0, 0, 0,
                           0, 0, 1, 0, 0,  0, 0, 0,
                           0, 1, 0, 0, 0,  0, 0, 0,
                          -1, 0, 0, 0, 0,  0, 0, 0,
                           0, 0, 0, 0, 0,  0, 0, 1,
                           0, 0, 0, 0, 0,  0, 1, 0})};
  }
  throw std::invalid_argument("unknown system kind");
}

void check_direction(int k) {
  if (k != 1 && k != 2) throw std::invalid_argument("flux direction must be 1 or 2, got " + std::to_string(k));
}

// e_k x a for k in {1,2,3}
std::array<double, 3> unit_cross(int k, double a1, double a2, double a3) {
  switch (k) {
    case 1: return {0.0, -a3, a2};
    case 2: return {a3, 0.0, -a1};
    default: return {-a2, a1, 0.0};
  }
}

}  // namespace

const char* to_string(SystemKind kind) {
  switch (kind) {
    case SystemKind::Acoustics: return "acoustics";
    case SystemKind::Maxwell: return "maxwell";
    case SystemKind::MaxwellGLM: return "maxwell_glm";
  }
  return "?";
}

SystemKind parse_system_kind(std::string_view name) {
  if (name == "acoustics") return SystemKind::Acoustics;
  if (name == "maxwell") return SystemKind::Maxwell;
  if (name == "maxwell_glm") return SystemKind::MaxwellGLM;
  throw ConfigError("unknown system '" + std::string(name) + "'");
}

void EnergyParams::validate() const {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (!(mu0 > 0.0)) throw std::invalid_argument("mu0 must be positive");
  if (!std::isfinite(maxwell_eps)) throw std::invalid_argument("maxwell_eps must be finite");
}

HMatrix::HMatrix(int n, std::initializer_list<int> rows) : n_(n) {
  if (static_cast<int>(rows.size()) != n * n) throw std::invalid_argument("HMatrix: wrong entry count");
  int idx = 0;
  for (int v : rows) {
    e_[(idx / n) * kMaxDim + idx % n] = v;
    ++idx;
  }
}

bool HMatrix::is_symmetric() const {
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if ((*this)(i, j) != (*this)(j, i)) return false;
  return true;
}

StateVector HMatrix::apply(const DualVector& p) const {
  StateVector r(n_);
  for (int i = 0; i < n_; ++i) {
    double s = 0.0;
    for (int j = 0; j < n_; ++j) s += (*this)(i, j) * p[j];
    r[i] = s;
  }
  return r;
}

SystemModel::SystemModel(SystemKind kind, EnergyParams params)
    : kind_(kind), params_(params), h_(make_h_matrices(kind)) {
  params_.validate();
  // Block position of every full-state index.
  std::array<Location, kMaxDim> loc{};
  std::array<int, kMaxDim> pos{};
  for (Location l : {Location::Cell, Location::Vertex}) {
    auto idx = block_indices(l);
    for (int b = 0; b < static_cast<int>(idx.size()); ++b) {
      loc[idx[b]] = l;
      pos[idx[b]] = b;
    }
  }
  for (int k = 1; k <= 2; ++k) {
    const HMatrix& h = h_[k - 1];
    for (int i = 0; i < h.size(); ++i)
      for (int j = 0; j < h.size(); ++j)
        if (h(i, j) != 0) {
          if (loc[i] == loc[j]) throw std::logic_error("H_k couples a block to itself");
          couplings_.push_back({loc[i], pos[i], k, pos[j], h(i, j)});
        }
  }
}

int SystemModel::dim() const {
  switch (kind_) {
    case SystemKind::Acoustics: return 4;
    case SystemKind::Maxwell: return 6;
    case SystemKind::MaxwellGLM: return 8;
  }
  return 0;
}

int SystemModel::block_dim(Location loc) const { return static_cast<int>(block_indices(loc).size()); }

std::span<const int> SystemModel::block_indices(Location loc) const {
  const bool cell = loc == Location::Cell;
  switch (kind_) {
    case SystemKind::Acoustics: return cell ? std::span<const int>(kAcousticCell) : std::span<const int>(kAcousticVertex);
    case SystemKind::Maxwell: return cell ? std::span<const int>(kMaxwellCell) : std::span<const int>(kMaxwellVertex);
    case SystemKind::MaxwellGLM: return cell ? std::span<const int>(kGlmCell) : std::span<const int>(kGlmVertex);
  }
  return {};
}

StateVector SystemModel::gather(const StateVector& q, Location loc) const {
  auto idx = block_indices(loc);
  StateVector b(static_cast<int>(idx.size()));
  for (int i = 0; i < b.size(); ++i) b[i] = q[idx[i]];
  return b;
}

// ---------------------------------------------------------------------------
// Block potentials

bool SystemModel::block_admissible(Location loc, std::span<const double> qb) const {
  if (kind_ == SystemKind::Acoustics && loc == Location::Vertex) return qb[0] > 0.0;
  return true;
}

double SystemModel::block_energy(Location loc, std::span<const double> qb) const {
  switch (kind_) {
    case SystemKind::Acoustics: {
      if (loc == Location::Cell) return 0.5 * (qb[0] * qb[0] + qb[1] * qb[1] + qb[2] * qb[2]);
      const double g = params_.gamma;
      if (!(qb[0] > 0.0)) throw AdmissibilityError("acoustics: non-positive density");
      return std::pow(qb[0], g + 1.0) / (g * (g + 1.0));
    }
    case SystemKind::Maxwell: {
      const double n2 = qb[0] * qb[0] + qb[1] * qb[1] + qb[2] * qb[2];
      return n2 + params_.maxwell_eps * qb[0] * n2;
    }
    case SystemKind::MaxwellGLM: {
      const double x1 = qb[0] * qb[0];
      const double x3 = qb[2] * qb[2];
      const double n2 = x1 + qb[1] * qb[1] + x3;
      return 0.5 * params_.mu0 * n2 + 0.5 * qb[3] * qb[3] + 0.125 * (x1 * x1 + x3 * x3) + 0.25 * x1 * x3;
    }
  }
  return 0.0;
}

void SystemModel::block_dual(Location loc, std::span<const double> qb, std::span<double> pb) const {
  switch (kind_) {
    case SystemKind::Acoustics:
      if (loc == Location::Cell) {
        pb[0] = qb[0];
        pb[1] = qb[1];
        pb[2] = qb[2];
      } else {
        if (!(qb[0] > 0.0)) throw AdmissibilityError("acoustics: non-positive density");
        pb[0] = std::pow(qb[0], params_.gamma) / params_.gamma;
      }
      return;
    case SystemKind::Maxwell: {
      const double eps = params_.maxwell_eps;
      const double n2 = qb[0] * qb[0] + qb[1] * qb[1] + qb[2] * qb[2];
      pb[0] = 2.0 * qb[0] + eps * (n2 + 2.0 * qb[0] * qb[0]);
      pb[1] = 2.0 * qb[1] + eps * 2.0 * qb[0] * qb[1];
      pb[2] = 2.0 * qb[2] + eps * 2.0 * qb[0] * qb[2];
      return;
    }
    case SystemKind::MaxwellGLM: {
      const double mu0 = params_.mu0;
      const double c = 0.5 * (qb[0] * qb[0] + qb[2] * qb[2]);
      pb[0] = mu0 * qb[0] + c * qb[0];
      pb[1] = mu0 * qb[1];
      pb[2] = mu0 * qb[2] + c * qb[2];
      pb[3] = qb[3];
      return;
    }
  }
}

void SystemModel::block_hessian(Location loc, std::span<const double> qb, std::span<double> hb) const {
  const int n = block_dim(loc);
  for (int i = 0; i < n * n; ++i) hb[i] = 0.0;
  auto h = [&](int i, int j) -> double& { return hb[i * n + j]; };
  switch (kind_) {
    case SystemKind::Acoustics:
      if (loc == Location::Cell) {
        h(0, 0) = h(1, 1) = h(2, 2) = 1.0;
      } else {
        if (!(qb[0] > 0.0)) throw AdmissibilityError("acoustics: non-positive density");
        h(0, 0) = std::pow(qb[0], params_.gamma - 1.0);
      }
      return;
    case SystemKind::Maxwell: {
      // 2 I + 2 eps (x e1^T + e1 x^T + x1 I)
      const double eps = params_.maxwell_eps;
      for (int i = 0; i < 3; ++i) h(i, i) = 2.0 + 2.0 * eps * qb[0];
      h(0, 0) += 4.0 * eps * qb[0];
      for (int i = 1; i < 3; ++i) {
        h(0, i) = 2.0 * eps * qb[i];
        h(i, 0) = 2.0 * eps * qb[i];
      }
      return;
    }
    case SystemKind::MaxwellGLM: {
      const double mu0 = params_.mu0;
      const double x1 = qb[0] * qb[0];
      const double x3 = qb[2] * qb[2];
      h(0, 0) = mu0 + 1.5 * x1 + 0.5 * x3;
      h(0, 2) = h(2, 0) = qb[0] * qb[2];
      h(1, 1) = mu0;
      h(2, 2) = mu0 + 1.5 * x3 + 0.5 * x1;
      h(3, 3) = 1.0;
      return;
    }
  }
}

// ---------------------------------------------------------------------------
// Full-state contract

bool SystemModel::admissible(const StateVector& q) const {
  if (q.size() != dim()) return false;
  for (Location loc : {Location::Cell, Location::Vertex})
    if (!block_admissible(loc, gather(q, loc).span())) return false;
  return true;
}

void SystemModel::check_state(const StateVector& q) const {
  if (q.size() != dim())
    throw std::invalid_argument(std::string(to_string(kind_)) + ": state dimension " + std::to_string(q.size()) +
                                ", expected " + std::to_string(dim()));
  if (!admissible(q)) throw AdmissibilityError(std::string(to_string(kind_)) + ": inadmissible state");
}

double SystemModel::energy(const StateVector& q) const {
  check_state(q);
  return block_energy(Location::Cell, gather(q, Location::Cell).span()) +
         block_energy(Location::Vertex, gather(q, Location::Vertex).span());
}

DualVector SystemModel::dual(const StateVector& q) const {
  check_state(q);
  DualVector p(dim());
  for (Location loc : {Location::Cell, Location::Vertex}) {
    auto idx = block_indices(loc);
    StateVector qb = gather(q, loc);
    DualVector pb(qb.size());
    block_dual(loc, qb.span(), pb.span());
    for (int i = 0; i < pb.size(); ++i) p[idx[i]] = pb[i];
  }
  return p;
}

SmallMatrix SystemModel::hessian(const StateVector& q) const {
  check_state(q);
  SmallMatrix m(dim());
  for (Location loc : {Location::Cell, Location::Vertex}) {
    auto idx = block_indices(loc);
    const int n = static_cast<int>(idx.size());
    std::array<double, kMaxDim * kMaxDim> hb{};
    block_hessian(loc, gather(q, loc).span(), hb);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(idx[i], idx[j]) = hb[i * n + j];
  }
  return m;
}

bool SystemModel::convex_at(const StateVector& q) const {
  const SmallMatrix m = hessian(q);
  return symmetric_eigenvalues(m)[0] > 0.0;
}

StateVector SystemModel::flux(const StateVector& q, int k) const {
  check_direction(k);
  const DualVector p = dual(q);
  StateVector f(dim());
  switch (kind_) {
    case SystemKind::Acoustics:
      // (s e_k, u_k)
      f[k - 1] = p[3];
      f[3] = p[k - 1];
      break;
    case SystemKind::Maxwell: {
      // (e_k x E, -e_k x H)
      const auto ce = unit_cross(k, p[3], p[4], p[5]);
      const auto ch = unit_cross(k, p[0], p[1], p[2]);
      for (int i = 0; i < 3; ++i) {
        f[i] = ce[i];
        f[3 + i] = -ch[i];
      }
      break;
    }
    case SystemKind::MaxwellGLM: {
      // (e_k x E + xi e_k, H_k, -e_k x H + eta e_k, E_k)
      const auto ce = unit_cross(k, p[4], p[5], p[6]);
      const auto ch = unit_cross(k, p[0], p[1], p[2]);
      for (int i = 0; i < 3; ++i) {
        f[i] = ce[i];
        f[4 + i] = -ch[i];
      }
      f[k - 1] += p[3];
      f[4 + k - 1] += p[7];
      f[3] = p[k - 1];
      f[7] = p[4 + k - 1];
      break;
    }
  }
  return f;
}

double SystemModel::energy_flux(const StateVector& q, int k) const {
  check_direction(k);
  const DualVector p = dual(q);
  switch (kind_) {
    case SystemKind::Acoustics:
      return p[k - 1] * p[3];
    case SystemKind::Maxwell: {
      // (E x H)_k
      const double e[3] = {p[3], p[4], p[5]};
      const double h[3] = {p[0], p[1], p[2]};
      const int a = k % 3, b = (k + 1) % 3;
      return e[a] * h[b] - e[b] * h[a];
    }
    case SystemKind::MaxwellGLM: {
      const double e[3] = {p[4], p[5], p[6]};
      const double h[3] = {p[0], p[1], p[2]};
      const int a = k % 3, b = (k + 1) % 3;
      return e[a] * h[b] - e[b] * h[a] + p[7] * e[k - 1] + p[3] * h[k - 1];
    }
  }
  return 0.0;
}

double SystemModel::max_signal_speed(const StateVector& q) const {
  // H_k only couples the cell block to the vertex block and is a signed
  // partial permutation, so the squared speeds are bounded by the product of
  // the largest block Hessian eigenvalues.
  check_state(q);
  double lam[2];
  int b = 0;
  for (Location loc : {Location::Cell, Location::Vertex}) {
    const int n = block_dim(loc);
    std::array<double, kMaxDim * kMaxDim> hb{};
    block_hessian(loc, gather(q, loc).span(), hb);
    SmallMatrix m(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = hb[i * n + j];
    const auto ev = symmetric_eigenvalues(m);
    if (!(ev[0] > 0.0)) throw AdmissibilityError(std::string(to_string(kind_)) + ": energy Hessian is indefinite");
    lam[b++] = ev[n - 1];
  }
  return std::sqrt(lam[0] * lam[1]);
}

const HMatrix& SystemModel::h_matrix(int k) const {
  if (k < 1 || k > 3) throw std::invalid_argument("H_k direction must be 1, 2 or 3");
  return h_[k - 1];
}

}  // namespace shtc
