#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <initializer_list>
#include <span>

namespace shtc {

/// Largest state dimension of any supported system.
inline constexpr int kMaxDim = 8;

/// Fixed-capacity dense vector. The tag keeps conserved states and their
/// dual (main field) variables from being mixed up by accident.
template <class Tag>
class FixedVector {
 public:
  FixedVector() = default;
  explicit FixedVector(int n) : size_(n) { assert(n >= 0 && n <= kMaxDim); }
  FixedVector(std::initializer_list<double> init) : size_(static_cast<int>(init.size())) {
    assert(size_ <= kMaxDim);
    int i = 0;
    for (double v : init) data_[i++] = v;
  }
  static FixedVector from(std::span<const double> values) {
    FixedVector v(static_cast<int>(values.size()));
    for (int i = 0; i < v.size_; ++i) v.data_[i] = values[i];
    return v;
  }

  int size() const { return size_; }
  double& operator[](int i) { return data_[i]; }
  double operator[](int i) const { return data_[i]; }
  std::span<double> span() { return {data_.data(), static_cast<std::size_t>(size_)}; }
  std::span<const double> span() const { return {data_.data(), static_cast<std::size_t>(size_)}; }

  FixedVector& operator+=(const FixedVector& o) {
    for (int i = 0; i < size_; ++i) data_[i] += o.data_[i];
    return *this;
  }
  FixedVector& operator-=(const FixedVector& o) {
    for (int i = 0; i < size_; ++i) data_[i] -= o.data_[i];
    return *this;
  }
  FixedVector& operator*=(double s) {
    for (int i = 0; i < size_; ++i) data_[i] *= s;
    return *this;
  }
  friend FixedVector operator+(FixedVector a, const FixedVector& b) { return a += b; }
  friend FixedVector operator-(FixedVector a, const FixedVector& b) { return a -= b; }
  friend FixedVector operator*(double s, FixedVector a) { return a *= s; }

  double norm_inf() const {
    double m = 0.0;
    for (int i = 0; i < size_; ++i) m = std::max(m, data_[i] < 0 ? -data_[i] : data_[i]);
    return m;
  }
  double squared_norm() const {
    double s = 0.0;
    for (int i = 0; i < size_; ++i) s += data_[i] * data_[i];
    return s;
  }

 private:
  std::array<double, kMaxDim> data_{};
  int size_ = 0;
};

struct StateTag {};
struct DualTag {};
using StateVector = FixedVector<StateTag>;
using DualVector = FixedVector<DualTag>;

/// Duality pairing p . q between a main-field vector and a state-shaped vector.
inline double pairing(const DualVector& p, const StateVector& q) {
  assert(p.size() == q.size());
  double s = 0.0;
  for (int i = 0; i < p.size(); ++i) s += p[i] * q[i];
  return s;
}

inline double dot(const DualVector& a, const DualVector& b) {
  double s = 0.0;
  for (int i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Small dense square matrix (row-major, capacity kMaxDim x kMaxDim).
class SmallMatrix {
 public:
  SmallMatrix() = default;
  explicit SmallMatrix(int n) : n_(n) { assert(n >= 0 && n <= kMaxDim); }
  static SmallMatrix identity(int n) {
    SmallMatrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int size() const { return n_; }
  double& operator()(int i, int j) { return a_[i * kMaxDim + j]; }
  double operator()(int i, int j) const { return a_[i * kMaxDim + j]; }

  template <class Tag>
  FixedVector<Tag> apply(std::span<const double> x) const {
    FixedVector<Tag> y(n_);
    for (int i = 0; i < n_; ++i) {
      double s = 0.0;
      for (int j = 0; j < n_; ++j) s += (*this)(i, j) * x[j];
      y[i] = s;
    }
    return y;
  }

  bool is_symmetric() const {
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < i; ++j)
        if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
  }

 private:
  std::array<double, kMaxDim * kMaxDim> a_{};
  int n_ = 0;
};

/// In-place Cholesky factorisation A = L L^T of a symmetric matrix stored in
/// `a` (n x n, row-major, leading dimension `lda`). Returns false if A is not
/// numerically positive definite.
bool cholesky_factor(double* a, int n, int lda);

/// Solves L L^T x = b in place using a factor produced by cholesky_factor.
void cholesky_solve(const double* l, int n, int lda, double* b);

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
std::array<double, kMaxDim> symmetric_eigenvalues(const SmallMatrix& m);

}  // namespace shtc
