#include "shtc/krylov.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace shtc {

namespace {

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

GmresResult gmres(const LinearOperator& a, std::span<const double> b, std::span<double> x, const GmresOptions& opts,
                  const LinearOperator& right_precond) {
  const std::size_t n = b.size();
  if (x.size() != n) throw std::invalid_argument("gmres: size mismatch");
  const int m = opts.restart;
  GmresResult res;
  for (auto& v : x) v = 0.0;

  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    res.converged = true;
    return res;
  }
  const double target = opts.rel_tol * bnorm;

  std::vector<std::vector<double>> basis(m + 1, std::vector<double>(n));
  std::vector<double> h(static_cast<std::size_t>(m + 1) * m);
  std::vector<double> cs(m), sn(m), g(m + 1), y(m);
  std::vector<double> w(n), z(n), r(n);
  auto H = [&](int i, int j) -> double& { return h[static_cast<std::size_t>(i) * m + j]; };

  // r = b - A x (x is zero on the first cycle)
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i];
  double beta = bnorm;

  while (res.iterations < opts.max_iters) {
    for (std::size_t i = 0; i < n; ++i) basis[0][i] = r[i] / beta;
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = beta;

    int k = 0;
    for (; k < m && res.iterations < opts.max_iters; ++k) {
      ++res.iterations;
      if (right_precond) {
        right_precond(basis[k], z);
        a(z, w);
      } else {
        a(basis[k], w);
      }
      for (int i = 0; i <= k; ++i) {
        H(i, k) = dot(w, basis[i]);
        for (std::size_t t = 0; t < n; ++t) w[t] -= H(i, k) * basis[i][t];
      }
      H(k + 1, k) = norm2(w);
      if (H(k + 1, k) != 0.0)
        for (std::size_t t = 0; t < n; ++t) basis[k + 1][t] = w[t] / H(k + 1, k);

      for (int i = 0; i < k; ++i) {
        const double t = cs[i] * H(i, k) + sn[i] * H(i + 1, k);
        H(i + 1, k) = -sn[i] * H(i, k) + cs[i] * H(i + 1, k);
        H(i, k) = t;
      }
      const double denom = std::hypot(H(k, k), H(k + 1, k));
      if (denom == 0.0) throw std::runtime_error("gmres: breakdown with singular Hessenberg column");
      cs[k] = H(k, k) / denom;
      sn[k] = H(k + 1, k) / denom;
      H(k, k) = denom;
      H(k + 1, k) = 0.0;
      g[k + 1] = -sn[k] * g[k];
      g[k] = cs[k] * g[k];

      if (std::abs(g[k + 1]) <= target) {
        ++k;
        break;
      }
    }

    // y = R^{-1} g, update x (through the preconditioner if present)
    for (int i = k - 1; i >= 0; --i) {
      double s = g[i];
      for (int j = i + 1; j < k; ++j) s -= H(i, j) * y[j];
      y[i] = s / H(i, i);
    }
    std::fill(w.begin(), w.end(), 0.0);
    for (int j = 0; j < k; ++j)
      for (std::size_t t = 0; t < n; ++t) w[t] += y[j] * basis[j][t];
    if (right_precond) {
      right_precond(w, z);
      for (std::size_t t = 0; t < n; ++t) x[t] += z[t];
    } else {
      for (std::size_t t = 0; t < n; ++t) x[t] += w[t];
    }

    // true residual
    a(std::span<const double>(x.data(), n), w);
    for (std::size_t t = 0; t < n; ++t) r[t] = b[t] - w[t];
    beta = norm2(r);
    res.rel_residual = beta / bnorm;
    if (beta <= target) {
      res.converged = true;
      return res;
    }
  }
  return res;
}

}  // namespace shtc
