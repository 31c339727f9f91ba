#pragma once

#include <functional>
#include <span>

namespace shtc {

/// y = A x for a matrix-free operator.
using LinearOperator = std::function<void(std::span<const double> x, std::span<double> y)>;

struct GmresOptions {
  int restart = 30;
  int max_iters = 1000;
  double rel_tol = 1e-13;  ///< on ||b - A x|| / ||b||
};

struct GmresResult {
  int iterations = 0;
  double rel_residual = 0.0;
  bool converged = false;
};

/// Restarted GMRES with modified Gram-Schmidt and Givens rotations, solving
/// A x = b from a zero initial guess. An optional right preconditioner M
/// turns the iteration into A M y = b, x = M y, so the monitored residual is
/// always the true one.
GmresResult gmres(const LinearOperator& a, std::span<const double> b, std::span<double> x, const GmresOptions& opts,
                  const LinearOperator& right_precond = {});

}  // namespace shtc
