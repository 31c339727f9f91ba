#include "shtc/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace shtc {

PathQuadrature::PathQuadrature(int n) {
  if (n < 1 || n > 64) throw std::invalid_argument("Gauss-Legendre point count must be in [1, 64]");
  nodes_.resize(n);
  weights_.resize(n);
  // Newton iteration on P_n for each root in (-1, 1), mapped to [0, 1].
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged root
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // x is the i-th largest root: place symmetric pair
    nodes_[n - 1 - i] = 0.5 * (1.0 + x);
    nodes_[i] = 0.5 * (1.0 - x);
    weights_[i] = weights_[n - 1 - i] = 0.5 * w;
  }
  if (n % 2 == 1) nodes_[n / 2] = 0.5;
}

}  // namespace shtc
