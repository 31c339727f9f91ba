#pragma once

#include <vector>

namespace shtc {

/// Gauss-Legendre rule on [0, 1]; exact for polynomials of degree 2n-1.
class PathQuadrature {
 public:
  explicit PathQuadrature(int n_points = 3);

  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

}  // namespace shtc
