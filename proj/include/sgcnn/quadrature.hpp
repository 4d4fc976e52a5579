#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace sgcnn {

struct QuadratureRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// q-point Gauss-Legendre rule, Newton iteration on the three-term recurrence.
QuadratureRule gauss_legendre(int q);

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tensor-product Gauss-Legendre over a product of piecewise partitions.
/// `breaks[j]` is the sorted list of cell boundaries in direction j; the
/// integrand is assumed smooth inside each cell. The per-cell point count is
/// doubled from 8 until two successive estimates agree to `rtol`.
double integrate_tensor(const std::function<double(std::span<const double>)>& g,
                        const std::vector<std::vector<double>>& breaks, double rtol = 1e-9,
                        int max_points = 128, double atol = 1e-300);

}  // namespace sgcnn
