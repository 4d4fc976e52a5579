#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sgcnn/sparse_grid.hpp"

namespace sgcnn {

/// Separable target f(x) = scale * prod_j g(x_j) with closed-form derivatives
/// of g, so mixed derivatives of any order are available analytically.
struct KorobovTestFn {
  std::string name;
  double scale = 1.0;
  /// g^{(k)}(t)
  std::function<double(double, int)> factor;
  bool boundary_zero = true;

  double operator()(std::span<const double> x) const;
  double mixed_derivative(std::span<const double> x, const MultiIndex& orders) const;
  PointFunction as_point_function() const;
};

/// Registered names: sinprod, polyprod, bubble, zero.
KorobovTestFn make_test_function(std::string_view name);
std::vector<std::string> registered_test_functions();

}  // namespace sgcnn
