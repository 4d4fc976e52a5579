#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace sgcnn {

/// Deterministic evaluation points in [0,1]^d with quadrature weights summing to 1.
struct SampleSet {
  std::size_t dim = 1;
  std::vector<double> coords;  // row-major, dim per point
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  std::span<const double> point(std::size_t i) const { return {coords.data() + i * dim, dim}; }
};

/// Tensor grid with `per_axis` uniform points (trapezoid weights).
SampleSet tensor_grid(std::size_t d, std::size_t per_axis);
/// First `count` Halton points (bases 2, 3, 5, ...), equal weights.
SampleSet halton_points(std::size_t d, std::size_t count);
/// Seeded uniform points, equal weights. Dyadic grids hide the error of
/// gadgets that are exact on dyadic inputs, so sup checks add these.
SampleSet random_points(std::size_t d, std::size_t count, unsigned seed);
/// 2^{n+3}+1 points per axis for d <= 2, 10^5 Halton points otherwise.
SampleSet error_sample_set(int n, std::size_t d);

/// Discrete L_p norm of g; p = infinity gives the max.
double sampled_norm(const SampleSet& s, const std::function<double(std::span<const double>)>& g, double p);

}  // namespace sgcnn
