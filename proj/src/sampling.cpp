#include "sgcnn/sampling.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace sgcnn {

SampleSet tensor_grid(std::size_t d, std::size_t per_axis) {
  if (per_axis < 2) throw std::invalid_argument("tensor grid needs at least 2 points per axis");
  SampleSet s;
  s.dim = d;
  std::vector<std::size_t> pos(d, 0);
  const double h = 1.0 / static_cast<double>(per_axis - 1);
  while (true) {
    double w = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
      s.coords.push_back(static_cast<double>(pos[j]) * h);
      w *= (pos[j] == 0 || pos[j] + 1 == per_axis) ? 0.5 * h : h;
    }
    s.weights.push_back(w);
    std::size_t j = 0;
    for (; j < d; ++j) {
      if (++pos[j] < per_axis) break;
      pos[j] = 0;
    }
    if (j == d) break;
  }
  return s;
}

SampleSet halton_points(std::size_t d, std::size_t count) {
  static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  if (d > std::size(primes)) throw std::invalid_argument("halton_points supports d <= 12");
  SampleSet s;
  s.dim = d;
  for (std::size_t i = 1; i <= count; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      double f = 1.0, r = 0.0;
      for (std::size_t k = i; k > 0; k /= primes[j]) {
        f /= primes[j];
        r += f * static_cast<double>(k % primes[j]);
      }
      s.coords.push_back(r);
    }
    s.weights.push_back(1.0 / static_cast<double>(count));
  }
  return s;
}

SampleSet random_points(std::size_t d, std::size_t count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SampleSet s;
  s.dim = d;
  s.coords.resize(d * count);
  for (auto& c : s.coords) c = u(rng);
  s.weights.assign(count, 1.0 / static_cast<double>(count));
  return s;
}

SampleSet error_sample_set(int n, std::size_t d) {
  if (d <= 2) return tensor_grid(d, (std::size_t{1} << (n + 3)) + 1);
  return halton_points(d, 100000);
}

double sampled_norm(const SampleSet& s, const std::function<double(std::span<const double>)>& g, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) m = std::max(m, std::abs(g(s.point(i))));
    return m;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) acc += s.weights[i] * std::pow(std::abs(g(s.point(i))), p);
  return std::pow(acc, 1.0 / p);
}

}  // namespace sgcnn
