#include "sgcnn/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sgcnn {

QuadratureRule gauss_legendre(int q) {
  if (q < 1) throw std::invalid_argument("gauss_legendre: q must be positive");
  QuadratureRule rule;
  rule.nodes.resize(q);
  rule.weights.resize(q);
  for (int k = 0; k < (q + 1) / 2; ++k) {
    double x = std::cos(std::numbers::pi * (k + 0.75) / (q + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= q; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = q * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[k] = -x;
    rule.nodes[q - 1 - k] = x;
    rule.weights[k] = rule.weights[q - 1 - k] = w;
  }
  return rule;
}

namespace {

double tensor_sum(const std::function<double(std::span<const double>)>& g,
                  const std::vector<std::vector<double>>& breaks, const QuadratureRule& rule) {
  const std::size_t d = breaks.size();
  // Flattened 1D abscissae/weights per direction.
  std::vector<std::vector<double>> xs(d), ws(d);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t c = 0; c + 1 < breaks[j].size(); ++c) {
      const double a = breaks[j][c], b = breaks[j][c + 1];
      const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        xs[j].push_back(mid + half * rule.nodes[q]);
        ws[j].push_back(half * rule.weights[q]);
      }
    }
    if (xs[j].empty()) return 0.0;
  }
  std::vector<std::size_t> pos(d, 0);
  std::vector<double> x(d);
  double total = 0.0;
  while (true) {
    double w = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
      x[j] = xs[j][pos[j]];
      w *= ws[j][pos[j]];
    }
    total += w * g(x);
    std::size_t j = 0;
    for (; j < d; ++j) {
      if (++pos[j] < xs[j].size()) break;
      pos[j] = 0;
    }
    if (j == d) break;
  }
  return total;
}

}  // namespace

double integrate_tensor(const std::function<double(std::span<const double>)>& g,
                        const std::vector<std::vector<double>>& breaks, double rtol,
                        int max_points, double atol) {
  double prev = tensor_sum(g, breaks, gauss_legendre(8));
  for (int q = 16; q <= max_points; q *= 2) {
    const double cur = tensor_sum(g, breaks, gauss_legendre(q));
    if (std::abs(cur - prev) <= rtol * std::max(std::abs(cur), std::abs(prev)) ||
        std::abs(cur - prev) <= atol)
      return cur;
    prev = cur;
  }
  throw QuadratureError("integrate_tensor: successive refinements did not agree");
}

}  // namespace sgcnn
