#include "sgcnn/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "sgcnn/quadrature.hpp"

namespace sgcnn {

namespace {

using WeightMap = std::map<double, long double>;

WeightMap chain_functional(int level, std::int64_t index, int degree) {
  const double x = dyadic_point(level, index);
  WeightMap w{{x, 1.0L}};
  std::int64_t i = index;
  for (int l = level - 1; l >= 1; --l) {
    i = ((i + 1) / 2) % 2 == 1 ? (i + 1) / 2 : (i - 1) / 2;
    const Basis1D anc(l, i, std::min(degree, l + 1));
    const double phi = anc(x);
    if (phi == 0.0) continue;
    for (const auto& [p, c] : chain_functional(l, i, degree)) w[p] -= static_cast<long double>(phi) * c;
  }
  return w;
}

double factorial(int k) {
  double f = 1.0;
  for (int j = 2; j <= k; ++j) f *= j;
  return f;
}

bool is_inf(double p) { return std::isinf(p); }

}  // namespace

double SurplusFunctional1D::apply(const std::function<double(double)>& f) const {
  double v = 0.0;
  for (std::size_t q = 0; q < points.size(); ++q) v += weights[q] * f(points[q]);
  return v;
}

double SurplusFunctional1D::peano_kernel(double t) const {
  double v = 0.0;
  for (std::size_t q = 0; q < points.size(); ++q) {
    const double s = points[q] - t;
    if (s > 0.0) v += weights[q] * (order == 0 ? 1.0 : std::pow(s, order));
  }
  return v / factorial(order);
}

SurplusFunctional1D surplus_functional(int level, std::int64_t index, int degree) {
  WeightMap w = chain_functional(level, index, degree);
  // Boundary weights: f vanishes there, so they only serve the Peano argument.
  long double mu0 = 0.0L, mu1 = 0.0L, mass = 0.0L;
  for (const auto& [p, c] : w) {
    mu0 += c;
    mu1 += c * p;
    mass += std::abs(c);
  }
  const long double c1 = -mu1;
  const long double c0 = -mu0 - c1;
  w[0.0] += c0;
  w[1.0] += c1;
  mass += std::abs(c0) + std::abs(c1);

  int order = 1;
  for (int j = 2; j <= degree; ++j) {
    long double mu = 0.0L;
    for (const auto& [p, c] : w) mu += c * std::pow(static_cast<long double>(p), j);
    if (std::abs(mu) > 1e-9L * mass) break;
    order = j;
  }
  SurplusFunctional1D out;
  out.order = order;
  for (const auto& [p, c] : w) {
    out.points.push_back(p);
    out.weights.push_back(static_cast<double>(c));
  }
  return out;
}

MultiIndex kernel_derivative_orders(const HierNode& node, const MultiIndex& degrees) {
  MultiIndex r(std::vector<int>(node.dim(), 0));
  for (std::size_t j = 0; j < node.dim(); ++j)
    r[j] = surplus_functional(node.level[j], node.index[j], degrees[j]).order + 1;
  return r;
}

double coefficient_integral(const KorobovTestFn& f, const HierNode& node, const MultiIndex& degrees,
                            double rtol) {
  if (!f.boundary_zero)
    throw std::invalid_argument("coefficient_integral: target must vanish on the boundary");
  const std::size_t d = node.dim();
  std::vector<SurplusFunctional1D> fun;
  std::vector<std::vector<double>> breaks(d);
  MultiIndex orders(std::vector<int>(d, 0));
  for (std::size_t j = 0; j < d; ++j) {
    fun.push_back(surplus_functional(node.level[j], node.index[j], degrees[j]));
    breaks[j] = fun[j].points;
    std::sort(breaks[j].begin(), breaks[j].end());
    orders[j] = fun[j].order + 1;
  }
  auto integrand = [&](std::span<const double> t) {
    double k = 1.0;
    for (std::size_t j = 0; j < d; ++j) k *= fun[j].peano_kernel(t[j]);
    return k == 0.0 ? 0.0 : k * f.mixed_derivative(t, orders);
  };
  return integrate_tensor(integrand, breaks, rtol);
}

double coefficient_constant(const MultiIndex& degrees) {
  double c = 1.0;
  for (int a : degrees.entries) c *= std::ldexp(1.0, a * (a + 1) / 2) / factorial(a + 1);
  return c;
}

namespace {

double derivative_norm_on_box(const KorobovTestFn& f, const std::vector<double>& lo, const std::vector<double>& hi,
                              const MultiIndex& degrees, double p) {
  const std::size_t d = lo.size();
  MultiIndex orders = degrees;
  for (auto& a : orders.entries) a += 1;
  if (is_inf(p)) {
    constexpr int kSamples = 101;
    double best = 0.0;
    std::vector<int> pos(d, 0);
    std::vector<double> x(d);
    while (true) {
      for (std::size_t j = 0; j < d; ++j) x[j] = lo[j] + (hi[j] - lo[j]) * pos[j] / (kSamples - 1);
      best = std::max(best, std::abs(f.mixed_derivative(x, orders)));
      std::size_t j = 0;
      for (; j < d; ++j) {
        if (++pos[j] < kSamples) break;
        pos[j] = 0;
      }
      if (j == d) break;
    }
    return best;
  }
  std::vector<std::vector<double>> breaks(d);
  for (std::size_t j = 0; j < d; ++j)
    for (int c = 0; c <= 16; ++c) breaks[j].push_back(lo[j] + (hi[j] - lo[j]) * c / 16.0);
  auto integrand = [&](std::span<const double> t) {
    return std::pow(std::abs(f.mixed_derivative(t, orders)), p);
  };
  return std::pow(integrate_tensor(integrand, breaks, 1e-7, 256, 1e-300), 1.0 / p);
}

}  // namespace

double derivative_norm_on_support(const KorobovTestFn& f, const HierNode& node,
                                  const MultiIndex& degrees, double p) {
  std::vector<double> lo, hi;
  for (std::size_t j = 0; j < node.dim(); ++j) {
    lo.push_back(node.coordinate(j) - node.mesh(j));
    hi.push_back(node.coordinate(j) + node.mesh(j));
  }
  return derivative_norm_on_box(f, lo, hi, degrees, p);
}

double derivative_norm_on_kernel_hull(const KorobovTestFn& f, const HierNode& node,
                                      const MultiIndex& degrees, double p) {
  std::vector<double> lo, hi;
  for (std::size_t j = 0; j < node.dim(); ++j) {
    const auto fun = surplus_functional(node.level[j], node.index[j], degrees[j]);
    double a = node.coordinate(j) - node.mesh(j), b = node.coordinate(j) + node.mesh(j);
    for (std::size_t q = 0; q < fun.points.size(); ++q)
      if (fun.weights[q] != 0.0) {
        a = std::min(a, fun.points[q]);
        b = std::max(b, fun.points[q]);
      }
    lo.push_back(a);
    hi.push_back(b);
  }
  return derivative_norm_on_box(f, lo, hi, degrees, p);
}

double coefficient_bound(const KorobovTestFn& f, const HierNode& node, const MultiIndex& degrees,
                         double p, NormDomain domain) {
  const int d = static_cast<int>(node.dim());
  int l_dot_alpha = 0;
  for (int j = 0; j < d; ++j) l_dot_alpha += node.level[j] * degrees[j];
  // 1/p' = 1 - 1/p
  const double inv_pconj = is_inf(p) ? 1.0 : 1.0 - 1.0 / p;
  const double expo = -d - l_dot_alpha - node.level.norm1() * inv_pconj;
  const double norm = domain == NormDomain::support ? derivative_norm_on_support(f, node, degrees, p)
                                                    : derivative_norm_on_kernel_hull(f, node, degrees, p);
  return coefficient_constant(degrees) * std::exp2(expo) * norm;
}

double basis_lp_norm(const HierNode& node, const MultiIndex& degrees, double p) {
  double norm = 1.0;
  for (std::size_t j = 0; j < node.dim(); ++j) {
    const Basis1D b(node.level[j], node.index[j], degrees[j]);
    if (is_inf(p)) {
      constexpr int kSamples = 10001;
      double best = 0.0;
      for (int q = 0; q < kSamples; ++q)
        best = std::max(best, std::abs(b(b.lower() + 2.0 * b.h * q / (kSamples - 1))));
      norm *= best;
    } else {
      auto g = [&](std::span<const double> t) { return std::pow(std::abs(b(t[0])), p); };
      norm *= std::pow(integrate_tensor(g, {{b.lower(), b.center, b.upper()}}, 1e-12), 1.0 / p);
    }
  }
  return norm;
}

double basis_norm_bound(const HierNode& node, double p) {
  const double d = static_cast<double>(node.dim());
  if (is_inf(p)) return std::pow(1.117, d);
  return std::pow(1.117, d) * std::exp2(d / p) * std::exp2(-node.level.norm1() / p);
}

}  // namespace sgcnn
