#include "sgcnn/korobov.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sgcnn {

double KorobovTestFn::operator()(std::span<const double> x) const {
  double v = scale;
  for (double t : x) v *= factor(t, 0);
  return v;
}

double KorobovTestFn::mixed_derivative(std::span<const double> x, const MultiIndex& orders) const {
  if (orders.size() != x.size()) throw std::invalid_argument("mixed_derivative: dimension mismatch");
  double v = scale;
  for (std::size_t j = 0; j < x.size(); ++j) v *= factor(x[j], orders[j]);
  return v;
}

PointFunction KorobovTestFn::as_point_function() const {
  return [f = *this](std::span<const double> x) { return f(x); };
}

KorobovTestFn make_test_function(std::string_view name) {
  using std::numbers::pi;
  if (name == "sinprod") {
    return {"sinprod", 1.0,
            [](double t, int k) { return std::pow(pi, k) * std::sin(pi * t + k * pi / 2.0); }, true};
  }
  if (name == "polyprod") {
    return {"polyprod", 1.0,
            [](double t, int k) {
              switch (k) {
                case 0: return t * (1.0 - t);
                case 1: return 1.0 - 2.0 * t;
                case 2: return -2.0;
                default: return 0.0;
              }
            },
            true};
  }
  if (name == "bubble") {
    // 16 t^2 (1-t)^2
    return {"bubble", 1.0,
            [](double t, int k) {
              switch (k) {
                case 0: return 16.0 * t * t * (1.0 - t) * (1.0 - t);
                case 1: return 16.0 * (2.0 * t - 6.0 * t * t + 4.0 * t * t * t);
                case 2: return 16.0 * (2.0 - 12.0 * t + 12.0 * t * t);
                case 3: return 16.0 * (-12.0 + 24.0 * t);
                case 4: return 384.0;
                default: return 0.0;
              }
            },
            true};
  }
  if (name == "zero") return {"zero", 0.0, [](double, int) { return 0.0; }, true};
  throw std::invalid_argument("unknown test function: " + std::string(name));
}

std::vector<std::string> registered_test_functions() {
  return {"sinprod", "polyprod", "bubble", "zero"};
}

}  // namespace sgcnn
