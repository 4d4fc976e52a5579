#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sgcnn/cnn.hpp"
#include "sgcnn/gadgets.hpp"
#include "sgcnn/korobov.hpp"
#include "sgcnn/shallow_compiler.hpp"
#include "sgcnn/sparse_grid.hpp"

namespace sgcnn {

class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// sigma(a x + b) in one direction; a constant-one factor has a = 0, b = 1.
struct RhoFactor {
  double a = 0.0;
  double b = 1.0;
  std::size_t direction = 0;
  int k = 0;
  bool constant_one = false;

  double operator()(double x) const { return std::max(0.0, a * x + b); }
};

/// m factors per direction, direction-major; their product is phi^alpha_{l,i}.
std::vector<RhoFactor> rho_factors(const HierNode& node, const MultiIndex& degrees, int m);

/// Lane bookkeeping of the packed first layer: block B = j m + k (0-based),
/// node q, lane B d N + q d + d - 1.
struct FirstLayerLayout {
  std::size_t d = 1, m = 2, N = 1;

  std::size_t lanes() const { return m * d * d * N; }
  std::size_t block(std::size_t j, std::size_t k) const { return j * m + k; }
  std::size_t lane(std::size_t q, std::size_t j, std::size_t k) const {
    return block(j, k) * d * N + q * d + d - 1;
  }
  std::size_t tap(std::size_t q, std::size_t j, std::size_t k) const {
    return block(j, k) * d * N + q * d + (d - 1 - j);
  }
};

struct PackedFirstLayer {
  WideLayerSpec spec;
  FirstLayerLayout layout;
  double normalizer = 1.0;  // 2^{n+d-1}
};

PackedFirstLayer pack_first_layer(const std::vector<InterpolantTerm>& terms, int m, int n, int d);

/// ceil(m d log2 N + d m)
int choose_U(int m, int d, std::size_t N);

struct SynthesisOptions {
  int s = 2;
  int U = 0;  // 0 selects choose_U
  double p = 0;  // 0 selects the sup norm
  std::size_t max_first_layer_degree = 64;
  std::size_t max_dmN = 64;
};

struct SynthesisReport {
  std::size_t N = 0;
  int n = 0, m = 0, d = 0, s = 0, U = 0;
  std::size_t depth = 0;
  std::size_t first_layer_depth = 0;
  double depth_bound = 0.0;
  double scale = 1.0;
  double p = 0.0;
  bool semantic = false;
  double max_abs_surplus = 0.0;
  double cnn_vs_interpolant_sup = 0.0;
  double interpolant_vs_f_p = 0.0;
  double cnn_vs_f_p = 0.0;
  double dcnn_error_bound = 0.0;        // max|v| 2^{2dm(n+d)} / 2^{2U+2}
  double gadget_error_rigorous = 0.0;   // N max|v| 2^{dm(n+d)} / 2^{2U+2}
  double cnn_vs_f_bound = 0.0;          // interpolation error + measured gadget error

  nlohmann::json to_json() const;
};

struct SynthesisResult {
  SparseGridInterpolant interpolant;
  PackedFirstLayer first;
  DeepCnn product_net;            // polynomial stage with scaled output weights
  std::optional<DeepCnn> full;    // compiled first layer + product stage
  SynthesisReport report;

  double operator()(const std::vector<double>& x) const;
};

SynthesisResult synthesize(const KorobovTestFn& f, int n, int m, int d, const SynthesisOptions& opt = {});

}  // namespace sgcnn
