#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "sgcnn/cnn.hpp"
#include "sgcnn/shallow_compiler.hpp"

namespace sgcnn {

// Closed-form oracles.
double sawtooth_eval(int i, double x);
/// x - sum_{i<=U} T_i(x) / 4^i
double ru_eval_sawtooth(int U, double x);
/// Piecewise-linear interpolant of x^2 at the knots j / 2^U.
double ru_eval(int U, double x);
/// 2M^2 [R_U((x+y)/2M) - R_U(x/M)/4 - R_U(y/M)/4]
double approx_product_eval(double M, int U, double x, double y);
/// x~_{M_{k-1}}(... x~_{M_1}(y_1, y_2) ..., y_k) with M_j = M^{2^{j-1}}.
double chain_product_eval(double M, int U, const std::vector<double>& y);

// Depth formulas claimed for each construction.
double ru_depth_bound(int U, std::size_t L, int s);
double elimzeros_depth_bound(std::size_t l, std::size_t k, std::size_t n, int s);
double vectorprod_depth_bound(int U, std::size_t l, std::size_t k, int s);
double polynomial_depth_bound(int U, std::size_t d, std::size_t l, std::size_t k, int s);

struct StageMark {
  std::string label;
  std::size_t depth = 0;
  std::size_t lead = 0;
  std::size_t len = 0;
};

/// A network under construction: h maps the input to a hidden vector whose
/// entries [lead, lead + len) are the payload, everything else exact zeros.
struct Stage {
  ConvNet net;
  std::size_t lead = 0;
  std::size_t len = 0;
  double bound = 1.0;  // payload entries lie in [0, bound]
  std::vector<StageMark> marks;
  std::string builder;
  double depth_bound = 0.0;

  Stage() = default;
  Stage(std::size_t input_dim, int s, double input_bound);

  std::size_t depth() const { return net.depth(); }
  std::size_t trail() const { return net.output_width() - lead - len; }

  /// Applies sigma(w * payload + b) as a compiled deep CNN; the new payload is
  /// the window [offset, offset + window_len) of that wide layer's output.
  void apply_wide(const std::vector<double>& filter, const std::vector<double>& bias,
                  std::size_t window_offset, std::size_t window_len, double new_bound);
  /// Continues with a stage built on this payload.
  void append(const Stage& inner);
  void mark(std::string label);

  std::vector<double> payload(const std::vector<double>& x) const;
  static std::vector<double> slice(const std::vector<double>& h, std::size_t lead, std::size_t len);
};

/// A wide step described in blocks of size `block`: taps (block offset, coefficient),
/// kept output blocks with their bias; every other output block is killed by a
/// power-of-two bias below -sum|w| * bound.
struct BlockStep {
  std::size_t block = 1;
  std::vector<std::pair<std::size_t, double>> taps;
  std::vector<std::pair<std::size_t, double>> keep;
  std::size_t window_block = 0;
  std::size_t window_blocks = 0;
  double new_bound = 1.0;
};
void apply_block_step(Stage& stage, const BlockStep& step);

/// y in [0,1]^L -> [R_U(y); 0_{7L}; y]. Marks "S<n>" locate [C_n; 0; 2^n S_n; 0; y].
Stage build_ru_network(int U, std::size_t L, int s);

/// [y_1; 0_{kl(n-1)}; y_2; ...; y_n] -> [y_1; ...; y_n] for y_i >= 0 bounded by value_bound.
Stage build_elimzeros(std::size_t l, std::size_t k, std::size_t n, int s, double value_bound);
/// Input length of build_elimzeros.
std::size_t elimzeros_input_dim(std::size_t l, std::size_t k, std::size_t n);

/// [y_1; ...; y_l] in [0,M]^{lk} -> [x~_{M,U}(y_1, y_2); y_3; ...; y_l].
Stage build_vectorprod(double M, int U, std::size_t k, std::size_t l, int s);

struct PolynomialNet {
  DeepCnn cnn;
  Stage stage;
};

/// Polynomial network: k blocks of d*l lanes, block i holding
/// y_{t,i} at lane d t + d - 1; output c . (chained approximate products).
PolynomialNet build_polynomial_net(const std::vector<double>& c, std::size_t k, std::size_t d,
                                   double M, int U, int s);
/// Lane layout helper: the input vector for values y[t][i] (t < l, i < k).
std::vector<double> polynomial_net_input(const std::vector<std::vector<double>>& y, std::size_t d);

nlohmann::json stage_meta(const Stage& stage);

}  // namespace sgcnn
