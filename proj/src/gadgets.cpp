#include "sgcnn/gadgets.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sgcnn {

namespace {

double pow2_at_least(double v) { return v <= 0 ? 1.0 : std::exp2(std::ceil(std::log2(v))); }

}  // namespace

double sawtooth_eval(int i, double x) {
  for (int t = 0; t < i; ++t) x = x <= 0.5 ? 2 * x : 2 * (1 - x);
  return x;
}

double ru_eval_sawtooth(int U, double x) {
  double r = x, t = x, scale = 1.0;
  for (int i = 1; i <= U; ++i) {
    t = t <= 0.5 ? 2 * t : 2 * (1 - t);
    scale *= 0.25;
    r -= t * scale;
  }
  return r;
}

double ru_eval(int U, double x) {
  const double n = std::exp2(U);
  const double i = std::clamp(std::floor(x * n), 0.0, n - 1);
  return (2 * i + 1) / n * (x - i / n) + (i / n) * (i / n);
}

double approx_product_eval(double M, int U, double x, double y) {
  return 2 * M * M * (ru_eval(U, (x + y) / (2 * M)) - ru_eval(U, x / M) / 4 - ru_eval(U, y / M) / 4);
}

double chain_product_eval(double M, int U, const std::vector<double>& y) {
  if (y.empty()) return 1.0;
  double g = y[0], Mj = M;
  for (std::size_t j = 1; j < y.size(); ++j) {
    g = approx_product_eval(Mj, U, g, y[j]);
    Mj *= Mj;
  }
  return g;
}

double ru_depth_bound(int U, std::size_t L, int s) {
  return (7.0 * U + 15) * L / (s - 1) + 3.0 * U + 2;
}

double elimzeros_depth_bound(std::size_t l, std::size_t k, std::size_t n, int s) {
  if (n <= 1) return 0.0;
  return static_cast<double>(l * (((n - 1) * k + s - 2) / (s - 1)));
}

double vectorprod_depth_bound(int U, std::size_t l, std::size_t k, int s) {
  return (128.0 + 14 * U) * l * k / (s - 1) + 3.0 * U + 61;
}

double polynomial_depth_bound(int U, std::size_t d, std::size_t l, std::size_t k, int s) {
  return (256.0 + 28 * U) * d * l * k * k / (s - 1) + (3.0 * U + 61) * k;
}

Stage::Stage(std::size_t input_dim, int s, double input_bound)
    : net(input_dim, s), lead(0), len(input_dim), bound(input_bound) {}

void Stage::apply_wide(const std::vector<double>& filter, const std::vector<double>& bias,
                       std::size_t window_offset, std::size_t window_len, double new_bound) {
  WideLayerSpec spec{filter, bias, len, bound > 0 ? bound : 1.0};
  if (window_offset + window_len > len + spec.n()) throw WidthError("apply_wide: window exceeds output");
  const ConvNet wide = compile_shallow(spec, net.s());
  net = compose(net, wide.padded(lead, trail()));
  lead += window_offset;
  len = window_len;
  bound = new_bound;
}

void Stage::append(const Stage& inner) {
  if (inner.net.input_dim() != len) throw WidthError("append: inner stage expects a different payload");
  const std::size_t base_depth = depth(), base_lead = lead;
  net = compose(net, inner.net.padded(lead, trail()));
  for (const auto& m : inner.marks) marks.push_back({m.label, base_depth + m.depth, base_lead + m.lead, m.len});
  lead += inner.lead;
  len = inner.len;
  bound = inner.bound;
}

void Stage::mark(std::string label) { marks.push_back({std::move(label), depth(), lead, len}); }

std::vector<double> Stage::slice(const std::vector<double>& h, std::size_t lead, std::size_t len) {
  return std::vector<double>(h.begin() + lead, h.begin() + lead + len);
}

std::vector<double> Stage::payload(const std::vector<double>& x) const {
  return slice(net.forward(x), lead, len);
}

void apply_block_step(Stage& stage, const BlockStep& step) {
  const std::size_t B = step.block;
  if (stage.len % B != 0) throw WidthError("block step: payload is not a whole number of blocks");
  std::size_t max_tap = 0;
  double mass = 0;
  for (const auto& [t, c] : step.taps) {
    max_tap = std::max(max_tap, t);
    mass += std::abs(c);
  }
  std::vector<double> filter(max_tap * B + 1, 0.0);
  for (const auto& [t, c] : step.taps) filter[t * B] += c;
  const std::size_t out_blocks = stage.len / B + max_tap;
  const double kill = -pow2_at_least(mass * stage.bound);
  std::vector<double> bias(out_blocks * B, kill);
  for (const auto& [blk, b] : step.keep) {
    if (blk >= out_blocks) throw WidthError("block step: kept block out of range");
    std::fill(bias.begin() + blk * B, bias.begin() + (blk + 1) * B, b);
  }
  stage.apply_wide(filter, bias, step.window_block * B, step.window_blocks * B, step.new_bound);
}

Stage build_ru_network(int U, std::size_t L, int s) {
  if (U < 1 || L < 1) throw std::invalid_argument("R_U network needs U >= 1 and L >= 1");
  Stage st(L, s, 1.0);
  st.builder = "ru";
  st.depth_bound = ru_depth_bound(U, L, s);
  // state [C; 0_2L; P = 2^n S_n; 0_3L; y]
  apply_block_step(st, {L, {{3, 1.0}, {7, 1.0}}, {{3, 0.0}, {7, 0.0}}, 0, 8, 1.0});
  st.mark("S0");
  for (int n = 0; n < U; ++n) {
    const double shift = -std::exp2(-n);
    // [C; 2C; C; A = P; 2P; P; 0; y; 2y; y], keep C, sigma(P), sigma(2P - 2^-n), sigma(P - 2^-n), y
    apply_block_step(st, {L, {{0, 1.0}, {1, 2.0}, {2, 1.0}},
                          {{0, 0.0}, {3, 0.0}, {4, shift}, {5, shift}, {7, 0.0}}, 0, 8, 1.0});
    // block 5 = A - B + D = 2^{n+1} S_{n+1}
    apply_block_step(st, {L, {{0, 1.0}, {1, -1.0}, {2, 1.0}}, {{2, 0.0}, {5, 0.0}, {9, 0.0}}, 2, 8, 1.0});
    // block 3 = C + 2^{-n-1} P' = C_{n+1}
    apply_block_step(st, {L, {{0, std::exp2(-n - 1)}, {3, 1.0}}, {{3, 0.0}, {6, 0.0}, {10, 0.0}}, 3, 8, 1.0});
    st.mark("S" + std::to_string(n + 1));
  }
  // block 7 = y - C_U = R_U(y), block 15 = y
  apply_block_step(st, {L, {{0, 1.0}, {7, -1.0}, {8, 1.0}}, {{7, 0.0}, {15, 0.0}}, 7, 9, 1.0});
  return st;
}

std::size_t elimzeros_input_dim(std::size_t l, std::size_t k, std::size_t n) {
  return n * k + (n > 0 ? k * l * (n - 1) : 0);
}

Stage build_elimzeros(std::size_t l, std::size_t k, std::size_t n, int s, double value_bound) {
  if (k < 1 || n < 1) throw std::invalid_argument("elimzeros needs k >= 1 and n >= 1");
  Stage st(elimzeros_input_dim(l, k, n), s, value_bound);
  st.builder = "elimzeros";
  st.depth_bound = elimzeros_depth_bound(l, k, n, s);
  if (n == 1) return st;
  for (std::size_t r = l; r >= 1; --r) {
    // [y_1; 0_{r(n-1)}; y_2..y_n] -> [y_1; 0_{(r-1)(n-1)}; y_2..y_n] in blocks of k
    const std::size_t first = 1 + r * (n - 1);
    BlockStep step{k, {{0, 1.0}, {n - 1, 1.0}}, {{n - 1, 0.0}}, n - 1, 1 + (r - 1) * (n - 1) + (n - 1),
                   value_bound};
    for (std::size_t b = first; b < first + n - 1; ++b) step.keep.push_back({b, 0.0});
    apply_block_step(st, step);
  }
  return st;
}

Stage build_vectorprod(double M, int U, std::size_t k, std::size_t l, int s) {
  if (!(M > 0) || k < 1 || l < 2) throw std::invalid_argument("vectorprod needs M > 0, k >= 1, l >= 2");
  Stage st(l * k, s, M);
  st.builder = "vectorprod";
  st.depth_bound = vectorprod_depth_bound(U, l, k, s);
  // [(y1+y2)/2M; 0_{(l-1)k}; y_1/M; ...; y_l/M]
  BlockStep first{k, {{0, 0.5 / M}, {1, 0.5 / M}, {l + 1, 1.0 / M}}, {{1, 0.0}}, 1, 2 * l, 1.0};
  for (std::size_t b = l + 1; b <= 2 * l; ++b) first.keep.push_back({b, 0.0});
  apply_block_step(st, first);
  st.mark("halved");
  // [R_U(p) (2l blocks); 0_{14l}; p (2l blocks)]
  st.append(build_ru_network(U, 2 * l * k, s));
  st.mark("squared");
  const double out_bound = std::max(M * M, M);
  const double a = 2 * M * M, b = -M * M / 2;
  if (l == 2) {
    apply_block_step(st, {k, {{0, b}, {1, b}, {3, a}}, {{3, 0.0}}, 3, 1, out_bound});
    return st;
  }
  // x~ lands on block J, y_3.. follow after a gap of G = q(l-2) blocks
  std::size_t q = 1;
  while (q * (l - 2) < std::max(2 * l - 1, l + 2)) ++q;
  const std::size_t G = q * (l - 2);
  if (G > 14 * l - 1) throw WidthError("vectorprod: gap does not fit the zero band");
  const std::size_t J = std::max(l + 1, 17 * l + 1 - G);
  const std::size_t ty = J + G - 17 * l - 1;
  BlockStep combine{k, {{J, a}, {J - l, b}, {J - l - 1, b}, {ty, M}}, {{J, 0.0}}, J, 1 + G + (l - 2), out_bound};
  for (std::size_t i = 0; i + 2 < l; ++i) combine.keep.push_back({J + 1 + G + i, 0.0});
  apply_block_step(st, combine);
  st.mark("combined");
  st.append(build_elimzeros(q, k, l - 1, s, out_bound));
  return st;
}

PolynomialNet build_polynomial_net(const std::vector<double>& c, std::size_t k, std::size_t d,
                                   double M, int U, int s) {
  if (c.empty() || k < 1 || d < 1) throw std::invalid_argument("polynomial net needs l, k, d >= 1");
  if (!(M >= 1)) throw std::invalid_argument("polynomial net needs M >= 1");
  const std::size_t l = c.size();
  Stage st(d * l * k, s, M);
  st.builder = "polynomial";
  st.depth_bound = polynomial_depth_bound(U, d, l, k, s);
  double Mj = M;
  for (std::size_t j = 1; j < k; ++j) {
    st.append(build_vectorprod(Mj, U, d * l, k - j + 1, s));
    st.mark("chain" + std::to_string(j));
    Mj *= Mj;
  }
  std::vector<double> cbar(st.net.output_width(), 0.0);
  for (std::size_t t = 0; t < l; ++t) cbar[st.lead + d * t + d - 1] = c[t];
  PolynomialNet out{DeepCnn(st.net, cbar, stage_meta(st)), st};
  return out;
}

std::vector<double> polynomial_net_input(const std::vector<std::vector<double>>& y, std::size_t d) {
  const std::size_t l = y.size();
  const std::size_t k = l ? y[0].size() : 0;
  std::vector<double> x(d * l * k, 0.0);
  for (std::size_t t = 0; t < l; ++t)
    for (std::size_t i = 0; i < k; ++i) x[i * d * l + d * t + d - 1] = y[t][i];
  return x;
}

nlohmann::json stage_meta(const Stage& stage) {
  return {{"builder", stage.builder},
          {"depth_bound_claimed", stage.depth_bound},
          {"depth", stage.depth()},
          {"payload_lead", stage.lead},
          {"payload_len", stage.len}};
}

}  // namespace sgcnn
