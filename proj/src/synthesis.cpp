#include "sgcnn/synthesis.hpp"

#include <cmath>
#include <limits>

#include "sgcnn/sampling.hpp"

namespace sgcnn {

std::vector<RhoFactor> rho_factors(const HierNode& node, const MultiIndex& degrees, int m) {
  std::vector<RhoFactor> out;
  for (std::size_t j = 0; j < node.dim(); ++j) {
    const Basis1D basis(node.level[j], node.index[j], degrees[j]);
    for (int k = 0; k < m; ++k) {
      RhoFactor r;
      r.direction = j;
      r.k = k;
      if (k < degrees[j]) {
        const double xk = basis.zeros[k];
        r.a = 1.0 / (basis.center - xk);
        r.b = -xk / (basis.center - xk);
      } else {
        r.constant_one = true;
      }
      out.push_back(r);
    }
  }
  return out;
}

PackedFirstLayer pack_first_layer(const std::vector<InterpolantTerm>& terms, int m, int n, int d) {
  if (terms.empty()) throw std::invalid_argument("pack_first_layer: no nodes");
  PackedFirstLayer out;
  out.layout = {static_cast<std::size_t>(d), static_cast<std::size_t>(m), terms.size()};
  out.normalizer = std::exp2(n + d - 1);
  const auto& lay = out.layout;
  const double S = out.normalizer;
  const std::size_t lanes = lay.lanes();
  out.spec.input_dim = d;
  out.spec.input_bound = 1.0;
  out.spec.big_filter.assign(lanes, 0.0);
  out.spec.bias.assign(lanes + d - 1, -std::exp2(n + d));
  for (std::size_t q = 0; q < terms.size(); ++q) {
    for (const auto& r : rho_factors(terms[q].node, terms[q].degrees, m)) {
      out.spec.big_filter[lay.tap(q, r.direction, r.k)] = r.a / S;
      out.spec.bias[lay.lane(q, r.direction, r.k)] = r.b / S;
    }
  }
  return out;
}

int choose_U(int m, int d, std::size_t N) {
  if (N < 1) throw std::invalid_argument("choose_U: N must be >= 1");
  return static_cast<int>(std::ceil(m * d * std::log2(static_cast<double>(N)) + d * m - 1e-12));
}

nlohmann::json SynthesisReport::to_json() const {
  return {{"N", N},
          {"n", n},
          {"m", m},
          {"d", d},
          {"s", s},
          {"U", U},
          {"depth", depth},
          {"first_layer_depth", first_layer_depth},
          {"scale", scale},
          {"p", std::isinf(p) ? nlohmann::json("inf") : nlohmann::json(p)},
          {"mode", semantic ? "semantic" : "compiled"},
          {"max_abs_surplus", max_abs_surplus},
          {"errors",
           {{"cnn_vs_interpolant_sup", cnn_vs_interpolant_sup},
            {"interpolant_vs_f_p", interpolant_vs_f_p},
            {"cnn_vs_f_p", cnn_vs_f_p}}},
          {"claimed_bounds",
           {{"depth", depth_bound},
            {"dcnn_error", dcnn_error_bound},
            {"gadget_error_rigorous", gadget_error_rigorous},
            {"cnn_vs_f_p", cnn_vs_f_bound}}}};
}

double SynthesisResult::operator()(const std::vector<double>& x) const {
  if (full) return (*full)(x);
  auto h = first.spec.eval(x);
  h.resize(first.layout.lanes());
  return product_net(h);
}

SynthesisResult synthesize(const KorobovTestFn& f, int n, int m, int d, const SynthesisOptions& opt) {
  if (n < 1 || m < 2 || d < 1) throw std::invalid_argument("synthesize needs n >= 1, m >= 2, d >= 1");
  const std::size_t N = sparse_grid_size(n, d);
  if (static_cast<std::size_t>(d * m) * N > opt.max_dmN)
    throw BudgetError("d*m*N = " + std::to_string(d * m * N) + " exceeds the desk budget " +
                      std::to_string(opt.max_dmN));
  SynthesisResult res{hierarchize(f.as_point_function(), n, m, d), {}, {}, std::nullopt, {}};
  const auto& terms = res.interpolant.terms();
  res.first = pack_first_layer(terms, m, n, d);
  const int U = opt.U > 0 ? opt.U : choose_U(m, d, N);
  const int s = opt.s;

  std::vector<double> c;
  for (const auto& t : terms) c.push_back(t.surplus);
  auto poly = build_polynomial_net(c, static_cast<std::size_t>(d * m), d, 1.0, U, s);
  const double scale = std::exp2(d * m * (n + d - 1));
  auto weights = poly.cnn.c;
  for (auto& w : weights) w *= scale;
  nlohmann::json meta = stage_meta(poly.stage);
  meta["builder"] = "synthesis";
  res.product_net = DeepCnn(poly.cnn.net, weights, meta);

  SynthesisReport& r = res.report;
  r.N = N;
  r.n = n;
  r.m = m;
  r.d = d;
  r.s = s;
  r.U = U;
  r.scale = scale;
  r.p = opt.p > 0 ? opt.p : std::numeric_limits<double>::infinity();
  const std::size_t lanes = res.first.layout.lanes();
  const std::size_t first_degree = lanes - 1;
  r.depth_bound = static_cast<double>(shallow_depth_bound(first_degree, s)) +
                  polynomial_depth_bound(U, d, N, d * m, s);
  if (first_degree <= opt.max_first_layer_degree) {
    const ConvNet first = compile_shallow(res.first.spec, s);
    const ConvNet whole = compose(first, poly.cnn.net.padded(0, first.output_width() - lanes));
    std::vector<double> cw(whole.output_width(), 0.0);
    std::copy(weights.begin(), weights.end(), cw.begin());
    meta["depth"] = whole.depth();
    meta["depth_bound_claimed"] = r.depth_bound;
    res.full = DeepCnn(whole, cw, meta);
    r.first_layer_depth = first.depth();
    r.depth = whole.depth();
  } else {
    r.semantic = true;
    r.first_layer_depth = 1;
    r.depth = 1 + poly.stage.depth();
  }

  r.max_abs_surplus = res.interpolant.max_abs_surplus();
  const double dm = d * m;
  r.dcnn_error_bound = r.max_abs_surplus * std::exp2(2 * dm * (n + d) - 2 * U - 2);
  r.gadget_error_rigorous = static_cast<double>(N) * r.max_abs_surplus * std::exp2(dm * (n + d) - 2 * U - 2);

  const SampleSet samples = error_sample_set(n, d);
  const SampleSet probes = random_points(d, 2048, 20240531);
  const auto& I = res.interpolant;
  auto net_at = [&](std::span<const double> x) { return res(std::vector<double>(x.begin(), x.end())); };
  const double inf = std::numeric_limits<double>::infinity();
  // norm over the error grid; sup norms also take the off-grid probes
  auto norm = [&](const std::function<double(std::span<const double>)>& g, double p) {
    const double v = sampled_norm(samples, g, p);
    return std::isinf(p) ? std::max(v, sampled_norm(probes, g, inf)) : v;
  };
  r.cnn_vs_interpolant_sup = norm([&](auto x) { return I(x) - net_at(x); }, inf);
  r.interpolant_vs_f_p = norm([&](auto x) { return f(x) - I(x); }, r.p);
  r.cnn_vs_f_p = norm([&](auto x) { return f(x) - net_at(x); }, r.p);
  r.cnn_vs_f_bound = r.interpolant_vs_f_p + r.cnn_vs_interpolant_sup;
  return res;
}

}  // namespace sgcnn
