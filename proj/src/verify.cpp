#include "sgcnn/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>

#include "sgcnn/gadgets.hpp"
#include "sgcnn/korobov.hpp"
#include "sgcnn/sampling.hpp"
#include "sgcnn/shallow_compiler.hpp"
#include "sgcnn/sparse_grid.hpp"
#include "sgcnn/synthesis.hpp"

namespace sgcnn {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<int> choose(int given, std::initializer_list<int> defaults) {
  if (given >= 0) return {given};
  return std::vector<int>(defaults);
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double fitted_order(const std::vector<RateRow>& rows, std::size_t first, std::size_t last, int m, int d) {
  std::vector<double> xs, ys;
  for (std::size_t i = first; i <= last && i < rows.size(); ++i) {
    const double N = static_cast<double>(rows[i].N);
    if (rows[i].error <= 0 || (d > 1 && N < 2)) continue;
    const double corr = d > 1 ? std::pow(std::log2(N), (m + 2) * (d - 1)) : 1.0;
    xs.push_back(std::log(N));
    ys.push_back(std::log(rows[i].error / corr));
  }
  if (xs.size() < 2) return kNaN;
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double den = n * sxx - sx * sx;
  if (den == 0) return kNaN;
  return -(n * sxy - sx * sy) / den;
}

std::vector<RateRow> rate_table(int d, int m, int n_max, double p, const std::string& f_name) {
  if (d < 1 || m < 2 || n_max < 1) throw std::invalid_argument("rates need d >= 1, m >= 2, n_max >= 1");
  const KorobovTestFn f = make_test_function(f_name);
  std::vector<RateRow> rows;
  for (int n = 1; n <= n_max; ++n) {
    RateRow r;
    r.n = n;
    const auto I = hierarchize(f.as_point_function(), n, m, d);
    r.N = I.size();
    const int U = choose_U(m, d, r.N);
    const double bound = static_cast<double>(shallow_depth_bound(m * d * d * r.N - 1, 2)) +
                         polynomial_depth_bound(U, d, r.N, d * m, 2);
    r.depth = static_cast<std::size_t>(std::ceil(bound));
    r.width = d + r.depth * 2;
    const SampleSet samples = error_sample_set(n, d);
    r.error = sampled_norm(samples, [&](std::span<const double> x) { return f(x) - I(x); }, p);
    r.ratio = rows.empty() ? kNaN : rows.back().error / r.error;
    rows.push_back(r);
    const std::size_t i = rows.size() - 1;
    if (i == 1)
      rows[i].fitted_order = fitted_order(rows, 0, 1, m, d);
    else if (i > 1)
      rows[i].fitted_order = fitted_order(rows, std::max<std::size_t>(1, i >= 3 ? i - 3 : 1), i, m, d);
    else
      rows[i].fitted_order = kNaN;
  }
  return rows;
}

double sum_lemma_A(int d, int n) {
  double a = 0.0;
  for (int k = 0; k < d; ++k) {
    double b = 1.0;
    for (int j = 0; j < k; ++j) b = b * (n + d - 1 - j) / (j + 1);
    a += b;
  }
  return a;
}

SumLemmaRow sum_lemma_check(int d, int n, int t, int cap) {
  SumLemmaRow r{d, n, t};
  // counts[s] = #{l in [1,cap]^d : |l|_1 = s}
  std::vector<long double> counts(1, 1.0L);
  for (int j = 0; j < d; ++j) {
    std::vector<long double> next(counts.size() + cap, 0.0L);
    for (std::size_t s = 0; s < counts.size(); ++s)
      for (int l = 1; l <= cap; ++l) next[s + l] += counts[s];
    counts = std::move(next);
  }
  long double lhs = 0.0L;
  for (std::size_t s = n + d; s < counts.size(); ++s) lhs += counts[s] * std::pow(2.0L, -static_cast<long double>(t) * s);
  const long double q = std::pow(2.0L, -static_cast<long double>(t));
  const long double rem = d * std::pow(2.0L, -static_cast<long double>(t) * (cap + 1)) / (1 - q) *
                          std::pow(q / (1 - q), d - 1);
  r.remainder = static_cast<double>(rem);
  r.lhs = static_cast<double>(lhs + rem);
  const double A = sum_lemma_A(d, n);
  r.rhs = std::exp2(-t * n - t * d - 1) * A;
  r.rhs_variant = std::exp2(-t * n - t * d + 1) * A;
  r.holds = r.lhs <= r.rhs;
  r.holds_variant = r.lhs <= r.rhs_variant;
  return r;
}

std::vector<GadgetCheckRow> run_gadget_check(const std::string& check, const GadgetParams& P) {
  std::vector<GadgetCheckRow> out;
  std::mt19937_64 rng(P.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  if (check == "ru") {
    for (int U : choose(P.U, {1, 2, 3, 4, 5, 6, 7, 8})) {
      const std::size_t L = P.l > 0 ? P.l : 1;
      const Stage st = build_ru_network(U, L, P.s);
      GadgetCheckRow row{check, {{"U", U}, {"L", double(L)}, {"s", P.s}}};
      double lo = 1.0, hi = -1.0;
      for (int j = 0; j <= 4096; ++j) {
        const double x = j / 4096.0;
        std::vector<double> y(L, x);
        const auto p = st.payload(y);
        row.max_deviation = std::max(row.max_deviation, std::abs(p[0] - ru_eval(U, x)));
        row.max_deviation = std::max(row.max_deviation, std::abs(p[8 * L] - x));
        const double gap = p[0] - x * x;
        lo = std::min(lo, gap);
        hi = std::max(hi, gap);
      }
      row.tolerance = 1e-10;
      row.measured = hi;
      row.bound = std::exp2(-2 * U - 2);
      row.params["min_gap"] = lo;
      row.depth = double(st.depth());
      row.depth_bound = st.depth_bound;
      // maxima recur at every first-half-segment midpoint; the first one is 2^{-U-1}
      const double first_mid = std::exp2(-U - 1);
      const double gap_at = st.payload(std::vector<double>(L, first_mid))[0] - first_mid * first_mid;
      row.params["gap_at_first_midpoint"] = gap_at;
      row.pass = row.max_deviation <= row.tolerance && lo >= -1e-12 && hi <= row.bound + 1e-12 &&
                 std::abs(gap_at - row.bound) <= 1e-12 && std::abs(hi - row.bound) <= 1e-12 &&
                 row.depth <= row.depth_bound;
      out.push_back(row);
    }
  } else if (check == "product") {
    const std::vector<double> Ms = P.M_given ? std::vector<double>{P.M} : std::vector<double>{1.0, 2.0};
    for (double M : Ms) {
      for (int U : choose(P.U, {2, 4, 8})) {
        GadgetCheckRow row{check, {{"M", M}, {"U", U}}};
        double lo = 0.0, hi = 0.0;
        for (int a = 0; a <= 256; ++a)
          for (int b = 0; b <= 256; ++b) {
            const double x = M * a / 256.0, y = M * b / 256.0;
            const double v = approx_product_eval(M, U, x, y);
            row.measured = std::max(row.measured, std::abs(v - x * y));
            lo = std::min(lo, v);
            hi = std::max(hi, v);
          }
        // network realization on a coarser grid
        const Stage st = build_vectorprod(M, U, 1, 2, P.s);
        for (int a = 0; a <= 32; ++a)
          for (int b = 0; b <= 32; ++b) {
            const double x = M * a / 32.0, y = M * b / 32.0;
            row.max_deviation =
                std::max(row.max_deviation, std::abs(st.payload({x, y})[0] - approx_product_eval(M, U, x, y)));
          }
        row.tolerance = 1e-9;
        row.bound = M * M / std::exp2(2 * U);
        row.params["min_value"] = lo;
        row.params["max_value"] = hi;
        row.depth = double(st.depth());
        row.depth_bound = st.depth_bound;
        row.pass = row.measured <= row.bound + 1e-12 && lo >= -1e-12 && hi <= M * M + 1e-12 &&
                   row.max_deviation <= row.tolerance && row.depth <= row.depth_bound;
        out.push_back(row);
      }
    }
  } else if (check == "elimzeros") {
    std::vector<std::array<int, 3>> cases;
    if (P.l > 0 && P.k > 0 && P.n > 0)
      cases.push_back({P.l, P.k, P.n});
    else
      cases = {{2, 2, 2}, {2, 3, 3}, {4, 3, 4}, {3, 1, 4}, {1, 2, 3}};
    for (auto [l, k, n] : cases) {
      const Stage st = build_elimzeros(l, k, n, P.s, 1.0);
      GadgetCheckRow row{check, {{"l", l}, {"k", k}, {"n", n}, {"s", P.s}}};
      const std::size_t first = static_cast<std::size_t>(k) * (1 + l * (n - 1));
      for (int t = 0; t < P.samples; ++t) {
        std::vector<double> x(elimzeros_input_dim(l, k, n), 0.0), want;
        for (int j = 0; j < k; ++j) want.push_back(x[j] = unit(rng));
        for (int j = 0; j < (n - 1) * k; ++j) want.push_back(x[first + j] = unit(rng));
        row.max_deviation = std::max(row.max_deviation, max_abs_diff(st.payload(x), want));
      }
      row.tolerance = 1e-12;
      row.depth = double(st.depth());
      row.depth_bound = st.depth_bound;
      row.pass = row.max_deviation <= row.tolerance && row.depth <= row.depth_bound;
      out.push_back(row);
    }
  } else if (check == "vectorprod") {
    std::vector<std::array<int, 3>> cases;  // U, k, l
    if (P.U >= 0 && P.k > 0 && P.l > 0)
      cases.push_back({P.U, P.k, P.l});
    else
      cases = {{6, 3, 4}, {4, 2, 3}, {2, 1, 2}, {6, 1, 3}};
    for (auto [U, k, l] : cases) {
      const double M = P.M;
      const Stage st = build_vectorprod(M, U, k, l, P.s);
      GadgetCheckRow row{check, {{"M", M}, {"U", U}, {"k", k}, {"l", l}, {"s", P.s}}};
      for (int t = 0; t < P.samples; ++t) {
        std::vector<double> y(l * k);
        for (auto& v : y) v = M * unit(rng);
        std::vector<double> want;
        for (int j = 0; j < k; ++j) want.push_back(approx_product_eval(M, U, y[j], y[k + j]));
        for (int j = 2 * k; j < l * k; ++j) want.push_back(y[j]);
        const auto got = st.payload(y);
        row.max_deviation = std::max(row.max_deviation, max_abs_diff(got, want));
        for (int j = 0; j < k; ++j) row.measured = std::max(row.measured, std::abs(got[j] - y[j] * y[k + j]));
      }
      row.tolerance = 1e-9;
      row.bound = M * M / std::exp2(2 * U) + 1e-9;
      row.depth = double(st.depth());
      row.depth_bound = st.depth_bound;
      row.pass = row.max_deviation <= row.tolerance && row.measured <= row.bound && row.depth <= row.depth_bound;
      out.push_back(row);
    }
  } else if (check == "polynomial") {
    struct Case {
      std::vector<double> c;
      int k, d, U;
    };
    std::vector<Case> cases;
    if (P.U >= 0 && P.k > 0 && P.l > 0) {
      std::vector<double> c(P.l);
      for (int i = 0; i < P.l; ++i) c[i] = (i % 2 ? -1.0 : 1.0) / (i + 1);
      cases.push_back({c, P.k, P.n > 0 ? P.n : 1, P.U});
    } else {
      cases = {{{1.0}, 2, 1, 6}, {{1.0, -1.0}, 3, 2, 6}, {{0.5, -1.0, 2.0, 0.25}, 2, 1, 5}, {{1.0, 1.0, -0.5}, 3, 1, 4}};
    }
    for (const auto& cs : cases) {
      const double M = std::max(1.0, P.M);
      const std::size_t l = cs.c.size();
      const auto net = build_polynomial_net(cs.c, cs.k, cs.d, M, cs.U, P.s);
      GadgetCheckRow row{check, {{"k", cs.k}, {"l", double(l)}, {"d", cs.d}, {"U", cs.U}, {"M", M}, {"s", P.s}}};
      double c1 = 0.0;
      for (double v : cs.c) c1 += std::abs(v);
      double induction_excess = 0.0;
      std::vector<std::pair<int, ConvNet>> prefixes;
      std::vector<const StageMark*> chain_marks;
      for (const auto& mk : net.stage.marks)
        if (mk.label.rfind("chain", 0) == 0) {
          prefixes.emplace_back(std::stoi(mk.label.substr(5)), net.stage.net.truncated(mk.depth));
          chain_marks.push_back(&mk);
        }
      for (int t = 0; t < P.samples; ++t) {
        std::vector<std::vector<double>> y(l, std::vector<double>(cs.k));
        for (auto& r : y)
          for (auto& v : r) v = M * unit(rng);
        const auto x = polynomial_net_input(y, cs.d);
        const auto h = net.stage.net.forward(x);
        double got = 0.0;
        for (std::size_t i = 0; i < h.size(); ++i) got += net.cnn.c[i] * h[i];
        double oracle = 0.0, exact = 0.0;
        for (std::size_t i = 0; i < l; ++i) {
          oracle += cs.c[i] * chain_product_eval(M, cs.U, y[i]);
          double p = 1.0;
          for (double v : y[i]) p *= v;
          exact += cs.c[i] * p;
        }
        row.max_deviation = std::max(row.max_deviation, std::abs(got - oracle));
        row.measured = std::max(row.measured, std::abs(got - exact));
        if (t < 50) {
          // per-step induction bound on the realized chain values
          for (std::size_t q = 0; q < prefixes.size(); ++q) {
            const int j = prefixes[q].first;
            const auto& mk = *chain_marks[q];
            const auto hj = Stage::slice(prefixes[q].second.forward(x), mk.lead, mk.len);
            for (std::size_t i = 0; i < l; ++i) {
              double p = 1.0;
              for (int q = 0; q <= j; ++q) p *= y[i][q];
              const double g = hj[cs.d * i + cs.d - 1];
              const double bound = std::pow(M, std::exp2(j)) * std::exp2(j - 1) / std::exp2(2 * cs.U);
              induction_excess = std::max(induction_excess, std::abs(g - p) - bound - 1e-12);
            }
          }
        }
      }
      row.tolerance = 1e-9;
      row.bound = c1 * std::pow(M, std::exp2(cs.k - 1)) / std::exp2(2 * cs.U - cs.k + 2) + 1e-9;
      row.params["induction_excess"] = induction_excess;
      row.depth = double(net.stage.depth());
      row.depth_bound = net.stage.depth_bound;
      row.pass = row.max_deviation <= row.tolerance && row.measured <= row.bound && induction_excess <= 0 &&
                 row.depth <= row.depth_bound;
      out.push_back(row);
    }
  } else if (check == "shallow") {
    const int layers = P.n > 0 ? 1 : 50;
    std::uniform_int_distribution<int> nd(1, 32), n0d(1, 8), sd(2, 3);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    for (int c = 0; c < layers; ++c) {
      const int n = P.n > 0 ? P.n : nd(rng);
      const int s = P.n > 0 ? P.s : sd(rng);
      const int n0 = n0d(rng);
      WideLayerSpec spec;
      spec.big_filter.resize(n + 1);
      for (auto& v : spec.big_filter) v = coef(rng);
      spec.bias.resize(n0 + n);
      for (auto& v : spec.bias) v = 0.5 * coef(rng);
      spec.input_dim = n0;
      spec.input_bound = 1.0;
      const ConvNet net = compile_shallow(spec, s);
      GadgetCheckRow row{check, {{"n", n}, {"n0", n0}, {"s", s}}};
      for (int t = 0; t < 200; ++t) {
        std::vector<double> x(n0);
        for (auto& v : x) v = unit(rng);
        const auto want = spec.eval(x);
        auto got = net.forward(x);
        got.resize(want.size());
        double scale = 0.0;
        for (double v : want) scale = std::max(scale, std::abs(v));
        const double rel = scale > 0 ? max_abs_diff(got, want) / scale : max_abs_diff(got, want);
        row.max_deviation = std::max(row.max_deviation, rel);
      }
      row.tolerance = 1e-8;
      row.depth = double(net.depth());
      row.depth_bound = double(shallow_depth_bound(n, s));
      row.pass = row.max_deviation <= row.tolerance && row.depth <= row.depth_bound;
      out.push_back(row);
    }
  } else {
    throw std::invalid_argument("unknown gadget check '" + check + "'");
  }
  return out;
}

}  // namespace sgcnn
