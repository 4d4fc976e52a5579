#include "sgcnn/shallow_compiler.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

#include <Eigen/Dense>

namespace sgcnn {

namespace {

using cld = std::complex<long double>;
using PolyL = std::vector<long double>;  // ascending powers

// Linear item: root on the real line (or z itself); quadratic: conjugate pair.
struct Item {
  int degree = 1;
  cld root;
  bool zero = false;

  PolyL poly() const {
    if (zero) return {0.0L, 1.0L};
    if (degree == 1) return {-root.real(), 1.0L};
    return {std::norm(root), -2.0L * root.real(), 1.0L};
  }
};

PolyL poly_mul(const PolyL& a, const PolyL& b) {
  PolyL out(a.size() + b.size() - 1, 0.0L);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

PolyL derivative(const PolyL& p) {
  if (p.size() <= 1) return {0.0L};
  PolyL d(p.size() - 1);
  for (std::size_t k = 1; k < p.size(); ++k) d[k - 1] = p[k] * static_cast<long double>(k);
  return d;
}

cld horner(const PolyL& p, cld z) {
  cld v = 0;
  for (std::size_t k = p.size(); k-- > 0;) v = v * z + p[k];
  return v;
}

// Newton on the `deriv`-th derivative; for a cluster of multiplicity deriv+1
// the derivative has a simple root at the multiple root.
cld polish(const PolyL& p, cld z, int deriv, bool real) {
  PolyL f = p;
  for (int k = 0; k < deriv; ++k) f = derivative(f);
  const PolyL df = derivative(f);
  long double best = std::abs(horner(f, z));
  for (int it = 0; it < 60 && best > 0; ++it) {
    const cld d = horner(df, z);
    if (d == cld(0)) break;
    cld next = z - horner(f, z) / d;
    if (real) next = cld(next.real(), 0.0L);
    const long double val = std::abs(horner(f, next));
    if (!(val < best)) break;
    best = val;
    z = next;
  }
  return z;
}

struct Cluster {
  cld root;
  int multiplicity;
};

// Roots of q (q.front(), q.back() nonzero): real ones and upper-half-plane
// representatives of conjugate pairs, with multiplicities.
void polynomial_roots(const PolyL& q, std::vector<Cluster>& real, std::vector<Cluster>& upper) {
  const int D = static_cast<int>(q.size()) - 1;
  if (D == 0) return;
  std::vector<cld> eig;
  if (D == 1) {
    eig.push_back(-q[0] / q[1]);
  } else {
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(D, D);
    for (int i = 1; i < D; ++i) C(i, i - 1) = 1.0;
    for (int i = 0; i < D; ++i) C(i, D - 1) = static_cast<double>(-q[i] / q[D]);
    Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
    if (es.info() != Eigen::Success) throw FactorizationError("companion eigenvalues did not converge");
    for (int i = 0; i < D; ++i) eig.emplace_back(es.eigenvalues()[i].real(), es.eigenvalues()[i].imag());
  }
  std::vector<bool> used(eig.size(), false);
  for (std::size_t a = 0; a < eig.size(); ++a) {
    if (used[a]) continue;
    cld sum = eig[a];
    int mult = 1;
    used[a] = true;
    const long double tol = 1e-4L * std::max(1.0L, std::abs(eig[a]));
    for (std::size_t b = a + 1; b < eig.size(); ++b) {
      if (!used[b] && std::abs(eig[b] - eig[a]) < tol) {
        used[b] = true;
        sum += eig[b];
        ++mult;
      }
    }
    const cld z = sum / static_cast<long double>(mult);
    if (std::abs(z.imag()) <= 1e-6L * std::max(1.0L, std::abs(z)))
      real.push_back({polish(q, cld(z.real(), 0.0L), mult - 1, true), mult});
    else if (z.imag() > 0)
      upper.push_back({polish(q, z, mult - 1, false), mult});
  }
}

// Items for z^g = r, r real.
void roots_of_power_real(long double r, int g, int mult, std::vector<Item>& items) {
  const long double mag = std::pow(std::abs(r), 1.0L / g);
  const long double base = r > 0 ? 0.0L : std::numbers::pi_v<long double>;
  for (int k = 0; k < g; ++k) {
    // theta = (base + 2 pi k) / g; real iff theta is 0 or pi.
    const bool real_pos = r > 0 && k == 0;
    const bool real_neg = (r > 0 && g % 2 == 0 && k == g / 2) || (r < 0 && g % 2 == 1 && 2 * k + 1 == g);
    if (real_pos || real_neg) {
      for (int t = 0; t < mult; ++t) items.push_back({1, cld(real_pos ? mag : -mag, 0.0L), false});
      continue;
    }
    const long double theta = (base + 2.0L * std::numbers::pi_v<long double> * k) / g;
    if (!(theta > 0 && theta < std::numbers::pi_v<long double>)) continue;
    for (int t = 0; t < mult; ++t) items.push_back({2, std::polar(mag, theta), false});
  }
}

// Items for z^g = r and z^g = conj(r), r in the upper half plane.
void roots_of_power_complex(cld r, int g, int mult, std::vector<Item>& items) {
  const long double mag = std::pow(std::abs(r), 1.0L / g);
  const long double arg = std::arg(r);
  for (int k = 0; k < g; ++k) {
    const long double theta = (arg + 2.0L * std::numbers::pi_v<long double> * k) / g;
    for (int t = 0; t < mult; ++t) items.push_back({2, std::polar(mag, theta), false});
  }
}

std::vector<Item> leja_order_distinct(const std::vector<Item>& items) {
  std::vector<Item> out;
  if (items.empty()) return out;
  std::vector<bool> used(items.size(), false);
  std::size_t first = 0;
  for (std::size_t i = 1; i < items.size(); ++i)
    if (std::abs(items[i].root) > std::abs(items[first].root)) first = i;
  std::vector<long double> score(items.size(), 0.0L);
  std::size_t pick = first;
  for (std::size_t step = 0; step < items.size(); ++step) {
    used[pick] = true;
    out.push_back(items[pick]);
    const cld z = items[pick].root;
    std::size_t next = items.size();
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (used[i]) continue;
      long double d = std::abs(items[i].root - z);
      if (items[pick].degree == 2) d *= std::abs(items[i].root - std::conj(z));
      score[i] += d > 0 ? std::log(d) : -1e30L;
      if (next == items.size() || score[i] > score[next]) next = i;
    }
    pick = next;
  }
  return out;
}

// Repeated roots are emitted as repeated passes over one Leja sequence of
// the distinct roots, so every pass multiplies up a well-spread set.
std::vector<Item> leja_order(const std::vector<Item>& items) {
  std::vector<Item> distinct;
  std::vector<int> mult;
  for (const auto& it : items) {
    std::size_t j = 0;
    while (j < distinct.size() && !(distinct[j].root == it.root && distinct[j].degree == it.degree)) ++j;
    if (j == distinct.size()) {
      distinct.push_back(it);
      mult.push_back(0);
    }
    ++mult[j];
  }
  const std::vector<Item> seq = leja_order_distinct(distinct);
  std::vector<int> seq_mult;
  for (const auto& it : seq) {
    std::size_t j = 0;
    while (!(distinct[j].root == it.root && distinct[j].degree == it.degree)) ++j;
    seq_mult.push_back(mult[j]);
  }
  std::vector<Item> out;
  for (int pass = 1; out.size() < items.size(); ++pass)
    for (std::size_t i = 0; i < seq.size(); ++i)
      if (seq_mult[i] >= pass) out.push_back(seq[i]);
  return out;
}

std::vector<double> to_double(const PolyL& p) { return std::vector<double>(p.begin(), p.end()); }

}  // namespace

void WideLayerSpec::validate() const {
  if (big_filter.empty()) throw std::invalid_argument("wide layer needs a nonempty filter");
  if (input_dim == 0) throw WidthError("wide layer needs input_dim >= 1");
  if (bias.size() != input_dim + n()) throw WidthError("wide layer bias must have n0 + n entries");
  if (!(input_bound > 0)) throw std::invalid_argument("input bound must be positive");
}

std::vector<double> WideLayerSpec::eval(const std::vector<double>& x) const {
  if (x.size() != input_dim) throw WidthError("wide layer input width mismatch");
  auto z = convolve(big_filter, x);
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = std::max(0.0, z[i] + bias[i]);
  return z;
}

std::size_t shallow_depth_bound(std::size_t n, int s) {
  if (n == 0) return 1;
  return (n + s - 2) / (s - 1);
}

std::vector<Filter> factor_filter(const std::vector<double>& big_filter, int s) {
  if (s < 2) throw std::invalid_argument("factor_filter: s must be >= 2");
  if (big_filter.empty()) throw std::invalid_argument("factor_filter: empty filter");
  const std::size_t n = big_filter.size() - 1;
  const std::size_t min_layers = std::max<std::size_t>(1, (n + s - 1) / s);
  if (n <= static_cast<std::size_t>(s)) {
    std::vector<double> taps = big_filter;
    taps.resize(s + 1, 0.0);
    return {Filter(taps)};
  }
  std::size_t lo = 0, hi = big_filter.size();
  while (lo < hi && big_filter[lo] == 0.0) ++lo;
  while (hi > lo && big_filter[hi - 1] == 0.0) --hi;
  if (lo == hi) return std::vector<Filter>(min_layers, Filter::zeros(s));

  // w(z) = z^lo p(z), p(z) = Q(z^g)
  PolyL p(big_filter.begin() + lo, big_filter.begin() + hi);
  std::size_t g = 0;
  for (std::size_t k = 1; k < p.size(); ++k)
    if (p[k] != 0.0L) g = std::gcd(g, k);
  if (g == 0) g = 1;
  PolyL q;
  for (std::size_t k = 0; k < p.size(); k += g) q.push_back(p[k]);

  std::vector<Cluster> real, upper;
  polynomial_roots(q, real, upper);
  std::vector<Item> items;
  for (const auto& c : real) roots_of_power_real(c.root.real(), static_cast<int>(g), c.multiplicity, items);
  for (const auto& c : upper) roots_of_power_complex(c.root, static_cast<int>(g), c.multiplicity, items);
  std::size_t degree_sum = 0;
  for (const auto& it : items) degree_sum += it.degree;
  if (degree_sum != p.size() - 1) throw FactorizationError("root count does not match the degree");

  std::vector<Item> order = leja_order(items);
  for (std::size_t k = 0; k < lo; ++k) order.push_back({1, cld(0), true});

  // Greedy packing; when a pair does not fit, pull the next linear item forward.
  std::vector<std::vector<Item>> bins(1);
  std::vector<int> load(1, 0);
  std::vector<bool> used(order.size(), false);
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (used[i]) continue;
    if (load.back() + order[i].degree > s) {
      if (load.back() < s) {
        for (std::size_t j = i + 1; j < order.size(); ++j) {
          if (!used[j] && order[j].degree == 1) {
            used[j] = true;
            bins.back().push_back(order[j]);
            ++load.back();
            break;
          }
        }
      }
      bins.emplace_back();
      load.push_back(0);
    }
    used[i] = true;
    bins.back().push_back(order[i]);
    load.back() += order[i].degree;
  }

  const std::size_t L = std::max(bins.size(), min_layers);
  long double C = p.back();
  std::vector<PolyL> factors;
  for (const auto& bin : bins) {
    PolyL f{1.0L};
    for (const auto& it : bin) f = poly_mul(f, it.poly());
    long double m = 0;
    for (auto v : f) m = std::max(m, std::abs(v));
    for (auto& v : f) v /= m;
    C *= m;
    f.resize(s + 1, 0.0L);
    factors.push_back(f);
  }
  while (factors.size() < L) {
    PolyL id(s + 1, 0.0L);
    id[0] = 1.0L;
    factors.push_back(id);
  }
  const long double a = std::pow(std::abs(C), 1.0L / static_cast<long double>(L));
  for (std::size_t i = 0; i < factors.size(); ++i)
    for (auto& v : factors[i]) v *= (i == 0 && C < 0) ? -a : a;

  std::vector<Filter> out;
  std::vector<double> prod{1.0};
  for (const auto& f : factors) {
    out.emplace_back(to_double(f));
    prod = convolve(prod, out.back().taps);
  }
  double scale = 0, err = 0;
  for (std::size_t k = 0; k < prod.size(); ++k) {
    const double target = k < big_filter.size() ? big_filter[k] : 0.0;
    scale = std::max(scale, std::abs(target));
    err = std::max(err, std::abs(prod[k] - target));
  }
  if (err > 1e-8 * scale)
    throw FactorizationError("factorization reconstruction error " + std::to_string(err / scale));
  return out;
}

ConvNet compile_shallow(const WideLayerSpec& spec, int s) {
  spec.validate();
  const auto factors = factor_filter(spec.big_filter, s);
  const std::size_t n0 = spec.input_dim;
  const std::size_t L = factors.size();
  ConvNet net(n0, s);
  std::vector<double> partial{1.0};
  std::vector<double> shift;  // c_{i-1}
  for (std::size_t i = 0; i < L; ++i) {
    const auto& f = factors[i];
    const std::vector<double> prev_partial = partial;
    partial = convolve(partial, f.taps);
    const std::size_t width = n0 + (i + 1) * s;
    std::vector<double> carried = shift.empty() ? std::vector<double>(width, 0.0) : toeplitz_conv(f, shift);
    std::vector<double> bias(width, 0.0);
    if (i + 1 == L) {
      for (std::size_t j = 0; j < spec.bias.size(); ++j) bias[j] = spec.bias[j];
      for (std::size_t j = 0; j < width; ++j) bias[j] -= carried[j];
      if (!shift.empty()) {
        // Past n0 + n the exact pre-activation is 0; a bias below the rounding
        // level keeps those entries exact zeros.
        std::vector<double> mag(shift.size(), 0.0);
        const std::size_t deg = prev_partial.size() - 1;
        for (std::size_t j = 0; j < mag.size(); ++j) {
          double r = 0.0;
          const std::size_t kmin = j > deg ? j - deg : 0;
          for (std::size_t k = kmin; k <= std::min(j, n0 - 1); ++k) r += std::abs(prev_partial[j - k]);
          mag[j] = std::abs(shift[j]) + spec.input_bound * r;
        }
        std::vector<double> abs_taps(f.taps.size());
        for (std::size_t t = 0; t < abs_taps.size(); ++t) abs_taps[t] = std::abs(f.taps[t]);
        const auto reach = toeplitz_conv(Filter(abs_taps), mag);
        for (std::size_t j = spec.bias.size(); j < width; ++j)
          if (reach[j] > 0) bias[j] -= std::exp2(std::ceil(std::log2(1e-8 * reach[j])));
      }
    } else {
      std::vector<double> c(width, 0.0);
      const std::size_t deg = partial.size() - 1;
      for (std::size_t j = 0; j < width; ++j) {
        double lo = 0.0;
        const std::size_t kmin = j > deg ? j - deg : 0;
        for (std::size_t k = kmin; k <= std::min(j, n0 - 1); ++k) lo += std::min(0.0, partial[j - k]);
        lo *= spec.input_bound;
        if (lo < 0) c[j] = std::exp2(std::ceil(std::log2(-lo * (1 + 1e-9))));
        bias[j] = c[j] - carried[j];
        // the value the layer really produces at x = 0, so the last layer cancels exactly
        c[j] = carried[j] + bias[j];
      }
      shift = std::move(c);
    }
    net.push_layer(ConvLayer{f, std::move(bias)});
  }
  return net;
}

std::vector<Interval> interval_bounds(const ConvNet& net, const std::vector<Interval>& box) {
  if (box.size() != net.input_dim()) throw WidthError("interval_bounds: box width mismatch");
  std::vector<Interval> cur = box;
  for (const auto& layer : net.layers()) {
    const auto& w = layer.filter.taps;
    std::vector<Interval> next(layer.output_width());
    for (std::size_t i = 0; i < next.size(); ++i) next[i] = {layer.bias[i], layer.bias[i]};
    double mass = 0;
    for (double t : w) mass += std::abs(t);
    for (std::size_t t = 0; t < w.size(); ++t) {
      if (w[t] == 0.0) continue;
      for (std::size_t k = 0; k < cur.size(); ++k) {
        const double a = w[t] * cur[k].lo, b = w[t] * cur[k].hi;
        next[k + t].lo += std::min(a, b);
        next[k + t].hi += std::max(a, b);
      }
    }
    double mag = 0;
    for (const auto& v : cur) mag = std::max({mag, std::abs(v.lo), std::abs(v.hi)});
    for (std::size_t i = 0; i < next.size(); ++i) {
      const double pad = 1e-12 * (std::abs(next[i].lo) + std::abs(next[i].hi) + mass * mag + std::abs(layer.bias[i]));
      next[i].lo = std::max(0.0, next[i].lo - pad);
      next[i].hi = std::max(0.0, next[i].hi + pad);
    }
    cur = std::move(next);
  }
  return cur;
}

}  // namespace sgcnn
