#include "sgcnn/cnn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sgcnn {

namespace {

template <class T>
T relu(const T& v) {
  return v > 0 ? v : T(0);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw WidthError(what);
}

}  // namespace

Filter::Filter(std::vector<double> t) : taps(std::move(t)) {
  if (taps.size() < 3) throw std::invalid_argument("filter needs s >= 2");
}

Filter Filter::identity(int s) {
  Filter f = zeros(s);
  f.taps[0] = 1.0;
  return f;
}

Filter Filter::zeros(int s) { return Filter(std::vector<double>(s + 1, 0.0)); }

template <class T>
std::vector<T> toeplitz_conv(const Filter& w, std::span<const T> y) {
  const std::size_t s = w.taps.size() - 1;
  std::vector<T> out(y.size() + s, T(0));
  for (std::size_t t = 0; t <= s; ++t) {
    if (w.taps[t] == 0.0) continue;
    const T wt(w.taps[t]);
    for (std::size_t k = 0; k < y.size(); ++k) out[k + t] += wt * y[k];
  }
  return out;
}

std::vector<double> toeplitz_conv(const Filter& w, const std::vector<double>& y) {
  return toeplitz_conv<double>(w, std::span<const double>(y));
}

std::vector<double> convolve(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

template <class T>
std::vector<T> layer_apply(const ConvLayer& layer, std::span<const T> x) {
  require(x.size() == layer.input_width(), "layer_apply: input width mismatch");
  std::vector<T> z = toeplitz_conv<T>(layer.filter, x);
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (layer.bias[i] != 0.0) z[i] += T(layer.bias[i]);
    z[i] = relu(z[i]);
  }
  return z;
}

ConvNet::ConvNet(std::size_t input_dim, int s) : input_dim_(input_dim), s_(s) {
  if (input_dim == 0) throw WidthError("input_dim must be positive");
  if (s < 2) throw std::invalid_argument("s must be >= 2");
}

void ConvNet::push_layer(ConvLayer layer) {
  require(layer.filter.s() == s_, "push_layer: filter length differs from s + 1");
  require(layer.bias.size() == output_width() + s_, "push_layer: bias width mismatch");
  layers_.push_back(std::move(layer));
}

void ConvNet::push_layer(std::vector<double> taps, std::vector<double> bias) {
  push_layer(ConvLayer{Filter(std::move(taps)), std::move(bias)});
}

template <class T>
std::vector<T> ConvNet::forward(std::span<const T> x) const {
  require(x.size() == input_dim_, "forward: input width mismatch");
  std::vector<T> h(x.begin(), x.end());
  for (const auto& layer : layers_) h = layer_apply<T>(layer, h);
  return h;
}

std::vector<double> ConvNet::forward(const std::vector<double>& x) const {
  return forward<double>(std::span<const double>(x));
}

std::vector<mpq_class> ConvNet::forward_exact(const std::vector<double>& x) const {
  std::vector<mpq_class> q(x.begin(), x.end());
  return forward<mpq_class>(std::span<const mpq_class>(q));
}

ConvNet ConvNet::padded(std::size_t lead, std::size_t trail) const {
  ConvNet out(input_dim_ + lead + trail, s_);
  for (const auto& layer : layers_) {
    std::vector<double> b(lead, 0.0);
    b.insert(b.end(), layer.bias.begin(), layer.bias.end());
    b.resize(b.size() + trail, 0.0);
    out.push_layer(ConvLayer{layer.filter, std::move(b)});
  }
  return out;
}

ConvNet ConvNet::truncated(std::size_t layers) const {
  ConvNet out(input_dim_, s_);
  for (std::size_t i = 0; i < std::min(layers, layers_.size()); ++i) out.push_layer(layers_[i]);
  return out;
}

nlohmann::json ConvNet::to_json() const {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& l : layers_) layers.push_back({{"w", l.filter.taps}, {"b", l.bias}});
  return {{"s", s_}, {"input_dim", input_dim_}, {"layers", layers}};
}

ConvNet ConvNet::from_json(const nlohmann::json& j) {
  ConvNet net(j.at("input_dim").get<std::size_t>(), j.at("s").get<int>());
  for (const auto& l : j.at("layers"))
    net.push_layer(l.at("w").get<std::vector<double>>(), l.at("b").get<std::vector<double>>());
  return net;
}

ConvNet compose(const ConvNet& first, const ConvNet& second) {
  require(second.input_dim() == first.output_width(), "compose: width mismatch");
  require(second.s() == first.s(), "compose: filter lengths differ");
  ConvNet out = first;
  for (const auto& l : second.layers()) out.push_layer(l);
  return out;
}

DeepCnn::DeepCnn(ConvNet n, std::vector<double> weights, nlohmann::json m)
    : net(std::move(n)), c(std::move(weights)), meta(std::move(m)) {
  require(c.size() == net.output_width(), "output weights length must match final width");
}

double DeepCnn::operator()(const std::vector<double>& x) const {
  const auto h = net.forward(x);
  double v = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) v += c[i] * h[i];
  return v;
}

mpq_class DeepCnn::eval_exact(const std::vector<double>& x) const {
  const auto h = net.forward_exact(x);
  mpq_class v = 0;
  for (std::size_t i = 0; i < h.size(); ++i)
    if (c[i] != 0.0) v += mpq_class(c[i]) * h[i];
  return v;
}

nlohmann::json DeepCnn::to_json() const {
  nlohmann::json j = net.to_json();
  j["c"] = c;
  j["meta"] = meta;
  return j;
}

DeepCnn DeepCnn::from_json(const nlohmann::json& j) {
  return DeepCnn(ConvNet::from_json(j), j.at("c").get<std::vector<double>>(),
                 j.value("meta", nlohmann::json::object()));
}

double network_eval(const DeepCnn& net, const std::vector<double>& x) { return net(x); }

AlignedVector split_zeros(const std::vector<double>& v, double threshold) {
  AlignedVector out;
  out.threshold = threshold;
  std::size_t lo = 0, hi = v.size();
  while (lo < hi && std::abs(v[lo]) < threshold) ++lo;
  while (hi > lo && std::abs(v[hi - 1]) < threshold) --hi;
  out.lead = lo;
  out.payload.assign(v.begin() + lo, v.begin() + hi);
  out.trail = v.size() - hi;
  return out;
}

AlignedVector hidden_eval(const ConvNet& net, const std::vector<double>& x, double threshold) {
  return split_zeros(net.forward(x), threshold);
}

template std::vector<double> toeplitz_conv<double>(const Filter&, std::span<const double>);
template std::vector<mpq_class> toeplitz_conv<mpq_class>(const Filter&, std::span<const mpq_class>);
template std::vector<double> layer_apply<double>(const ConvLayer&, std::span<const double>);
template std::vector<mpq_class> layer_apply<mpq_class>(const ConvLayer&, std::span<const mpq_class>);
template std::vector<double> ConvNet::forward<double>(std::span<const double>) const;
template std::vector<mpq_class> ConvNet::forward<mpq_class>(std::span<const mpq_class>) const;

}  // namespace sgcnn
