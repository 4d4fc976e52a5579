#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

namespace sgcnn {

class WidthError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Filter (w_0, ..., w_s), s >= 2.
struct Filter {
  std::vector<double> taps;

  Filter() = default;
  explicit Filter(std::vector<double> t);
  int s() const { return static_cast<int>(taps.size()) - 1; }
  static Filter identity(int s);
  static Filter zeros(int s);
};

/// (w * y)_i = sum_k w_{i-k} y_k, output length |y| + s.
template <class T>
std::vector<T> toeplitz_conv(const Filter& w, std::span<const T> y);
std::vector<double> toeplitz_conv(const Filter& w, const std::vector<double>& y);

/// Plain convolution of two tap vectors of arbitrary length.
std::vector<double> convolve(std::span<const double> a, std::span<const double> b);

struct ConvLayer {
  Filter filter;
  std::vector<double> bias;  // length input width + s

  std::size_t output_width() const { return bias.size(); }
  std::size_t input_width() const { return bias.size() - filter.s(); }
};

/// max(0, w * x + b)
template <class T>
std::vector<T> layer_apply(const ConvLayer& layer, std::span<const T> x);

/// The hidden map h_L of a CNN (no output weights).
class ConvNet {
 public:
  ConvNet() = default;
  ConvNet(std::size_t input_dim, int s);

  std::size_t input_dim() const { return input_dim_; }
  int s() const { return s_; }
  std::size_t depth() const { return layers_.size(); }
  std::size_t output_width() const { return input_dim_ + layers_.size() * s_; }
  const std::vector<ConvLayer>& layers() const { return layers_; }

  /// Appends a layer; its filter length must match s and its bias the current width + s.
  void push_layer(ConvLayer layer);
  void push_layer(std::vector<double> taps, std::vector<double> bias);

  template <class T>
  std::vector<T> forward(std::span<const T> x) const;
  std::vector<double> forward(const std::vector<double>& x) const;
  std::vector<mpq_class> forward_exact(const std::vector<double>& x) const;

  /// Same map on inputs [0_lead; x; 0_trail]: biases embedded with zeros.
  ConvNet padded(std::size_t lead, std::size_t trail) const;
  /// First `layers` layers.
  ConvNet truncated(std::size_t layers) const;

  nlohmann::json to_json() const;
  static ConvNet from_json(const nlohmann::json& j);

 private:
  std::size_t input_dim_ = 0;
  int s_ = 2;
  std::vector<ConvLayer> layers_;
};

/// second after first; second.input_dim() must equal first.output_width().
ConvNet compose(const ConvNet& first, const ConvNet& second);

/// f_L = c . h_L with metadata.
struct DeepCnn {
  ConvNet net;
  std::vector<double> c;
  nlohmann::json meta = nlohmann::json::object();

  DeepCnn() = default;
  DeepCnn(ConvNet n, std::vector<double> weights, nlohmann::json m = nlohmann::json::object());

  std::size_t depth() const { return net.depth(); }
  double operator()(const std::vector<double>& x) const;
  mpq_class eval_exact(const std::vector<double>& x) const;

  nlohmann::json to_json() const;
  static DeepCnn from_json(const nlohmann::json& j);
};

double network_eval(const DeepCnn& net, const std::vector<double>& x);

inline constexpr double kZeroThreshold = 1e-13;

/// [0_lead; payload; 0_trail] with exact-zero runs split out.
struct AlignedVector {
  std::size_t lead = 0;
  std::vector<double> payload;
  std::size_t trail = 0;
  double threshold = kZeroThreshold;

  std::size_t size() const { return lead + payload.size() + trail; }
};

AlignedVector split_zeros(const std::vector<double>& v, double threshold = kZeroThreshold);
AlignedVector hidden_eval(const ConvNet& net, const std::vector<double>& x,
                          double threshold = kZeroThreshold);

}  // namespace sgcnn
