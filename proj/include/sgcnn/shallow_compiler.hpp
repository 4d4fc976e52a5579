#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "sgcnn/cnn.hpp"

namespace sgcnn {

/// One wide layer sigma(w * x + b) with w of length n + 1 acting on [0, M]^{n0}.
struct WideLayerSpec {
  std::vector<double> big_filter;
  std::vector<double> bias;  // n0 + n entries
  std::size_t input_dim = 1;
  double input_bound = 1.0;

  std::size_t n() const { return big_filter.size() - 1; }
  void validate() const;
  /// Direct evaluation of sigma(T_w x + b).
  std::vector<double> eval(const std::vector<double>& x) const;
};

class FactorizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// ceil(n / (s - 1)), and 1 for n = 0.
std::size_t shallow_depth_bound(std::size_t n, int s);

/// Real factors of the symbol sum w_k z^k, each padded to s + 1 taps, whose
/// convolution reproduces big_filter (zero-padded to the product length) to
/// relative 1e-8. The count is max(#bins, ceil(n/s), 1) <= ceil(n/(s-1)).
std::vector<Filter> factor_filter(const std::vector<double>& big_filter, int s);

/// Deep CNN whose first n0 + n hidden outputs equal sigma(w * x + b) for
/// x in [0, M]^{n0}. Intermediate layers carry power-of-two bias shifts from
/// exact interval bounds so every ReLU stays transparent.
ConvNet compile_shallow(const WideLayerSpec& spec, int s);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Sound per-entry enclosure of the hidden output over the box [lo_k, hi_k].
std::vector<Interval> interval_bounds(const ConvNet& net, const std::vector<Interval>& box);

}  // namespace sgcnn
