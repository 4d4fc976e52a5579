#include <gtest/gtest.h>

#include <random>

#include "sgcnn/shallow_compiler.hpp"

using namespace sgcnn;

namespace {

double reconstruction_error(const std::vector<Filter>& f, const std::vector<double>& w) {
  std::vector<double> prod{1.0};
  for (const auto& x : f) prod = convolve(prod, x.taps);
  double err = 0, scale = 0;
  for (std::size_t k = 0; k < prod.size(); ++k) {
    double t = k < w.size() ? w[k] : 0.0;
    err = std::max(err, std::abs(prod[k] - t));
    scale = std::max(scale, std::abs(t));
  }
  return err / scale;
}

WideLayerSpec random_spec(std::mt19937_64& rng, std::size_t n, std::size_t n0) {
  std::uniform_real_distribution<double> u(-1, 1);
  WideLayerSpec spec;
  spec.big_filter.resize(n + 1);
  for (auto& v : spec.big_filter) v = u(rng);
  spec.bias.resize(n0 + n);
  for (auto& v : spec.bias) v = 0.5 * u(rng);
  spec.input_dim = n0;
  return spec;
}

}  // namespace

TEST(Factor, AlreadyShort) {
  auto f = factor_filter({1, 2, 1}, 2);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0].taps, (std::vector<double>{1, 2, 1}));
}

TEST(Factor, CubeRootsOfUnity) {
  std::vector<double> w{1, 0, 0, -1};
  auto f = factor_filter(w, 2);
  EXPECT_LE(f.size(), 2u);
  EXPECT_LE(reconstruction_error(f, w), 1e-10);
}

TEST(Factor, RandomDegree16) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> w(17);
    for (auto& v : w) v = u(rng);
    auto f = factor_filter(w, 3);
    EXPECT_LE(f.size(), 8u);
    EXPECT_LE(reconstruction_error(f, w), 1e-8);
  }
}

TEST(Factor, SparseAndRepeatedRoots) {
  // (1 + z^5)^2 with a shift z^3
  std::vector<double> w(14, 0.0);
  w[3] = 1;
  w[8] = 2;
  w[13] = 1;
  for (int s : {2, 3}) {
    auto f = factor_filter(w, s);
    EXPECT_LE(f.size(), shallow_depth_bound(13, s));
    EXPECT_LE(reconstruction_error(f, w), 1e-10);
  }
  std::vector<double> cube{1, 3, 3, 1};
  EXPECT_LE(reconstruction_error(factor_filter(cube, 2), cube), 1e-10);
}

TEST(Compile, DepthBoundAndOracle) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0, 1);
  for (auto [n, s] : {std::pair{5, 3}, std::pair{8, 2}, std::pair{20, 3}, std::pair{1, 2}}) {
    auto spec = random_spec(rng, n, 4);
    auto net = compile_shallow(spec, s);
    EXPECT_LE(net.depth(), shallow_depth_bound(n, s));
    for (int t = 0; t < 200; ++t) {
      std::vector<double> x(4);
      for (auto& v : x) v = u(rng);
      auto want = spec.eval(x);
      auto got = net.forward(x);
      double scale = 1e-300;
      for (double v : want) scale = std::max(scale, std::abs(v));
      for (std::size_t j = 0; j < want.size(); ++j) EXPECT_LE(std::abs(got[j] - want[j]), 1e-8 * scale);
    }
  }
}

TEST(Compile, IdentitySpec) {
  WideLayerSpec spec{{1, 0, 0, 0, 0}, std::vector<double>(7, 0.0), 3, 1.0};
  auto net = compile_shallow(spec, 2);
  auto h = hidden_eval(net, {0.5, 0.25, 0.75});
  EXPECT_EQ(h.lead, 0u);
  EXPECT_EQ(h.payload, (std::vector<double>{0.5, 0.25, 0.75}));
}

TEST(Intervals, SoundUnderSampling) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0, 1);
  ConvNet zero(3, 2);
  zero.push_layer({0, 0, 0}, std::vector<double>(5, 0.0));
  for (auto iv : interval_bounds(zero, std::vector<Interval>(3, {0, 1}))) {
    EXPECT_EQ(iv.lo, 0.0);
    EXPECT_EQ(iv.hi, 0.0);
  }
  ConvNet one(1, 2);
  one.push_layer({1, 0, 0}, {0, 0, 0});
  auto b1 = interval_bounds(one, {{0, 1}});
  EXPECT_NEAR(b1[0].hi, 1.0, 1e-11);
  auto spec = random_spec(rng, 9, 3);
  auto net = compile_shallow(spec, 2);
  auto box = interval_bounds(net, std::vector<Interval>(3, {0, 1}));
  for (int t = 0; t < 10000; ++t) {
    std::vector<double> x{u(rng), u(rng), u(rng)};
    auto h = net.forward(x);
    for (std::size_t j = 0; j < h.size(); ++j) {
      EXPECT_GE(h[j], box[j].lo);
      EXPECT_LE(h[j], box[j].hi);
    }
  }
}
