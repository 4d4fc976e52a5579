#include <gtest/gtest.h>

#include <random>

#include "sgcnn/cnn.hpp"

using namespace sgcnn;

namespace {

ConvNet random_net(std::mt19937_64& rng, std::size_t d, int s, int depth) {
  std::uniform_real_distribution<double> u(-1, 1);
  ConvNet net(d, s);
  for (int l = 0; l < depth; ++l) {
    std::vector<double> w(s + 1), b(net.output_width() + s);
    for (auto& x : w) x = u(rng);
    for (auto& x : b) x = 0.25 * u(rng);
    net.push_layer(w, b);
  }
  return net;
}

}  // namespace

TEST(Toeplitz, Examples) {
  EXPECT_EQ(toeplitz_conv(Filter({1, 1, 0}), {1, 2, 3}), (std::vector<double>{1, 3, 5, 3, 0}));
  EXPECT_EQ(toeplitz_conv(Filter::identity(3), {4, 5}), (std::vector<double>{4, 5, 0, 0, 0}));
}

TEST(Toeplitz, MatchesDenseMatrix) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> u(-9, 9);
  Filter w({double(u(rng)), double(u(rng)), double(u(rng)), double(u(rng))});
  std::vector<double> y(11);
  for (auto& v : y) v = u(rng);
  auto out = toeplitz_conv(w, y);
  ASSERT_EQ(out.size(), y.size() + 3);
  for (std::size_t i = 0; i < out.size(); ++i) {
    double dense = 0;
    for (std::size_t k = 0; k < y.size(); ++k) {
      long t = long(i) - long(k);
      if (t >= 0 && t <= 3) dense += w.taps[t] * y[k];
    }
    EXPECT_EQ(out[i], dense);
  }
}

TEST(Toeplitz, EmbeddingIdentity) {
  Filter w({0.3, -1.7, 2.2});
  std::vector<double> a{0.1, 0.5, -0.25};
  auto wa = toeplitz_conv(w, a);
  auto emb = toeplitz_conv(w, {0, 0, 0.1, 0.5, -0.25, 0});
  for (std::size_t i = 0; i < wa.size(); ++i) EXPECT_EQ(emb[i + 2], wa[i]);
  EXPECT_EQ(emb[0], 0.0);
  EXPECT_EQ(emb[1], 0.0);
}

TEST(Layer, ReluBehaviour) {
  ConvLayer layer{Filter::identity(2), {-1, -1, -1, -1, -1}};
  EXPECT_EQ(layer_apply<double>(layer, std::vector<double>{0, 0, 0}), std::vector<double>(5, 0.0));
  EXPECT_THROW(layer_apply<double>(layer, std::vector<double>{0, 0}), WidthError);
}

TEST(Net, WidthLawAndEval) {
  std::mt19937_64 rng(1);
  auto net = random_net(rng, 4, 3, 5);
  EXPECT_EQ(net.output_width(), 4u + 5 * 3);
  EXPECT_EQ(net.forward({0.1, 0.2, 0.3, 0.4}).size(), 19u);
  ConvNet single(2, 2);
  single.push_layer({1, 0, 0}, {0, 0, 0, 0});
  std::vector<double> c(4, 0.0);
  c[0] = 1;
  DeepCnn f(single, c);
  EXPECT_EQ(f({0.7, 0.2}), 0.7);
  auto c2 = c;
  c2[0] = 3;
  EXPECT_EQ(DeepCnn(single, c2)({0.7, 0.2}), 3 * 0.7);
  EXPECT_THROW(net.push_layer({1, 0, 0, 0}, {0}), WidthError);
}

TEST(Net, ComposeEqualsNested) {
  std::mt19937_64 rng(2);
  auto a = random_net(rng, 3, 2, 3);
  auto b = random_net(rng, a.output_width(), 2, 4);
  auto ab = compose(a, b);
  EXPECT_EQ(ab.depth(), 7u);
  EXPECT_EQ(compose(a, ConvNet(a.output_width(), 2)).depth(), 3u);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> x{u(rng), u(rng), u(rng)};
    EXPECT_EQ(ab.forward(x), b.forward(a.forward(x)));
  }
}

TEST(Net, PaddingInvarianceExact) {
  std::mt19937_64 rng(3);
  auto net = random_net(rng, 3, 3, 4);
  auto padded = net.padded(2, 5);
  std::vector<double> x{0.25, 0.5, 0.125};
  std::vector<double> xp{0, 0, 0.25, 0.5, 0.125, 0, 0, 0, 0, 0};
  auto h = net.forward_exact(x);
  auto hp = padded.forward_exact(xp);
  ASSERT_EQ(hp.size(), h.size() + 7);
  for (std::size_t i = 0; i < h.size(); ++i) EXPECT_EQ(hp[i + 2], h[i]);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(hp[i], 0);
}

TEST(Net, ExactModeAgreesWithFloat) {
  std::mt19937_64 rng(4);
  auto net = random_net(rng, 3, 2, 6);
  std::vector<double> x{0.3, 0.6, 0.9};
  auto hf = net.forward(x);
  auto hq = net.forward_exact(x);
  for (std::size_t i = 0; i < hf.size(); ++i) EXPECT_NEAR(hf[i], hq[i].get_d(), 1e-13);
}

TEST(Aligned, SplitZeros) {
  auto a = split_zeros({0, 0, 1, 0, 2, 0});
  EXPECT_EQ(a.lead, 2u);
  EXPECT_EQ(a.payload, (std::vector<double>{1, 0, 2}));
  EXPECT_EQ(a.trail, 1u);
  auto z = split_zeros({0, 0});
  EXPECT_TRUE(z.payload.empty());
  EXPECT_EQ(z.size(), 2u);
}

TEST(Json, RoundTripAndValidation) {
  std::mt19937_64 rng(5);
  auto net = random_net(rng, 2, 2, 3);
  DeepCnn f(net, std::vector<double>(net.output_width(), 0.5), {{"builder", "test"}});
  auto g = DeepCnn::from_json(f.to_json());
  EXPECT_EQ(f({0.1, 0.9}), g({0.1, 0.9}));
  auto bad = f.to_json();
  bad["layers"][1]["b"].push_back(0.0);
  EXPECT_THROW(DeepCnn::from_json(bad), WidthError);
  auto bad_c = f.to_json();
  bad_c["c"].push_back(0.0);
  EXPECT_THROW(DeepCnn::from_json(bad_c), WidthError);
}
