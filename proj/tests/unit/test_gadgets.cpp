#include <gtest/gtest.h>

#include <random>

#include "sgcnn/gadgets.hpp"

using namespace sgcnn;

TEST(Oracles, SawtoothAndSquare) {
  EXPECT_EQ(sawtooth_eval(1, 0.5), 1.0);
  EXPECT_EQ(sawtooth_eval(2, 0.25), 1.0);
  for (int i = 1; i < 6; ++i) EXPECT_EQ(sawtooth_eval(i, 0.0), 0.0);
  EXPECT_EQ(ru_eval(1, 0.5), 0.25);
  for (int U = 1; U <= 8; ++U) {
    EXPECT_EQ(ru_eval(U, 0), 0.0);
    EXPECT_EQ(ru_eval(U, 1), 1.0);
    const double x = std::exp2(-U - 1);
    EXPECT_DOUBLE_EQ(ru_eval(U, x) - x * x, std::exp2(-2 * U - 2));
    for (int j = 0; j <= 100; ++j) EXPECT_NEAR(ru_eval(U, j / 100.0), ru_eval_sawtooth(U, j / 100.0), 1e-14);
  }
}

TEST(Oracles, ApproxProduct) {
  EXPECT_EQ(approx_product_eval(1, 3, 0, 0), 0.0);
  EXPECT_DOUBLE_EQ(approx_product_eval(1, 3, 1, 1), 1.0);
  for (double x : {0.1, 0.37, 0.8}) EXPECT_NEAR(approx_product_eval(1, 4, x, x), ru_eval(4, x), 1e-15);
}

TEST(RuNetwork, PayloadAndDepth) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0, 1);
  for (auto [U, L, s] : {std::tuple{1, 1, 2}, std::tuple{3, 2, 2}, std::tuple{4, 3, 3}}) {
    auto st = build_ru_network(U, L, s);
    EXPECT_LE(double(st.depth()), ru_depth_bound(U, L, s));
    EXPECT_EQ(st.len, 9u * L);
    for (int t = 0; t < 200; ++t) {
      std::vector<double> y(L);
      for (auto& v : y) v = u(rng);
      auto h = st.net.forward(y);
      auto p = Stage::slice(h, st.lead, st.len);
      for (std::size_t j = 0; j < std::size_t(L); ++j) {
        EXPECT_NEAR(p[j], ru_eval(U, y[j]), 1e-10);
        EXPECT_NEAR(p[8 * L + j], y[j], 1e-10);
      }
      for (std::size_t j = L; j < 8u * L; ++j) EXPECT_EQ(p[j], 0.0);
      for (const auto& m : st.marks) {
        const int n = std::stoi(m.label.substr(1));
        auto trunc = st.net.truncated(m.depth).forward(y);
        for (std::size_t j = 0; j < std::size_t(L); ++j)
          EXPECT_NEAR(trunc[m.lead + 3 * L + j], sawtooth_eval(n, y[j]) * std::exp2(-n), 1e-10);
      }
    }
  }
  EXPECT_LE(build_ru_network(3, 2, 2).depth(), 83u);
}

TEST(Elimzeros, ExactRejoin) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(0, 1);
  EXPECT_EQ(build_elimzeros(3, 2, 1, 2, 1.0).depth(), 0u);
  for (auto [l, k, n] : {std::tuple{2, 2, 2}, std::tuple{2, 3, 3}, std::tuple{3, 1, 4}}) {
    auto st = build_elimzeros(l, k, n, 2, 1.0);
    EXPECT_LE(double(st.depth()), elimzeros_depth_bound(l, k, n, 2));
    std::vector<double> x(elimzeros_input_dim(l, k, n), 0.0), want;
    for (std::size_t i = 0; i < std::size_t(n); ++i)
      for (std::size_t j = 0; j < std::size_t(k); ++j) {
        const double v = std::ldexp(std::floor(u(rng) * 1024), -10);
        want.push_back(v);
        const std::size_t pos = i == 0 ? j : k + k * l * (n - 1) + (i - 1) * k + j;
        x[pos] = v;
      }
    auto p = st.payload(x);
    ASSERT_EQ(p.size(), want.size());
    for (std::size_t j = 0; j < p.size(); ++j) EXPECT_NEAR(p[j], want[j], 1e-12);
  }
}

TEST(Vectorprod, MatchesOracle) {
  std::mt19937_64 rng(23);
  for (auto [M, U, k, l, s] : {std::tuple{1.0, 4, 1, 2, 2}, std::tuple{1.0, 2, 2, 3, 2}, std::tuple{2.0, 3, 2, 4, 3}}) {
    auto st = build_vectorprod(M, U, k, l, s);
    EXPECT_LE(double(st.depth()), vectorprod_depth_bound(U, l, k, s));
    std::uniform_real_distribution<double> u(0, M);
    for (int t = 0; t < 100; ++t) {
      std::vector<double> y(l * k);
      for (auto& v : y) v = u(rng);
      auto p = st.payload(y);
      ASSERT_EQ(p.size(), (l - 1) * k);
      for (std::size_t j = 0; j < std::size_t(k); ++j) EXPECT_NEAR(p[j], approx_product_eval(M, U, y[j], y[k + j]), 1e-9);
      for (std::size_t j = k; j < p.size(); ++j) EXPECT_NEAR(p[j], y[k + j], 1e-9);
    }
  }
  auto st = build_vectorprod(1.0, 4, 1, 2, 2);
  auto p = st.payload({0.3, 0.5});
  EXPECT_LE(std::abs(p[0] - 0.15), std::exp2(-8));
  EXPECT_LE(build_vectorprod(1.0, 2, 2, 3, 2).depth(), 1003u);
}

TEST(Polynomial, ProductBounds) {
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> u(0, 1);
  auto net = build_polynomial_net({1.0}, 2, 1, 1.0, 6, 2);
  EXPECT_LE(double(net.stage.depth()), polynomial_depth_bound(6, 1, 1, 2, 2));
  for (int a = 0; a < 64; ++a)
    for (int b = 0; b < 64; ++b) {
      const double y = a / 63.0, z = b / 63.0;
      EXPECT_LE(std::abs(net.cnn(polynomial_net_input({{y, z}}, 1)) - y * z), std::exp2(-12) + 1e-12);
    }
  auto net3 = build_polynomial_net({1.0, -1.0}, 3, 2, 1.0, 8, 2);
  EXPECT_EQ(net3.cnn(std::vector<double>(12, 0.0)), 0.0);
  for (int t = 0; t < 30; ++t) {
    std::vector<std::vector<double>> y{{u(rng), u(rng), u(rng)}, {u(rng), u(rng), u(rng)}};
    const double exact = y[0][0] * y[0][1] * y[0][2] - y[1][0] * y[1][1] * y[1][2];
    const double oracle = chain_product_eval(1.0, 8, y[0]) - chain_product_eval(1.0, 8, y[1]);
    const double got = net3.cnn(polynomial_net_input(y, 2));
    EXPECT_NEAR(got, oracle, 1e-9);
    EXPECT_LE(std::abs(got - exact), std::exp2(-13));
  }
}
