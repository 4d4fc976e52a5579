#include <gtest/gtest.h>

#include <set>

#include "sgcnn/synthesis.hpp"

using namespace sgcnn;

TEST(Rho, FactorizedBasis) {
  HierNode node({4}, {3});
  for (int m : {2, 3, 4}) {
    const auto alpha = basis_degree(m, node.level);
    const auto rho = rho_factors(node, alpha, m);
    ASSERT_EQ(rho.size(), std::size_t(m));
    Basis1D b(4, 3, alpha[0]);
    auto prod = [&](double x) {
      double p = 1;
      for (const auto& r : rho) p *= r(x);
      return p;
    };
    EXPECT_NEAR(prod(0.1875), 1.0, 1e-14);
    for (double z : b.zeros) EXPECT_NEAR(prod(z), 0.0, 1e-14);
    for (int t = 0; t <= 1000; ++t) {
      const double x = t / 1000.0;
      EXPECT_NEAR(prod(x), b(x), 1e-12);
      for (const auto& r : rho) {
        EXPECT_GE(r(x), 0.0);
        EXPECT_LE(r(x), std::exp2(4));
      }
    }
  }
}

TEST(Pack, LayoutAndSeparators) {
  auto f = make_test_function("sinprod");
  for (auto [n, m, d] : {std::tuple{1, 2, 1}, std::tuple{2, 3, 2}}) {
    auto I = hierarchize(f.as_point_function(), n, m, d);
    auto packed = pack_first_layer(I.terms(), m, n, d);
    const auto& lay = packed.layout;
    EXPECT_EQ(packed.spec.big_filter.size(), lay.lanes());
    std::set<std::size_t> lanes;
    for (std::size_t q = 0; q < lay.N; ++q)
      for (std::size_t j = 0; j < lay.d; ++j)
        for (std::size_t k = 0; k < lay.m; ++k) lanes.insert(lay.lane(q, j, k));
    EXPECT_EQ(lanes.size(), lay.lanes() / lay.d);
    std::vector<double> x(d, 0.37);
    auto h = packed.spec.eval(x);
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (!lanes.count(i)) {
        EXPECT_EQ(h[i], 0.0);
        continue;
      }
    }
    for (std::size_t q = 0; q < lay.N; ++q) {
      auto rho = rho_factors(I.terms()[q].node, I.terms()[q].degrees, m);
      for (const auto& r : rho)
        EXPECT_NEAR(h[lay.lane(q, r.direction, r.k)], r(x[r.direction]) / packed.normalizer, 1e-15);
    }
  }
  auto I = hierarchize(f.as_point_function(), 1, 2, 1);
  auto packed = pack_first_layer(I.terms(), 2, 1, 1);
  auto h = packed.spec.eval({0.5});
  EXPECT_DOUBLE_EQ(h[0], 0.5);
  EXPECT_DOUBLE_EQ(h[1], 0.5);
}

TEST(ChooseU, Formula) {
  EXPECT_EQ(choose_U(2, 1, 4), 6);
  EXPECT_EQ(choose_U(2, 2, 2), 8);
  EXPECT_EQ(choose_U(2, 1, 1), 2);
  for (std::size_t N = 1; N < 100; ++N) EXPECT_LE(choose_U(3, 2, N), choose_U(3, 2, 2 * N));
}

TEST(Synthesis, QuadraticExact) {
  auto f = make_test_function("polyprod");
  auto res = synthesize(f, 1, 2, 1);
  const auto& r = res.report;
  EXPECT_LE(r.cnn_vs_interpolant_sup, r.dcnn_error_bound);
  EXPECT_LE(r.cnn_vs_interpolant_sup, r.gadget_error_rigorous);
  EXPECT_LE(r.interpolant_vs_f_p, 1e-12);
  EXPECT_LE(r.cnn_vs_f_p, r.cnn_vs_f_bound + 1e-15);
  EXPECT_LE(double(r.depth), r.depth_bound);
  EXPECT_FALSE(r.semantic);
}

TEST(Synthesis, ZeroFunction) {
  auto res = synthesize(make_test_function("zero"), 2, 2, 1);
  for (double x : {0.0, 0.3, 0.9}) EXPECT_EQ(res({x}), 0.0);
}

TEST(Synthesis, BudgetEnforced) {
  EXPECT_THROW(synthesize(make_test_function("sinprod"), 8, 2, 2), BudgetError);
}
