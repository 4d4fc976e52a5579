#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "sgcnn/coefficients.hpp"
#include "sgcnn/korobov.hpp"
#include "sgcnn/quadrature.hpp"
#include "sgcnn/sparse_grid.hpp"

using namespace sgcnn;

TEST(Levels, SmallEnumerations) {
  auto b = enumerate_levels(1, 2);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0].level, (MultiIndex{1, 1}));
  EXPECT_EQ(sparse_grid_size(1, 2), 1u);
  EXPECT_EQ(sparse_grid_size(2, 1), 3u);
  EXPECT_EQ(sparse_grid_size(3, 2), 17u);
  std::size_t count = 0;
  for (const auto& blk : enumerate_levels(5, 3)) {
    EXPECT_LE(blk.level.norm1(), 7);
    count += blk.indices.size();
  }
  EXPECT_EQ(count, sparse_grid_size(5, 3));
}

TEST(Nodes, RejectsInvalid) {
  EXPECT_THROW(HierNode({0}, {1}), std::invalid_argument);
  EXPECT_THROW(HierNode({2}, {2}), std::invalid_argument);
  EXPECT_THROW(HierNode({2}, {5}), std::invalid_argument);
  EXPECT_NO_THROW(HierNode({2}, {3}));
}

TEST(Basis, DegreesAndAncestors) {
  EXPECT_EQ(basis_degree(3, MultiIndex{1, 4}), (MultiIndex{2, 3}));
  EXPECT_EQ(ancestors(4, 3, 4), (std::vector<double>{0.25, 0.125, 0.5, 0.0}));
  EXPECT_EQ(ancestors(3, 5, 3), (std::vector<double>{0.75, 0.5, 1.0}));
  for (int l = 1; l <= 6; ++l)
    for (std::int64_t i = 1; i < (1 << l); i += 2) EXPECT_EQ(ancestors(l, i, l + 1).size(), std::size_t(l + 1));
}

TEST(Basis, ValuesAndSupport) {
  Basis1D b(1, 1, 2);
  EXPECT_DOUBLE_EQ(b(0.25), 0.75);
  EXPECT_DOUBLE_EQ(b(0.5), 1.0);
  Basis1D c(3, 5, 3);
  EXPECT_DOUBLE_EQ(c(0.625), 1.0);
  EXPECT_EQ(c(0.74), c.polynomial(0.74));
  EXPECT_EQ(c(0.8), 0.0);
  EXPECT_NEAR(c(0.75), 0.0, 1e-15);
}

TEST(Hierarchize, QuadraticSurpluses) {
  auto f1 = [](std::span<const double> x) { return x[0] * (1 - x[0]); };
  auto I1 = hierarchize(f1, 1, 2, 1);
  ASSERT_EQ(I1.size(), 1u);
  EXPECT_DOUBLE_EQ(I1.terms()[0].surplus, 0.25);
  auto f2 = [](std::span<const double> x) { return x[0] * (1 - x[0]) * x[1] * (1 - x[1]); };
  auto I2 = hierarchize(f2, 1, 2, 2);
  EXPECT_DOUBLE_EQ(I2.terms()[0].surplus, 1.0 / 16);
  auto I3 = hierarchize(f2, 4, 2, 2);
  for (const auto& t : I3.terms())
    if (t.node.level != MultiIndex{1, 1}) EXPECT_NEAR(t.surplus, 0.0, 1e-15);
  const double x[2] = {0.3, 0.71};
  EXPECT_NEAR(I3(x), f2(x), 1e-14);
}

TEST(Hierarchize, InterpolatesAtGridPoints) {
  auto f = make_test_function("sinprod");
  auto I = hierarchize(f.as_point_function(), 4, 3, 2);
  for (const auto& t : I.terms()) {
    auto x = t.node.coordinates();
    EXPECT_NEAR(I(x), f(x), 1e-13);
  }
}

TEST(Hierarchize, JsonRoundTrip) {
  auto f = make_test_function("bubble");
  auto I = hierarchize(f.as_point_function(), 3, 2, 2);
  auto J = SparseGridInterpolant::from_json(I.to_json());
  const double x[2] = {0.17, 0.62};
  EXPECT_EQ(I(x), J(x));
}

TEST(Quadrature, GaussLegendreExactness) {
  auto r = gauss_legendre(5);
  double s = 0;
  for (std::size_t q = 0; q < r.nodes.size(); ++q) s += r.weights[q] * std::pow(r.nodes[q], 8);
  EXPECT_NEAR(s, 2.0 / 9, 1e-14);
  double v = integrate_tensor([](std::span<const double> t) { return std::sin(std::numbers::pi * t[0]) * t[1]; },
                              {{0, 0.5, 1}, {0, 1}});
  EXPECT_NEAR(v, 1.0 / std::numbers::pi, 1e-12);
}

TEST(Coefficients, FunctionalMatchesHierarchization) {
  auto f = make_test_function("sinprod");
  for (int m : {2, 3}) {
    auto I = hierarchize(f.as_point_function(), 4, m, 1);
    for (const auto& t : I.terms()) {
      auto fun = surplus_functional(t.node.level[0], t.node.index[0], t.degrees[0]);
      double direct = fun.apply([&](double x) { return f(std::span<const double>(&x, 1)); });
      EXPECT_NEAR(direct, t.surplus, 1e-13);
      EXPECT_NEAR(coefficient_integral(f, t.node, t.degrees), t.surplus, 1e-10);
    }
  }
}

TEST(Coefficients, BasisNormBound) {
  HierNode node({3, 2}, {5, 1});
  for (double p : {1.0, 2.0, kInfNorm})
    EXPECT_LE(basis_lp_norm(node, MultiIndex{3, 3}, p), basis_norm_bound(node, p) * (1 + 1e-8));
}
