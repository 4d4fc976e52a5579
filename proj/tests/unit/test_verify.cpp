#include <gtest/gtest.h>

#include <cmath>

#include "sgcnn/synthesis.hpp"
#include "sgcnn/verify.hpp"

using namespace sgcnn;

TEST(Format, SeventeenDigits) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(2.0), "2");
  EXPECT_EQ(format_double(std::nan("")), "nan");
  EXPECT_EQ(format_double(-INFINITY), "-inf");
}

TEST(SumLemma, BinomialSum) {
  EXPECT_DOUBLE_EQ(sum_lemma_A(2, 3), 5.0);
  for (int n = 1; n < 6; ++n) EXPECT_DOUBLE_EQ(sum_lemma_A(1, n), 1.0);
}

TEST(SumLemma, OneDimensionalGeometricTail) {
  for (int t : {1, 2, 3})
    for (int n : {1, 4}) {
      const auto r = sum_lemma_check(1, n, t);
      const double tail = std::exp2(-t * (n + 1)) / (1 - std::exp2(-t));
      EXPECT_NEAR(r.lhs, tail, 1e-15 * tail);
    }
  const auto r = sum_lemma_check(1, 1, 1);
  EXPECT_DOUBLE_EQ(r.lhs, 0.5);
  EXPECT_DOUBLE_EQ(r.rhs, 0.125);
  EXPECT_FALSE(r.holds);
  EXPECT_TRUE(r.holds_variant);
}

TEST(SumLemma, LargeTIsTiny) {
  const auto r = sum_lemma_check(3, 4, 10);
  EXPECT_LT(r.lhs, 1e-18);
  EXPECT_GT(r.remainder, 0.0);
}

TEST(Rates, ExactReproductionAndTwoPointFit) {
  const auto rows = rate_table(2, 2, 3, INFINITY, "polyprod");
  for (const auto& r : rows) EXPECT_LE(r.error, 1e-12);
  const auto sin_rows = rate_table(1, 2, 2, INFINITY, "sinprod");
  ASSERT_EQ(sin_rows.size(), 2u);
  const double slope = -std::log(sin_rows[1].error / sin_rows[0].error) /
                       std::log(double(sin_rows[1].N) / double(sin_rows[0].N));
  EXPECT_NEAR(sin_rows[1].fitted_order, slope, 1e-12);
  EXPECT_GT(sin_rows[1].ratio, 0.0);
  for (std::size_t i = 1; i < sin_rows.size(); ++i) EXPECT_GT(sin_rows[i].N, sin_rows[i - 1].N);
}

TEST(Gadgets, ShallowExample) {
  GadgetParams P;
  P.n = 8;
  P.s = 2;
  const auto rows = run_gadget_check("shallow", P);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_TRUE(rows[0].pass);
  EXPECT_LE(rows[0].depth, 8.0);
  EXPECT_THROW(run_gadget_check("nope", P), std::invalid_argument);
}

TEST(Gadgets, ProductExample) {
  GadgetParams P;
  P.U = 4;
  P.M = 1;
  P.M_given = true;
  const auto rows = run_gadget_check("product", P);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_TRUE(rows[0].pass);
  EXPECT_LE(rows[0].measured, std::exp2(-8));
}

TEST(Export, RoundTripIsExact) {
  const auto res = synthesize(make_test_function("sinprod"), 2, 2, 1);
  ASSERT_TRUE(res.full.has_value());
  const auto back = DeepCnn::from_json(nlohmann::json::parse(res.full->to_json().dump()));
  for (double x : {0.0, 0.1, 0.3, 0.77, 1.0}) EXPECT_EQ(network_eval(back, {x}), network_eval(*res.full, {x}));
}

TEST(Export, ZeroNetworkEvaluatesToZero) {
  ConvNet net(2, 2);
  net.push_layer({0.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 0.0});
  const DeepCnn zero(net, std::vector<double>(4, 0.0));
  const auto back = DeepCnn::from_json(zero.to_json());
  EXPECT_EQ(network_eval(back, {0.4, 0.9}), 0.0);
}
