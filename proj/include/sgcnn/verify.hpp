#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace sgcnn {

struct RateRow {
  int n = 0;
  std::size_t N = 0;
  std::size_t depth = 0;  // depth ledger of the synthesized network (s = 2, U = choose_U)
  std::size_t width = 0;  // d + depth * s
  double error = 0.0;
  double ratio = 0.0;
  double fitted_order = 0.0;
};

/// Interpolation errors for n = 1..n_max; rows[0] is n = 1 (ratio and order undefined).
std::vector<RateRow> rate_table(int d, int m, int n_max, double p, const std::string& f_name);

/// -(least-squares slope) of log(err / (log2 N)^{(m+2)(d-1)}) against log N.
double fitted_order(const std::vector<RateRow>& rows, std::size_t first, std::size_t last, int m, int d);

/// sum_{k<d} binom(n+d-1, k)
double sum_lemma_A(int d, int n);

struct SumLemmaRow {
  int d = 0, n = 0, t = 0;
  double lhs = 0.0;        // truncated sum plus certified remainder
  double remainder = 0.0;
  double rhs = 0.0;        // 2^{-tn-td-1} A(d,n)
  double rhs_variant = 0.0;  // 2^{-tn-td+1} A(d,n)
  bool holds = false;
  bool holds_variant = false;
};

/// Brute force over [1, cap]^d by level-sum counts, cap = 40.
SumLemmaRow sum_lemma_check(int d, int n, int t, int cap = 40);

/// One line of a gadget conformance sweep.
struct GadgetCheckRow {
  std::string check;
  std::map<std::string, double> params;
  double max_deviation = 0.0;  // network vs closed-form oracle
  double tolerance = 0.0;
  double measured = 0.0;       // the quantity under the analytic bound
  double bound = 0.0;
  double depth = 0.0;
  double depth_bound = 0.0;
  bool pass = false;
};

struct GadgetParams {
  int U = -1;
  double M = 1.0;
  bool M_given = false;
  int s = 2;
  int k = -1;
  int l = -1;
  int n = -1;
  int samples = 1000;
  unsigned seed = 20240531;
};

/// check in {ru, product, elimzeros, vectorprod, polynomial, shallow}; unset
/// parameters sweep the default desk-scale grid.
std::vector<GadgetCheckRow> run_gadget_check(const std::string& check, const GadgetParams& params);

/// 17 significant digits, "inf"/"nan" spelled out.
std::string format_double(double v);

}  // namespace sgcnn
