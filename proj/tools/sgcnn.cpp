#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sgcnn/cnn.hpp"
#include "sgcnn/korobov.hpp"
#include "sgcnn/synthesis.hpp"
#include "sgcnn/verify.hpp"

using namespace sgcnn;

namespace {

constexpr int kPass = 0, kViolation = 1, kUsage = 2;

double parse_p(const std::string& s) {
  if (s == "inf") return INFINITY;
  if (s == "1") return 1.0;
  if (s == "2") return 2.0;
  throw CLI::ValidationError("--p", "expected 1, 2 or inf");
}

std::vector<double> parse_point(const std::string& csv) {
  std::vector<double> x;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    x.push_back(std::stod(tok, &used));
    if (used != tok.size() && tok.find_first_not_of(" \t", used) != std::string::npos)
      throw std::invalid_argument("bad number '" + tok + "'");
  }
  return x;
}

int cmd_rates(int d, int m, int n_max, const std::string& p, const std::string& f, const std::string& out) {
  const auto rows = rate_table(d, m, n_max, parse_p(p), f);
  std::ofstream os(out);
  if (!os) throw std::runtime_error("cannot write " + out);
  os << "n,N,depth,width,error_p,ratio,fitted_order\n";
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    os << r.n << ',' << r.N << ',' << r.depth << ',' << r.width << ',' << format_double(r.error) << ','
       << format_double(r.ratio) << ',' << format_double(r.fitted_order) << '\n';
  }
  if (!os) throw std::runtime_error("write failed for " + out);
  return kPass;
}

int cmd_gadgets(const std::string& check, const GadgetParams& P) {
  const auto rows = run_gadget_check(check, P);
  bool ok = true;
  std::cout << "check,params,max_deviation,tolerance,measured,bound,depth,depth_bound,pass\n";
  for (const auto& r : rows) {
    std::string params;
    for (const auto& [k, v] : r.params) params += (params.empty() ? "" : ";") + k + "=" + format_double(v);
    std::cout << r.check << ',' << params << ',' << format_double(r.max_deviation) << ','
              << format_double(r.tolerance) << ',' << format_double(r.measured) << ',' << format_double(r.bound)
              << ',' << format_double(r.depth) << ',' << format_double(r.depth_bound) << ','
              << (r.pass ? "pass" : "FAIL") << '\n';
    ok = ok && r.pass;
  }
  return ok ? kPass : kViolation;
}

int cmd_sumlemma(int d_max, int n_max, int t_max) {
  bool ok = true;
  std::cout << "d,n,t,A,lhs,remainder,rhs,holds,rhs_variant,holds_variant\n";
  for (int d = 1; d <= d_max; ++d)
    for (int n = 1; n <= n_max; ++n)
      for (int t = 1; t <= t_max; ++t) {
        const auto r = sum_lemma_check(d, n, t);
        std::cout << d << ',' << n << ',' << t << ',' << format_double(sum_lemma_A(d, n)) << ','
                  << format_double(r.lhs) << ',' << format_double(r.remainder) << ',' << format_double(r.rhs)
                  << ',' << (r.holds ? "yes" : "no") << ',' << format_double(r.rhs_variant) << ','
                  << (r.holds_variant ? "yes" : "no") << '\n';
        ok = ok && r.holds;
      }
  return ok ? kPass : kViolation;
}

int cmd_compile(int d, int m, int n, int s, const std::string& f, const std::string& path) {
  SynthesisOptions opt;
  opt.s = s;
  const auto res = synthesize(make_test_function(f), n, m, d, opt);
  if (!res.full)
    throw BudgetError("first layer exceeds the compile budget; only semantic mode is available");
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << res.full->to_json().dump() << '\n';
  std::ofstream rs(path + ".report.json");
  if (!rs) throw std::runtime_error("cannot write " + path + ".report.json");
  const auto report = res.report.to_json();
  rs << report.dump(2) << '\n';
  std::cout << report.dump(2) << '\n';
  const auto& b = res.report;
  const bool ok = b.cnn_vs_interpolant_sup <= b.dcnn_error_bound && b.depth <= b.depth_bound &&
                  b.cnn_vs_f_p <= b.cnn_vs_f_bound;
  return ok ? kPass : kViolation;
}

int cmd_eval(const std::string& path, const std::string& point) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path);
  const DeepCnn net = DeepCnn::from_json(nlohmann::json::parse(is));
  const auto x = parse_point(point);
  if (x.size() != net.net.input_dim())
    throw CLI::ValidationError("--point", "dimension mismatch: network expects " +
                                              std::to_string(net.net.input_dim()) + " coordinates, got " +
                                              std::to_string(x.size()));
  std::cout << format_double(network_eval(net, x)) << '\n';
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse-grid CNN synthesis toolkit"};
  app.require_subcommand(1);

  int d = 1, m = 2, n = 1, n_max = 4, s = 2, d_max = 4, t_max = 3;
  std::string p = "inf", f = "sinprod", out, check, net_path, point;
  GadgetParams gp;

  auto* rates = app.add_subcommand("rates", "interpolation error table (CSV)");
  rates->add_option("--d", d)->required();
  rates->add_option("--m", m)->required();
  rates->add_option("--n-max", n_max)->required();
  rates->add_option("--p", p)->check(CLI::IsMember({"1", "2", "inf"}));
  rates->add_option("--f", f)->required();
  rates->add_option("--out", out)->required();

  auto* gadgets = app.add_subcommand("gadgets", "gadget conformance sweep");
  gadgets->add_option("--check", check)
      ->required()
      ->check(CLI::IsMember({"ru", "product", "elimzeros", "vectorprod", "polynomial", "shallow"}));
  gadgets->add_option("--U", gp.U);
  auto* M_opt = gadgets->add_option("--M", gp.M);
  gadgets->add_option("--s", gp.s)->check(CLI::Range(2, 64));
  gadgets->add_option("--k", gp.k);
  gadgets->add_option("--l", gp.l);
  gadgets->add_option("--n", gp.n);
  gadgets->add_option("--samples", gp.samples);
  gadgets->add_option("--seed", gp.seed);

  auto* sumlemma = app.add_subcommand("sumlemma", "level-sum tail inequality check");
  sumlemma->add_option("--d-max", d_max)->required();
  sumlemma->add_option("--n-max", n_max)->required();
  sumlemma->add_option("--t-max", t_max)->required();

  auto* compile = app.add_subcommand("compile", "synthesize and export a network");
  compile->add_option("--d", d)->required();
  compile->add_option("--m", m)->required();
  compile->add_option("--n", n)->required();
  compile->add_option("--s", s)->check(CLI::Range(2, 64));
  compile->add_option("--f", f)->required();
  compile->add_option("--export", out)->required();

  auto* eval = app.add_subcommand("eval", "evaluate an exported network");
  eval->add_option("--net", net_path)->required();
  eval->add_option("--point", point)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kUsage;
  }

  try {
    if (*rates) return cmd_rates(d, m, n_max, p, f, out);
    if (*gadgets) {
      gp.M_given = M_opt->count() > 0;
      return cmd_gadgets(check, gp);
    }
    if (*sumlemma) return cmd_sumlemma(d_max, n_max, t_max);
    if (*compile) return cmd_compile(d, m, n, s, f, out);
    if (*eval) return cmd_eval(net_path, point);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const BudgetError& e) {
    std::cerr << "budget: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
