#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "sgcnn/korobov.hpp"
#include "sgcnn/sparse_grid.hpp"

namespace sgcnn {

inline constexpr double kInfNorm = std::numeric_limits<double>::infinity();

/// The 1D surplus functional v_{l,i}(f) = sum_q weight_q f(point_q), with
/// boundary weights chosen so it annihilates polynomials of degree <= order.
struct SurplusFunctional1D {
  std::vector<double> points;
  std::vector<double> weights;
  int order = 0;

  double apply(const std::function<double(double)>& f) const;
  /// K(t) = sum_q w_q (x_q - t)_+^order / order!
  double peano_kernel(double t) const;
};

/// Built by the ancestor-chain recursion v(f) = f(x) - sum_b v_b(f) phi_b(x),
/// independently of the multivariate hierarchization.
SurplusFunctional1D surplus_functional(int level, std::int64_t index, int degree);

/// v_{l,i} = int K(x) D^{r+1} f(x) dx by adaptive tensor Gauss-Legendre,
/// cells split at every kernel breakpoint. Requires f to vanish on the boundary.
double coefficient_integral(const KorobovTestFn& f, const HierNode& node, const MultiIndex& degrees,
                            double rtol = 1e-9);

/// Derivative orders r+1 used by coefficient_integral, per direction.
MultiIndex kernel_derivative_orders(const HierNode& node, const MultiIndex& degrees);

/// c(alpha) = prod 2^{a(a+1)/2} / (a+1)!
double coefficient_constant(const MultiIndex& degrees);

/// || D^{alpha+1} f ||_{L_p(supp phi_{l,i})}; p = kInfNorm uses max sampling.
double derivative_norm_on_support(const KorobovTestFn& f, const HierNode& node,
                                  const MultiIndex& degrees, double p);

/// Same norm over the hull of the functional's nodes. For degree >= 3 the
/// ancestors can sit outside supp phi, and the kernel reaches them.
double derivative_norm_on_kernel_hull(const KorobovTestFn& f, const HierNode& node,
                                      const MultiIndex& degrees, double p);

enum class NormDomain { support, kernel_hull };

/// Right-hand side of the coefficient bound
/// c(alpha) 2^{-d - |l.alpha|_1 - |l|_1/p'} ||D^{alpha+1} f||_{L_p(domain)}.
double coefficient_bound(const KorobovTestFn& f, const HierNode& node, const MultiIndex& degrees,
                         double p, NormDomain domain = NormDomain::support);

/// Numeric L_p norm of the tensor basis (max over >= 1e4 samples per
/// direction when p is infinite, a lower estimate).
double basis_lp_norm(const HierNode& node, const MultiIndex& degrees, double p);

/// 1.117^d 2^{d/p} 2^{-|l|_1/p}
double basis_norm_bound(const HierNode& node, double p);

}  // namespace sgcnn
