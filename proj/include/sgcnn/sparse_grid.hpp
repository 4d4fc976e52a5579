#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace sgcnn {

/// Vector of non-negative integers used for levels, indices and degrees.
struct MultiIndex {
  std::vector<int> entries;

  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> e) : entries(std::move(e)) {}
  MultiIndex(std::initializer_list<int> e) : entries(e) {}

  std::size_t size() const { return entries.size(); }
  int operator[](std::size_t j) const { return entries[j]; }
  int& operator[](std::size_t j) { return entries[j]; }
  int norm1() const;
  int norm_inf() const;

  auto operator<=>(const MultiIndex&) const = default;
};

/// Levels above this are rejected; dyadic points stay exact in binary64.
inline constexpr int kMaxLevel = 30;

/// i * 2^{-l}, exact for l <= kMaxLevel.
double dyadic_point(int level, std::int64_t index);

/// Sparse-grid point x_{l,i}.
struct HierNode {
  MultiIndex level;
  MultiIndex index;

  HierNode() = default;
  /// Validates level >= 1, odd indices in [1, 2^l - 1].
  HierNode(MultiIndex l, MultiIndex i);

  std::size_t dim() const { return level.size(); }
  double coordinate(std::size_t j) const { return dyadic_point(level[j], index[j]); }
  double mesh(std::size_t j) const { return dyadic_point(level[j], 1); }
  std::vector<double> coordinates() const;

  auto operator<=>(const HierNode&) const = default;
};

struct LevelBlock {
  MultiIndex level;
  std::vector<MultiIndex> indices;
};

/// All (l, I_l) with |l|_1 <= n + d - 1, levels in graded-lexicographic order.
std::vector<LevelBlock> enumerate_levels(int n, int d);

/// Closed form sum_{|l|_1 <= n+d-1} prod_j 2^{l_j - 1}.
std::size_t sparse_grid_size(int n, int d);

/// alpha_j = min(m, l_j + 1).
MultiIndex basis_degree(int m, const MultiIndex& level);

/// The first `count` Lagrange nodes of the 1D point (level, index): the two
/// neighbours x+h, x-h, then coarser ancestors nearest-in-level first, ending
/// with the boundary points (nearest first).
std::vector<double> ancestors(int level, std::int64_t index, int count);

/// Hierarchical Lagrange basis function of degree `degree` in one direction.
struct Basis1D {
  int level = 1;
  std::int64_t index = 1;
  int degree = 2;
  double center = 0.5;
  double h = 0.5;
  std::vector<double> zeros;  // degree entries

  Basis1D(int level, std::int64_t index, int degree);

  double lower() const { return center - h; }
  double upper() const { return center + h; }
  double operator()(double x) const;
  /// Lagrange polynomial extended beyond the support.
  double polynomial(double x) const;
};

double eval_basis_tensor(const HierNode& node, const MultiIndex& degrees,
                         std::span<const double> x);

struct InterpolantTerm {
  HierNode node;
  MultiIndex degrees;
  double surplus = 0.0;
};

using PointFunction = std::function<double(std::span<const double>)>;

/// I_n f as a list of hierarchical terms. Immutable after construction.
class SparseGridInterpolant {
 public:
  SparseGridInterpolant(int d, int m, int n, std::vector<InterpolantTerm> terms);

  int dim() const { return d_; }
  int order() const { return m_; }
  int n() const { return n_; }
  std::size_t size() const { return terms_.size(); }
  const std::vector<InterpolantTerm>& terms() const { return terms_; }
  double max_abs_surplus() const;

  /// Only the terms whose support contains x are visited.
  double operator()(std::span<const double> x) const;

  nlohmann::json to_json() const;
  static SparseGridInterpolant from_json(const nlohmann::json& j);

 private:
  struct LevelGroup {
    MultiIndex level;
    std::unordered_map<std::uint64_t, std::size_t> by_index;
  };
  std::uint64_t index_key(const MultiIndex& level, const MultiIndex& index) const;

  int d_, m_, n_;
  std::vector<InterpolantTerm> terms_;
  std::vector<LevelGroup> groups_;
};

/// Interpolatory hierarchization in ascending level-sum order.
SparseGridInterpolant hierarchize(const PointFunction& f, int n, int m, int d);

}  // namespace sgcnn
