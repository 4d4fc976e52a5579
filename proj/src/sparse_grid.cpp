#include "sgcnn/sparse_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sgcnn {

int MultiIndex::norm1() const {
  return std::accumulate(entries.begin(), entries.end(), 0);
}

int MultiIndex::norm_inf() const {
  return entries.empty() ? 0 : *std::max_element(entries.begin(), entries.end());
}

double dyadic_point(int level, std::int64_t index) {
  return std::ldexp(static_cast<double>(index), -level);
}

HierNode::HierNode(MultiIndex l, MultiIndex i) : level(std::move(l)), index(std::move(i)) {
  if (level.size() != index.size() || level.size() == 0)
    throw std::invalid_argument("HierNode: level/index dimension mismatch");
  for (std::size_t j = 0; j < level.size(); ++j) {
    if (level[j] < 1 || level[j] > kMaxLevel)
      throw std::invalid_argument("HierNode: level out of range");
    const std::int64_t top = (std::int64_t{1} << level[j]) - 1;
    if (index[j] < 1 || index[j] > top || index[j] % 2 == 0)
      throw std::invalid_argument("HierNode: index must be odd and in [1, 2^l - 1]");
  }
}

std::vector<double> HierNode::coordinates() const {
  std::vector<double> x(dim());
  for (std::size_t j = 0; j < dim(); ++j) x[j] = coordinate(j);
  return x;
}

namespace {

// Visits every l in N_+^d with |l|_1 <= budget, graded then lexicographic.
void levels_with_sum(int d, int sum, std::vector<int>& prefix, std::vector<MultiIndex>& out) {
  const int used = std::accumulate(prefix.begin(), prefix.end(), 0);
  const int remaining_dims = d - static_cast<int>(prefix.size());
  if (remaining_dims == 1) {
    prefix.push_back(sum - used);
    out.emplace_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int v = 1; used + v + (remaining_dims - 1) <= sum; ++v) {
    prefix.push_back(v);
    levels_with_sum(d, sum, prefix, out);
    prefix.pop_back();
  }
}

std::vector<MultiIndex> odd_indices(const MultiIndex& level) {
  std::vector<MultiIndex> out;
  MultiIndex cur(std::vector<int>(level.size(), 1));
  while (true) {
    out.push_back(cur);
    std::size_t j = 0;
    for (; j < level.size(); ++j) {
      cur[j] += 2;
      if (cur[j] < (1 << level[j])) break;
      cur[j] = 1;
    }
    if (j == level.size()) break;
  }
  return out;
}

}  // namespace

std::vector<LevelBlock> enumerate_levels(int n, int d) {
  if (n < 1 || d < 1) throw std::invalid_argument("enumerate_levels: need n >= 1, d >= 1");
  if (n + d - 1 > kMaxLevel + d - 1) throw std::invalid_argument("enumerate_levels: level cap");
  std::vector<LevelBlock> blocks;
  for (int sum = d; sum <= n + d - 1; ++sum) {
    std::vector<MultiIndex> levels;
    std::vector<int> prefix;
    levels_with_sum(d, sum, prefix, levels);
    for (auto& l : levels) blocks.push_back({l, odd_indices(l)});
  }
  return blocks;
}

std::size_t sparse_grid_size(int n, int d) {
  // Number of compositions of `sum` into d positive parts times 2^{sum-d}.
  std::size_t total = 0;
  for (int sum = d; sum <= n + d - 1; ++sum) {
    // C(sum-1, d-1)
    std::size_t c = 1;
    for (int k = 1; k <= d - 1; ++k) c = c * static_cast<std::size_t>(sum - d + k) / k;
    total += c << (sum - d);
  }
  return total;
}

MultiIndex basis_degree(int m, const MultiIndex& level) {
  if (m < 2) throw std::invalid_argument("basis_degree: m must be >= 2");
  MultiIndex a = level;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (level[j] < 1) throw std::invalid_argument("basis_degree: level entries must be >= 1");
    a[j] = std::min(m, level[j] + 1);
  }
  return a;
}

std::vector<double> ancestors(int level, std::int64_t index, int count) {
  if (level < 1 || level > kMaxLevel || index % 2 == 0)
    throw std::invalid_argument("ancestors: invalid node");
  if (count > level + 1) throw std::invalid_argument("ancestors: not enough ancestors exist");
  if (count < 0) throw std::invalid_argument("ancestors: negative count");
  const double x = dyadic_point(level, index);
  const double h = dyadic_point(level, 1);
  std::vector<double> out{x + h, x - h};
  auto push = [&out](double p) {
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  };
  std::int64_t i = index;
  for (int l = level - 1; l >= 1; --l) {
    i = ((i + 1) / 2) % 2 == 1 ? (i + 1) / 2 : (i - 1) / 2;
    push(dyadic_point(l, i));
  }
  const double near = x < 0.5 ? 0.0 : 1.0;
  push(near);
  push(1.0 - near);
  out.resize(static_cast<std::size_t>(count));
  return out;
}

Basis1D::Basis1D(int l, std::int64_t i, int a)
    : level(l), index(i), degree(a), center(dyadic_point(l, i)), h(dyadic_point(l, 1)) {
  if (a < 2 || a > l + 1) throw std::invalid_argument("Basis1D: degree must be in [2, level+1]");
  zeros = ancestors(l, i, a);
}

double Basis1D::polynomial(double x) const {
  if (degree == 2) {
    const double t = (x - center) / h;
    return 1.0 - t * t;
  }
  double v = 1.0;
  for (double z : zeros) v *= (x - z) / (center - z);
  return v;
}

double Basis1D::operator()(double x) const {
  if (x < lower() || x > upper()) return 0.0;
  return polynomial(x);
}

double eval_basis_tensor(const HierNode& node, const MultiIndex& degrees,
                         std::span<const double> x) {
  if (x.size() != node.dim()) throw std::invalid_argument("eval_basis_tensor: dimension mismatch");
  double v = 1.0;
  for (std::size_t j = 0; j < node.dim() && v != 0.0; ++j)
    v *= Basis1D(node.level[j], node.index[j], degrees[j])(x[j]);
  return v;
}

SparseGridInterpolant::SparseGridInterpolant(int d, int m, int n, std::vector<InterpolantTerm> terms)
    : d_(d), m_(m), n_(n), terms_(std::move(terms)) {
  if (n + d - 1 > 62) throw std::invalid_argument("SparseGridInterpolant: level sum too large");
  std::map<MultiIndex, std::size_t> slot;
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    const auto& node = terms_[t].node;
    if (static_cast<int>(node.dim()) != d_)
      throw std::invalid_argument("SparseGridInterpolant: term dimension mismatch");
    if (node.level.norm1() > n_ + d_ - 1)
      throw std::invalid_argument("SparseGridInterpolant: term level exceeds n + d - 1");
    auto [it, fresh] = slot.try_emplace(node.level, groups_.size());
    if (fresh) groups_.push_back({node.level, {}});
    groups_[it->second].by_index.emplace(index_key(node.level, node.index), t);
  }
}

std::uint64_t SparseGridInterpolant::index_key(const MultiIndex& level, const MultiIndex& index) const {
  std::uint64_t key = 0;
  int shift = 0;
  for (std::size_t j = 0; j < level.size(); ++j) {
    key |= static_cast<std::uint64_t>(index[j]) << shift;
    shift += level[j];
  }
  return key;
}

double SparseGridInterpolant::max_abs_surplus() const {
  double v = 0.0;
  for (const auto& t : terms_) v = std::max(v, std::abs(t.surplus));
  return v;
}

double SparseGridInterpolant::operator()(std::span<const double> x) const {
  if (x.size() != static_cast<std::size_t>(d_))
    throw std::invalid_argument("SparseGridInterpolant: dimension mismatch");
  double sum = 0.0;
  MultiIndex idx(std::vector<int>(d_, 1));
  for (const auto& g : groups_) {
    bool inside = true;
    for (int j = 0; j < d_ && inside; ++j) {
      if (x[j] < 0.0 || x[j] > 1.0) inside = false;
      const std::int64_t top = (std::int64_t{1} << g.level[j]) - 1;
      auto c = static_cast<std::int64_t>(std::floor(std::ldexp(x[j], g.level[j])));
      std::int64_t i = (c % 2 == 1) ? c : c + 1;
      idx[j] = static_cast<int>(std::clamp<std::int64_t>(i, 1, top));
    }
    if (!inside) continue;
    auto it = g.by_index.find(index_key(g.level, idx));
    if (it == g.by_index.end()) continue;
    const auto& term = terms_[it->second];
    sum += term.surplus * eval_basis_tensor(term.node, term.degrees, x);
  }
  return sum;
}

nlohmann::json SparseGridInterpolant::to_json() const {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : terms_)
    terms.push_back({{"l", t.node.level.entries}, {"i", t.node.index.entries},
                     {"alpha", t.degrees.entries}, {"v", t.surplus}});
  return {{"d", d_}, {"m", m_}, {"n", n_}, {"terms", terms}};
}

SparseGridInterpolant SparseGridInterpolant::from_json(const nlohmann::json& j) {
  std::vector<InterpolantTerm> terms;
  for (const auto& t : j.at("terms")) {
    HierNode node(MultiIndex(t.at("l").get<std::vector<int>>()),
                  MultiIndex(t.at("i").get<std::vector<int>>()));
    terms.push_back({node, MultiIndex(t.at("alpha").get<std::vector<int>>()), t.at("v").get<double>()});
  }
  return SparseGridInterpolant(j.at("d").get<int>(), j.at("m").get<int>(), j.at("n").get<int>(),
                               std::move(terms));
}

SparseGridInterpolant hierarchize(const PointFunction& f, int n, int m, int d) {
  const auto blocks = enumerate_levels(n, d);
  std::vector<InterpolantTerm> terms;
  std::size_t b = 0;
  for (int sum = d; sum <= n + d - 1; ++sum) {
    // Terms of equal level sum vanish at each other's nodes, so the coarser
    // interpolant is all that has to be subtracted.
    const SparseGridInterpolant coarse(d, m, n, terms);
    std::vector<InterpolantTerm> fresh;
    for (; b < blocks.size() && blocks[b].level.norm1() == sum; ++b) {
      const auto degrees = basis_degree(m, blocks[b].level);
      for (const auto& i : blocks[b].indices) {
        HierNode node(blocks[b].level, i);
        const auto x = node.coordinates();
        fresh.push_back({node, degrees, f(x) - coarse(x)});
      }
    }
    terms.insert(terms.end(), fresh.begin(), fresh.end());
  }
  return SparseGridInterpolant(d, m, n, std::move(terms));
}

}  // namespace sgcnn
