#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "genmod/error.hpp"

namespace genmod {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, Index>;

struct WeightedEdge {
  Index i = 0;
  Index j = 0;
  double w = 1.0;
};

/// A subset of {0, ..., owner_n - 1}, kept sorted and duplicate-free.
class NodeSet {
public:
  NodeSet() = default;

  NodeSet(Index owner_n, std::vector<Index> members)
      : owner_n_(owner_n), members_(std::move(members)) {
    if (owner_n_ < 0)
      detail::fail(ErrorCode::invalid_argument, "NodeSet: negative owner size");
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    if (!members_.empty() && (members_.front() < 0 || members_.back() >= owner_n_))
      detail::fail(ErrorCode::index_out_of_range,
                   "NodeSet: member out of range [0, " + std::to_string(owner_n_) + ")");
  }

  static NodeSet all(Index n) {
    std::vector<Index> m(static_cast<std::size_t>(n));
    std::iota(m.begin(), m.end(), Index{0});
    return NodeSet(n, std::move(m));
  }

  static NodeSet none(Index n) { return NodeSet(n, {}); }

  template <typename Pred>
  static NodeSet where(Index n, Pred&& pred) {
    std::vector<Index> m;
    for (Index i = 0; i < n; ++i)
      if (pred(i))
        m.push_back(i);
    return NodeSet(n, std::move(m));
  }

  /// Bit i of `bits` selects node i; used by exhaustive enumeration.
  static NodeSet from_bits(Index n, std::uint64_t bits) {
    return where(n, [bits](Index i) { return ((bits >> i) & 1U) != 0; });
  }

  Index owner_n() const noexcept { return owner_n_; }
  Index size() const noexcept { return static_cast<Index>(members_.size()); }
  bool empty() const noexcept { return members_.empty(); }
  const std::vector<Index>& members() const noexcept { return members_; }
  Index operator[](Index k) const { return members_[static_cast<std::size_t>(k)]; }
  auto begin() const noexcept { return members_.begin(); }
  auto end() const noexcept { return members_.end(); }

  bool contains(Index i) const {
    return std::binary_search(members_.begin(), members_.end(), i);
  }

  NodeSet complement() const {
    std::vector<char> in = mask();
    return where(owner_n_, [&](Index i) { return in[static_cast<std::size_t>(i)] == 0; });
  }

  std::vector<char> mask() const {
    std::vector<char> in(static_cast<std::size_t>(owner_n_), 0);
    for (Index i : members_)
      in[static_cast<std::size_t>(i)] = 1;
    return in;
  }

  /// Characteristic vector 1_S.
  Vector indicator() const {
    Vector x = Vector::Zero(owner_n_);
    for (Index i : members_)
      x(i) = 1.0;
    return x;
  }

  bool is_subset_of(const NodeSet& other) const {
    return std::includes(other.members_.begin(), other.members_.end(), members_.begin(),
                         members_.end());
  }

  friend bool operator==(const NodeSet&, const NodeSet&) = default;

private:
  Index owner_n_ = 0;
  std::vector<Index> members_;
};

inline bool disjoint(const NodeSet& a, const NodeSet& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j)
      return false;
    if (*i < *j)
      ++i;
    else
      ++j;
  }
  return true;
}

/// Disjoint-set forest with path halving and union by size.
class DisjointSet {
public:
  explicit DisjointSet(Index n) : parent_(static_cast<std::size_t>(n)), size_(parent_.size(), 1) {
    std::iota(parent_.begin(), parent_.end(), Index{0});
  }

  Index find(Index x) {
    while (parent_[static_cast<std::size_t>(x)] != x) {
      auto& p = parent_[static_cast<std::size_t>(x)];
      p = parent_[static_cast<std::size_t>(p)];
      x = p;
    }
    return x;
  }

  bool unite(Index a, Index b) {
    a = find(a);
    b = find(b);
    if (a == b)
      return false;
    if (size_[static_cast<std::size_t>(a)] < size_[static_cast<std::size_t>(b)])
      std::swap(a, b);
    parent_[static_cast<std::size_t>(b)] = a;
    size_[static_cast<std::size_t>(a)] += size_[static_cast<std::size_t>(b)];
    return true;
  }

private:
  std::vector<Index> parent_;
  std::vector<Index> size_;
};

/// Immutable undirected weighted graph, loops allowed.
///
/// The adjacency is stored as a full symmetric CSR matrix; zero weights are
/// never stored, so "edge exists" means a stored entry. The degree of a node
/// counts its loop weight once, i.e. d = A 1.
class Graph {
public:
  Graph() = default;

  /// Node count is one past the largest index seen.
  static Graph from_edge_list(const std::vector<WeightedEdge>& entries) {
    Index n = 0;
    for (const auto& e : entries)
      n = std::max({n, e.i + 1, e.j + 1});
    return from_edge_list(n, entries);
  }

  static Graph from_edge_list(Index n, const std::vector<WeightedEdge>& entries) {
    if (entries.empty() || n <= 0)
      detail::fail(ErrorCode::empty_graph, "graph has no entries");
    std::vector<Eigen::Triplet<double, Index>> trips;
    trips.reserve(entries.size() * 2);
    for (std::size_t k = 0; k < entries.size(); ++k) {
      const auto& e = entries[k];
      const std::string where = "entry " + std::to_string(k) + " (" + std::to_string(e.i) +
                                ", " + std::to_string(e.j) + ", " + std::to_string(e.w) + ")";
      if (!std::isfinite(e.w))
        detail::fail(ErrorCode::invalid_argument, "non-finite weight at " + where);
      if (e.w < 0.0)
        detail::fail(ErrorCode::negative_weight, "negative weight at " + where);
      if (e.i < 0 || e.j < 0 || e.i >= n || e.j >= n)
        detail::fail(ErrorCode::index_out_of_range, "node index out of range at " + where);
      if (e.w == 0.0)
        continue;
      trips.emplace_back(e.i, e.j, e.w);
      if (e.i != e.j)
        trips.emplace_back(e.j, e.i, e.w);
    }
    SparseMatrix a(n, n);
    a.setFromTriplets(trips.begin(), trips.end());
    return Graph(std::move(a));
  }

  /// Takes a symmetric nonnegative matrix as the adjacency.
  static Graph from_adjacency(const SparseMatrix& a) {
    if (a.rows() != a.cols())
      detail::fail(ErrorCode::dimension_mismatch, "adjacency must be square");
    if (a.rows() == 0)
      detail::fail(ErrorCode::empty_graph, "graph has no nodes");
    SparseMatrix sym = a;
    sym.prune(0.0);
    for (Index i = 0; i < sym.outerSize(); ++i)
      for (SparseMatrix::InnerIterator it(sym, i); it; ++it) {
        if (!(it.value() >= 0.0) || !std::isfinite(it.value()))
          detail::fail(ErrorCode::negative_weight,
                       "adjacency entry (" + std::to_string(it.row()) + ", " +
                           std::to_string(it.col()) + ") is negative or not finite");
        if (a.coeff(it.col(), it.row()) != it.value())
          detail::fail(ErrorCode::invalid_argument, "adjacency is not symmetric");
      }
    sym.makeCompressed();
    return Graph(std::move(sym));
  }

  static Graph from_dense(const Matrix& a) {
    SparseMatrix s = a.sparseView();
    return from_adjacency(s);
  }

  Index n() const noexcept { return adj_.rows(); }
  const SparseMatrix& adjacency() const noexcept { return adj_; }
  const Vector& degrees() const noexcept { return deg_; }
  double degree(Index i) const { return deg_(i); }
  double volume() const noexcept { return vol_; }
  double weight(Index i, Index j) const { return adj_.coeff(i, j); }

  /// Number of undirected edges, loops included.
  Index edge_count() const {
    Index loops = 0;
    for (Index i = 0; i < n(); ++i)
      if (adj_.coeff(i, i) != 0.0)
        ++loops;
    return (adj_.nonZeros() - loops) / 2 + loops;
  }

  template <typename F>
  void for_each_neighbor(Index i, F&& f) const {
    for (SparseMatrix::InnerIterator it(adj_, i); it; ++it)
      f(it.col(), it.value());
  }

  Matrix dense_adjacency() const { return Matrix(adj_); }

private:
  explicit Graph(SparseMatrix a) : adj_(std::move(a)) {
    adj_.makeCompressed();
    deg_ = adj_ * Vector::Ones(adj_.cols());
    vol_ = deg_.sum();
  }

  SparseMatrix adj_;
  Vector deg_;
  double vol_ = 0.0;
};

namespace detail {
inline void check_owner(const Graph& g, const NodeSet& s) {
  if (s.owner_n() != g.n())
    fail(ErrorCode::index_out_of_range,
         "node set over " + std::to_string(s.owner_n()) + " nodes used with a graph of " +
             std::to_string(g.n()) + " nodes");
}
} // namespace detail

inline double volume_of(const Graph& g, const NodeSet& s) {
  detail::check_owner(g, s);
  double vol = 0.0;
  for (Index i : s)
    vol += g.degree(i);
  return vol;
}

/// e_in(S) = 1_S' A 1_S: off-diagonal pairs counted twice, loops once.
inline double internal_weight(const Graph& g, const NodeSet& s) {
  detail::check_owner(g, s);
  const auto in = s.mask();
  double total = 0.0;
  for (Index i : s)
    g.for_each_neighbor(i, [&](Index j, double w) {
      if (in[static_cast<std::size_t>(j)])
        total += w;
    });
  return total;
}

/// 1_S' A 1_T.
inline double cross_weight(const Graph& g, const NodeSet& s, const NodeSet& t) {
  detail::check_owner(g, s);
  detail::check_owner(g, t);
  const auto in = t.mask();
  double total = 0.0;
  for (Index i : s)
    g.for_each_neighbor(i, [&](Index j, double w) {
      if (in[static_cast<std::size_t>(j)])
        total += w;
    });
  return total;
}

struct Subgraph {
  Graph graph;
  std::vector<Index> to_parent; ///< local index -> parent index
};

/// G(S): adjacency is the principal submatrix A(S), degrees recomputed inside S.
inline Subgraph induced_subgraph(const Graph& g, const NodeSet& s) {
  detail::check_owner(g, s);
  if (s.empty())
    detail::fail(ErrorCode::invalid_argument, "induced_subgraph: empty node set");
  std::vector<Index> local(static_cast<std::size_t>(g.n()), -1);
  for (Index k = 0; k < s.size(); ++k)
    local[static_cast<std::size_t>(s[k])] = k;
  std::vector<Eigen::Triplet<double, Index>> trips;
  for (Index k = 0; k < s.size(); ++k)
    g.for_each_neighbor(s[k], [&](Index j, double w) {
      if (Index lj = local[static_cast<std::size_t>(j)]; lj >= 0)
        trips.emplace_back(k, lj, w);
    });
  SparseMatrix a(s.size(), s.size());
  a.setFromTriplets(trips.begin(), trips.end());
  return {Graph::from_adjacency(a), s.members()};
}

/// Component label per node (labels are 0..count-1 in order of first node).
struct Components {
  std::vector<Index> label;
  Index count = 0;
};

inline Components connected_components(const Graph& g) {
  DisjointSet dsu(g.n());
  for (Index i = 0; i < g.n(); ++i)
    g.for_each_neighbor(i, [&](Index j, double) { dsu.unite(i, j); });
  Components c;
  c.label.assign(static_cast<std::size_t>(g.n()), -1);
  std::vector<Index> root_label(static_cast<std::size_t>(g.n()), -1);
  for (Index i = 0; i < g.n(); ++i) {
    auto& rl = root_label[static_cast<std::size_t>(dsu.find(i))];
    if (rl < 0)
      rl = c.count++;
    c.label[static_cast<std::size_t>(i)] = rl;
  }
  return c;
}

/// True iff G(S) has a single component. The empty set counts as connected.
inline bool is_connected_subset(const Graph& g, const NodeSet& s) {
  detail::check_owner(g, s);
  if (s.size() <= 1)
    return true;
  auto in = s.mask();
  std::vector<Index> stack{s[0]};
  in[static_cast<std::size_t>(s[0])] = 0;
  Index seen = 1;
  while (!stack.empty()) {
    Index i = stack.back();
    stack.pop_back();
    g.for_each_neighbor(i, [&](Index j, double) {
      if (in[static_cast<std::size_t>(j)]) {
        in[static_cast<std::size_t>(j)] = 0;
        ++seen;
        stack.push_back(j);
      }
    });
  }
  return seen == s.size();
}

inline bool is_connected(const Graph& g) { return is_connected_subset(g, NodeSet::all(g.n())); }

/// Copy of g with weight eps added to the pair (i, j).
inline Graph with_added_weight(const Graph& g, Index i, Index j, double eps) {
  if (i < 0 || j < 0 || i >= g.n() || j >= g.n())
    detail::fail(ErrorCode::index_out_of_range, "with_added_weight: node out of range");
  if (!(eps >= 0.0))
    detail::fail(ErrorCode::invalid_argument, "with_added_weight: eps must be nonnegative");
  std::vector<Eigen::Triplet<double, Index>> trips;
  for (Index r = 0; r < g.n(); ++r)
    g.for_each_neighbor(r, [&](Index c, double w) { trips.emplace_back(r, c, w); });
  trips.emplace_back(i, j, eps);
  if (i != j)
    trips.emplace_back(j, i, eps);
  SparseMatrix a(g.n(), g.n());
  a.setFromTriplets(trips.begin(), trips.end());
  return Graph::from_adjacency(a);
}

} // namespace genmod
