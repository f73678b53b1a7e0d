#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "genmod/spectral.hpp"

namespace genmod {

struct PartitionOptions {
  SolverOptions solver;
  /// Eigenvector entries with |x_i| <= zero_tol (x has unit norm) count as zero
  /// and land in the positive part.
  double zero_tol = 1e-12;
  /// Subsets of at most this many nodes are not split further.
  Index size_floor = 1;
  int max_depth = 256;
  /// Refuse splits that lower Q(P) + Q(N) below Q(S).
  bool greedy_q = false;
};

/// Sign split of the oriented leading eigenvector: P = {x_i >= 0}, N = the rest.
struct Bipartition {
  NodeSet positive;
  NodeSet negative;
  LeadingPair leading;
  bool positive_connected = false;
  bool negative_connected = false;
  /// The split subset induces a connected subgraph, so P must be connected.
  bool guaranteed = false;
};

namespace detail {

/// Splits `subset` (indices of g) with the leading eigenvector of `ms`, the
/// matrix over that subset. Sets are returned in g's indexing.
inline Bipartition split_subset(const ModularityMatrix& ms, const Graph& g, const NodeSet& subset,
                                const PartitionOptions& opt) {
  Bipartition b;
  b.leading = leading_eigenpair(ms, opt.solver);
  std::vector<Index> pos, neg;
  for (Index k = 0; k < subset.size(); ++k)
    (b.leading.vector(k) >= -opt.zero_tol ? pos : neg).push_back(subset[k]);
  b.positive = NodeSet(g.n(), std::move(pos));
  b.negative = NodeSet(g.n(), std::move(neg));
  b.positive_connected = is_connected_subset(g, b.positive);
  b.negative_connected = is_connected_subset(g, b.negative);
  b.guaranteed = is_connected_subset(g, subset);
  return b;
}

} // namespace detail

/// Newman-style bipartition of a connected graph.
/// A disconnected positive part means the eigensolver failed and is reported
/// as an internal-consistency error.
inline Bipartition spectral_bipartition(const ModularityMatrix& m, const Graph& g,
                                        const PartitionOptions& opt = {}) {
  if (m.n() != g.n())
    detail::fail(ErrorCode::dimension_mismatch, "spectral_bipartition: size mismatch");
  if (!is_connected(g))
    detail::fail(ErrorCode::disconnected_graph, "spectral_bipartition: graph is not connected");
  auto b = detail::split_subset(m, g, NodeSet::all(g.n()), opt);
  if (!b.positive_connected)
    detail::fail(ErrorCode::internal_consistency,
                 "positive part of the oriented leading eigenvector is disconnected");
  return b;
}

struct NodalDomainQuery {
  Vector x;       ///< oriented leading eigenvector of M
  Vector y;       ///< positive Perron vector of A + W
  double epsilon = 0.0;
  double zero_tol = 1e-12;
};

/// S = {i : x_i + eps y_i >= 0}.
inline NodeSet nodal_domain(const NodalDomainQuery& q) {
  if (!(q.epsilon >= 0.0))
    detail::fail(ErrorCode::invalid_argument, "nodal_domain: epsilon must be nonnegative");
  if (q.x.size() != q.y.size())
    detail::fail(ErrorCode::dimension_mismatch, "nodal_domain: x and y differ in length");
  if (!(q.y.size() == 0 || q.y.minCoeff() > 0.0))
    detail::fail(ErrorCode::invalid_argument, "nodal_domain: y must be strictly positive");
  return NodeSet::where(q.x.size(),
                        [&](Index i) { return q.x(i) + q.epsilon * q.y(i) >= -q.zero_tol; });
}

enum class StopReason {
  none,
  no_positive_eigenvalue,
  singleton,
  size_floor,
  max_depth,
  improper_split,
  q_decrease,
};

inline std::string_view to_string(StopReason r) {
  switch (r) {
  case StopReason::none: return "none";
  case StopReason::no_positive_eigenvalue: return "no-positive-eigenvalue";
  case StopReason::singleton: return "singleton";
  case StopReason::size_floor: return "size-floor";
  case StopReason::max_depth: return "max-depth";
  case StopReason::improper_split: return "improper-split";
  case StopReason::q_decrease: return "q-decrease";
  }
  return "unknown";
}

struct DendrogramNode {
  NodeSet subset;
  int depth = 0;
  Index parent = -1;
  std::vector<Index> children;
  /// Q(subset) under the root matrix.
  double q = 0.0;
  bool connected = false;
  Model matrix_model = Model::custom;
  /// m_G of the subset matrix, when it was computed.
  std::optional<double> leading_value;
  std::optional<bool> leading_simple;
  std::optional<Bipartition> split;
  StopReason stop = StopReason::none;

  bool is_leaf() const { return children.empty(); }
};

/// SSGB output. nodes[0] is the root; children are stored smaller subset first.
struct Dendrogram {
  ModelSpec model;
  Index n = 0;
  std::vector<DendrogramNode> nodes;
  /// Q of the leaf partition under the root matrix.
  double modularity = 0.0;

  std::vector<Index> leaves() const {
    std::vector<Index> out;
    std::vector<Index> stack{0};
    while (!stack.empty()) {
      Index k = stack.back();
      stack.pop_back();
      const auto& node = nodes[static_cast<std::size_t>(k)];
      if (node.is_leaf())
        out.push_back(k);
      for (auto it = node.children.rbegin(); it != node.children.rend(); ++it)
        stack.push_back(*it);
    }
    return out;
  }

  std::vector<NodeSet> leaf_sets() const {
    std::vector<NodeSet> out;
    for (Index k : leaves())
      out.push_back(nodes[static_cast<std::size_t>(k)].subset);
    return out;
  }

  bool any_multiple_leading() const {
    for (const auto& node : nodes)
      if (node.leading_simple && !*node.leading_simple)
        return true;
    return false;
  }
};

/// Successive spectral graph bipartition.
///
/// Each subset S is split by the sign pattern of the leading eigenvector of
/// its subset matrix (see subgraph_matrix). Recursion stops when that matrix
/// has no eigenvalue above tau * ||M^S||_F, on singletons, at the size floor or
/// depth limit, on improper splits, and in greedy mode on Q-decreasing splits.
inline Dendrogram ssgb(const Graph& g, const ModelSpec& spec, const PartitionOptions& opt = {}) {
  if (!is_connected(g))
    detail::fail(ErrorCode::disconnected_graph, "ssgb: graph is not connected");
  const ModularityMatrix root = build(g, spec);
  Dendrogram d;
  d.model = spec;
  d.n = g.n();

  std::function<Index(NodeSet, int, Index, const std::string&)> visit =
      [&](NodeSet subset, int depth, Index parent, const std::string& path) -> Index {
    const Index id = static_cast<Index>(d.nodes.size());
    d.nodes.emplace_back();
    auto node = [&]() -> DendrogramNode& { return d.nodes[static_cast<std::size_t>(id)]; };
    node().subset = subset;
    node().depth = depth;
    node().parent = parent;
    node().q = modularity(root, subset).q;
    node().connected = is_connected_subset(g, subset);

    if (subset.size() == 1) {
      node().stop = StopReason::singleton;
      return id;
    }
    if (subset.size() <= opt.size_floor) {
      node().stop = StopReason::size_floor;
      return id;
    }
    if (depth >= opt.max_depth) {
      node().stop = StopReason::max_depth;
      return id;
    }

    try {
      const ModularityMatrix ms =
          subset.size() == g.n() ? root : subgraph_matrix(root, g, subset);
      node().matrix_model = ms.model();
      Bipartition b = detail::split_subset(ms, g, subset, opt);
      node().leading_value = b.leading.value;
      node().leading_simple = b.leading.simple;
      if (b.leading.value <= opt.solver.sign_tol * b.leading.frobenius) {
        node().stop = StopReason::no_positive_eigenvalue;
        return id;
      }
      if (b.positive.empty() || b.negative.empty()) {
        node().stop = StopReason::improper_split;
        return id;
      }
      if (opt.greedy_q && joint_modularity(root, b.positive, b.negative) > 0.0) {
        node().stop = StopReason::q_decrease;
        return id;
      }
      node().split = std::move(b);
    } catch (const ConvergenceError& e) {
      throw ConvergenceError(std::string(e.what()) + " (at dendrogram node " + path + ")",
                             e.residual(), e.iterations());
    } catch (const Error& e) {
      throw Error(e.code(), std::string(e.what()) + " (at dendrogram node " + path + ")");
    }
    NodeSet first = node().split->positive;
    NodeSet second = node().split->negative;
    if (second.size() < first.size())
      std::swap(first, second);
    Index c0 = visit(std::move(first), depth + 1, id, path + ".0");
    Index c1 = visit(std::move(second), depth + 1, id, path + ".1");
    node().children = {c0, c1};
    return id;
  };
  visit(NodeSet::all(g.n()), 0, -1, "root");
  d.modularity = partition_modularity(root, d.leaf_sets());
  return d;
}

struct AuditReport {
  Index splits = 0;
  /// Splits of subsets inducing a connected subgraph.
  Index guaranteed_splits = 0;
  Index guaranteed_violations = 0;
  Index positive_connected = 0;
  Index negative_connected = 0;
  Index parts_total = 0;
  Index parts_connected = 0;
  Index leaves = 0;
  Index leaves_connected = 0;
  bool passes = true;
};

/// Re-checks every split: positive parts of connected subsets must be
/// connected, and at least half of all split-produced parts must be connected.
inline AuditReport connectivity_audit(const Dendrogram& d, const Graph& g) {
  if (d.n != g.n())
    detail::fail(ErrorCode::dimension_mismatch, "connectivity_audit: dendrogram/graph mismatch");
  AuditReport r;
  for (const auto& node : d.nodes) {
    if (node.is_leaf()) {
      ++r.leaves;
      if (is_connected_subset(g, node.subset))
        ++r.leaves_connected;
      continue;
    }
    const auto& b = *node.split;
    ++r.splits;
    const bool pc = is_connected_subset(g, b.positive);
    const bool nc = is_connected_subset(g, b.negative);
    const bool guaranteed = is_connected_subset(g, node.subset);
    r.positive_connected += pc ? 1 : 0;
    r.negative_connected += nc ? 1 : 0;
    r.parts_total += 2;
    r.parts_connected += (pc ? 1 : 0) + (nc ? 1 : 0);
    if (guaranteed) {
      ++r.guaranteed_splits;
      if (!pc)
        ++r.guaranteed_violations;
    }
  }
  r.passes = r.guaranteed_violations == 0 && 2 * r.parts_connected >= r.parts_total;
  return r;
}

} // namespace genmod
