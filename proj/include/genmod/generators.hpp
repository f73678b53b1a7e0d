#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "genmod/graph.hpp"

namespace genmod::generators {

/// Star on m + 1 nodes (center 0) with a loop of weight sqrt(m) on every node.
inline Graph star_with_loops(Index m) {
  if (m < 1)
    detail::fail(ErrorCode::invalid_argument, "star_with_loops: m must be >= 1");
  std::vector<WeightedEdge> e;
  const double loop = std::sqrt(static_cast<double>(m));
  for (Index i = 0; i <= m; ++i)
    e.push_back({i, i, loop});
  for (Index i = 1; i <= m; ++i)
    e.push_back({0, i, 1.0});
  return Graph::from_edge_list(m + 1, e);
}

inline Graph path(Index n) {
  if (n < 2)
    detail::fail(ErrorCode::invalid_argument, "path: n must be >= 2");
  std::vector<WeightedEdge> e;
  for (Index i = 0; i + 1 < n; ++i)
    e.push_back({i, i + 1, 1.0});
  return Graph::from_edge_list(n, e);
}

inline Graph complete(Index n) {
  if (n < 2)
    detail::fail(ErrorCode::invalid_argument, "complete: n must be >= 2");
  std::vector<WeightedEdge> e;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      e.push_back({i, j, 1.0});
  return Graph::from_edge_list(n, e);
}

/// Two triangles {0,1,2} and {3,4,5} joined by the edge 2-3.
inline Graph barbell() {
  return Graph::from_edge_list(
      6, {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}, {2, 3}});
}

/// `count` cliques of `size` nodes in a ring; clique c owns nodes
/// c*size .. c*size+size-1 and its last node links to the first node of the next.
inline Graph clique_ring(Index count, Index size) {
  if (count < 2 || size < 2)
    detail::fail(ErrorCode::invalid_argument, "clique_ring: need >= 2 cliques of >= 2 nodes");
  std::vector<WeightedEdge> e;
  for (Index c = 0; c < count; ++c) {
    const Index base = c * size;
    for (Index i = 0; i < size; ++i)
      for (Index j = i + 1; j < size; ++j)
        e.push_back({base + i, base + j, 1.0});
    if (count > 2 || c == 0)
      e.push_back({base + size - 1, ((c + 1) % count) * size, 1.0});
  }
  return Graph::from_edge_list(count * size, e);
}

/// `blocks` triangles, each node carrying a loop of weight `loop`, block c
/// linked to block c+1 by a single edge.
inline Graph loop_heavy_blocks(Index blocks, double loop = 2.0) {
  if (blocks < 1)
    detail::fail(ErrorCode::invalid_argument, "loop_heavy_blocks: need >= 1 block");
  std::vector<WeightedEdge> e;
  for (Index c = 0; c < blocks; ++c) {
    const Index b = 3 * c;
    e.insert(e.end(), {{b, b + 1}, {b, b + 2}, {b + 1, b + 2}});
    for (Index i = 0; i < 3; ++i)
      e.push_back({b + i, b + i, loop});
    if (c + 1 < blocks)
      e.push_back({b + 2, b + 3, 1.0});
  }
  return Graph::from_edge_list(3 * blocks, e);
}

struct RandomGraphParams {
  Index n = 10;
  double density = 0.3;
  double max_weight = 2.0;
};

/// Random spanning tree plus independent extra edges with probability
/// `density`; weights uniform in (0, max_weight]. Always connected.
inline Graph random_connected(const RandomGraphParams& p, std::mt19937_64& rng) {
  if (p.n < 2)
    detail::fail(ErrorCode::invalid_argument, "random_connected: n must be >= 2");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto weight = [&] { return p.max_weight * (1.0 - unit(rng)); }; // (0, max]
  std::vector<WeightedEdge> e;
  std::vector<char> used(static_cast<std::size_t>(p.n * p.n), 0);
  for (Index i = 1; i < p.n; ++i) {
    const Index j = std::uniform_int_distribution<Index>(0, i - 1)(rng);
    e.push_back({i, j, weight()});
    used[static_cast<std::size_t>(i * p.n + j)] = used[static_cast<std::size_t>(j * p.n + i)] = 1;
  }
  for (Index i = 0; i < p.n; ++i)
    for (Index j = i + 1; j < p.n; ++j)
      if (!used[static_cast<std::size_t>(i * p.n + j)] && unit(rng) < p.density)
        e.push_back({i, j, weight()});
  return Graph::from_edge_list(p.n, e);
}

} // namespace genmod::generators
