#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "genmod/graph.hpp"

namespace genmod::io {

enum class Format { edgelist, matrixmarket };

inline Format parse_format(std::string_view name) {
  if (name == "edgelist")
    return Format::edgelist;
  if (name == "matrixmarket" || name == "mtx")
    return Format::matrixmarket;
  detail::fail(ErrorCode::invalid_argument, "unknown input format '" + std::string(name) + "'");
}

/// A graph together with the external (1-based) ID of every internal node.
struct LoadedGraph {
  Graph graph;
  std::vector<std::int64_t> ids;

  /// Internal index of an external ID.
  Index index_of(std::int64_t id) const {
    auto it = std::lower_bound(ids.begin(), ids.end(), id);
    if (it == ids.end() || *it != id)
      detail::fail(ErrorCode::index_out_of_range, "unknown node ID " + std::to_string(id));
    return static_cast<Index>(it - ids.begin());
  }
};

namespace detail {

[[noreturn]] inline void parse_fail(std::size_t line, const std::string& what) {
  genmod::detail::fail(ErrorCode::parse_error, "line " + std::to_string(line) + ": " + what);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r'))
      ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r')
      ++j;
    if (j > i)
      out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::int64_t parse_id(std::string_view tok, std::size_t line) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    parse_fail(line, "invalid node ID '" + std::string(tok) + "'");
  if (v < 1)
    parse_fail(line, "node IDs are 1-based, got " + std::to_string(v));
  return v;
}

inline double parse_weight(std::string_view tok, std::size_t line) {
  // from_chars for double is not universally available; strtod on a copy.
  std::string s(tok);
  char* end = nullptr;
  double w = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(w))
    parse_fail(line, "invalid weight '" + s + "'");
  if (w < 0.0)
    parse_fail(line, "negative weight " + s);
  return w;
}

} // namespace detail

/// Whitespace-separated "i j [w]" lines with 1-based IDs, '#' comments.
/// IDs are compacted to 0..n-1 in increasing ID order.
inline LoadedGraph read_edgelist(std::istream& in) {
  struct Raw {
    std::int64_t i, j;
    double w;
  };
  std::vector<Raw> raw;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv(line);
    if (auto hash = sv.find('#'); hash != std::string_view::npos)
      sv = sv.substr(0, hash);
    auto tok = detail::split_ws(sv);
    if (tok.empty())
      continue;
    if (tok.size() < 2 || tok.size() > 3)
      detail::parse_fail(lineno, "expected 'i j [w]'");
    Raw r{detail::parse_id(tok[0], lineno), detail::parse_id(tok[1], lineno), 1.0};
    if (tok.size() == 3)
      r.w = detail::parse_weight(tok[2], lineno);
    raw.push_back(r);
  }
  if (raw.empty())
    genmod::detail::fail(ErrorCode::empty_graph, "edge list contains no edges");

  LoadedGraph out;
  for (const auto& r : raw) {
    out.ids.push_back(r.i);
    out.ids.push_back(r.j);
  }
  std::sort(out.ids.begin(), out.ids.end());
  out.ids.erase(std::unique(out.ids.begin(), out.ids.end()), out.ids.end());
  std::vector<WeightedEdge> edges;
  edges.reserve(raw.size());
  for (const auto& r : raw)
    edges.push_back({out.index_of(r.i), out.index_of(r.j), r.w});
  out.graph = Graph::from_edge_list(static_cast<Index>(out.ids.size()), edges);
  return out;
}

/// Matrix Market coordinate format, symmetric storage (real, integer or pattern).
inline LoadedGraph read_matrix_market(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line))
    genmod::detail::fail(ErrorCode::parse_error, "empty Matrix Market file");
  ++lineno;
  std::string lower = line;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  auto head = detail::split_ws(lower);
  if (head.size() != 5 || head[0] != "%%matrixmarket" || head[1] != "matrix" ||
      head[2] != "coordinate")
    detail::parse_fail(lineno, "expected '%%MatrixMarket matrix coordinate <field> symmetric'");
  const bool pattern = head[3] == "pattern";
  if (!pattern && head[3] != "real" && head[3] != "integer")
    detail::parse_fail(lineno, "unsupported field '" + std::string(head[3]) + "'");
  if (head[4] != "symmetric")
    detail::parse_fail(lineno, "only symmetric matrices describe undirected graphs");

  Index rows = -1, cols = -1, nnz = -1;
  std::vector<WeightedEdge> edges;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv(line);
    if (!sv.empty() && sv[0] == '%')
      continue;
    auto tok = detail::split_ws(sv);
    if (tok.empty())
      continue;
    if (rows < 0) {
      if (tok.size() != 3)
        detail::parse_fail(lineno, "expected size line 'rows cols nnz'");
      rows = detail::parse_id(tok[0], lineno);
      cols = detail::parse_id(tok[1], lineno);
      nnz = tok[2] == "0" ? 0 : detail::parse_id(tok[2], lineno);
      if (rows != cols)
        detail::parse_fail(lineno, "adjacency matrix must be square");
      continue;
    }
    if (tok.size() != (pattern ? 2U : 3U))
      detail::parse_fail(lineno, pattern ? "expected 'i j'" : "expected 'i j value'");
    auto i = detail::parse_id(tok[0], lineno);
    auto j = detail::parse_id(tok[1], lineno);
    if (i > rows || j > cols)
      detail::parse_fail(lineno, "entry outside the declared matrix size");
    double w = pattern ? 1.0 : detail::parse_weight(tok[2], lineno);
    edges.push_back({static_cast<Index>(i - 1), static_cast<Index>(j - 1), w});
  }
  if (rows < 0)
    genmod::detail::fail(ErrorCode::parse_error, "missing Matrix Market size line");
  if (static_cast<Index>(edges.size()) != nnz)
    genmod::detail::fail(ErrorCode::parse_error,
                         "declared " + std::to_string(nnz) + " entries, read " +
                             std::to_string(edges.size()));
  LoadedGraph out;
  out.ids.resize(static_cast<std::size_t>(rows));
  for (Index k = 0; k < rows; ++k)
    out.ids[static_cast<std::size_t>(k)] = k + 1;
  out.graph = Graph::from_edge_list(rows, edges);
  return out;
}

inline LoadedGraph read_graph(std::istream& in, Format fmt) {
  return fmt == Format::edgelist ? read_edgelist(in) : read_matrix_market(in);
}

inline LoadedGraph read_graph_file(const std::string& path, Format fmt) {
  std::ifstream in(path);
  if (!in)
    genmod::detail::fail(ErrorCode::io_error, "cannot open '" + path + "'");
  return read_graph(in, fmt);
}

/// "id<TAB>community" lines; communities are returned as sets of internal indices
/// in order of first appearance of each label.
inline std::vector<NodeSet> read_flat_partition(std::istream& in, const LoadedGraph& g) {
  std::map<std::string, std::size_t> label_slot;
  std::vector<std::vector<Index>> groups;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv(line);
    if (auto hash = sv.find('#'); hash != std::string_view::npos)
      sv = sv.substr(0, hash);
    auto tok = detail::split_ws(sv);
    if (tok.empty())
      continue;
    if (tok.size() != 2)
      detail::parse_fail(lineno, "expected 'node community'");
    Index node = g.index_of(detail::parse_id(tok[0], lineno));
    auto [it, fresh] = label_slot.try_emplace(std::string(tok[1]), groups.size());
    if (fresh)
      groups.emplace_back();
    groups[it->second].push_back(node);
  }
  std::vector<NodeSet> out;
  for (auto& grp : groups)
    out.emplace_back(g.graph.n(), std::move(grp));
  return out;
}

inline void write_flat_partition(std::ostream& out, const std::vector<NodeSet>& parts,
                                 const std::vector<std::int64_t>& ids) {
  std::vector<std::pair<std::int64_t, std::size_t>> rows;
  for (std::size_t c = 0; c < parts.size(); ++c)
    for (Index i : parts[c])
      rows.emplace_back(ids[static_cast<std::size_t>(i)], c + 1);
  std::sort(rows.begin(), rows.end());
  for (const auto& [id, c] : rows)
    out << id << '\t' << c << '\n';
}

} // namespace genmod::io
