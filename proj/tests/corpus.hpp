#pragma once

// Seeded graph corpora and a dense reference implementation of the model
// matrices, written directly from the defining formulas so that tests do not
// go through the factored code paths they are checking.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "genmod/genmod.hpp"

namespace corpus {

using genmod::Graph;
using genmod::Index;
using genmod::Matrix;
using genmod::Model;
using genmod::ModelSpec;
using genmod::Vector;

struct Case {
  Graph graph;
  std::uint64_t seed = 0;
};

/// 200 connected graphs, n in [5, 60], density in [0.1, 0.5], weights in (0, 2].
inline std::vector<Case> random_corpus(std::size_t count = 200, std::uint64_t seed = 20240601) {
  std::vector<Case> out;
  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < count; ++k) {
    const auto s = rng();
    std::mt19937_64 local(s);
    genmod::generators::RandomGraphParams p;
    p.n = std::uniform_int_distribution<Index>(5, 60)(local);
    p.density = std::uniform_real_distribution<double>(0.1, 0.5)(local);
    p.max_weight = 2.0;
    out.push_back({genmod::generators::random_connected(p, local), s});
  }
  return out;
}

/// Small graphs for exhaustive enumeration, n in [lo, hi].
inline std::vector<Case> small_corpus(std::size_t count, Index lo, Index hi, std::uint64_t seed) {
  std::vector<Case> out;
  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < count; ++k) {
    const auto s = rng();
    std::mt19937_64 local(s);
    genmod::generators::RandomGraphParams p;
    p.n = std::uniform_int_distribution<Index>(lo, hi)(local);
    p.density = std::uniform_real_distribution<double>(0.1, 0.6)(local);
    out.push_back({genmod::generators::random_connected(p, local), s});
  }
  return out;
}

struct NamedModel {
  std::string name;
  ModelSpec spec;
};

/// NG, NORM, RB(0.5/1/2), RN(vol/n^2), AFG(0/1).
inline std::vector<NamedModel> corpus_models(const Graph& g) {
  const double rn_gamma = g.volume() / static_cast<double>(g.n() * g.n());
  return {{"ng", {Model::ng, 1.0}},       {"norm", {Model::norm, 1.0}},
          {"rb0.5", {Model::rb, 0.5}},    {"rb1", {Model::rb, 1.0}},
          {"rb2", {Model::rb, 2.0}},      {"rn", {Model::rn, rn_gamma}},
          {"afg0", {Model::afg, 0.0}},    {"afg1", {Model::afg, 1.0}}};
}

/// Dense A (loops on the diagonal) from the graph's stored weights.
inline Matrix dense_adjacency(const Graph& g) {
  Matrix a = Matrix::Zero(g.n(), g.n());
  for (Index i = 0; i < g.n(); ++i)
    g.for_each_neighbor(i, [&](Index j, double w) { a(i, j) = w; });
  return a;
}

/// Dense M and its (A + W) part for a model, from the textbook formulas.
struct DenseModel {
  Matrix base;
  Matrix m;
};

inline DenseModel dense_model(const Matrix& a, const ModelSpec& spec) {
  const Index n = a.rows();
  const Vector d = a.rowwise().sum();
  const double vol = d.sum();
  const double gamma = spec.gamma;
  DenseModel out;
  switch (spec.model) {
  case Model::ng:
    out.base = a;
    out.m = a - d * d.transpose() / vol;
    break;
  case Model::norm: {
    const Vector s = d.cwiseSqrt();
    const Vector inv = s.cwiseInverse();
    out.base = inv.asDiagonal() * a * inv.asDiagonal();
    out.m = out.base - s * s.transpose() / vol;
    break;
  }
  case Model::rb:
    out.base = a;
    out.m = a - gamma * d * d.transpose() / vol;
    break;
  case Model::rn:
    out.base = a;
    out.m = a - gamma * Matrix::Ones(n, n);
    break;
  case Model::afg: {
    const Vector v = d + gamma * Vector::Ones(n);
    out.base = a + gamma * Matrix::Identity(n, n);
    out.m = out.base - v * v.transpose() / (vol + gamma * static_cast<double>(n));
    break;
  }
  default:
    throw std::logic_error("dense_model: unsupported model");
  }
  return out;
}

/// Eigenvalues descending, straight from Eigen.
inline Vector eigenvalues(const Matrix& sym) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().reverse();
}

/// BFS connectivity of {i : keep[i]} in the dense adjacency pattern.
inline bool connected_in(const Matrix& a, const std::vector<char>& keep) {
  const Index n = a.rows();
  Index start = -1, total = 0;
  for (Index i = 0; i < n; ++i)
    if (keep[static_cast<std::size_t>(i)]) {
      ++total;
      if (start < 0)
        start = i;
    }
  if (total <= 1)
    return true;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<Index> stack{start};
  seen[static_cast<std::size_t>(start)] = 1;
  Index reached = 1;
  while (!stack.empty()) {
    const Index i = stack.back();
    stack.pop_back();
    for (Index j = 0; j < n; ++j)
      if (j != i && a(i, j) > 0.0 && keep[static_cast<std::size_t>(j)] &&
          !seen[static_cast<std::size_t>(j)]) {
        seen[static_cast<std::size_t>(j)] = 1;
        ++reached;
        stack.push_back(j);
      }
  }
  return reached == total;
}

} // namespace corpus
