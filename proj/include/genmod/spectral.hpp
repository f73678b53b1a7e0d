#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

#include "genmod/modmat.hpp"

namespace genmod {

struct SolverOptions {
  /// Eigenpair residual bound, relative to ||M||_F.
  double residual_tol = 1e-10;
  /// Sign classification threshold tau, relative to ||M||_F.
  double sign_tol = 1e-10;
  /// lambda_1 is reported simple when lambda_1 - lambda_2 exceeds this times ||M||_F.
  double simple_tol = 1e-8;
  /// Matrices up to this order go through the dense symmetric solver.
  Index dense_cap = kDefaultDenseCap;
  std::uint64_t seed = 42;
  Index krylov_dim = 48;
  int max_restarts = 400;
};

struct SolverDiagnostics {
  std::string method;
  int iterations = 0;
  double residual = 0.0;
};

/// Eigenvalues sorted descending plus tolerance-based sign counts.
struct Spectrum {
  Vector eigenvalues;
  Index positive_count = 0;
  Index nonnegative_count = 0;
  double tau = 0.0;
  double threshold = 0.0; ///< tau * ||M||_F
};

/// Rightmost eigenpair of M, oriented so that v'x >= 0.
struct LeadingPair {
  double value = 0.0;
  Vector vector;
  double second = -std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  bool simple = true;
  /// +1 when v'x > 0; 0 when v'x vanished and the largest entry fixed the sign.
  int orientation = 1;
  double frobenius = 0.0;
  SolverDiagnostics diagnostics;
};

/// Leading eigenpair of A + W with a strictly positive eigenvector.
struct PerronData {
  double value = 0.0;
  Vector vector;
  double second = -std::numeric_limits<double>::infinity();
  SolverDiagnostics diagnostics;
};

/// Eigenvalues descending with matching eigenvector columns.
struct EigenDecomposition {
  Vector values;
  Matrix vectors;
};

inline EigenDecomposition eigen_decomposition(const Matrix& sym) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success)
    throw ConvergenceError("dense symmetric eigensolver failed", 0.0, 0);
  EigenDecomposition out;
  out.values = es.eigenvalues().reverse();
  out.vectors = es.eigenvectors().rowwise().reverse();
  return out;
}

inline Vector eigenvalues_descending(const Matrix& sym) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw ConvergenceError("dense symmetric eigensolver failed", 0.0, 0);
  return es.eigenvalues().reverse();
}

struct RitzPairs {
  Vector values;
  Matrix vectors;
  Vector residuals;
  int iterations = 0;
};

/// Largest `nev` eigenpairs of a symmetric operator by thick-restart Lanczos
/// with full reorthogonalization. `op(x)` must return the product with x.
/// Converged when every requested residual is below `abs_tol`.
template <typename Op>
RitzPairs lanczos_largest(const Op& op, Index n, Index nev, double abs_tol,
                          const SolverOptions& opt) {
  nev = std::min(nev, n);
  const Index m = std::min(n, std::max(opt.krylov_dim, 2 * nev + 8));
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal;
  auto random_vector = [&] {
    Vector x(n);
    for (Index i = 0; i < n; ++i)
      x(i) = normal(rng);
    return x;
  };

  Matrix basis(n, m);
  Matrix h = Matrix::Zero(m, m);
  basis.col(0) = random_vector().normalized();
  Vector f = Vector::Zero(n);
  double beta = 0.0;
  Index kept = 0;
  int matvecs = 0;
  double best = std::numeric_limits<double>::infinity();

  for (int cycle = 0; cycle <= opt.max_restarts; ++cycle) {
    for (Index j = kept; j < m; ++j) {
      Vector w = op(basis.col(j));
      ++matvecs;
      auto q = basis.leftCols(j + 1);
      Vector coef = q.transpose() * w;
      w.noalias() -= q * coef;
      Vector again = q.transpose() * w;
      w.noalias() -= q * again;
      coef += again;
      h.col(j).head(j + 1) = coef;
      h.row(j).head(j + 1) = coef.transpose();
      beta = w.norm();
      if (j + 1 == m) {
        f = w;
        break;
      }
      if (beta <= 1e-14 * std::max(1.0, std::abs(h(j, j)))) {
        // Invariant subspace: continue with a fresh direction.
        Vector r = random_vector();
        auto qq = basis.leftCols(j + 1);
        for (int pass = 0; pass < 2; ++pass)
          r.noalias() -= qq * (qq.transpose() * r);
        basis.col(j + 1) = r.normalized();
      } else {
        basis.col(j + 1) = w / beta;
        h(j + 1, j) = beta;
        h(j, j + 1) = beta;
      }
    }

    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    const Vector theta = es.eigenvalues().reverse();
    const Matrix s = es.eigenvectors().rowwise().reverse();
    Vector res(nev);
    for (Index i = 0; i < nev; ++i)
      res(i) = beta * std::abs(s(m - 1, i));
    best = std::min(best, res.maxCoeff());
    if (res.maxCoeff() <= abs_tol || m == n) {
      RitzPairs out;
      out.values = theta.head(nev);
      out.vectors = basis * s.leftCols(nev);
      out.residuals = res;
      out.iterations = matvecs;
      return out;
    }

    const Index keep = std::min(m - 1, nev + (m - nev) / 2);
    Matrix ritz = basis * s.leftCols(keep);
    basis.leftCols(keep) = ritz;
    basis.col(keep) = f / beta;
    h.setZero();
    for (Index i = 0; i < keep; ++i)
      h(i, i) = theta(i);
    kept = keep;
  }
  throw ConvergenceError("Lanczos did not converge within " + std::to_string(opt.max_restarts) +
                             " restarts",
                         best, matvecs);
}

namespace detail {

/// Flip x so that v'x >= 0; at v'x ~ 0 the largest-magnitude entry (lowest
/// index on ties) is made positive. Returns the orientation flag.
inline int orient(Vector& x, const Vector& v, double tol) {
  const double vtx = v.dot(x);
  if (std::abs(vtx) > tol * v.norm() * x.norm()) {
    if (vtx < 0.0)
      x = -x;
    return 1;
  }
  Index arg = 0;
  double best = -1.0;
  for (Index i = 0; i < x.size(); ++i)
    if (std::abs(x(i)) > best) {
      best = std::abs(x(i));
      arg = i;
    }
  if (x(arg) < 0.0)
    x = -x;
  return 0;
}

inline bool base_irreducible(const ModularityMatrix& m) {
  DisjointSet dsu(m.n());
  Index merges = 0;
  for (Index i = 0; i < m.base().outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(m.base(), i); it; ++it)
      if (it.row() != it.col() && it.value() > 0.0 && dsu.unite(it.row(), it.col()))
        ++merges;
  return merges == m.n() - 1;
}

} // namespace detail

/// Rightmost eigenpair of M oriented by v'x >= 0, with a multiplicity flag.
inline LeadingPair leading_eigenpair(const ModularityMatrix& m, const SolverOptions& opt = {}) {
  const Index n = m.n();
  LeadingPair out;
  out.frobenius = m.frobenius_norm();
  if (n <= opt.dense_cap) {
    auto ed = eigen_decomposition(m.dense(opt.dense_cap));
    out.value = ed.values(0);
    out.vector = ed.vectors.col(0);
    if (n > 1)
      out.second = ed.values(1);
    out.diagnostics.method = "dense";
  } else {
    auto ritz = lanczos_largest([&](const auto& x) { return m.apply(x); }, n, 2,
                                opt.residual_tol * out.frobenius, opt);
    out.value = ritz.values(0);
    out.vector = ritz.vectors.col(0).normalized();
    out.second = ritz.values(1);
    out.diagnostics.method = "lanczos";
    out.diagnostics.iterations = ritz.iterations;
  }
  out.gap = n > 1 ? out.value - out.second : std::numeric_limits<double>::infinity();
  out.simple = out.gap > opt.simple_tol * out.frobenius;
  out.orientation = detail::orient(out.vector, m.rank1_vector(), opt.sign_tol);
  out.diagnostics.residual = (m.apply(out.vector) - out.value * out.vector).norm();
  return out;
}

/// All eigenvalues (dense path only) with sign counts at threshold tau * ||M||_F.
inline Spectrum full_spectrum(const ModularityMatrix& m, const SolverOptions& opt = {}) {
  Spectrum s;
  s.eigenvalues = eigenvalues_descending(m.dense(opt.dense_cap));
  s.tau = opt.sign_tol;
  s.threshold = opt.sign_tol * m.frobenius_norm();
  for (Index i = 0; i < s.eigenvalues.size(); ++i) {
    if (s.eigenvalues(i) > s.threshold)
      ++s.positive_count;
    if (s.eigenvalues(i) >= -s.threshold)
      ++s.nonnegative_count;
  }
  return s;
}

inline Index positive_eigenvalue_count(const ModularityMatrix& m, const SolverOptions& opt = {}) {
  return full_spectrum(m, opt).positive_count;
}

/// lambda_1(A + W) and its positive eigenvector. A must be irreducible.
inline PerronData perron_of_base(const ModularityMatrix& m, const SolverOptions& opt = {}) {
  if (!detail::base_irreducible(m))
    detail::fail(ErrorCode::disconnected_graph,
                 "A is reducible (graph not connected); the Perron vector need not be positive");
  const Index n = m.n();
  PerronData out;
  if (n <= opt.dense_cap) {
    auto ed = eigen_decomposition(m.dense_base(opt.dense_cap));
    out.value = ed.values(0);
    out.vector = ed.vectors.col(0);
    if (n > 1)
      out.second = ed.values(1);
    out.diagnostics.method = "dense";
  } else {
    auto ritz = lanczos_largest([&](const auto& x) { return m.apply_base(x); }, n, 2,
                                opt.residual_tol * m.base_frobenius_norm(), opt);
    out.value = ritz.values(0);
    out.vector = ritz.vectors.col(0).normalized();
    out.second = ritz.values(1);
    out.diagnostics.method = "lanczos";
    out.diagnostics.iterations = ritz.iterations;
  }
  if (out.vector.sum() < 0.0)
    out.vector = -out.vector;
  if (!(out.vector.minCoeff() > 0.0))
    detail::fail(ErrorCode::internal_consistency,
                 "computed Perron vector is not strictly positive (min entry " +
                     std::to_string(out.vector.minCoeff()) + ")");
  out.diagnostics.residual = (m.apply_base(out.vector) - out.value * out.vector).norm();
  return out;
}

} // namespace genmod
