#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "genmod/partition.hpp"

namespace genmod::oracles {

struct OracleOptions {
  SolverOptions solver;
  double zero_tol = 1e-12;
  /// Strict-gap and sandwich tolerances, relative to ||M||_F.
  double gap_tol = 1e-10;
  double sandwich_tol = 1e-8;
  /// Factor applied to the solver tolerance on the confirmation re-run.
  double tighten = 1e-2;
  /// Margin for the strict inequalities of the eigenvalue-count theorems,
  /// relative to the largest entry of the cluster matrix.
  double strict_tol = 1e-10;
};

namespace detail {

inline void require_connected(const ModularityMatrix& m, const Graph& g) {
  if (m.n() != g.n())
    genmod::detail::fail(ErrorCode::dimension_mismatch, "matrix and graph differ in size");
  if (!is_connected(g) || !genmod::detail::base_irreducible(m))
    genmod::detail::fail(ErrorCode::disconnected_graph,
                         "theorem hypotheses need a connected graph");
}

inline SolverOptions tightened(const OracleOptions& opt) {
  SolverOptions s = opt.solver;
  s.residual_tol *= opt.tighten;
  s.krylov_dim = std::max<Index>(s.krylov_dim, 2 * opt.solver.krylov_dim);
  return s;
}

} // namespace detail

// ---------------------------------------------------------------------------
// lambda_2(A+W) <= m_G < lambda_1(A+W)

struct GapCheck {
  double m_g = 0.0;
  double lambda1_base = 0.0;
  double lambda2_base = 0.0;
  double gap = 0.0;
  double frobenius = 0.0;
  bool strict_gap = false;
  bool sandwich = false;
  /// v is not parallel to the Perron vector, so m_G must be simple.
  bool simplicity_expected = false;
  bool simple = false;
  bool retried = false;
  bool passes = false;
};

inline GapCheck check_strict_gap(const ModularityMatrix& m, const Graph& g,
                                 const OracleOptions& opt = {}) {
  detail::require_connected(m, g);
  auto run = [&](const SolverOptions& solver) {
    GapCheck r;
    const LeadingPair lp = leading_eigenpair(m, solver);
    const PerronData base = perron_of_base(m, solver);
    r.m_g = lp.value;
    r.frobenius = lp.frobenius;
    r.lambda1_base = base.value;
    r.lambda2_base = base.second;
    r.gap = base.value - lp.value;
    r.strict_gap = r.gap > opt.gap_tol * r.frobenius;
    r.sandwich = m.n() < 2 || r.lambda2_base <= r.m_g + opt.sandwich_tol * r.frobenius;
    const Vector vhat = m.rank1_vector().normalized();
    r.simplicity_expected = (vhat - base.vector).norm() > 1e-6;
    r.simple = lp.simple;
    r.passes = r.strict_gap && r.sandwich && (!r.simplicity_expected || r.simple);
    return r;
  };
  GapCheck r = run(opt.solver);
  if (!r.passes) {
    r = run(detail::tightened(opt));
    r.retried = true;
  }
  return r;
}

// ---------------------------------------------------------------------------
// {i : x_i + eps y_i >= 0} induces a connected subgraph for every eps >= 0.

struct NodalEntry {
  double epsilon = 0.0;
  NodeSet domain;
  bool connected = false;
  /// Contains the domain of the previous (smaller) epsilon.
  bool nested = true;
};

struct NodalCheck {
  std::vector<NodalEntry> entries;
  bool simple = true;
  int orientation = 1;
  bool retried = false;
  bool passes = false;
};

inline NodalCheck check_nodal_connectivity(const ModularityMatrix& m, const Graph& g,
                                           std::vector<double> eps_list,
                                           const OracleOptions& opt = {}) {
  detail::require_connected(m, g);
  for (double e : eps_list)
    if (!(e >= 0.0))
      genmod::detail::fail(ErrorCode::invalid_argument, "epsilon values must be nonnegative");
  std::sort(eps_list.begin(), eps_list.end());
  auto run = [&](const SolverOptions& solver) {
    NodalCheck r;
    const LeadingPair lp = leading_eigenpair(m, solver);
    const PerronData base = perron_of_base(m, solver);
    r.simple = lp.simple;
    r.orientation = lp.orientation;
    r.passes = true;
    const NodeSet* previous = nullptr;
    for (double eps : eps_list) {
      NodalEntry e;
      e.epsilon = eps;
      e.domain = nodal_domain({lp.vector, base.vector, eps, opt.zero_tol});
      e.connected = is_connected_subset(g, e.domain);
      e.nested = previous == nullptr || previous->is_subset_of(e.domain);
      r.passes = r.passes && e.connected && e.nested;
      r.entries.push_back(std::move(e));
      previous = &r.entries.back().domain;
    }
    return r;
  };
  NodalCheck r = run(opt.solver);
  if (!r.passes) {
    r = run(detail::tightened(opt));
    r.retried = true;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Sign-pattern certificate for the rightmost eigenvector.

struct SignCertificate {
  NodeSet subset;
  double alpha = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  /// M + alpha I = 0: the inequality reads 0 >= 0 but every vector is an
  /// eigenvector, so the hypothesis is treated as not met.
  bool degenerate = false;
  /// The eigenpair was computed (only done when the inequality holds).
  bool checked = false;
  bool simple = false;
  /// J x >= 0 for the sign-corrected eigenvector, J = Diag(+-1 on S / its complement).
  bool nonnegative_pattern = false;
  /// S == {i : x_i >= 0} for the sign-corrected eigenvector.
  bool exact_pattern = false;
  bool predicted_pattern_verified = false;
};

/// ||M + alpha I||_F. Dense under the cap: the factored formula loses about
/// half the digits when M is nearly zero, and the certificate compares against it.
inline double shifted_frobenius(const ModularityMatrix& m, double alpha,
                                Index dense_cap = kDefaultDenseCap) {
  if (m.n() <= dense_cap) {
    Matrix d = m.dense(dense_cap);
    d.diagonal().array() += alpha;
    return d.norm();
  }
  const double f = m.frobenius_norm();
  const double f2 = f * f + 2.0 * alpha * m.trace() + static_cast<double>(m.n()) * alpha * alpha;
  return std::sqrt(std::max(0.0, f2));
}

/// `alpha` empty means the norm-minimizing shift -trace(M)/n.
inline SignCertificate sign_pattern_certificate(const ModularityMatrix& m, const NodeSet& s,
                                                std::optional<double> alpha = std::nullopt,
                                                const OracleOptions& opt = {}) {
  genmod::detail::check_set(m, s);
  const double n = static_cast<double>(m.n());
  SignCertificate c;
  c.subset = s;
  c.alpha = alpha ? *alpha : -m.trace() / n;
  const NodeSet sc = s.complement();
  c.lhs = modularity(m, s).q + modularity(m, sc).q - 2.0 * joint_modularity(m, s, sc);
  const double shifted = shifted_frobenius(m, c.alpha, opt.solver.dense_cap);
  c.rhs = std::sqrt((n - 1.0) * (n - 1.0) + 1.0) * shifted - n * c.alpha;
  const double scale = m.base_frobenius_norm() + m.sigma() * m.rank1_vector().squaredNorm() +
                       std::sqrt(n) * std::abs(c.alpha);
  c.degenerate = shifted <= 1e-14 * std::max(1.0, scale);
  const double slack = 1e-12 * std::max({1.0, std::abs(c.lhs), std::abs(c.rhs)});
  c.holds = !c.degenerate && c.lhs >= c.rhs - slack;
  if (!c.holds)
    return c;

  c.checked = true;
  const LeadingPair lp = leading_eigenpair(m, opt.solver);
  c.simple = lp.simple;
  const Vector j = 2.0 * s.indicator().array() - 1.0;
  Vector x = lp.vector;
  if (j.dot(x) < 0.0)
    x = -x;
  const Vector z = j.cwiseProduct(x);
  c.nonnegative_pattern = z.minCoeff() >= -opt.zero_tol;
  c.exact_pattern =
      NodeSet::where(m.n(), [&](Index i) { return x(i) >= -opt.zero_tol; }) == s;
  c.predicted_pattern_verified = c.simple && c.exact_pattern;
  return c;
}

// ---------------------------------------------------------------------------
// First-order response of m_G to extra weight eps on the pair (i, j).

struct PerturbationReport {
  Index i = 0;
  Index j = 0;
  double epsilon = 0.0;
  double m_g0 = 0.0;
  double m_geps = 0.0;
  double mu = 0.0;
  /// mu at eps / 2, used for the Richardson ratio.
  double mu_half = 0.0;
  double first_order = 0.0;
  double richardson_ratio = 0.0;
  double cos_theta = 0.0;
  /// ||sigma v v'||_2 = sigma ||v||^2
  double rank1_norm = 0.0;
  std::optional<double> eta;
  std::optional<double> error_bound;
  /// A' - A = eps (e_i e_j' + e_j e_i') and W' = W.
  bool assumption_holds = false;
  /// error_bound < 2 |x_i x_j|, so sign(mu) = sign(x_i x_j) for small eps.
  bool sign_guaranteed = false;
  bool passes = false;
  std::string note;
};

inline PerturbationReport perturbation_rate(const Graph& g, const ModelSpec& spec, Index i, Index j,
                                            double epsilon, const OracleOptions& opt = {}) {
  if (!(epsilon > 0.0))
    genmod::detail::fail(ErrorCode::invalid_argument, "perturbation: epsilon must be positive");
  if (i < 0 || j < 0 || i >= g.n() || j >= g.n())
    genmod::detail::fail(ErrorCode::index_out_of_range, "perturbation: node out of range");
  if (i == j)
    genmod::detail::fail(ErrorCode::invalid_argument, "perturbation: needs two distinct nodes");

  const ModularityMatrix m0 = build(g, spec);
  const LeadingPair lp = leading_eigenpair(m0, opt.solver);
  if (!lp.simple)
    genmod::detail::fail(ErrorCode::not_simple,
                         "perturbation: m_G is not simple, its derivative is undefined");

  PerturbationReport r;
  r.i = i;
  r.j = j;
  r.epsilon = epsilon;
  r.m_g0 = lp.value;
  const Vector& x = lp.vector;
  r.first_order = 2.0 * x(i) * x(j);

  auto shifted_leading = [&](double eps) {
    const ModularityMatrix me = build(with_added_weight(g, i, j, eps), spec);
    return std::pair{me, leading_eigenpair(me, opt.solver).value};
  };
  const auto [m_eps, lam_eps] = shifted_leading(epsilon);
  const double lam_half = shifted_leading(epsilon / 2.0).second;
  r.m_geps = lam_eps;
  r.mu = (lam_eps - r.m_g0) / epsilon;
  r.mu_half = (lam_half - r.m_g0) / (epsilon / 2.0);
  const double d_full = std::abs(r.mu - r.first_order);
  const double d_half = std::abs(r.mu_half - r.first_order);
  r.richardson_ratio = d_half > 0.0 ? d_full / d_half : std::numeric_limits<double>::infinity();

  const Vector& v = m0.rank1_vector();
  r.cos_theta = v.dot(x) / (v.norm() * x.norm());
  r.rank1_norm = m0.sigma() * v.squaredNorm();

  SparseMatrix delta = m_eps.base() - m0.base();
  delta.prune(0.0);
  double off = 0.0;
  for (Index k = 0; k < delta.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(delta, k); it; ++it) {
      const bool target = (it.row() == i && it.col() == j) || (it.row() == j && it.col() == i);
      off = std::max(off, std::abs(it.value() - (target ? epsilon : 0.0)));
    }
  if (std::abs(delta.coeff(i, j) - epsilon) > 0.0)
    off = std::max(off, std::abs(delta.coeff(i, j) - epsilon));
  const double scale = std::max(1.0, m0.base_frobenius_norm());
  r.assumption_holds = off <= 1e-12 * scale &&
                       (m_eps.diag_weights() - m0.diag_weights()).lpNorm<Eigen::Infinity>() <=
                           1e-12 * scale;

  if ((v.array() == 0.0).any()) {
    r.note = "eta unavailable: the diagonal E formula divides by a zero entry of v";
  } else {
    const double s0 = std::sqrt(m0.sigma());
    const double s1 = std::sqrt(m_eps.sigma());
    const Vector e = (s1 * m_eps.rank1_vector() - s0 * v).cwiseQuotient(s0 * v);
    r.eta = e.lpNorm<Eigen::Infinity>() / epsilon;
    r.error_bound = 2.0 * *r.eta * std::abs(r.cos_theta) * r.rank1_norm;
    r.sign_guaranteed = r.assumption_holds && *r.error_bound < std::abs(r.first_order);
  }

  // |mu - 2 x_i x_j| <= 2 eta |cos| ||sigma v v'|| + O(eps); the O(eps) part is
  // estimated from the change between eps and eps / 2.
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, lp.frobenius) / epsilon;
  const double higher_order = 4.0 * std::abs(r.mu - r.mu_half);
  if (!r.assumption_holds) {
    r.passes = true;
    if (r.note.empty())
      r.note = "the model does not change A by eps on a single pair; bound not applicable";
  } else if (!r.error_bound) {
    r.passes = true;
  } else {
    r.passes = d_full <= *r.error_bound + higher_order + noise;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Pairwise modularities of a family of disjoint sets.

struct ClusterMatrix {
  std::vector<NodeSet> subsets;
  /// C_ij = 1_Si' M 1_Sj
  Matrix c;
  /// B = Z'(A + W)Z
  Matrix b;
};

inline void require_disjoint(const std::vector<NodeSet>& subsets) {
  for (std::size_t a = 0; a < subsets.size(); ++a) {
    if (subsets[a].empty())
      genmod::detail::fail(ErrorCode::invalid_argument, "cluster sets must be nonempty");
    for (std::size_t b = a + 1; b < subsets.size(); ++b)
      if (!disjoint(subsets[a], subsets[b]))
        genmod::detail::fail(ErrorCode::overlapping_sets,
                             "sets " + std::to_string(a) + " and " + std::to_string(b) +
                                 " overlap");
  }
}

inline ClusterMatrix cluster_matrix(const ModularityMatrix& m, const std::vector<NodeSet>& subsets) {
  require_disjoint(subsets);
  const Index k = static_cast<Index>(subsets.size());
  ClusterMatrix out;
  out.subsets = subsets;
  out.c = Matrix::Zero(k, k);
  out.b = Matrix::Zero(k, k);
  std::vector<double> vsum(static_cast<std::size_t>(k), 0.0);
  for (Index a = 0; a < k; ++a) {
    const auto& s = subsets[static_cast<std::size_t>(a)];
    const auto rep = modularity(m, s);
    out.c(a, a) = rep.q;
    out.b(a, a) = rep.e_in + rep.diag;
    for (Index i : s)
      vsum[static_cast<std::size_t>(a)] += m.rank1_vector()(i);
  }
  for (Index a = 0; a < k; ++a)
    for (Index b = a + 1; b < k; ++b) {
      const double q = joint_modularity(m, subsets[static_cast<std::size_t>(a)],
                                        subsets[static_cast<std::size_t>(b)]);
      out.c(a, b) = out.c(b, a) = q;
      const double cross = q + m.sigma() * vsum[static_cast<std::size_t>(a)] *
                                   vsum[static_cast<std::size_t>(b)];
      out.b(a, b) = out.b(b, a) = cross;
    }
  return out;
}

// ---------------------------------------------------------------------------
// Lower bounds on the number of positive eigenvalues from disjoint modules.

struct CountBound {
  ClusterMatrix clusters;
  Index k = 0;
  // Modules with negative pairwise joint modularity and weights alpha > 0.
  bool module_signs = false;
  std::string alpha_source = "none";
  Vector alpha;
  double comparison_min_eigenvalue = 0.0;
  bool module_theorem = false;
  // Partition of V with M 1 = 0: bound k - 1.
  bool is_partition = false;
  double null_residual = 0.0;
  bool partition_corollary = false;
  // Strictly diagonally dominant B: bound k - 1.
  bool diagonal_dominance = false;

  Index bound = 0;
  std::string which = "none";
  Index positive_count = 0;
  bool passes = true;
};

inline CountBound module_count_bound(const ModularityMatrix& m, const std::vector<NodeSet>& subsets,
                                     std::optional<Vector> alpha = std::nullopt,
                                     const OracleOptions& opt = {}) {
  CountBound r;
  r.clusters = cluster_matrix(m, subsets);
  const Matrix& c = r.clusters.c;
  const Matrix& b = r.clusters.b;
  const Index k = c.rows();
  r.k = k;

  const double margin_c = opt.strict_tol * std::max(1.0, k > 0 ? c.cwiseAbs().maxCoeff() : 0.0);
  const double margin_b = opt.strict_tol * std::max(1.0, k > 0 ? b.cwiseAbs().maxCoeff() : 0.0);
  r.module_signs = k > 0;
  for (Index a = 0; a < k; ++a)
    for (Index bb = 0; bb < k; ++bb)
      if ((a == bb && !(c(a, a) > margin_c)) || (a != bb && !(c(a, bb) < -margin_c)))
        r.module_signs = false;

  Matrix comparison = -c.cwiseAbs();
  comparison.diagonal() = c.diagonal();
  r.comparison_min_eigenvalue = k > 0 ? eigenvalues_descending(comparison)(k - 1) : 0.0;
  auto dominated = [&](const Vector& w) {
    if (w.size() != k || !(w.array() > 0.0).all())
      return false;
    const Vector lhs = c.diagonal().cwiseProduct(w);
    const Vector off = (c.cwiseAbs() * w) - c.diagonal().cwiseAbs().cwiseProduct(w);
    return (lhs - off).minCoeff() > margin_c * w.maxCoeff();
  };
  if (r.module_signs) {
    if (alpha) {
      if (dominated(*alpha)) {
        r.alpha_source = "supplied";
        r.alpha = *alpha;
      }
    } else if (dominated(Vector::Ones(k))) {
      r.alpha_source = "ones";
      r.alpha = Vector::Ones(k);
    } else if (r.comparison_min_eigenvalue > margin_c) {
      // A symmetric Z-matrix with positive spectrum is a nonsingular M-matrix;
      // its inverse is nonnegative and alpha = comparison^{-1} 1 > 0 works.
      Vector w = comparison.ldlt().solve(Vector::Ones(k));
      if (dominated(w)) {
        r.alpha_source = "m-matrix";
        r.alpha = w;
      }
    }
    r.module_theorem = r.alpha_source != "none";
  }

  std::vector<char> covered(static_cast<std::size_t>(m.n()), 0);
  Index total = 0;
  for (const auto& s : subsets) {
    total += s.size();
    for (Index i : s)
      covered[static_cast<std::size_t>(i)] = 1;
  }
  r.is_partition = total == m.n() &&
                   std::all_of(covered.begin(), covered.end(), [](char x) { return x != 0; });
  r.null_residual = m.apply(Vector::Ones(m.n())).lpNorm<Eigen::Infinity>();
  r.partition_corollary = r.is_partition && r.module_signs &&
                          r.null_residual <= 1e-10 * std::max(1.0, m.frobenius_norm());

  r.diagonal_dominance = k > 0;
  for (Index a = 0; a < k; ++a) {
    double off = 0.0;
    for (Index bb = 0; bb < k; ++bb)
      if (bb != a)
        off += b(a, bb);
    if (!(b(a, a) - off > margin_b))
      r.diagonal_dominance = false;
  }

  auto consider = [&](bool applicable, Index value, const char* name) {
    if (applicable && value > r.bound) {
      r.bound = value;
      r.which = name;
    }
  };
  consider(r.module_theorem, k, "module-theorem");
  consider(r.partition_corollary, k - 1, "partition-corollary");
  consider(r.diagonal_dominance, k - 1, "diagonal-dominance");

  r.positive_count = positive_eigenvalue_count(m, opt.solver);
  r.passes = r.positive_count >= r.bound;
  return r;
}

// ---------------------------------------------------------------------------
// Exhaustive ground truth.

struct BruteForceResult {
  NodeSet best_set;
  double best_q = 0.0;
  /// max over nonempty S of Q(S) / |S|
  double best_ratio = -std::numeric_limits<double>::infinity();
  NodeSet best_ratio_set;
};

inline constexpr Index kEnumerationCap = 22;

/// Enumerates all 2^n subsets in Gray-code order, updating Q(S) in O(n) per step.
inline BruteForceResult brute_force_max_modularity(const ModularityMatrix& m) {
  const Index n = m.n();
  if (n > kEnumerationCap)
    genmod::detail::fail(ErrorCode::enumeration_cap_exceeded,
                         "brute force limited to n <= " + std::to_string(kEnumerationCap));
  const Matrix dense = m.dense();
  Vector row_sum = Vector::Zero(n); // M 1_S
  std::uint64_t mask = 0;
  double q = 0.0;
  Index size = 0;
  BruteForceResult out;
  out.best_set = NodeSet::none(n);
  std::uint64_t best_mask = 0;
  std::uint64_t best_ratio_mask = 0;
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < count; ++step) {
    const auto bit = static_cast<Index>(std::countr_zero(step));
    if ((mask >> bit) & 1U) {
      // Q(S \ {k}) = Q(S) - 2 (M 1_S)_k + M_kk
      q += -2.0 * row_sum(bit) + dense(bit, bit);
      row_sum -= dense.col(bit);
      --size;
    } else {
      q += 2.0 * row_sum(bit) + dense(bit, bit);
      row_sum += dense.col(bit);
      ++size;
    }
    mask ^= std::uint64_t{1} << bit;
    if (q > out.best_q) {
      out.best_q = q;
      best_mask = mask;
    }
    if (size > 0 && q / static_cast<double>(size) > out.best_ratio) {
      out.best_ratio = q / static_cast<double>(size);
      best_ratio_mask = mask;
    }
  }
  out.best_set = NodeSet::from_bits(n, best_mask);
  out.best_ratio_set = NodeSet::from_bits(n, best_ratio_mask);
  return out;
}

} // namespace genmod::oracles
