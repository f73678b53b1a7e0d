#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "genmod/graph.hpp"

namespace genmod {

enum class Model { ng, norm, rb, rn, afg, submatrix, custom };

inline std::string_view to_string(Model m) {
  switch (m) {
  case Model::ng: return "ng";
  case Model::norm: return "norm";
  case Model::rb: return "rb";
  case Model::rn: return "rn";
  case Model::afg: return "afg";
  case Model::submatrix: return "submatrix";
  case Model::custom: return "custom";
  }
  return "unknown";
}

/// Parses the user-facing model names "ng", "norm", "rb", "rn", "afg".
inline Model parse_model(std::string_view name) {
  if (name == "ng") return Model::ng;
  if (name == "norm") return Model::norm;
  if (name == "rb") return Model::rb;
  if (name == "rn") return Model::rn;
  if (name == "afg") return Model::afg;
  detail::fail(ErrorCode::invalid_argument, "unknown model '" + std::string(name) + "'");
}

inline bool takes_gamma(Model m) { return m == Model::rb || m == Model::rn || m == Model::afg; }

struct ModelSpec {
  Model model = Model::ng;
  double gamma = 1.0;
};

inline constexpr Index kDefaultDenseCap = 4096;

/// M = A + Diag(w) - sigma v v', kept in factored form.
///
/// A is symmetric with nonnegative off-diagonal entries, sigma > 0 and v is a
/// nonnegative nonzero vector. Nothing is densified unless dense() is asked for.
class ModularityMatrix {
public:
  ModularityMatrix() = default;

  static ModularityMatrix custom(SparseMatrix a, Vector w, double sigma, Vector v,
                                 Model tag = Model::custom,
                                 std::optional<double> gamma = std::nullopt) {
    const Index n = a.rows();
    if (a.cols() != n || w.size() != n || v.size() != n)
      detail::fail(ErrorCode::dimension_mismatch, "ModularityMatrix: inconsistent sizes");
    if (n == 0)
      detail::fail(ErrorCode::empty_graph, "ModularityMatrix: empty");
    if (!(sigma > 0.0) || !std::isfinite(sigma))
      detail::fail(ErrorCode::invalid_argument, "ModularityMatrix: sigma must be positive");
    if (!w.allFinite() || !v.allFinite())
      detail::fail(ErrorCode::invalid_argument, "ModularityMatrix: non-finite entries");
    if ((v.array() < 0.0).any())
      detail::fail(ErrorCode::invalid_argument, "ModularityMatrix: v must be nonnegative");
    if (!(v.array() > 0.0).any())
      detail::fail(ErrorCode::invalid_argument, "ModularityMatrix: v must be nonzero");
    a.prune(0.0);
    for (Index i = 0; i < a.outerSize(); ++i)
      for (SparseMatrix::InnerIterator it(a, i); it; ++it) {
        if (!std::isfinite(it.value()))
          detail::fail(ErrorCode::invalid_argument, "ModularityMatrix: non-finite A entry");
        if (it.row() != it.col() && it.value() < 0.0)
          detail::fail(ErrorCode::invalid_argument,
                       "ModularityMatrix: negative off-diagonal entry in A");
        if (a.coeff(it.col(), it.row()) != it.value())
          detail::fail(ErrorCode::invalid_argument, "ModularityMatrix: A is not symmetric");
      }
    a.makeCompressed();
    ModularityMatrix m;
    m.a_ = std::move(a);
    m.w_ = std::move(w);
    m.sigma_ = sigma;
    m.v_ = std::move(v);
    m.tag_ = tag;
    m.gamma_ = gamma;
    return m;
  }

  Index n() const noexcept { return a_.rows(); }
  const SparseMatrix& base() const noexcept { return a_; }
  const Vector& diag_weights() const noexcept { return w_; }
  double sigma() const noexcept { return sigma_; }
  const Vector& rank1_vector() const noexcept { return v_; }
  Model model() const noexcept { return tag_; }
  std::optional<double> gamma() const noexcept { return gamma_; }

  /// (A + W) x
  Vector apply_base(const Eigen::Ref<const Vector>& x) const {
    check_dim(x.size());
    return a_ * x + w_.cwiseProduct(x);
  }

  /// M x = A x + w o x - sigma (v'x) v
  Vector apply(const Eigen::Ref<const Vector>& x) const {
    check_dim(x.size());
    Vector y = a_ * x + w_.cwiseProduct(x);
    y.noalias() -= (sigma_ * v_.dot(x)) * v_;
    return y;
  }

  /// ||M||_F from the factors:
  /// ||A+W||_F^2 - 2 sigma v'(A+W)v + sigma^2 ||v||^4.
  double frobenius_norm() const {
    const double base2 = base_frobenius_norm_squared();
    const double vv = v_.squaredNorm();
    const double cross = v_.dot(apply_base(v_));
    const double f2 = base2 - 2.0 * sigma_ * cross + sigma_ * sigma_ * vv * vv;
    return std::sqrt(std::max(0.0, f2));
  }

  double base_frobenius_norm() const { return std::sqrt(base_frobenius_norm_squared()); }

  double base_frobenius_norm_squared() const {
    double base2 = 0.0;
    for (Index i = 0; i < a_.outerSize(); ++i)
      for (SparseMatrix::InnerIterator it(a_, i); it; ++it)
        if (it.row() != it.col())
          base2 += it.value() * it.value();
    for (Index i = 0; i < n(); ++i) {
      double dii = a_.coeff(i, i) + w_(i);
      base2 += dii * dii;
    }
    return base2;
  }

  double trace() const {
    return a_.diagonal().sum() + w_.sum() - sigma_ * v_.squaredNorm();
  }

  /// Dense A + Diag(w) - sigma v v'. Refuses above `cap` nodes.
  Matrix dense(Index cap = kDefaultDenseCap) const {
    check_cap(cap);
    Matrix m = Matrix(a_);
    m.diagonal() += w_;
    m.noalias() -= sigma_ * v_ * v_.transpose();
    return m;
  }

  /// Dense A + Diag(w).
  Matrix dense_base(Index cap = kDefaultDenseCap) const {
    check_cap(cap);
    Matrix m = Matrix(a_);
    m.diagonal() += w_;
    return m;
  }

private:
  void check_dim(Index len) const {
    if (len != n())
      detail::fail(ErrorCode::dimension_mismatch,
                   "vector of length " + std::to_string(len) + " applied to " +
                       std::to_string(n()) + "x" + std::to_string(n()) + " matrix");
  }

  void check_cap(Index cap) const {
    if (n() > cap)
      detail::fail(ErrorCode::dense_cap_exceeded,
                   "n = " + std::to_string(n()) + " exceeds the dense cap " + std::to_string(cap) +
                       "; use factored operations");
  }

  SparseMatrix a_;
  Vector w_;
  double sigma_ = 1.0;
  Vector v_;
  Model tag_ = Model::custom;
  std::optional<double> gamma_;
};

namespace detail {

inline void require_volume(const Graph& g) {
  if (!(g.volume() > 0.0))
    fail(ErrorCode::empty_graph, "graph volume is zero");
}

inline void require_positive_gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    fail(ErrorCode::invalid_argument,
         "resolution parameter must be positive, got " + std::to_string(gamma));
}

inline SparseMatrix principal_submatrix(const SparseMatrix& a, const NodeSet& s) {
  std::vector<Index> local(static_cast<std::size_t>(a.rows()), -1);
  for (Index k = 0; k < s.size(); ++k)
    local[static_cast<std::size_t>(s[k])] = k;
  std::vector<Eigen::Triplet<double, Index>> trips;
  for (Index k = 0; k < s.size(); ++k)
    for (SparseMatrix::InnerIterator it(a, s[k]); it; ++it)
      if (Index lj = local[static_cast<std::size_t>(it.col())]; lj >= 0)
        trips.emplace_back(k, lj, it.value());
  SparseMatrix out(s.size(), s.size());
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

inline Vector restrict(const Vector& x, const NodeSet& s) {
  Vector out(s.size());
  for (Index k = 0; k < s.size(); ++k)
    out(k) = x(s[k]);
  return out;
}

inline void check_set(const ModularityMatrix& m, const NodeSet& s) {
  if (s.owner_n() != m.n())
    fail(ErrorCode::index_out_of_range,
         "node set over " + std::to_string(s.owner_n()) + " nodes used with a " +
             std::to_string(m.n()) + "-node modularity matrix");
}

} // namespace detail

/// Newman-Girvan: A - d d' / vol G.
inline ModularityMatrix build_ng(const Graph& g) {
  detail::require_volume(g);
  return ModularityMatrix::custom(g.adjacency(), Vector::Zero(g.n()), 1.0 / g.volume(),
                                  g.degrees(), Model::ng);
}

/// D^{-1/2} M_NG D^{-1/2}: base D^{-1/2} A D^{-1/2}, v = D^{1/2} 1, sigma = 1/vol G.
inline ModularityMatrix build_norm(const Graph& g) {
  detail::require_volume(g);
  const Vector& d = g.degrees();
  for (Index i = 0; i < g.n(); ++i)
    if (!(d(i) > 0.0))
      detail::fail(ErrorCode::isolated_node,
                   "normalized modularity needs positive degrees; node " + std::to_string(i) +
                       " is isolated");
  const Vector s = d.cwiseSqrt().cwiseInverse();
  SparseMatrix a = g.adjacency();
  for (Index i = 0; i < a.outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(a, i); it; ++it)
      it.valueRef() *= s(it.row()) * s(it.col());
  return ModularityMatrix::custom(std::move(a), Vector::Zero(g.n()), 1.0 / g.volume(),
                                  d.cwiseSqrt(), Model::norm);
}

/// Reichardt-Bornholdt: A - (gamma / vol G) d d'.
inline ModularityMatrix build_rb(const Graph& g, double gamma) {
  detail::require_positive_gamma(gamma);
  detail::require_volume(g);
  return ModularityMatrix::custom(g.adjacency(), Vector::Zero(g.n()), gamma / g.volume(),
                                  g.degrees(), Model::rb, gamma);
}

/// Ronhovde-Nussinov: A - gamma 1 1'.
inline ModularityMatrix build_rn(const Graph& g, double gamma) {
  detail::require_positive_gamma(gamma);
  return ModularityMatrix::custom(g.adjacency(), Vector::Zero(g.n()), gamma,
                                  Vector::Ones(g.n()), Model::rn, gamma);
}

/// Arenas-Fernandez-Gomez: A + gamma I - (d + gamma 1)(d + gamma 1)' / (gamma n + vol G).
///
/// gamma may be negative as long as d + gamma 1 stays nonnegative, which keeps
/// the rank-one vector admissible.
inline ModularityMatrix build_afg(const Graph& g, double gamma) {
  if (!std::isfinite(gamma))
    detail::fail(ErrorCode::invalid_argument, "AFG: gamma must be finite");
  const double n = static_cast<double>(g.n());
  const double denom = gamma * n + g.volume();
  if (!(denom > 0.0))
    detail::fail(ErrorCode::invalid_argument,
                 "AFG: gamma * n + vol G must be positive, got " + std::to_string(denom));
  const double dmin = g.degrees().minCoeff();
  if (gamma < -dmin)
    detail::fail(ErrorCode::invalid_argument,
                 "AFG: d + gamma 1 must be nonnegative; gamma must be >= " +
                     std::to_string(-dmin));
  Vector v = g.degrees().array() + gamma;
  return ModularityMatrix::custom(g.adjacency(), Vector::Constant(g.n(), gamma), 1.0 / denom,
                                  std::move(v), Model::afg, gamma);
}

inline ModularityMatrix build(const Graph& g, const ModelSpec& spec) {
  switch (spec.model) {
  case Model::ng: return build_ng(g);
  case Model::norm: return build_norm(g);
  case Model::rb: return build_rb(g, spec.gamma);
  case Model::rn: return build_rn(g, spec.gamma);
  case Model::afg: return build_afg(g, spec.gamma);
  default: break;
  }
  detail::fail(ErrorCode::invalid_argument,
               "model '" + std::string(to_string(spec.model)) + "' cannot be built from a graph");
}

/// Matrix used for a subset S during successive bipartition.
///
/// For NG this is M_NG(S) - (D_{G(S)} - (vol S / vol G) D(S)), whose rows sum to
/// zero. RN's principal submatrix already is the RN matrix of G(S). Every other
/// model falls back to the principal submatrix, tagged `submatrix`.
/// `m` must be the matrix built over `g` itself.
inline ModularityMatrix subgraph_matrix(const ModularityMatrix& m, const Graph& g,
                                        const NodeSet& s) {
  detail::check_set(m, s);
  if (g.n() != m.n())
    detail::fail(ErrorCode::dimension_mismatch, "subgraph_matrix: graph and matrix differ in size");
  if (s.empty())
    detail::fail(ErrorCode::invalid_argument, "subgraph_matrix: empty node set");

  SparseMatrix a = detail::principal_submatrix(m.base(), s);
  Vector w = detail::restrict(m.diag_weights(), s);
  Vector v = detail::restrict(m.rank1_vector(), s);
  if (!(v.array() > 0.0).any())
    detail::fail(ErrorCode::invalid_argument,
                 "subgraph_matrix: rank-one vector vanishes on the subset");

  switch (m.model()) {
  case Model::ng: {
    // v = d and sigma = 1 / vol G for the ambient graph.
    const Vector inner_deg = a * Vector::Ones(s.size());
    const double ratio = v.sum() * m.sigma();
    w.array() += ratio * v.array() - inner_deg.array();
    return ModularityMatrix::custom(std::move(a), std::move(w), m.sigma(), std::move(v),
                                    Model::ng);
  }
  case Model::rn:
    return ModularityMatrix::custom(std::move(a), std::move(w), m.sigma(), std::move(v),
                                    Model::rn, m.gamma());
  default:
    return ModularityMatrix::custom(std::move(a), std::move(w), m.sigma(), std::move(v),
                                    Model::submatrix, m.gamma());
  }
}

/// Q(S) = e_in(S) + sum_{i in S} w_i - sigma (sum_{i in S} v_i)^2, with its parts.
struct ModularityReport {
  NodeSet subset;
  double q = 0.0;
  double e_in = 0.0;
  double diag = 0.0;
  double penalty = 0.0;
};

inline ModularityReport modularity(const ModularityMatrix& m, const NodeSet& s) {
  detail::check_set(m, s);
  const auto in = s.mask();
  ModularityReport r;
  r.subset = s;
  double vsum = 0.0;
  for (Index i : s) {
    for (SparseMatrix::InnerIterator it(m.base(), i); it; ++it)
      if (in[static_cast<std::size_t>(it.col())])
        r.e_in += it.value();
    r.diag += m.diag_weights()(i);
    vsum += m.rank1_vector()(i);
  }
  r.penalty = m.sigma() * vsum * vsum;
  r.q = r.e_in + r.diag - r.penalty;
  return r;
}

/// Q(S, T) = 1_S' M 1_T for disjoint S and T.
inline double joint_modularity(const ModularityMatrix& m, const NodeSet& s, const NodeSet& t) {
  detail::check_set(m, s);
  detail::check_set(m, t);
  if (!disjoint(s, t))
    detail::fail(ErrorCode::overlapping_sets, "joint modularity needs disjoint sets");
  const auto in_t = t.mask();
  double cross = 0.0;
  double vs = 0.0;
  double vt = 0.0;
  for (Index i : s) {
    for (SparseMatrix::InnerIterator it(m.base(), i); it; ++it)
      if (in_t[static_cast<std::size_t>(it.col())])
        cross += it.value();
    vs += m.rank1_vector()(i);
  }
  for (Index j : t)
    vt += m.rank1_vector()(j);
  return cross - m.sigma() * vs * vt;
}

/// Q(P) = sum_i Q(S_i).
inline double partition_modularity(const ModularityMatrix& m, const std::vector<NodeSet>& parts) {
  double q = 0.0;
  for (const auto& s : parts)
    q += modularity(m, s).q;
  return q;
}

} // namespace genmod
