#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "genmod/oracles.hpp"

namespace genmod::json {

using Json = nlohmann::ordered_json;

/// Non-finite values become null.
inline Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

/// Sorted external IDs of a node set; falls back to 1-based indices.
inline Json ids(const NodeSet& s, const std::vector<std::int64_t>* external = nullptr) {
  Json out = Json::array();
  for (Index i : s)
    out.push_back(external ? (*external)[static_cast<std::size_t>(i)]
                           : static_cast<std::int64_t>(i + 1));
  return out;
}

inline Json vector(const Vector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i)
    out.push_back(number(v(i)));
  return out;
}

inline Json model(const ModelSpec& spec) {
  Json out{{"name", std::string(to_string(spec.model))}};
  if (takes_gamma(spec.model))
    out["gamma"] = spec.gamma;
  return out;
}

inline Json report(const ModularityReport& r, const std::vector<std::int64_t>* external = nullptr) {
  return Json{{"subset", ids(r.subset, external)},
              {"q", number(r.q)},
              {"e_in", number(r.e_in)},
              {"diag", number(r.diag)},
              {"penalty", number(r.penalty)}};
}

inline Json spectrum(const Spectrum& s) {
  return Json{{"eigenvalues", vector(s.eigenvalues)},
              {"positive_count", s.positive_count},
              {"nonnegative_count", s.nonnegative_count},
              {"tau", s.tau},
              {"threshold", number(s.threshold)}};
}

inline Json leading(const LeadingPair& lp) {
  return Json{{"value", number(lp.value)},
              {"second", number(lp.second)},
              {"gap", number(lp.gap)},
              {"simple", lp.simple},
              {"orientation", lp.orientation},
              {"frobenius", number(lp.frobenius)},
              {"method", lp.diagnostics.method},
              {"iterations", lp.diagnostics.iterations},
              {"residual", number(lp.diagnostics.residual)}};
}

inline Json bipartition(const Bipartition& b, const std::vector<std::int64_t>* external = nullptr) {
  return Json{{"positive", ids(b.positive, external)},
              {"negative", ids(b.negative, external)},
              {"positive_connected", b.positive_connected},
              {"negative_connected", b.negative_connected},
              {"guaranteed", b.guaranteed},
              {"leading", leading(b.leading)}};
}

inline Json dendrogram_node(const Dendrogram& d, Index k,
                            const std::vector<std::int64_t>* external) {
  const auto& node = d.nodes[static_cast<std::size_t>(k)];
  Json out{{"subset", ids(node.subset, external)},
           {"depth", node.depth},
           {"q", number(node.q)},
           {"connected", node.connected},
           {"matrix", std::string(to_string(node.matrix_model))}};
  out["leading_value"] = node.leading_value ? number(*node.leading_value) : Json(nullptr);
  out["leading_simple"] = node.leading_simple ? Json(*node.leading_simple) : Json(nullptr);
  if (node.split) {
    out["positive_connected"] = node.split->positive_connected;
    out["negative_connected"] = node.split->negative_connected;
  }
  out["stop"] = node.is_leaf() ? Json(std::string(to_string(node.stop))) : Json(nullptr);
  Json kids = Json::array();
  for (Index c : node.children)
    kids.push_back(dendrogram_node(d, c, external));
  out["children"] = std::move(kids);
  return out;
}

inline Json dendrogram(const Dendrogram& d, const std::vector<std::int64_t>* external = nullptr) {
  Json leaves = Json::array();
  for (const auto& s : d.leaf_sets())
    leaves.push_back(ids(s, external));
  return Json{{"model", model(d.model)},
              {"n", d.n},
              {"communities", leaves.size()},
              {"modularity", number(d.modularity)},
              {"multiple_leading", d.any_multiple_leading()},
              {"leaves", std::move(leaves)},
              {"root", dendrogram_node(d, 0, external)}};
}

inline Json audit(const AuditReport& a) {
  return Json{{"splits", a.splits},
              {"guaranteed_splits", a.guaranteed_splits},
              {"guaranteed_violations", a.guaranteed_violations},
              {"positive_connected", a.positive_connected},
              {"negative_connected", a.negative_connected},
              {"parts_total", a.parts_total},
              {"parts_connected", a.parts_connected},
              {"leaves", a.leaves},
              {"leaves_connected", a.leaves_connected},
              {"passes", a.passes}};
}

// ---------------------------------------------------------------------------
// Verdict records: {theorem, hypotheses_checked, hypothesis_values,
// conclusion_checked, pass, tolerances} plus optional warnings.

inline Json verdict(const std::string& theorem, bool hypotheses, Json values, bool conclusion,
                    bool pass, Json tolerances, const std::vector<std::string>& warnings = {}) {
  Json out{{"theorem", theorem},
           {"hypotheses_checked", hypotheses},
           {"hypothesis_values", std::move(values)},
           {"conclusion_checked", conclusion},
           {"pass", pass},
           {"tolerances", std::move(tolerances)}};
  if (!warnings.empty())
    out["warnings"] = warnings;
  return out;
}

inline Json verdict(const oracles::GapCheck& r, const oracles::OracleOptions& opt) {
  std::vector<std::string> warn;
  if (r.retried)
    warn.push_back("re-run at tightened solver tolerance");
  return verdict("strict-gap", true,
                 Json{{"m_g", number(r.m_g)},
                      {"lambda1_base", number(r.lambda1_base)},
                      {"lambda2_base", number(r.lambda2_base)},
                      {"gap", number(r.gap)},
                      {"frobenius", number(r.frobenius)},
                      {"strict_gap", r.strict_gap},
                      {"sandwich", r.sandwich},
                      {"simplicity_expected", r.simplicity_expected},
                      {"simple", r.simple}},
                 true, r.passes,
                 Json{{"gap", opt.gap_tol}, {"sandwich", opt.sandwich_tol},
                      {"residual", opt.solver.residual_tol}},
                 warn);
}

inline Json verdict(const oracles::NodalCheck& r, const oracles::OracleOptions& opt,
                    const std::vector<std::int64_t>* external = nullptr) {
  std::vector<std::string> warn;
  if (!r.simple)
    warn.push_back("leading eigenvalue is multiple; the eigenvector is one of many");
  if (r.orientation == 0)
    warn.push_back("v'x vanished; orientation fixed by the largest entry");
  if (r.retried)
    warn.push_back("re-run at tightened solver tolerance");
  Json per = Json::array();
  for (const auto& e : r.entries)
    per.push_back(Json{{"epsilon", e.epsilon},
                       {"domain", ids(e.domain, external)},
                       {"connected", e.connected},
                       {"nested", e.nested}});
  return verdict("nodal-domain", true,
                 Json{{"simple", r.simple}, {"orientation", r.orientation}, {"domains", per}},
                 true, r.passes, Json{{"zero", opt.zero_tol}, {"residual", opt.solver.residual_tol}},
                 warn);
}

inline Json verdict(const oracles::SignCertificate& c, const oracles::OracleOptions& opt,
                    const std::vector<std::int64_t>* external = nullptr) {
  const bool pass = !c.holds || c.predicted_pattern_verified;
  return verdict("sign-certificate", true,
                 Json{{"subset", ids(c.subset, external)},
                      {"alpha", number(c.alpha)},
                      {"lhs", number(c.lhs)},
                      {"rhs", number(c.rhs)},
                      {"holds", c.holds},
                      {"degenerate", c.degenerate},
                      {"simple", c.simple},
                      {"nonnegative_pattern", c.nonnegative_pattern},
                      {"exact_pattern", c.exact_pattern}},
                 c.checked, pass,
                 Json{{"inequality", 1e-12}, {"zero", opt.zero_tol}, {"simple", opt.solver.simple_tol}});
}

inline Json verdict(const oracles::PerturbationReport& r, const oracles::OracleOptions& opt,
                    const std::vector<std::int64_t>* external = nullptr) {
  auto id = [&](Index i) {
    return external ? (*external)[static_cast<std::size_t>(i)] : static_cast<std::int64_t>(i + 1);
  };
  std::vector<std::string> warn;
  if (!r.note.empty())
    warn.push_back(r.note);
  return verdict("perturbation-rate", r.assumption_holds && r.error_bound.has_value(),
                 Json{{"edge", Json::array({id(r.i), id(r.j)})},
                      {"epsilon", r.epsilon},
                      {"m_g0", number(r.m_g0)},
                      {"m_geps", number(r.m_geps)},
                      {"mu", number(r.mu)},
                      {"mu_half", number(r.mu_half)},
                      {"first_order", number(r.first_order)},
                      {"richardson_ratio", number(r.richardson_ratio)},
                      {"cos_theta", number(r.cos_theta)},
                      {"eta", r.eta ? number(*r.eta) : Json(nullptr)},
                      {"error_bound", r.error_bound ? number(*r.error_bound) : Json(nullptr)},
                      {"sign_guaranteed", r.sign_guaranteed}},
                 r.assumption_holds && r.error_bound.has_value(), r.passes,
                 Json{{"simple", opt.solver.simple_tol}, {"residual", opt.solver.residual_tol}},
                 warn);
}

inline Json verdict(const oracles::CountBound& r, const oracles::OracleOptions& opt,
                    const std::vector<std::int64_t>* external = nullptr) {
  Json sets = Json::array();
  for (const auto& s : r.clusters.subsets)
    sets.push_back(ids(s, external));
  Json c = Json::array();
  for (Index a = 0; a < r.clusters.c.rows(); ++a)
    c.push_back(vector(r.clusters.c.row(a).transpose()));
  return verdict("positive-eigenvalue-count", true,
                 Json{{"subsets", sets},
                      {"cluster_matrix", c},
                      {"module_signs", r.module_signs},
                      {"alpha_source", r.alpha_source},
                      {"comparison_min_eigenvalue", number(r.comparison_min_eigenvalue)},
                      {"is_partition", r.is_partition},
                      {"null_residual", number(r.null_residual)},
                      {"diagonal_dominance", r.diagonal_dominance},
                      {"which", r.which},
                      {"bound", r.bound},
                      {"positive_count", r.positive_count}},
                 r.bound > 0, r.passes, Json{{"sign", opt.solver.sign_tol}, {"strict", opt.strict_tol}});
}

} // namespace genmod::json
