#include <gtest/gtest.h>

#include <random>

#include "corpus.hpp"

using namespace genmod;
using namespace genmod::oracles;

namespace {

Graph k2() { return Graph::from_edge_list({{0, 1}}); }

std::vector<NodeSet> triangles() { return {NodeSet(6, {0, 1, 2}), NodeSet(6, {3, 4, 5})}; }

} // namespace

TEST(StrictGap, Barbell) {
  const Graph g = generators::barbell();
  const auto r = check_strict_gap(build_ng(g), g);
  EXPECT_TRUE(r.passes);
  EXPECT_TRUE(r.strict_gap);
  EXPECT_TRUE(r.sandwich);
  EXPECT_NEAR(r.m_g, std::sqrt(3.0), 1e-12);
  EXPECT_GT(r.lambda1_base, r.m_g);
}

TEST(StrictGap, CorpusSample) {
  for (const auto& c : corpus::small_corpus(20, 5, 40, 11))
    for (const auto& nm : corpus::corpus_models(c.graph)) {
      const auto r = check_strict_gap(build(c.graph, nm.spec), c.graph);
      EXPECT_TRUE(r.passes) << nm.name << " seed " << c.seed;
    }
}

TEST(StrictGap, DisconnectedRejected) {
  const Graph g = Graph::from_edge_list(4, {{0, 1}, {2, 3}});
  EXPECT_THROW(check_strict_gap(build_ng(g), g), Error);
}

TEST(Nodal, BarbellDomainsGrowAndStayConnected) {
  const Graph g = generators::barbell();
  const auto r = check_nodal_connectivity(build_ng(g), g, {10.0, 0.0, 0.1, 1.0});
  EXPECT_TRUE(r.passes);
  ASSERT_EQ(r.entries.size(), 4U);
  EXPECT_EQ(r.entries.front().epsilon, 0.0);
  EXPECT_EQ(r.entries.front().domain.size(), 3);
  EXPECT_EQ(r.entries.back().domain.size(), 6);
  for (const auto& e : r.entries) {
    EXPECT_TRUE(e.connected);
    EXPECT_TRUE(e.nested);
  }
}

TEST(Nodal, StarReportsMultiplicity) {
  const Graph g = generators::star_with_loops(4);
  const auto r = check_nodal_connectivity(build_ng(g), g, {0.0, 1.0});
  EXPECT_FALSE(r.simple);
}

TEST(SignCertificate, K2WholeSetEqualityCase) {
  const auto m = build_ng(k2());
  const auto c = sign_pattern_certificate(m, NodeSet::all(2));
  EXPECT_DOUBLE_EQ(c.alpha, 0.5);
  EXPECT_NEAR(c.lhs, 0.0, 1e-15);
  EXPECT_NEAR(c.rhs, 0.0, 1e-15);
  EXPECT_TRUE(c.holds);
  EXPECT_TRUE(c.checked);
  EXPECT_TRUE(c.predicted_pattern_verified);
}

TEST(SignCertificate, K2SingletonFails) {
  const auto c = sign_pattern_certificate(build_ng(k2()), NodeSet(2, {0}));
  EXPECT_DOUBLE_EQ(c.lhs, -2.0);
  EXPECT_FALSE(c.holds);
  EXPECT_FALSE(c.checked);
}

TEST(SignCertificate, ZeroMatrixIsDegenerate) {
  // K2 under AFG(1) is the zero matrix.
  const auto m = build_afg(k2(), 1.0);
  const auto c = sign_pattern_certificate(m, NodeSet::all(2), 0.0);
  EXPECT_TRUE(c.degenerate);
  EXPECT_FALSE(c.holds);
}

TEST(SignCertificate, ExhaustiveSmallGraphs) {
  for (const auto& cse : corpus::small_corpus(30, 3, 7, 4242))
    for (const auto& nm : corpus::corpus_models(cse.graph)) {
      const auto m = build(cse.graph, nm.spec);
      const Index n = m.n();
      for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        const auto c = sign_pattern_certificate(m, NodeSet::from_bits(n, mask));
        if (c.holds)
          EXPECT_TRUE(c.predicted_pattern_verified) << nm.name << " mask " << mask;
      }
    }
}

TEST(SignCertificate, FrobeniusShift) {
  const auto m = build_rb(generators::barbell(), 0.7);
  Matrix d = m.dense();
  d.diagonal().array() += 0.3;
  EXPECT_NEAR(shifted_frobenius(m, 0.3), d.norm(), 1e-13);
  EXPECT_NEAR(shifted_frobenius(m, 0.3, 2), d.norm(), 1e-10);
}

TEST(Perturbation, BarbellEdge) {
  const Graph g = generators::barbell();
  const auto r = perturbation_rate(g, {Model::ng, 1.0}, 0, 1, 1e-5);
  EXPECT_TRUE(r.assumption_holds);
  ASSERT_TRUE(r.error_bound.has_value());
  EXPECT_TRUE(r.passes);
  EXPECT_LE(std::abs(r.mu - r.first_order), *r.error_bound + 4 * std::abs(r.mu - r.mu_half) + 1e-6);
}

TEST(Perturbation, SignMatchesWhenGuaranteed) {
  std::mt19937_64 rng(17);
  int guaranteed = 0;
  for (int k = 0; k < 20; ++k) {
    const Graph g = generators::random_connected({12, 0.3, 2.0}, rng);
    for (Index j = 1; j < 12; ++j) {
      const auto r = perturbation_rate(g, {Model::rb, 0.5}, 0, j, 1e-6);
      EXPECT_TRUE(r.passes);
      if (r.sign_guaranteed && std::abs(r.first_order) > 1e-3) {
        ++guaranteed;
        EXPECT_EQ(r.mu > 0.0, r.first_order > 0.0);
      }
    }
  }
  EXPECT_GT(guaranteed, 0);
}

TEST(Perturbation, RnHasNoRankOneError) {
  // v = 1 and sigma = gamma do not depend on A, so eta = 0.
  const Graph g = generators::barbell();
  const auto r = perturbation_rate(g, {Model::rn, 0.3}, 1, 4, 1e-5);
  ASSERT_TRUE(r.eta.has_value());
  EXPECT_DOUBLE_EQ(*r.eta, 0.0);
  EXPECT_NEAR(r.mu, r.first_order, 1e-3);
}

TEST(Perturbation, NormIsNotSinglePair) {
  const auto r = perturbation_rate(generators::barbell(), {Model::norm, 1.0}, 0, 1, 1e-5);
  EXPECT_FALSE(r.assumption_holds);
  EXPECT_TRUE(r.passes);
  EXPECT_FALSE(r.note.empty());
}

TEST(Perturbation, Rejections) {
  const Graph g = generators::barbell();
  const ModelSpec ng{Model::ng, 1.0};
  EXPECT_THROW(perturbation_rate(g, ng, 0, 1, 0.0), Error);
  EXPECT_THROW(perturbation_rate(g, ng, 0, 0, 1e-4), Error);
  EXPECT_THROW(perturbation_rate(g, ng, 0, 6, 1e-4), Error);
  try {
    perturbation_rate(generators::star_with_loops(4), ng, 0, 1, 1e-4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::not_simple);
  }
}

TEST(ClusterMatrix, PartitionRowSumsVanishUnderNg) {
  const auto m = build_ng(generators::barbell());
  const auto c = cluster_matrix(m, triangles());
  EXPECT_NEAR(c.c(0, 0), 2.5, 1e-14);
  EXPECT_NEAR(c.c(0, 1), -2.5, 1e-14);
  EXPECT_LE(c.c.rowwise().sum().cwiseAbs().maxCoeff(), 1e-14);
  // B holds the internal and cut weights.
  EXPECT_NEAR(c.b(0, 0), 6.0, 1e-14);
  EXPECT_NEAR(c.b(0, 1), 1.0, 1e-14);
}

TEST(ClusterMatrix, OverlapRejected) {
  const auto m = build_ng(generators::barbell());
  EXPECT_THROW(cluster_matrix(m, {NodeSet(6, {0, 1}), NodeSet(6, {1, 2})}), Error);
  EXPECT_THROW(cluster_matrix(m, {NodeSet(6, {0, 1}), NodeSet::none(6)}), Error);
}

TEST(CountBound, BarbellNgSingularClusterMatrix) {
  const auto m = build_ng(generators::barbell());
  const auto r = module_count_bound(m, triangles());
  EXPECT_FALSE(r.module_theorem);
  EXPECT_TRUE(r.partition_corollary);
  EXPECT_EQ(r.bound, 1);
  EXPECT_EQ(r.positive_count, 1);
  EXPECT_TRUE(r.passes);
}

TEST(CountBound, BarbellRbModuleTheorem) {
  const auto m = build_rb(generators::barbell(), 0.5);
  const auto r = module_count_bound(m, triangles(), Vector::Ones(2));
  EXPECT_TRUE(r.module_theorem);
  EXPECT_EQ(r.which, "module-theorem");
  EXPECT_EQ(r.bound, 2);
  EXPECT_EQ(r.positive_count, 2);
  EXPECT_TRUE(r.passes);
}

TEST(CountBound, CliqueRingPartition) {
  const Graph g = generators::clique_ring(3, 4);
  std::vector<NodeSet> cliques;
  for (Index k = 0; k < 3; ++k)
    cliques.push_back(NodeSet(12, {4 * k, 4 * k + 1, 4 * k + 2, 4 * k + 3}));
  const auto r = module_count_bound(build_ng(g), cliques);
  EXPECT_EQ(r.bound, 2);
  EXPECT_EQ(r.positive_count, 2);
  EXPECT_TRUE(r.passes);
}

TEST(CountBound, HoldsOnSsgbLeaves) {
  for (const auto& c : corpus::small_corpus(20, 8, 30, 55))
    for (const auto& nm : corpus::corpus_models(c.graph)) {
      const auto d = ssgb(c.graph, nm.spec);
      const auto r = module_count_bound(build(c.graph, nm.spec), d.leaf_sets());
      EXPECT_TRUE(r.passes) << nm.name << " seed " << c.seed << " bound " << r.bound;
    }
}

TEST(BruteForce, SmallCases) {
  EXPECT_DOUBLE_EQ(brute_force_max_modularity(build_ng(k2())).best_q, 0.0);
  EXPECT_TRUE(brute_force_max_modularity(build_ng(k2())).best_set.empty());
  EXPECT_NEAR(brute_force_max_modularity(build_ng(generators::complete(3))).best_q, 0.0, 1e-14);
  const auto bb = brute_force_max_modularity(build_ng(generators::barbell()));
  EXPECT_NEAR(bb.best_q, 2.5, 1e-12);
  EXPECT_EQ(bb.best_set.size(), 3);
}

TEST(BruteForce, AgreesWithDirectSum) {
  std::mt19937_64 rng(90);
  for (int k = 0; k < 10; ++k) {
    const Graph g = generators::random_connected({9, 0.4, 2.0}, rng);
    const auto m = build_afg(g, 0.5);
    const Matrix d = corpus::dense_model(corpus::dense_adjacency(g), {Model::afg, 0.5}).m;
    double best = 0.0, best_ratio = -1e300;
    for (std::uint64_t mask = 1; mask < 512; ++mask) {
      const Vector x = NodeSet::from_bits(9, mask).indicator();
      const double q = x.dot(d * x);
      best = std::max(best, q);
      best_ratio = std::max(best_ratio, q / x.sum());
    }
    const auto r = brute_force_max_modularity(m);
    EXPECT_NEAR(r.best_q, best, 1e-11);
    EXPECT_NEAR(r.best_ratio, best_ratio, 1e-11);
  }
}

TEST(BruteForce, CapEnforced) {
  try {
    brute_force_max_modularity(build_ng(generators::path(kEnumerationCap + 1)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::enumeration_cap_exceeded);
  }
}
