#include <gtest/gtest.h>

#include <numeric>

#include "graphpae/errors.hpp"
#include "graphpae/graph.hpp"
#include "graphpae/rng.hpp"
#include "graphpae/synth.hpp"

using namespace graphpae;

namespace {

Graph from_pairs(std::size_t n, std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs,
                 GraphBuildOptions options = {}) {
  std::vector<EdgeInput> edges;
  for (auto [a, b] : pairs) edges.push_back({a, b, std::nullopt});
  return Graph::from_edges(n, edges, Tensor(n, 2, 1.0), options);
}

void expect_csr_invariants(const Graph& g) {
  const auto rp = g.row_ptr();
  const auto col = g.col_idx();
  ASSERT_EQ(rp.size(), g.num_nodes() + 1);
  EXPECT_EQ(rp.front(), 0u);
  EXPECT_EQ(rp.back(), col.size());
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    EXPECT_LE(rp[i], rp[i + 1]);
    for (auto k = rp[i] + 1; k < rp[i + 1]; ++k) EXPECT_LT(col[k - 1], col[k]);
  }
  for (std::size_t i = 0; i < g.num_nodes(); ++i)
    for (std::size_t j = 0; j < g.num_nodes(); ++j) EXPECT_EQ(g.has_edge(i, j), g.has_edge(j, i));
}

}  // namespace

TEST(Graph, TwoEdgePathStoresFourDirectedEdges) {
  const Graph g = from_pairs(3, {{0, 1}, {1, 2}});
  EXPECT_EQ(g.num_nodes(), 3u);
  EXPECT_EQ(g.num_edges(), 4u);
  expect_csr_invariants(g);
}

TEST(Graph, SelfLoopStoredOnce) {
  const Graph g = from_pairs(3, {{0, 1}, {2, 2}});
  EXPECT_EQ(g.num_edges(), 3u);
  EXPECT_TRUE(g.has_edge(2, 2));
  EXPECT_EQ(g.self_loops(), 1u);
  const Graph dropped = from_pairs(3, {{0, 1}, {2, 2}}, {.keep_self_loops = false});
  EXPECT_EQ(dropped.num_edges(), 2u);
  EXPECT_FALSE(dropped.has_edge(2, 2));
}

TEST(Graph, DuplicatesCollapsedAndCounted) {
  const Graph g = from_pairs(2, {{0, 1}, {0, 1}, {1, 0}});
  EXPECT_EQ(g.num_edges(), 2u);
  EXPECT_EQ(g.duplicate_edges(), 2u);
}

TEST(Graph, ReverseEdgesPointBack) {
  const Graph g = make_random_graph(30, 0.2, 4);
  const auto rows = g.edge_rows();
  const auto cols = g.col_idx();
  const auto rev = g.reverse_edges();
  for (std::size_t k = 0; k < g.num_edges(); ++k) {
    EXPECT_EQ(rows[rev[k]], cols[k]);
    EXPECT_EQ(cols[rev[k]], rows[k]);
  }
}

TEST(Graph, RejectsOutOfRangeNode) {
  EXPECT_THROW(from_pairs(2, {{0, 2}}), RangeError);
}

TEST(Graph, RejectsNonFiniteFeatures) {
  Tensor x(2, 1, 0.0);
  x(1, 0) = std::numeric_limits<double>::quiet_NaN();
  std::vector<EdgeInput> edges{{0, 1, std::nullopt}};
  EXPECT_THROW(Graph::from_edges(2, edges, x), DataError);
}

TEST(Graph, RejectsFeatureRowMismatch) {
  std::vector<EdgeInput> edges{{0, 1, std::nullopt}};
  EXPECT_THROW(Graph::from_edges(3, edges, Tensor(2, 1)), DataError);
}

TEST(Graph, FromCsrValidates) {
  EXPECT_NO_THROW(Graph::from_csr(2, {0, 1, 2}, {1, 0}, Tensor(2, 1)));
  EXPECT_THROW(Graph::from_csr(2, {0, 1, 1}, {1}, Tensor(2, 1)), DataError);
  EXPECT_THROW(Graph::from_csr(2, {0, 2, 2}, {1, 1}, Tensor(2, 1)), DataError);
}

TEST(Graph, IsolatedNodesAllowed) {
  const Graph g = from_pairs(4, {{0, 1}});
  EXPECT_EQ(g.degree(3), 0u);
  EXPECT_TRUE(g.neighbors(3).empty());
}

TEST(Degree, PathAndComplete) {
  EXPECT_EQ(degree_vector(make_path(3)), (std::vector<double>{1, 2, 1}));
  EXPECT_EQ(degree_vector(make_complete(4)), (std::vector<double>{3, 3, 3, 3}));
}

TEST(Degree, HandshakeIdentity) {
  const Graph g = make_sbm({50, 50}, 0.2, 0.02, 7, FeatureMode::kBlockOneHot);
  const auto d = degree_vector(g);
  EXPECT_EQ(std::accumulate(d.begin(), d.end(), 0.0), static_cast<double>(g.num_edges()));
}

TEST(Graph, PermutationRelabelsEverything) {
  const Graph g = make_sbm({6, 6}, 0.6, 0.1, 3, FeatureMode::kSmooth);
  std::vector<std::uint32_t> perm(g.num_nodes());
  std::iota(perm.begin(), perm.end(), 0u);
  Rng rng(11);
  shuffle(perm, rng);
  const Graph p = permute_graph(g, perm);
  expect_csr_invariants(p);
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    for (std::size_t j = 0; j < g.num_nodes(); ++j) EXPECT_EQ(g.has_edge(i, j), p.has_edge(perm[i], perm[j]));
    for (std::size_t c = 0; c < g.feature_dim(); ++c) EXPECT_EQ(g.features()(i, c), p.features()(perm[i], c));
    EXPECT_EQ((*g.labels())(i, 0), (*p.labels())(perm[i], 0));
  }
}

TEST(Graph, DisjointUnionOffsetsIds) {
  const std::vector<Graph> parts{make_path(3), make_complete(3)};
  const Graph u = disjoint_union(parts);
  EXPECT_EQ(u.num_nodes(), 6u);
  EXPECT_EQ(u.num_edges(), 4u + 6u);
  EXPECT_TRUE(u.has_edge(3, 5));
  EXPECT_FALSE(u.has_edge(2, 3));
  std::size_t count = 0;
  const auto comp = connected_components(u, &count);
  EXPECT_EQ(count, 2u);
  EXPECT_EQ(comp[0], comp[2]);
  EXPECT_NE(comp[2], comp[3]);
}

TEST(Graph, CollectionValidatesFeatureDims) {
  GraphCollection c;
  c.graphs = {make_path(3, 2), make_path(3, 3)};
  EXPECT_THROW(c.validate(), DataError);
}

TEST(Split, ValidateRejectsOverlapAndRange) {
  Split s{{0, 1}, {2}, {3}};
  EXPECT_NO_THROW(s.validate(4));
  EXPECT_THROW(s.validate(3), RangeError);
  Split overlap{{0, 1}, {1}, {}};
  EXPECT_THROW(overlap.validate(4), DataError);
}
