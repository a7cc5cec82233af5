#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "streamdecomp/generators.hpp"
#include "streamdecomp/hierarchy.hpp"
#include "streamdecomp/metrics.hpp"
#include "streamdecomp/multisection.hpp"
#include "support/oracles.hpp"
#include "support/test_util.hpp"

using namespace streamdecomp;

namespace {

std::vector<BlockID> run(const InMemoryGraph& g, const MultisectionTree& tree, OmsScorer scorer = OmsScorer::fennel,
                         OmsStats* stats = nullptr) {
  InMemoryGraphStream stream(g);
  OmsConfig config;
  config.scorer = scorer;
  const auto state = run_oms(stream, tree, 0.03, config, stats);
  verify_block_weights(stream, state);
  return {state.assignment().begin(), state.assignment().end()};
}

StreamedNodeRecord record_with(NodeID id, std::vector<NodeID> neighbors) {
  StreamedNodeRecord r;
  r.id = id;
  for (NodeID v : neighbors) r.neighbors.push_back({v, 1});
  return r;
}

// Checks that children partition their parent's range in order and that
// leaf_node maps every block to a leaf covering exactly that block.
void expect_well_formed(const MultisectionTree& tree) {
  for (std::uint32_t i = 0; i < tree.size(); ++i) {
    const auto& node = tree.node(i);
    if (node.is_leaf()) {
      EXPECT_EQ(node.lo, node.hi);
      EXPECT_EQ(tree.leaf_node(node.lo), i);
      continue;
    }
    BlockID next = node.lo;
    BlockID smallest = node.leaves(), largest = 0;
    for (std::uint32_t c = 0; c < node.num_children; ++c) {
      const auto& child = tree.node(node.first_child + c);
      EXPECT_EQ(child.parent, static_cast<std::int32_t>(i));
      EXPECT_EQ(child.lo, next);
      EXPECT_EQ(child.depth, node.depth + 1);
      smallest = std::min(smallest, child.leaves());
      largest = std::max(largest, child.leaves());
      for (BlockID b = child.lo; b <= child.hi; ++b) EXPECT_EQ(tree.child_slot(i, b), c);
      next = child.hi + 1;
    }
    EXPECT_EQ(next, node.hi + 1);
    EXPECT_LE(largest - smallest, 1);
  }
  EXPECT_LE(tree.size(), 2u * static_cast<std::size_t>(tree.k()));
}

}  // namespace

TEST(MultisectionTree, FiveBlocksByBisection) {
  const auto tree = MultisectionTree::build_hierarchy(5, 2);
  expect_well_formed(tree);
  const auto& root = tree.node(0);
  ASSERT_EQ(root.num_children, 2u);
  EXPECT_EQ(tree.node(root.first_child).lo, 0);
  EXPECT_EQ(tree.node(root.first_child).hi, 2);
  EXPECT_EQ(tree.node(root.first_child + 1).lo, 3);
  EXPECT_EQ(tree.node(root.first_child + 1).hi, 4);
  EXPECT_EQ(tree.height(), 3u);
}

TEST(MultisectionTree, FourBlocksByBisection) {
  const auto tree = MultisectionTree::build_hierarchy(4, 2);
  expect_well_formed(tree);
  EXPECT_EQ(tree.size(), 7u);
  EXPECT_EQ(tree.height(), 2u);
  EXPECT_EQ(tree.max_fanout(), 2u);
}

TEST(MultisectionTree, RandomShapesAreWellFormed) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 50; ++i) {
    const BlockID k = static_cast<BlockID>(1 + rng() % 300);
    const auto b = static_cast<std::uint32_t>(2 + rng() % 15);
    const auto tree = MultisectionTree::build_hierarchy(k, b);
    expect_well_formed(tree);
    EXPECT_LE(tree.max_fanout(), b);
    const auto height = static_cast<double>(tree.height());
    if (k > 1) EXPECT_LE(height, std::ceil(std::log(static_cast<double>(k)) / std::log(static_cast<double>(b))) + 1);
  }
  for (int i = 0; i < 20; ++i) {
    HierarchySpec spec;
    for (std::size_t l = 0, layers = 1 + rng() % 3; l < layers; ++l) spec.a.push_back(1 + rng() % 6);
    spec.d.assign(spec.a.size(), 1);
    const auto tree = MultisectionTree::build_from_spec(spec);
    EXPECT_EQ(tree.k(), spec.k());
    expect_well_formed(tree);
  }
}

TEST(MultisectionTree, UnitFanoutIsSkipped) {
  const auto with_one = MultisectionTree::build_from_spec(parse_hierarchy("4:16:1"));
  const auto without = MultisectionTree::build_from_spec(parse_hierarchy("4:16"));
  ASSERT_EQ(with_one.size(), without.size());
  EXPECT_EQ(with_one.height(), 2u);
  for (std::uint32_t i = 0; i < with_one.size(); ++i) {
    EXPECT_EQ(with_one.node(i).lo, without.node(i).lo);
    EXPECT_EQ(with_one.node(i).hi, without.node(i).hi);
  }
  // Top layer is the outermost hierarchy level: 16 modules of 4.
  EXPECT_EQ(with_one.node(0).num_children, 16u);
}

TEST(HeterogeneousAlpha, ScalesWithLeafCount) {
  const auto four = MultisectionTree::build_hierarchy(16, 4);
  const auto& root = four.node(0);
  EXPECT_DOUBLE_EQ(heterogeneous_alpha(four, root.first_child, 3.0), 1.5);
  EXPECT_DOUBLE_EQ(heterogeneous_alpha(four, four.leaf_node(7), 3.0), 3.0);

  const auto five = MultisectionTree::build_hierarchy(5, 2);
  const auto first = five.node(0).first_child;
  EXPECT_DOUBLE_EQ(heterogeneous_alpha(five, first, 1.0), 1.0 / std::sqrt(3.0));
  EXPECT_DOUBLE_EQ(heterogeneous_alpha(five, first + 1, 1.0), 1.0 / std::sqrt(2.0));
}

TEST(HeterogeneousAlpha, TwoLayerHierarchy) {
  // Children of the root cover two PEs each; the bottom layer picks single PEs.
  const auto tree = MultisectionTree::build_from_spec(parse_hierarchy("2:2"));
  const auto top = tree.node(0).first_child;
  EXPECT_DOUBLE_EQ(heterogeneous_alpha(tree, top, 2.0), 2.0 / std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(heterogeneous_alpha(tree, tree.node(top).first_child, 2.0), 2.0);
}

TEST(OmsState, CapacityIsLeafCountTimesLmax) {
  const auto tree = MultisectionTree::build_from_spec(parse_hierarchy("4:16:2"));
  OmsState state(tree, 10, 7, 1.0);
  for (std::uint32_t i = 0; i < tree.size(); ++i) EXPECT_EQ(state.capacity(i), 7 * tree.node(i).leaves());
  EXPECT_EQ(state.capacity(0), 7 * 128);
  EXPECT_EQ(state.capacity(tree.node(0).first_child), 7 * 64);
  EXPECT_EQ(state.capacity(tree.node(tree.node(0).first_child).first_child), 7 * 4);
}

TEST(OmsAssign, FollowsNeighborDownBothLayers) {
  const auto tree = MultisectionTree::build_from_spec(parse_hierarchy("2:2"));
  OmsState state(tree, 8, 4, 0.5);
  for (BlockID b = 0; b < 4; ++b) state.commit(static_cast<NodeID>(b), b, 1);
  OmsConfig config;
  OmsScratch scratch;
  EXPECT_EQ(oms_assign(record_with(4, {3}), state, config, scratch), 3);
  EXPECT_EQ(state.weight(tree.leaf_node(3)), 2);
  EXPECT_EQ(state.weight(0), 5);
}

TEST(OmsAssign, IsolatedNodeTakesLightestChildren) {
  const auto tree = MultisectionTree::build_from_spec(parse_hierarchy("2:2"));
  OmsState state(tree, 8, 4, 0.5);
  state.commit(0, 0, 1);
  state.commit(1, 1, 1);
  state.commit(2, 2, 1);
  OmsConfig config;
  OmsScratch scratch;
  // Right subtree weighs 1, and inside it PE 3 is empty.
  EXPECT_EQ(oms_assign(record_with(3, {}), state, config, scratch), 3);
  EXPECT_EQ(oms_assign(record_with(4, {}), state, config, scratch), 0);
}

TEST(Oms, MatchesLayerByLayerPasses) {
  const auto spec = parse_hierarchy("2:2:2");
  const auto tree = MultisectionTree::build_from_spec(spec);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = seed % 2 ? gen::gnp(100, 0.06, seed) : testutil::random_weighted_graph(100, 0.06, 3, 4, seed);
    EXPECT_EQ(run(g, tree), oracle::multipass_oms(g, 8, oracle::shape_from_spec(spec), 0.03)) << "seed " << seed;
    EXPECT_EQ(run(g, tree, OmsScorer::ldg), oracle::multipass_oms(g, 8, oracle::shape_from_spec(spec), 0.03, false))
        << "ldg seed " << seed;
  }
}

TEST(Oms, NonHierarchicalMatchesLayerByLayerPasses) {
  for (BlockID k : {5, 12, 27}) {
    for (std::uint32_t b : {2u, 4u}) {
      oracle::TreeShape shape;
      shape.b = static_cast<BlockID>(b);
      const auto g = gen::rgg2d(400, 6, static_cast<std::uint64_t>(k) * b);
      EXPECT_EQ(run(g, MultisectionTree::build_hierarchy(k, b)), oracle::multipass_oms(g, k, shape, 0.03))
          << "k " << k << " b " << b;
    }
  }
}

TEST(Distance, MixedRadixExamples) {
  const DistanceCode code(parse_hierarchy("4:16:2", "1:10:100"));
  EXPECT_EQ(code.distance(0, 1), 1);
  EXPECT_EQ(code.distance(0, 4), 10);
  EXPECT_EQ(code.distance(0, 64), 100);
  EXPECT_EQ(code.distance(9, 9), 0);
  EXPECT_TRUE(code.uses_codes());
}

TEST(Distance, CodesAgreeWithDivision) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 30; ++i) {
    HierarchySpec spec;
    BlockID k = 1;
    while (spec.a.size() < 4) {
      const auto a = static_cast<std::uint32_t>(1 + rng() % 7);
      if (k * static_cast<BlockID>(a) > 256) break;
      spec.a.push_back(a);
      k *= static_cast<BlockID>(a);
    }
    if (spec.a.empty()) spec.a.push_back(2);
    std::int64_t d = 0;
    for (std::size_t l = 0; l < spec.a.size(); ++l) spec.d.push_back(d += 1 + static_cast<std::int64_t>(rng() % 20));
    const DistanceCode code(spec);
    const auto matrix = oracle::distance_matrix(spec);
    for (BlockID a = 0; a < code.k(); ++a) {
      for (BlockID b = 0; b < code.k(); ++b) {
        ASSERT_EQ(code.distance(a, b), code.distance_by_division(a, b));
        ASSERT_EQ(code.distance(a, b), matrix[a][b]);
        ASSERT_EQ(code.distance(a, b), code.distance(b, a));
      }
    }
  }
}

TEST(Oms, SingleBlock) {
  const auto tree = MultisectionTree::build_hierarchy(1, 4);
  EXPECT_EQ(tree.size(), 1u);
  for (BlockID b : run(gen::grid2d(4, 4), tree)) EXPECT_EQ(b, 0);
}

TEST(Oms, CommunicationCostOfTwoCliques) {
  std::vector<std::tuple<NodeID, NodeID, EdgeWeight>> edges;
  for (NodeID c = 0; c < 2; ++c) {
    for (NodeID u = 0; u < 4; ++u) {
      for (NodeID v = u + 1; v < 4; ++v) edges.emplace_back(4 * c + u, 4 * c + v, 1);
    }
  }
  const auto g = InMemoryGraph::from_edges(8, edges);
  // Both hierarchies have two PEs; they differ in the layer that separates them.
  for (const auto& [hierarchy, d] : {std::pair{"2:1", 1}, std::pair{"1:2", 10}}) {
    const auto spec = parse_hierarchy(hierarchy, "1:10");
    const DistanceCode code(spec);
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    for (unsigned mask = 0; mask < 256; ++mask) {
      if (__builtin_popcount(mask) != 4) continue;
      std::vector<BlockID> p(8);
      for (NodeID v = 0; v < 8; ++v) p[v] = (mask >> v) & 1;
      best = std::min<std::int64_t>(best, d * oracle::edge_cut(g, p));
    }
    EXPECT_EQ(best, 0);
    for (auto scorer : {OmsScorer::fennel, OmsScorer::ldg}) {
      const auto p = run(g, MultisectionTree::build_from_spec(spec), scorer);
      InMemoryGraphStream stream(g);
      const auto report = evaluate_graph(stream, p, 2, &code);
      ASSERT_TRUE(report.comm_cost.has_value());
      EXPECT_EQ(*report.comm_cost, d * report.edge_cut);
      if (scorer == OmsScorer::ldg) EXPECT_EQ(*report.comm_cost, best);
    }
  }
}

TEST(Oms, TreeWeightsSumOverChildren) {
  const auto tree = MultisectionTree::build_from_spec(parse_hierarchy("3:5:2"));
  const auto g = testutil::random_weighted_graph(300, 0.02, 4, 2, 8);
  InMemoryGraphStream stream(g);
  OmsState state(tree, g.num_nodes(), compute_lmax(g.total_node_weight(), tree.k(), 0.03),
                 fennel_alpha(300, static_cast<double>(g.num_edges()), tree.k(), 1.5));
  OmsConfig config;
  OmsScratch scratch;
  for (const auto& record : testutil::drain(stream)) oms_assign(record, state, config, scratch);
  std::vector<NodeWeight> leaf(static_cast<std::size_t>(tree.k()), 0);
  for (NodeID v = 0; v < g.num_nodes(); ++v) leaf[state.block_of(v)] += g.vwgt[v];
  for (std::uint32_t i = 0; i < tree.size(); ++i) {
    const auto& node = tree.node(i);
    NodeWeight expected = 0;
    if (node.is_leaf()) {
      expected = leaf[node.lo];
    } else {
      for (std::uint32_t c = 0; c < node.num_children; ++c) expected += state.weight(node.first_child + c);
    }
    EXPECT_EQ(state.weight(i), expected);
  }
  EXPECT_EQ(state.weight(0), g.total_node_weight());
}

TEST(Oms, ScalingWeightsAndAlphaKeepsAssignment) {
  const auto g = testutil::random_weighted_graph(200, 0.04, 1, 3, 12);
  auto scaled = g;
  for (auto& w : scaled.adjwgt) w *= 3;
  const auto tree = MultisectionTree::build_hierarchy(8, 2);
  const double alpha = fennel_alpha(200, static_cast<double>(g.num_edges()), 8, 1.5);
  auto run_with = [&](const InMemoryGraph& graph, double a) {
    InMemoryGraphStream stream(graph);
    OmsConfig config;
    config.fennel.alpha = a;
    const auto state = run_oms(stream, tree, 0.03, config);
    return std::vector<BlockID>(state.assignment().begin(), state.assignment().end());
  };
  EXPECT_EQ(run_with(g, alpha), run_with(scaled, 3 * alpha));
}

TEST(Oms, HashedBottomLayersStayBalanced) {
  const auto g = gen::rgg2d(3000, 8, 2);
  InMemoryGraphStream stream(g);
  OmsConfig config;
  config.hash_bottom_layers = 1;
  OmsStats stats;
  const auto state = run_oms(stream, MultisectionTree::build_hierarchy(64, 4), 0.03, config, &stats);
  EXPECT_LE(state.max_block_weight(), state.l_max());
  EXPECT_EQ(stats.violations, 0u);
}

TEST(Oms, ParallelRunIsValid) {
  const auto g = gen::rgg2d(20000, 8, 4);
  const auto tree = MultisectionTree::build_hierarchy(32, 4);
  for (unsigned threads : {1u, 4u}) {
    OmsConfig config;
    config.threads = threads;
    OmsStats stats;
    const auto state = run_oms_parallel(g, tree, 0.03, config, &stats);
    InMemoryGraphStream stream(g);
    EXPECT_NO_THROW(verify_block_weights(stream, state));
    for (NodeID v = 0; v < g.num_nodes(); ++v) ASSERT_NE(state.block_of(v), kUnassigned);
    // Unsynchronized capacity checks may overshoot, but only by a handful of nodes.
    EXPECT_LE(state.max_block_weight(), state.l_max() + static_cast<NodeWeight>(threads));
    if (threads == 1) {
      InMemoryGraphStream sequential(g);
      const auto reference = run_oms(sequential, tree, 0.03, config);
      EXPECT_TRUE(std::equal(state.assignment().begin(), state.assignment().end(), reference.assignment().begin()));
    }
  }
}
