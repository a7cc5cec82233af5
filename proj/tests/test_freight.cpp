#include <gtest/gtest.h>

#include <random>

#include "streamdecomp/freight.hpp"
#include "streamdecomp/generators.hpp"
#include "streamdecomp/metrics.hpp"
#include "support/oracles.hpp"
#include "support/test_util.hpp"

using namespace streamdecomp;

namespace {

std::vector<BlockID> run(const InMemoryHypergraph& hg, BlockID k, FreightObjective objective, double eps = 0.03) {
  InMemoryHypergraphStream stream(hg);
  FreightConfig config;
  config.objective = objective;
  const auto state = run_freight(stream, k, eps, config);
  return {state.assignment().begin(), state.assignment().end()};
}

StreamedHyperNodeRecord hyper_record(NodeID id, std::vector<NetID> nets) {
  StreamedHyperNodeRecord r;
  r.id = id;
  for (NetID e : nets) r.nets.push_back({e, 1});
  return r;
}

InMemoryHypergraph with_random_weights(InMemoryHypergraph hg, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> node(1, 5), net(1, 7);
  hg.node_weights.resize(hg.num_nodes);
  for (auto& w : hg.node_weights) w = node(rng);
  hg.net_weights.resize(hg.num_nets());
  for (auto& w : hg.net_weights) w = net(rng);
  return hg;
}

}  // namespace

TEST(Freight, UntouchedNetsGoToLightestBlock) {
  PartitionState state(10, 3, 1.0, 10);
  state.assign(0, 0, 1);
  state.assign(1, 0, 1);
  state.assign(2, 2, 1);
  NetTracker tracker(4);
  BlockAffinity affinity(3);
  FreightConfig config;
  config.fennel.alpha = 0.5;
  EXPECT_EQ(freight_assign(hyper_record(3, {0, 1}), state, tracker, config, affinity), 1);
  EXPECT_EQ(tracker.status(0), NetStatus::single_block);
  EXPECT_EQ(tracker.last_block(1), 1);
}

TEST(Freight, CutNetObjectiveIgnoresCutNets) {
  for (auto objective : {FreightObjective::connectivity, FreightObjective::cut_net}) {
    PartitionState state(10, 3, 1.0, 10);
    NetTracker tracker(1);
    state.assign(0, 0, 1);
    tracker.record_pin(0, 0);
    state.assign(1, 1, 1);
    tracker.record_pin(0, 1);
    ASSERT_EQ(tracker.status(0), NetStatus::cut);
    BlockAffinity affinity(3);
    FreightConfig config;
    config.objective = objective;
    config.fennel.alpha = 0.1;
    const BlockID expected = objective == FreightObjective::connectivity ? 1 : 2;
    EXPECT_EQ(freight_assign(hyper_record(2, {0}), state, tracker, config, affinity), expected);
  }
}

TEST(Freight, TrackerFollowsLastPin) {
  NetTracker tracker(1);
  EXPECT_EQ(tracker.status(0), NetStatus::untouched);
  tracker.record_pin(0, 3);
  tracker.record_pin(0, 3);
  EXPECT_EQ(tracker.status(0), NetStatus::single_block);
  tracker.record_pin(0, 1);
  tracker.record_pin(0, 3);
  EXPECT_EQ(tracker.status(0), NetStatus::cut);
  EXPECT_EQ(tracker.last_block(0), 3);
}

TEST(Freight, MatchesNaiveArgmax) {
  std::mt19937_64 rng(99);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const BlockID k = static_cast<BlockID>(2 + rng() % 15);
    auto hg = gen::random_hypergraph(120, 80, 400, 6, seed);
    if (seed % 2) hg = with_random_weights(std::move(hg), seed);
    for (bool cut_net : {false, true}) {
      const auto objective = cut_net ? FreightObjective::cut_net : FreightObjective::connectivity;
      EXPECT_EQ(run(hg, k, objective), oracle::naive_freight(hg, k, 0.03, cut_net))
          << "seed " << seed << " k " << k << " cut_net " << cut_net;
    }
  }
}

TEST(Freight, GraphInputReducesToFennel) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = seed % 2 ? gen::gnp(150, 0.05, seed) : testutil::random_weighted_graph(150, 0.05, 1, 5, seed);
    InMemoryGraphStream stream(g);
    OnePassConfig config;
    const auto fennel = partition_onepass(stream, 8, 0.03, config);
    const auto freight = run(gen::graph_as_hypergraph(g), 8, FreightObjective::connectivity);
    EXPECT_TRUE(std::equal(freight.begin(), freight.end(), fennel.assignment().begin())) << "seed " << seed;
  }
}

TEST(Freight, SingleBlock) {
  const auto hg = gen::random_hypergraph(50, 20, 100, 5, 1);
  for (BlockID b : run(hg, 1, FreightObjective::connectivity)) EXPECT_EQ(b, 0);
}

TEST(Freight, DisjointNetsAreKeptWhole) {
  InMemoryHypergraph hg;
  hg.num_nodes = 6;
  hg.add_net({0, 1, 2});
  hg.add_net({3, 4, 5});
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (unsigned mask = 0; mask < 64; ++mask) {
    if (__builtin_popcount(mask) != 3) continue;
    std::vector<BlockID> p(6);
    for (NodeID v = 0; v < 6; ++v) p[v] = (mask >> v) & 1;
    best = std::min<std::int64_t>(best, oracle::hyper_cut(hg, p).connectivity);
  }
  ASSERT_EQ(best, 0);
  const auto p = run(hg, 2, FreightObjective::connectivity);
  InMemoryHypergraphStream stream(hg);
  EXPECT_EQ(evaluate_hypergraph(stream, p, 2).connectivity, best);
}

TEST(Freight, BalancedAndBeatsHashing) {
  const auto hg = gen::stencil_row_net(30, 30, 1, 5);
  InMemoryHypergraphStream stream(hg);
  for (BlockID k : {4, 16, 64}) {
    FreightStats stats;
    const auto state = run_freight(stream, k, 0.03, FreightConfig{}, &stats);
    EXPECT_LE(state.max_block_weight(), state.l_max());
    EXPECT_EQ(stats.violations, 0u);
    std::vector<BlockID> hashed(hg.num_nodes);
    for (NodeID v = 0; v < hg.num_nodes; ++v) hashed[v] = static_cast<BlockID>(v % k);
    EXPECT_LT(oracle::hyper_cut(hg, {state.assignment().begin(), state.assignment().end()}).connectivity,
              oracle::hyper_cut(hg, hashed).connectivity);
  }
}

TEST(Freight, ObjectiveNames) {
  EXPECT_EQ(parse_freight_objective("con"), FreightObjective::connectivity);
  EXPECT_EQ(parse_freight_objective("cut"), FreightObjective::cut_net);
  EXPECT_THROW((void)parse_freight_objective("km1"), InputError);
}
