// Acceptance checks: one PASS/FAIL line per criterion. `acceptance 6 9` runs a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "streamdecomp/block_order.hpp"
#include "streamdecomp/freight.hpp"
#include "streamdecomp/generators.hpp"
#include "streamdecomp/heistream.hpp"
#include "streamdecomp/hierarchy.hpp"
#include "streamdecomp/metrics.hpp"
#include "streamdecomp/multisection.hpp"
#include "streamdecomp/onepass.hpp"
#include "support/oracles.hpp"
#include "support/test_util.hpp"

using namespace streamdecomp;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Verdict {
  bool pass = true;
  std::string detail;
};

struct NamedGraph {
  std::string name;
  InMemoryGraph graph;
};

std::vector<BlockID> to_vector(const PartitionState& state) {
  return {state.assignment().begin(), state.assignment().end()};
}

NodeWeight max_weight(const std::vector<BlockID>& p, const std::vector<NodeWeight>& weights, BlockID k) {
  std::vector<NodeWeight> w(static_cast<std::size_t>(k), 0);
  for (std::size_t v = 0; v < p.size(); ++v) w[p[v]] += weights.empty() ? 1 : weights[v];
  return *std::max_element(w.begin(), w.end());
}

std::vector<BlockID> onepass(const InMemoryGraph& g, BlockID k, OnePassAlgorithm algorithm, int passes = 1) {
  InMemoryGraphStream stream(g);
  OnePassConfig config;
  config.algorithm = algorithm;
  config.passes = passes;
  return to_vector(partition_onepass(stream, k, 0.03, config));
}

std::vector<BlockID> heistream(const InMemoryGraph& g, BlockID k, NodeID delta, int passes) {
  InMemoryGraphStream stream(g);
  HeiStreamConfig config;
  config.delta = delta;
  config.passes = passes;
  return to_vector(run_heistream(stream, k, 0.03, config));
}

std::vector<BlockID> oms(const InMemoryGraph& g, const MultisectionTree& tree) {
  InMemoryGraphStream stream(g);
  return to_vector(run_oms(stream, tree, 0.03, OmsConfig{}));
}

std::vector<BlockID> freight(const InMemoryHypergraph& hg, BlockID k, FreightObjective objective) {
  InMemoryHypergraphStream stream(hg);
  FreightConfig config;
  config.objective = objective;
  return to_vector(run_freight(stream, k, 0.03, config));
}

std::vector<BlockID> hashed(NodeID n, BlockID k) {
  std::vector<BlockID> p(n);
  for (NodeID v = 0; v < n; ++v) p[v] = hashing_assign(v, k);
  return p;
}

const std::vector<NamedGraph>& quality_graphs() {
  static const std::vector<NamedGraph> graphs = [] {
    std::vector<NamedGraph> out;
    out.push_back({"rgg2d-60k", gen::rgg2d(60000, 8, 1)});
    out.push_back({"rgg3d-50k", gen::rgg3d(50000, 10, 2)});
    out.push_back({"ba-50k", gen::barabasi_albert(50000, 5, 3)});
    out.push_back({"planted-50k", gen::planted_partition(50000, 64, 0.01, 0.00004, 4)});
    out.push_back({"grid-300", gen::grid2d(300, 300)});
    out.push_back({"gnp-20k", gen::gnp(20000, 0.0008, 5)});
    return out;
  }();
  return graphs;
}

// 1
Verdict freight_oracle() {
  const auto start = Clock::now();
  std::mt19937_64 rng(2024);
  int mismatches = 0, runs = 0;
  for (int i = 0; i < 100; ++i) {
    const auto n = static_cast<NodeID>(20 + rng() % 181);
    const auto nets = static_cast<NetID>(10 + rng() % 291);
    auto hg = gen::random_hypergraph(n, nets, 1500, 2 + rng() % 12, rng());
    if (i % 2) {
      hg.node_weights.resize(n);
      for (auto& w : hg.node_weights) w = static_cast<NodeWeight>(1 + rng() % 5);
      hg.net_weights.resize(hg.num_nets());
      for (auto& w : hg.net_weights) w = static_cast<EdgeWeight>(1 + rng() % 9);
    }
    for (BlockID k : {4, 16}) {
      for (bool cut : {false, true}) {
        ++runs;
        const auto fast = freight(hg, k, cut ? FreightObjective::cut_net : FreightObjective::connectivity);
        if (fast != oracle::naive_freight(hg, k, 0.03, cut)) ++mismatches;
      }
    }
  }
  const double secs = seconds_since(start);
  std::ostringstream d;
  d << mismatches << "/" << runs << " mismatching runs, " << secs << " s";
  return {mismatches == 0 && secs < 10.0, d.str()};
}

// 2
Verdict sorted_blocks() {
  const BlockID k = 1024;
  SortedBlocks sb(k);
  oracle::MirrorOrder mirror(k, true);
  std::vector<NodeWeight> card(k, 0);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<BlockID> pick(0, k - 1);
  int violations = 0, checks = 0;
  auto check = [&] {
    ++checks;
    const auto order = sb.order();
    for (BlockID i = 0; i + 1 < k; ++i) {
      if (card[order[i]] > card[order[i + 1]]) ++violations;
    }
    auto resorted = card;
    std::sort(resorted.begin(), resorted.end());
    if (sb.cardinality(sb.min_block()) != resorted.front() || card[sb.min_block()] != resorted.front()) ++violations;
    if (!std::equal(order.begin(), order.end(), mirror.array().begin())) ++violations;
  };
  for (int step = 1; step <= 100000; ++step) {
    const BlockID b = pick(rng);
    sb.increment(b);
    mirror.add(b, 1);
    ++card[b];
    if (step % 1000 == 0) check();
  }
  std::ostringstream d;
  d << checks << " sampled checks, " << violations << " violations";
  return {violations == 0, d.str()};
}

// 3
Verdict fennel_additivity() {
  std::mt19937_64 rng(11);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const NodeID n = 60 + rng() % 100;
    const auto g = testutil::random_weighted_graph(n, 0.08, 7, 9, rng());
    const BlockID k = static_cast<BlockID>(2 + rng() % 15);
    InMemoryGraphStream stream(g);
    const auto records = testutil::drain(stream);
    PartitionState state(n, k, 0.5, g.total_node_weight(), false);
    const NodeID placed = n / 2;
    for (NodeID v = 0; v < placed; ++v) state.assign(v, static_cast<BlockID>(rng() % k), records[v].weight);
    NodeID u = placed + rng() % (n - placed), w = placed + rng() % (n - placed);
    while (w == u) w = placed + rng() % (n - placed);
    StreamedNodeRecord x;
    x.id = u;
    x.weight = records[u].weight + records[w].weight;
    for (const NodeID s : {u, w}) {
      for (const auto& nb : records[s].neighbors) {
        if (nb.id != u && nb.id != w) x.neighbors.push_back(nb);
      }
    }
    FennelParams params;
    params.alpha = fennel_alpha(n, static_cast<double>(g.num_edges()), k, 1.5);
    for (BlockID b = 0; b < k; ++b) {
      const double sum = fennel_gain(records[u], b, state, params) + fennel_gain(records[w], b, state, params);
      worst = std::max(worst, std::abs(fennel_gain(x, b, state, params) - sum));
    }
  }
  std::ostringstream d;
  d << "max deviation " << worst;
  return {worst <= 1e-9, d.str()};
}

// 4
Verdict oms_equivalence() {
  std::mt19937_64 rng(13);
  int mismatches = 0, runs = 0;
  const auto spec = parse_hierarchy("2:2:2");
  const auto spec_tree = MultisectionTree::build_from_spec(spec);
  const std::vector<std::pair<BlockID, std::uint32_t>> nh = {{5, 2}, {5, 4}, {8, 2}, {8, 4}, {12, 2}, {12, 4}};
  for (int i = 0; i < 50; ++i) {
    const NodeID n = 50 + rng() % 451;
    const double p = 4.0 / static_cast<double>(n) + static_cast<double>(rng() % 8) / static_cast<double>(n);
    const auto g = i % 2 ? gen::gnp(n, p, rng()) : testutil::random_weighted_graph(n, p, 3, 4, rng());
    ++runs;
    if (oms(g, spec_tree) != oracle::multipass_oms(g, 8, oracle::shape_from_spec(spec), 0.03)) ++mismatches;
    const auto [k, b] = nh[static_cast<std::size_t>(i) % nh.size()];
    oracle::TreeShape shape;
    shape.b = static_cast<BlockID>(b);
    ++runs;
    if (oms(g, MultisectionTree::build_hierarchy(k, b)) != oracle::multipass_oms(g, k, shape, 0.03)) ++mismatches;
  }
  std::ostringstream d;
  d << mismatches << "/" << runs << " mismatching runs";
  return {mismatches == 0, d.str()};
}

// 5
Verdict balance_matrix() {
  const std::vector<NamedGraph> graphs = {{"rgg2d", gen::rgg2d(10000, 8, 21)},
                                          {"ba", gen::barabasi_albert(10000, 4, 22)},
                                          {"planted", gen::planted_partition(10000, 16, 0.01, 0.0002, 23)}};
  const std::vector<InMemoryHypergraph> hypergraphs = {gen::stencil_row_net(100, 100, 1, 5),
                                                       gen::random_hypergraph(8000, 6000, 40000, 12, 24)};
  int partitions = 0;
  std::vector<std::string> failures;
  for (const BlockID k : {2, 8, 32, 128}) {
    auto check = [&](const std::string& label, const std::vector<BlockID>& p, NodeID n) {
      ++partitions;
      const NodeWeight cap = oracle::lmax(static_cast<NodeWeight>(n), k, 0.03);
      bool ok = p.size() == n;
      for (const BlockID b : p) ok = ok && b >= 0 && b < k;
      if (!ok || max_weight(p, {}, k) > cap) failures.push_back(label + " k=" + std::to_string(k));
    };
    for (const auto& [name, g] : graphs) {
      const NodeID n = g.num_nodes();
      check(name + "/hashing", onepass(g, k, OnePassAlgorithm::hashing), n);
      check(name + "/ldg", onepass(g, k, OnePassAlgorithm::ldg), n);
      check(name + "/fennel", onepass(g, k, OnePassAlgorithm::fennel), n);
      check(name + "/reldg", onepass(g, k, OnePassAlgorithm::ldg, 3), n);
      check(name + "/refennel", onepass(g, k, OnePassAlgorithm::fennel, 3), n);
      check(name + "/heistream", heistream(g, k, 2048, 1), n);
      check(name + "/heistream-2pass", heistream(g, k, 2048, 2), n);
      check(name + "/oms-nh", oms(g, MultisectionTree::build_hierarchy(k, 4)), n);
      check(name + "/oms-bisection", oms(g, MultisectionTree::build_hierarchy(k, 2)), n);
    }
    for (std::size_t i = 0; i < hypergraphs.size(); ++i) {
      const auto& hg = hypergraphs[i];
      const std::string name = "hypergraph" + std::to_string(i);
      check(name + "/freight-con", freight(hg, k, FreightObjective::connectivity), hg.num_nodes);
      check(name + "/freight-cut", freight(hg, k, FreightObjective::cut_net), hg.num_nodes);
      check(name + "/hashing", hashed(hg.num_nodes, k), hg.num_nodes);
    }
  }
  std::ostringstream d;
  d << partitions << " partitions, " << failures.size() << " over L_max";
  for (const auto& f : failures) d << " [" << f << "]";
  return {failures.empty(), d.str()};
}

// 6
Verdict graph_quality() {
  const BlockID k = 32;
  int fennel_beats_hash = 0, hei_beats_fennel = 0, restream_helps = 0;
  std::ostringstream d;
  const auto& graphs = quality_graphs();
  for (const auto& [name, g] : graphs) {
    const auto hash_cut = oracle::edge_cut(g, onepass(g, k, OnePassAlgorithm::hashing));
    const auto fennel_cut = oracle::edge_cut(g, onepass(g, k, OnePassAlgorithm::fennel));
    const auto hei1 = oracle::edge_cut(g, heistream(g, k, 32768, 1));
    const auto hei2 = oracle::edge_cut(g, heistream(g, k, 32768, 2));
    fennel_beats_hash += fennel_cut < hash_cut;
    hei_beats_fennel += hei1 <= fennel_cut;
    restream_helps += hei2 <= hei1;
    d << name << "(m=" << g.num_edges() << " hash=" << hash_cut << " fennel=" << fennel_cut << " hei=" << hei1
      << " hei2=" << hei2 << ") ";
  }
  const auto total = static_cast<double>(graphs.size());
  const bool pass = fennel_beats_hash == static_cast<int>(graphs.size()) && hei_beats_fennel >= 0.6 * total &&
                    restream_helps >= 0.8 * total;
  d << "| fennel<hash " << fennel_beats_hash << "/" << graphs.size() << ", hei<=fennel " << hei_beats_fennel << "/"
    << graphs.size() << ", hei2<=hei1 " << restream_helps << "/" << graphs.size();
  return {pass, d.str()};
}

// 7
Verdict hypergraph_quality() {
  const BlockID k = 512;
  const std::vector<std::pair<std::string, InMemoryHypergraph>> instances = {
      {"stencil2d-5pt", gen::stencil_row_net(200, 200, 1, 5)},
      {"stencil2d-9pt", gen::stencil_row_net(160, 160, 1, 9)},
      {"stencil3d-7pt", gen::stencil_row_net(32, 32, 32, 7)},
      {"stencil3d-27pt", gen::stencil_row_net(22, 22, 22, 27)},
      {"banded", gen::banded_row_net(40000, 8, 60, 31)},
  };
  int con_wins = 0, cut_wins = 0;
  std::ostringstream d;
  for (const auto& [name, hg] : instances) {
    const auto hash = oracle::hyper_cut(hg, hashed(hg.num_nodes, k));
    const auto con = oracle::hyper_cut(hg, freight(hg, k, FreightObjective::connectivity));
    const auto cut = oracle::hyper_cut(hg, freight(hg, k, FreightObjective::cut_net));
    con_wins += con.connectivity < hash.connectivity;
    cut_wins += cut.cut_net <= hash.cut_net;
    d << name << "(pins=" << hg.num_pins() << " con " << con.connectivity << " vs " << hash.connectivity << ", cut "
      << cut.cut_net << " vs " << hash.cut_net << ") ";
  }
  const int total = static_cast<int>(instances.size());
  return {con_wins == total && cut_wins == total, d.str()};
}

// 8
Verdict mapping_quality() {
  const auto spec = parse_hierarchy("4:16:2", "1:10:100");
  const DistanceCode code(spec);
  const auto tree = MultisectionTree::build_from_spec(spec);
  const BlockID k = spec.k();
  int wins = 0;
  std::ostringstream d;
  const auto& graphs = quality_graphs();
  for (const auto& [name, g] : graphs) {
    InMemoryGraphStream stream(g);
    const auto j_oms = *evaluate_graph(stream, oms(g, tree), k, &code).comm_cost;
    const auto j_fennel = *evaluate_graph(stream, onepass(g, k, OnePassAlgorithm::fennel), k, &code).comm_cost;
    wins += j_oms < j_fennel;
    d << name << "(oms " << j_oms << " vs fennel " << j_fennel << ") ";
  }
  d << "| " << wins << "/" << graphs.size();
  return {wins >= 0.7 * static_cast<double>(graphs.size()), d.str()};
}

// 9
Verdict freight_k_independence() {
  const auto hg = gen::stencil_row_net(55, 55, 55, 7);
  const auto expanded = gen::clique_expansion(hg);
  auto best_of = [](int runs, const std::function<void()>& body) {
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < runs; ++r) {
      const auto start = Clock::now();
      body();
      best = std::min(best, seconds_since(start));
    }
    return best;
  };
  InMemoryHypergraphStream hstream(hg);
  auto freight_time = [&](BlockID k) {
    return best_of(3, [&] { (void)run_freight(hstream, k, 0.03, FreightConfig{}); });
  };
  InMemoryGraphStream gstream(expanded);
  auto fennel_time = [&](BlockID k) {
    return best_of(2, [&] { (void)partition_onepass(gstream, k, 0.03, OnePassConfig{}); });
  };
  const double f512 = freight_time(512), f2560 = freight_time(2560);
  const double n512 = fennel_time(512), n2560 = fennel_time(2560);
  std::ostringstream d;
  d << "pins=" << hg.num_pins() << " freight " << f512 << " s -> " << f2560 << " s (x" << f2560 / f512
    << "), fennel on clique expansion (m=" << expanded.num_edges() << ") " << n512 << " s -> " << n2560 << " s (x"
    << n2560 / n512 << ")";
  return {hg.num_pins() >= 1000000 && f2560 <= 1.5 * f512 && n2560 >= 5.0 * n512, d.str()};
}

// 10
Verdict fennel_freight_equivalence() {
  std::mt19937_64 rng(19);
  int mismatches = 0;
  for (int i = 0; i < 20; ++i) {
    const NodeID n = 100 + rng() % 400;
    const double p = 6.0 / static_cast<double>(n);
    const auto g = i % 2 ? gen::gnp(n, p, rng()) : testutil::random_weighted_graph(n, p, 1, 6, rng());
    const BlockID k = static_cast<BlockID>(2 + rng() % 31);
    if (freight(gen::graph_as_hypergraph(g), k, FreightObjective::connectivity) !=
        onepass(g, k, OnePassAlgorithm::fennel)) {
      ++mismatches;
    }
  }
  std::ostringstream d;
  d << mismatches << "/20 mismatching graphs";
  return {mismatches == 0, d.str()};
}

// 11
Verdict distance_oracle() {
  const auto start = Clock::now();
  std::mt19937_64 rng(23);
  std::uint64_t pairs = 0, mismatches = 0;
  BlockID largest = 0;
  for (int i = 0; i < 20; ++i) {
    HierarchySpec spec;
    BlockID k = 1;
    const std::size_t layers = 1 + rng() % 4;
    while (spec.a.size() < layers) {
      const auto a = static_cast<std::uint32_t>(2 + rng() % 15);
      if (k * static_cast<BlockID>(a) > 4096) break;
      spec.a.push_back(a);
      k *= static_cast<BlockID>(a);
    }
    if (i == 0) spec.a = {4, 16, 2, 32};  // k = 4096
    std::int64_t d = 0;
    for (std::size_t l = 0; l < spec.a.size(); ++l) spec.d.push_back(d += 1 + static_cast<std::int64_t>(rng() % 50));
    const DistanceCode code(spec);
    largest = std::max(largest, code.k());
    for (BlockID a = 0; a < code.k(); ++a) {
      for (BlockID b = 0; b < code.k(); ++b) {
        ++pairs;
        mismatches += code.distance(a, b) != code.distance_by_division(a, b);
      }
    }
  }
  const double secs = seconds_since(start);
  std::ostringstream d;
  d << pairs << " pairs (largest k=" << largest << "), " << mismatches << " mismatches, " << secs << " s";
  return {mismatches == 0 && secs < 5.0, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"FREIGHT matches the naive argmax", freight_oracle},
      {"sorted block array stays sorted", sorted_blocks},
      {"generalized Fennel gain is additive", fennel_additivity},
      {"one-pass multi-section equals layer-by-layer passes", oms_equivalence},
      {"every partition respects L_max", balance_matrix},
      {"graph quality ordering", graph_quality},
      {"hypergraph quality ordering", hypergraph_quality},
      {"mapping beats Fennel with identity mapping", mapping_quality},
      {"FREIGHT runtime independent of k", freight_k_independence},
      {"FREIGHT equals Fennel on graphs", fennel_freight_equivalence},
      {"distance codes match division", distance_oracle},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::stoi(argv[i]));
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Verdict verdict;
    try {
      verdict = criteria[i].second();
    } catch (const std::exception& e) {
      verdict = {false, std::string("exception: ") + e.what()};
    }
    failed += !verdict.pass;
    std::printf("%s %2d %s: %s\n", verdict.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                verdict.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
