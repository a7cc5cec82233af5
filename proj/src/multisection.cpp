#include "streamdecomp/multisection.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace streamdecomp {

template <typename Fanout>
MultisectionTree MultisectionTree::build(BlockID k, Fanout fanout) {
  if (k < 1) throw InputError("k must be at least 1");
  MultisectionTree tree;
  tree.k_ = k;
  tree.nodes_.push_back(Node{-1, 0, 0, 0, k - 1, 0, 0});
  // Breadth-first so that the children of each node end up contiguous.
  for (std::size_t i = 0; i < tree.nodes_.size(); ++i) {
    const Node current = tree.nodes_[i];
    const auto t = static_cast<std::uint32_t>(current.leaves());
    if (t == 1) continue;
    const std::uint32_t m = std::min(fanout(current.depth, t), t);
    if (m < 2) throw InvariantError("tree node with fewer than two children");
    const std::uint32_t q = t / m;
    const std::uint32_t r = t % m;
    tree.nodes_[i].first_child = static_cast<std::uint32_t>(tree.nodes_.size());
    tree.nodes_[i].num_children = m;
    BlockID lo = current.lo;
    for (std::uint32_t c = 0; c < m; ++c) {
      const auto size = static_cast<BlockID>(q + (c < r ? 1 : 0));
      tree.nodes_.push_back(Node{static_cast<std::int32_t>(i), 0, 0, lo, lo + size - 1, current.depth + 1, 0});
      lo += size;
    }
  }
  tree.leaf_node_.assign(static_cast<std::size_t>(k), 0);
  for (std::size_t i = tree.nodes_.size(); i-- > 0;) {
    Node& node = tree.nodes_[i];
    if (node.is_leaf()) {
      tree.leaf_node_[static_cast<std::size_t>(node.lo)] = static_cast<std::uint32_t>(i);
    }
    if (node.parent >= 0) {
      Node& parent = tree.nodes_[static_cast<std::size_t>(node.parent)];
      parent.height = std::max(parent.height, node.height + 1);
    }
  }
  return tree;
}

MultisectionTree MultisectionTree::build_hierarchy(BlockID k, std::uint32_t b) {
  if (b < 2) throw InputError("base must be at least 2");
  return build(k, [b](std::uint32_t, std::uint32_t t) { return std::min(b, t); });
}

MultisectionTree MultisectionTree::build_from_spec(const HierarchySpec& spec) {
  spec.validate();
  std::vector<std::uint32_t> fanouts;  // top-down, fan-out 1 dropped
  for (auto it = spec.a.rbegin(); it != spec.a.rend(); ++it) {
    if (*it > 1) fanouts.push_back(*it);
  }
  return build(spec.k(), [&fanouts](std::uint32_t depth, std::uint32_t) { return fanouts.at(depth); });
}

std::uint32_t MultisectionTree::max_fanout() const {
  std::uint32_t m = 0;
  for (const auto& node : nodes_) m = std::max(m, node.num_children);
  return m;
}

double heterogeneous_alpha(const MultisectionTree& tree, std::uint32_t node, double alpha) {
  return alpha / std::sqrt(static_cast<double>(tree.node(node).leaves()));
}

OmsScorer parse_oms_scorer(std::string_view name) {
  if (name == "fennel") return OmsScorer::fennel;
  if (name == "ldg") return OmsScorer::ldg;
  throw InputError("unknown multi-section scorer '" + std::string(name) + "'");
}

OmsState::OmsState(const MultisectionTree& tree, NodeID n, NodeWeight l_max, double alpha)
    : tree_(&tree), l_max_(l_max), alpha_(alpha), weight_(tree.size(), 0), assignment_(n, kUnassigned) {}

NodeWeight OmsState::weight(std::uint32_t node) const {
  return std::atomic_ref<NodeWeight>(const_cast<NodeWeight&>(weight_[node])).load(std::memory_order_relaxed);
}

BlockID OmsState::block_of(NodeID v) const {
  return std::atomic_ref<BlockID>(const_cast<BlockID&>(assignment_[v])).load(std::memory_order_relaxed);
}

std::uint64_t OmsState::violations() const {
  return std::atomic_ref<std::uint64_t>(const_cast<std::uint64_t&>(violations_)).load();
}

void OmsState::flag_violation() { std::atomic_ref<std::uint64_t>(violations_).fetch_add(1); }

void OmsState::commit(NodeID v, BlockID block, NodeWeight w) {
  std::int64_t node = tree_->leaf_node(block);
  while (node >= 0) {
    std::atomic_ref<NodeWeight>(weight_[static_cast<std::size_t>(node)]).fetch_add(w, std::memory_order_relaxed);
    node = tree_->node(static_cast<std::uint32_t>(node)).parent;
  }
  std::atomic_ref<BlockID>(assignment_[v]).store(block, std::memory_order_relaxed);
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

BlockID oms_assign(const StreamedNodeRecord& record, OmsState& state, const OmsConfig& config, OmsScratch& scratch) {
  const auto& tree = state.tree();
  const double gamma = config.fennel.gamma;
  std::uint32_t current = tree.root();
  while (!tree.node(current).is_leaf()) {
    const auto& parent = tree.node(current);
    const std::uint32_t m = parent.num_children;
    std::int64_t chosen = -1;

    if (parent.height <= config.hash_bottom_layers) {
      const auto h = splitmix64(record.id ^ splitmix64(config.seed + parent.depth));
      const auto leaf = static_cast<BlockID>(parent.lo + static_cast<BlockID>(h % static_cast<std::uint64_t>(parent.leaves())));
      const std::uint32_t child = parent.first_child + tree.child_slot(current, leaf);
      if (state.weight(child) + record.weight <= state.capacity(child)) chosen = child;
    } else {
      scratch.affinity.assign(m, 0.0);
      for (const auto& nb : record.neighbors) {
        const BlockID b = state.block_of(nb.id);
        if (b == kUnassigned || b < parent.lo || b > parent.hi) continue;
        scratch.affinity[tree.child_slot(current, b)] += static_cast<double>(nb.weight);
      }
      double best_score = 0.0;
      NodeWeight best_weight = 0;
      for (std::uint32_t c = 0; c < m; ++c) {
        const std::uint32_t child = parent.first_child + c;
        const NodeWeight w = state.weight(child);
        const NodeWeight cap = state.capacity(child);
        if (w + record.weight > cap) continue;
        double score = 0.0;
        if (config.scorer == OmsScorer::fennel) {
          score = fennel_gain(scratch.affinity[c], record.weight, w, heterogeneous_alpha(tree, child, state.alpha()),
                              gamma);
        } else {
          score = scratch.affinity[c] * (1.0 - static_cast<double>(w) / static_cast<double>(cap));
        }
        if (chosen < 0 || score > best_score || (score == best_score && w < best_weight)) {
          chosen = child;
          best_score = score;
          best_weight = w;
        }
      }
    }

    if (chosen < 0) {
      // Nothing fits (or the hashed child is full): lightest feasible child,
      // else the lightest child with a violation recorded.
      NodeWeight best_weight = 0;
      bool feasible = false;
      for (std::uint32_t c = 0; c < m; ++c) {
        const std::uint32_t child = parent.first_child + c;
        const NodeWeight w = state.weight(child);
        const bool fits = w + record.weight <= state.capacity(child);
        if (chosen < 0 || (fits && !feasible) || (fits == feasible && w < best_weight)) {
          chosen = child;
          best_weight = w;
          feasible = fits;
        }
      }
      if (!feasible) state.flag_violation();
    }
    current = static_cast<std::uint32_t>(chosen);
  }
  const BlockID block = tree.node(current).lo;
  state.commit(record.id, block, record.weight);
  return block;
}

namespace {

double resolve_alpha(const OmsConfig& config, double n, double m, BlockID k) {
  if (config.fennel.alpha > 0) return config.fennel.alpha;
  return fennel_alpha(n, m, k, config.fennel.gamma);
}

PartitionState to_partition_state(OmsState& oms, BlockID k, double epsilon, NodeWeight total, bool unit,
                                   const std::vector<NodeWeight>& node_weights) {
  const NodeID n = oms.assignment().size();
  PartitionState state(n, k, epsilon, total, unit);
  std::vector<NodeWeight> weights(static_cast<std::size_t>(k), 0);
  std::vector<NodeID> sizes(static_cast<std::size_t>(k), 0);
  for (NodeID v = 0; v < n; ++v) {
    const BlockID b = oms.assignment()[v];
    weights[b] += node_weights.empty() ? 1 : node_weights[v];
    ++sizes[b];
  }
  for (std::uint32_t i = 0; i < oms.tree().size(); ++i) {
    const auto& node = oms.tree().node(i);
    if (node.is_leaf() && oms.weight(i) != weights[node.lo]) throw InvariantError("tree leaf weight mismatch");
  }
  state.restore(std::move(oms.assignment()), weights, sizes);
  for (std::uint64_t i = 0; i < oms.violations(); ++i) state.flag_violation();
  return state;
}

}  // namespace

PartitionState run_oms(GraphStream& stream, const MultisectionTree& tree, double epsilon, const OmsConfig& config,
                       OmsStats* stats) {
  const auto header = stream.header();
  const NodeWeight total = total_node_weight(stream);
  const NodeWeight l_max = compute_lmax(total, tree.k(), epsilon);
  OmsState oms(tree, header.n, l_max,
               resolve_alpha(config, static_cast<double>(header.n), static_cast<double>(header.m), tree.k()));
  OmsScratch scratch;
  StreamedNodeRecord record;
  std::vector<NodeWeight> node_weights;
  if (header.has_node_weights) node_weights.resize(header.n);
  stream.rewind();
  while (stream.next(record)) {
    oms_assign(record, oms, config, scratch);
    if (header.has_node_weights) node_weights[record.id] = record.weight;
  }
  stream.rewind();
  if (stats) *stats = {oms.alpha(), oms.violations()};
  return to_partition_state(oms, tree.k(), epsilon, total, !header.has_node_weights, node_weights);
}

PartitionState run_oms_parallel(const InMemoryGraph& graph, const MultisectionTree& tree, double epsilon,
                                const OmsConfig& config, OmsStats* stats) {
  const NodeID n = graph.num_nodes();
  const NodeWeight total = graph.total_node_weight();
  OmsState oms(tree, n, compute_lmax(total, tree.k(), epsilon),
               resolve_alpha(config, static_cast<double>(n), static_cast<double>(graph.num_edges()), tree.k()));
  const unsigned threads = std::max(1u, config.threads);
  {
    std::vector<std::jthread> workers;
    for (unsigned t = 0; t < threads; ++t) {
      const NodeID begin = n * t / threads;
      const NodeID end = n * (t + 1) / threads;
      workers.emplace_back([&, begin, end] {
        OmsScratch scratch;
        StreamedNodeRecord record;
        for (NodeID v = begin; v < end; ++v) {
          record.id = v;
          record.weight = graph.vwgt.empty() ? 1 : graph.vwgt[v];
          record.neighbors.clear();
          for (auto e = graph.xadj[v]; e < graph.xadj[v + 1]; ++e) {
            record.neighbors.push_back({graph.adjncy[e], graph.adjwgt.empty() ? 1 : graph.adjwgt[e]});
          }
          oms_assign(record, oms, config, scratch);
        }
      });
    }
  }
  if (stats) *stats = {oms.alpha(), oms.violations()};
  return to_partition_state(oms, tree.k(), epsilon, total, !graph.has_node_weights, graph.vwgt);
}

}  // namespace streamdecomp
