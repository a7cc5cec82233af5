#include "streamdecomp/metrics.hpp"

#include <algorithm>

namespace streamdecomp {

namespace {

BlockID block_checked(std::span<const BlockID> partition, NodeID v, BlockID k) {
  if (v >= partition.size()) throw InputError("partition has fewer entries than the input has nodes");
  const BlockID b = partition[v];
  if (b == kUnassigned) throw InputError("node " + std::to_string(v) + " is unassigned");
  if (b < 0 || (k > 0 && b >= k)) throw InputError("block id out of range for node " + std::to_string(v));
  return b;
}

double imbalance_of(std::span<const NodeWeight> weights, NodeWeight total) {
  if (total == 0 || weights.empty()) return 0.0;
  const auto max_w = *std::max_element(weights.begin(), weights.end());
  return static_cast<double>(max_w) * static_cast<double>(weights.size()) / static_cast<double>(total) - 1.0;
}

BlockID infer_k(std::span<const BlockID> partition) {
  BlockID k = 0;
  for (auto b : partition) k = std::max(k, static_cast<BlockID>(b + 1));
  return k;
}

}  // namespace

QualityReport evaluate_graph(GraphStream& stream, std::span<const BlockID> partition, BlockID k,
                             const DistanceCode* distances) {
  if (k <= 0) k = infer_k(partition);
  if (distances && distances->k() != k) throw InputError("hierarchy product does not equal k");
  stream.rewind();
  if (partition.size() != stream.header().n) throw InputError("partition size does not match node count");
  QualityReport report;
  report.block_weights.assign(static_cast<std::size_t>(k), 0);
  std::int64_t j = 0;
  StreamedNodeRecord record;
  while (stream.next(record)) {
    const BlockID bu = block_checked(partition, record.id, k);
    report.block_weights[bu] += record.weight;
    report.total_weight += record.weight;
    for (const auto& nb : record.neighbors) {
      if (nb.id <= record.id) continue;
      const BlockID bv = block_checked(partition, nb.id, k);
      if (bu != bv) {
        report.edge_cut += nb.weight;
        if (distances) j += nb.weight * distances->distance(bu, bv);
      }
    }
  }
  stream.rewind();
  report.cut_net = report.edge_cut;
  report.connectivity = report.edge_cut;
  report.imbalance = imbalance_of(report.block_weights, report.total_weight);
  report.max_block_weight = *std::max_element(report.block_weights.begin(), report.block_weights.end());
  if (distances) report.comm_cost = j;
  return report;
}

QualityReport evaluate_hypergraph(HypergraphStream& stream, std::span<const BlockID> partition, BlockID k) {
  if (k <= 0) k = infer_k(partition);
  stream.rewind();
  const auto& header = stream.header();
  if (partition.size() != header.num_nodes) throw InputError("partition size does not match node count");
  QualityReport report;
  report.block_weights.assign(static_cast<std::size_t>(k), 0);
  std::vector<EdgeWeight> net_weight(header.num_nets, 1);
  // (net, block) pairs; sorting and deduplicating yields lambda per net.
  std::vector<std::pair<NetID, BlockID>> touched;
  touched.reserve(header.num_pins);
  StreamedHyperNodeRecord record;
  while (stream.next(record)) {
    const BlockID b = block_checked(partition, record.id, k);
    report.block_weights[b] += record.weight;
    report.total_weight += record.weight;
    for (const auto& net : record.nets) {
      net_weight[net.id] = net.weight;
      touched.emplace_back(net.id, b);
    }
  }
  stream.rewind();
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
  for (std::size_t i = 0; i < touched.size();) {
    std::size_t j = i;
    while (j < touched.size() && touched[j].first == touched[i].first) ++j;
    const auto lambda = static_cast<EdgeWeight>(j - i);
    if (lambda >= 2) {
      report.cut_net += net_weight[touched[i].first];
      report.connectivity += (lambda - 1) * net_weight[touched[i].first];
    }
    i = j;
  }
  report.imbalance = imbalance_of(report.block_weights, report.total_weight);
  report.max_block_weight = *std::max_element(report.block_weights.begin(), report.block_weights.end());
  return report;
}

EdgeWeight edge_cut(GraphStream& stream, std::span<const BlockID> partition) {
  return evaluate_graph(stream, partition, 0).edge_cut;
}

CutNetConnectivity cut_net_and_connectivity(HypergraphStream& stream, std::span<const BlockID> partition) {
  const auto report = evaluate_hypergraph(stream, partition, 0);
  return {report.cut_net, report.connectivity};
}

std::int64_t comm_cost(GraphStream& stream, std::span<const BlockID> partition, const DistanceCode& distances) {
  return *evaluate_graph(stream, partition, distances.k(), &distances).comm_cost;
}

namespace {
void compare_weights(const std::vector<NodeWeight>& recomputed, const PartitionState& state) {
  for (BlockID b = 0; b < state.k(); ++b) {
    if (recomputed[b] != state.block_weight(b)) {
      throw InvariantError("block " + std::to_string(b) + " weight " + std::to_string(state.block_weight(b)) +
                           " differs from recomputed " + std::to_string(recomputed[b]));
    }
  }
}
}  // namespace

void verify_block_weights(GraphStream& stream, const PartitionState& state) {
  compare_weights(evaluate_graph(stream, state.assignment(), state.k()).block_weights, state);
}

void verify_block_weights(HypergraphStream& stream, const PartitionState& state) {
  compare_weights(evaluate_hypergraph(stream, state.assignment(), state.k()).block_weights, state);
}

}  // namespace streamdecomp
