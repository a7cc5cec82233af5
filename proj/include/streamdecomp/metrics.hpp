#pragma once

#include <optional>
#include <span>
#include <vector>

#include "streamdecomp/graph_stream.hpp"
#include "streamdecomp/hierarchy.hpp"
#include "streamdecomp/hypergraph_stream.hpp"
#include "streamdecomp/partition_state.hpp"

namespace streamdecomp {

struct QualityReport {
  EdgeWeight edge_cut = 0;
  EdgeWeight cut_net = 0;
  EdgeWeight connectivity = 0;
  double imbalance = 0.0;
  std::optional<std::int64_t> comm_cost;
  NodeWeight max_block_weight = 0;
  NodeWeight total_weight = 0;
  std::vector<NodeWeight> block_weights;
};

/// Sum of cut edge weights; each undirected edge is counted once. Runs a full
/// pass over `stream` and rewinds it.
[[nodiscard]] EdgeWeight edge_cut(GraphStream& stream, std::span<const BlockID> partition);

struct CutNetConnectivity {
  EdgeWeight cut_net = 0;
  EdgeWeight connectivity = 0;
};

/// Exact lambda per net from the set of blocks its pins touch.
[[nodiscard]] CutNetConnectivity cut_net_and_connectivity(HypergraphStream& stream,
                                                          std::span<const BlockID> partition);

/// J = sum over undirected edges of w(u,v) * distance(P(u), P(v)).
[[nodiscard]] std::int64_t comm_cost(GraphStream& stream, std::span<const BlockID> partition,
                                     const DistanceCode& distances);

/// One verification pass computing every graph metric. For graphs cut_net and
/// connectivity coincide with edge_cut (every cut edge touches two blocks).
[[nodiscard]] QualityReport evaluate_graph(GraphStream& stream, std::span<const BlockID> partition, BlockID k,
                                           const DistanceCode* distances = nullptr);

[[nodiscard]] QualityReport evaluate_hypergraph(HypergraphStream& stream, std::span<const BlockID> partition,
                                                BlockID k);

/// Throws InvariantError unless the state's block weights equal the sums of its
/// assigned node weights (recomputed from the stream).
void verify_block_weights(GraphStream& stream, const PartitionState& state);
void verify_block_weights(HypergraphStream& stream, const PartitionState& state);

}  // namespace streamdecomp
