#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string_view>
#include <tuple>
#include <vector>

#include "streamdecomp/graph_stream.hpp"
#include "streamdecomp/onepass.hpp"
#include "streamdecomp/partition_state.hpp"

namespace streamdecomp {

enum class BatchModelKind { basic, extended };
[[nodiscard]] BatchModelKind parse_batch_model(std::string_view name);
[[nodiscard]] std::string_view to_string(BatchModelKind kind);

struct HeiStreamConfig {
  NodeID delta = 32768;
  BatchModelKind model = BatchModelKind::extended;
  int coarsen_rounds = 5;
  int localsearch_rounds = 5;
  int x = 4;
  int passes = 1;
  std::uint64_t seed = 0;
  /// Equal-score moves in local search flip a coin; off keeps the current block.
  bool random_ties = true;
  /// Coarsening also stops when a level shrinks by less than this fraction.
  double min_shrink = 0.05;
  FennelParams fennel;  // alpha <= 0: derived from the whole graph's n, m, k
};

/// Weighted graph on the batch: mutable nodes 0..num_mutable-1 (batch order,
/// or clusters of them on coarse levels), then `num_artificial` fixed nodes
/// where artificial node j sits in block j. Adjacency is symmetric.
struct ModelGraph {
  std::vector<std::uint64_t> xadj{0};
  std::vector<std::uint32_t> adjncy;
  std::vector<double> adjwgt;
  std::vector<NodeWeight> vwgt;
  std::uint32_t num_mutable = 0;
  BlockID num_artificial = 0;

  [[nodiscard]] std::uint32_t num_nodes() const { return static_cast<std::uint32_t>(vwgt.size()); }
  [[nodiscard]] bool is_artificial(std::uint32_t v) const { return v >= num_mutable; }
  [[nodiscard]] BlockID artificial_block(std::uint32_t v) const { return static_cast<BlockID>(v - num_mutable); }
  [[nodiscard]] double weighted_degree(std::uint32_t v) const;

  /// Symmetric CSR from an undirected edge list; parallel edges are merged by
  /// weight sum, self loops dropped.
  static ModelGraph from_edges(std::vector<NodeWeight> node_weights, std::uint32_t num_mutable,
                               BlockID num_artificial, std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> edges);
};

struct RawBatch {
  NodeID first = 0;  // global id of local node 0
  std::vector<StreamedNodeRecord> records;

  [[nodiscard]] NodeID size() const { return records.size(); }
  [[nodiscard]] NodeID end() const { return first + records.size(); }
  [[nodiscard]] bool empty() const { return records.empty(); }
};

enum class NeighborKind { past, in_batch, future };
[[nodiscard]] inline NeighborKind classify_neighbor(const RawBatch& batch, NodeID id) {
  if (id < batch.first) return NeighborKind::past;
  if (id < batch.end()) return NeighborKind::in_batch;
  return NeighborKind::future;
}

/// Reads up to delta records; an empty batch means the stream is exhausted.
[[nodiscard]] RawBatch load_batch(GraphStream& stream, NodeID delta);

struct BatchModel {
  ModelGraph graph;
  NodeID first = 0;
  std::vector<NodeWeight> true_weight;  // per batch node
  std::vector<BlockID> prior_block;     // restreaming only
  std::uint64_t ghosts = 0;
  NodeWeight ghost_inflation = 0;       // total weight added by ghost contraction
};

/// Pass-1 model: induced batch subgraph, k artificial nodes (not for the first
/// batch) linked to batch nodes by the summed weights of their already placed
/// neighbors, and with the extended model every ghost (future neighbor)
/// contracted into a random batch neighbor. A ghost adds 1 to its host's weight
/// and its edges count half.
///
/// With `restream` set, every out-of-batch neighbor is represented by its
/// block's artificial node, artificial weights exclude the current batch and
/// batch nodes keep their prior blocks in `prior_block`.
[[nodiscard]] BatchModel build_model(const RawBatch& batch, const PartitionState& state, const HeiStreamConfig& config,
                                     bool restream, std::mt19937_64& rng);

struct CoarseningHierarchy {
  std::vector<ModelGraph> levels;                 // levels[0] is the model itself
  std::vector<std::vector<std::uint32_t>> maps;   // maps[i]: node of level i -> node of level i+1
  [[nodiscard]] const ModelGraph& coarsest() const { return levels.back(); }
};

[[nodiscard]] std::uint32_t coarsening_threshold(std::uint32_t model_nodes, BlockID k, int x);

/// Size-constrained label propagation (cap `cluster_cap`) plus contraction,
/// repeated until the threshold is met. Artificial nodes and their edges take no
/// part in clustering and map to themselves. With `blocks` (restreaming) only
/// same-block neighbors may join.
[[nodiscard]] CoarseningHierarchy coarsen(const ModelGraph& model, NodeWeight cluster_cap, BlockID k,
                                          const HeiStreamConfig& config, std::mt19937_64& rng,
                                          const std::vector<BlockID>* blocks = nullptr);

/// One level of size-constrained label propagation; returns cluster labels.
[[nodiscard]] std::vector<std::uint32_t> label_propagation_clustering(const ModelGraph& graph, NodeWeight cluster_cap,
                                                                      int rounds, std::mt19937_64& rng,
                                                                      const std::vector<BlockID>* blocks = nullptr);

/// Contracts clusters (labels of mutable nodes); `map` receives the coarse id of
/// every node. Coarse mutable ids follow the first appearance of a label.
[[nodiscard]] ModelGraph contract(const ModelGraph& graph, std::span<const std::uint32_t> labels,
                                  std::vector<std::uint32_t>& map);

/// Generalized Fennel over all k blocks under L_max, mutable nodes in id
/// order. Block weights start from the artificial nodes; ties follow `order`
/// (a copy of the global block order, updated as nodes are placed). Returns a
/// block per node, artificial nodes included.
[[nodiscard]] std::vector<BlockID> initial_partition(const ModelGraph& coarsest, BlockID k, NodeWeight l_max,
                                                     double alpha, double gamma, BlockOrder order,
                                                     std::uint64_t* violations = nullptr);

struct RefineStats {
  std::uint64_t moves = 0;
  std::uint64_t coin_flip_moves = 0;
  double min_applied_gain = std::numeric_limits<double>::infinity();  // over applied moves
  std::uint64_t rounds = 0;
};

/// Label-propagation local search on one level: a visited mutable node leaves
/// its block and joins the best of its own and its neighbors' blocks by
/// generalized Fennel score, respecting L_max.
void refine_level(const ModelGraph& graph, std::vector<BlockID>& partition, BlockID k, NodeWeight l_max, double alpha,
                  double gamma, const HeiStreamConfig& config, std::mt19937_64& rng, RefineStats& stats);

/// Refines the coarsest partition, then projects and refines level by level.
/// Returns the partition of the finest level.
[[nodiscard]] std::vector<BlockID> uncoarsen_refine(const CoarseningHierarchy& hierarchy,
                                                    std::vector<BlockID> coarse_partition, BlockID k, NodeWeight l_max,
                                                    double alpha, double gamma, const HeiStreamConfig& config,
                                                    std::mt19937_64& rng, RefineStats* stats = nullptr);

[[nodiscard]] std::vector<BlockID> project(std::span<const BlockID> coarse, std::span<const std::uint32_t> map);

/// Writes the batch's blocks into the global state using true node weights. A
/// node whose block cannot take its true weight goes to the lightest block.
void commit_batch(const BatchModel& model, std::span<const BlockID> model_partition, PartitionState& state,
                  bool restream);

[[nodiscard]] double model_edge_cut(const ModelGraph& graph, std::span<const BlockID> partition);
[[nodiscard]] std::vector<NodeWeight> model_block_weights(const ModelGraph& graph, std::span<const BlockID> partition,
                                                          BlockID k);
/// Uncut edge weight minus alpha * sum_i c(V_i)^gamma.
[[nodiscard]] double model_objective(const ModelGraph& graph, std::span<const BlockID> partition, BlockID k,
                                     double alpha, double gamma);

struct HeiStreamStats {
  double alpha = 0.0;
  std::uint64_t batches = 0;
  std::uint64_t levels = 0;
  std::uint64_t violations = 0;
  std::uint64_t ghosts = 0;
  RefineStats refine;
};

[[nodiscard]] PartitionState run_heistream(GraphStream& stream, BlockID k, double epsilon,
                                           const HeiStreamConfig& config, HeiStreamStats* stats = nullptr);

}  // namespace streamdecomp
