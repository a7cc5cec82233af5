#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "streamdecomp/graph_stream.hpp"
#include "streamdecomp/partition_state.hpp"

namespace streamdecomp {

struct FennelParams {
  double gamma = 1.5;
  double alpha = 0.0;  // <= 0: derived from n, m and k
  bool hard_balance = true;
};

/// alpha = m * k^(gamma-1) / n^gamma.
[[nodiscard]] double fennel_alpha(double n, double m, BlockID k, double gamma);

/// c(u) * alpha * gamma * c(V_i)^(gamma-1).
[[nodiscard]] double fennel_penalty(NodeWeight node_weight, NodeWeight block_weight, double alpha, double gamma);

/// Generalized Fennel score of putting a node of weight `node_weight` with
/// `affinity` = sum of edge weights into block i (weight `block_weight`).
[[nodiscard]] inline double fennel_gain(double affinity, NodeWeight node_weight, NodeWeight block_weight,
                                        double alpha, double gamma) {
  return affinity - fennel_penalty(node_weight, block_weight, alpha, gamma);
}

/// Same, with the affinity taken from the record's already assigned neighbors.
[[nodiscard]] double fennel_gain(const StreamedNodeRecord& record, BlockID block, const PartitionState& state,
                                 const FennelParams& params);

/// Sparse per-block accumulator; O(touched) reset.
class BlockAffinity {
 public:
  explicit BlockAffinity(BlockID k = 0) { resize(k); }
  void resize(BlockID k) {
    value_.assign(static_cast<std::size_t>(k), 0.0);
    seen_.assign(static_cast<std::size_t>(k), 0);
    touched_.clear();
  }
  void add(BlockID b, double w) {
    if (!seen_[b]) {
      seen_[b] = 1;
      touched_.push_back(b);
    }
    value_[b] += w;
  }
  [[nodiscard]] double operator[](BlockID b) const { return value_[b]; }
  [[nodiscard]] bool contains(BlockID b) const { return seen_[b] != 0; }
  [[nodiscard]] const std::vector<BlockID>& touched() const { return touched_; }
  void clear() {
    for (auto b : touched_) {
      value_[b] = 0.0;
      seen_[b] = 0;
    }
    touched_.clear();
  }

  /// Tallies the blocks of the record's assigned neighbors.
  void collect(const StreamedNodeRecord& record, const PartitionState& state);

 private:
  std::vector<double> value_;
  std::vector<char> seen_;
  std::vector<BlockID> touched_;
};

/// Candidate ranking shared by the Fennel-type scorers: higher score, then
/// higher affinity, then the block that comes first in the state's block order
/// (lighter, then the order kept by SortedBlocks or the bucket queue).
struct ScoredBlock {
  BlockID block = kUnassigned;
  double score = 0.0;
  double affinity = 0.0;
};
[[nodiscard]] inline bool ranks_higher(const ScoredBlock& a, const ScoredBlock& b, const BlockOrder& order) {
  if (b.block == kUnassigned) return true;
  if (a.score != b.score) return a.score > b.score;
  if (a.affinity != b.affinity) return a.affinity > b.affinity;
  return order.precedes(a.block, b.block);
}

/// id mod k.
[[nodiscard]] inline BlockID hashing_assign(NodeID id, BlockID k) { return static_cast<BlockID>(id % static_cast<NodeID>(k)); }

/// LDG choice without committing it: argmax aff_i * (1 - c(V_i)/L_max) over
/// feasible blocks, ties to fewer nodes, then lower index. Falls back to the
/// lightest block (and flags a violation) when nothing fits.
[[nodiscard]] BlockID ldg_choose(const StreamedNodeRecord& record, PartitionState& state, BlockAffinity& affinity);
BlockID ldg_assign(const StreamedNodeRecord& record, PartitionState& state, BlockAffinity& affinity);

/// Fennel choice without committing it; `alpha` must be resolved (> 0).
[[nodiscard]] BlockID fennel_choose(const StreamedNodeRecord& record, PartitionState& state, const FennelParams& params,
                                    BlockAffinity& affinity);
BlockID fennel_assign(const StreamedNodeRecord& record, PartitionState& state, const FennelParams& params,
                      BlockAffinity& affinity);

enum class OnePassAlgorithm { hashing, ldg, fennel };
[[nodiscard]] OnePassAlgorithm parse_onepass_algorithm(std::string_view name);
[[nodiscard]] std::string_view to_string(OnePassAlgorithm algorithm);

struct OnePassConfig {
  OnePassAlgorithm algorithm = OnePassAlgorithm::fennel;
  int passes = 1;
  double restream_alpha_growth = 2.0;
  std::uint64_t seed = 0;  // the one-pass algorithms are deterministic; kept for provenance
  FennelParams fennel;
};

struct PassStats {
  int pass = 0;
  double alpha = 0.0;
  std::uint64_t violations = 0;
  double runtime_ms = 0.0;
};

struct OnePassResult {
  std::vector<PassStats> passes;
};

/// First pass over the stream into a fresh state.
OnePassResult run_onepass(GraphStream& stream, const OnePassConfig& config, PartitionState& state);

/// Passes 2..config.passes on a state produced by run_onepass. ReLDG counts
/// only the current pass's weights; ReFennel takes the node out of its block
/// before rescoring and multiplies alpha by restream_alpha_growth per pass.
OnePassResult run_restream(GraphStream& stream, const OnePassConfig& config, PartitionState& state);

/// Builds the state from the stream header and runs all passes.
[[nodiscard]] PartitionState partition_onepass(GraphStream& stream, BlockID k, double epsilon,
                                               const OnePassConfig& config, OnePassResult* result = nullptr);

}  // namespace streamdecomp
