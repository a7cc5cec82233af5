#pragma once

#include <span>
#include <vector>

#include "streamdecomp/block_order.hpp"
#include "streamdecomp/types.hpp"

namespace streamdecomp {

/// ceil((1 + epsilon) * total_weight / k).
[[nodiscard]] NodeWeight compute_lmax(NodeWeight total_weight, BlockID k, double epsilon);

/// Node-to-block assignment plus per-block weights; the single source of truth
/// for balance. Streaming algorithms mutate it one node at a time.
class PartitionState {
 public:
  PartitionState(NodeID n, BlockID k, double epsilon, NodeWeight total_weight, bool unit_weights = true);

  [[nodiscard]] NodeID num_nodes() const { return assignment_.size(); }
  [[nodiscard]] BlockID k() const { return k_; }
  [[nodiscard]] double epsilon() const { return epsilon_; }
  [[nodiscard]] NodeWeight l_max() const { return l_max_; }
  [[nodiscard]] NodeWeight total_weight() const { return total_weight_; }

  [[nodiscard]] BlockID block_of(NodeID v) const { return assignment_[v]; }
  [[nodiscard]] bool is_assigned(NodeID v) const { return assignment_[v] != kUnassigned; }
  [[nodiscard]] NodeWeight block_weight(BlockID b) const { return block_weight_[b]; }
  [[nodiscard]] NodeID block_size(BlockID b) const { return block_size_[b]; }
  [[nodiscard]] std::span<const BlockID> assignment() const { return assignment_; }
  [[nodiscard]] std::span<const NodeWeight> block_weights() const { return block_weight_; }
  [[nodiscard]] std::span<BlockID> mutable_assignment() { return assignment_; }

  [[nodiscard]] bool fits(BlockID b, NodeWeight w) const { return block_weight_[b] + w <= l_max_; }
  [[nodiscard]] BlockID lightest_block() const { return order_.min_block(); }
  /// Deterministic tie order among blocks: lighter first, then the order kept
  /// by the block-order structure.
  [[nodiscard]] bool precedes(BlockID a, BlockID b) const { return order_.precedes(a, b); }
  [[nodiscard]] const BlockOrder& order() const { return order_; }

  /// Places an unassigned node.
  void assign(NodeID v, BlockID b, NodeWeight w);
  /// Takes a node out of its block; it keeps no assignment afterwards.
  void unassign(NodeID v, NodeWeight w);
  void move(NodeID v, BlockID to, NodeWeight w);

  /// Zeroes block weights and sizes while keeping the assignment array
  /// (restreaming that only counts the current pass).
  void clear_block_weights();
  /// Counts a node's weight in block `b` and records `b` as its block, without
  /// touching the weight of any previous block.
  void place(NodeID v, BlockID b, NodeWeight w);

  void flag_violation() { ++violations_; }
  [[nodiscard]] std::uint64_t violations() const { return violations_; }

  [[nodiscard]] NodeWeight max_block_weight() const;
  /// max_i c(V_i) * k / c(V) - 1.
  [[nodiscard]] double imbalance() const;

  /// Replaces the contents with an externally computed assignment.
  void restore(std::vector<BlockID> assignment, std::span<const NodeWeight> block_weights,
               std::span<const NodeID> block_sizes);

 private:
  BlockID k_;
  double epsilon_;
  NodeWeight total_weight_;
  NodeWeight l_max_;
  bool unit_weights_;
  std::vector<BlockID> assignment_;
  std::vector<NodeWeight> block_weight_;
  std::vector<NodeID> block_size_;
  BlockOrder order_;
  std::uint64_t violations_ = 0;
};

}  // namespace streamdecomp
