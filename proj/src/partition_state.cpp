#include "streamdecomp/partition_state.hpp"

#include <algorithm>
#include <cmath>

namespace streamdecomp {

NodeWeight compute_lmax(NodeWeight total_weight, BlockID k, double epsilon) {
  if (k < 1) throw InputError("k must be at least 1");
  if (epsilon < 0) throw InputError("epsilon must be nonnegative");
  // Nudge away from representation error so that exact quotients are not
  // rounded up (e.g. 1.03 * 100 / 4 = 25.750000000000004).
  const double raw = (1.0 + epsilon) * static_cast<double>(total_weight) / static_cast<double>(k);
  return static_cast<NodeWeight>(std::ceil(raw - 1e-9 * std::max(1.0, raw)));
}

PartitionState::PartitionState(NodeID n, BlockID k, double epsilon, NodeWeight total_weight, bool unit_weights)
    : k_(k),
      epsilon_(epsilon),
      total_weight_(total_weight),
      l_max_(compute_lmax(total_weight, k, epsilon)),
      unit_weights_(unit_weights),
      assignment_(n, kUnassigned),
      block_weight_(static_cast<std::size_t>(k), 0),
      block_size_(static_cast<std::size_t>(k), 0),
      order_(k, unit_weights) {}

void PartitionState::assign(NodeID v, BlockID b, NodeWeight w) {
  if (assignment_[v] != kUnassigned) throw InvariantError("node assigned twice");
  place(v, b, w);
}

void PartitionState::place(NodeID v, BlockID b, NodeWeight w) {
  if (b < 0 || b >= k_) throw InvariantError("block id out of range");
  if (unit_weights_ && w != 1) throw InvariantError("weighted node in a unit-weight partition");
  assignment_[v] = b;
  block_weight_[b] += w;
  ++block_size_[b];
  order_.add(b, w);
}

void PartitionState::unassign(NodeID v, NodeWeight w) {
  const BlockID b = assignment_[v];
  if (b == kUnassigned) throw InvariantError("unassign of an unassigned node");
  block_weight_[b] -= w;
  --block_size_[b];
  order_.remove(b, w);
  assignment_[v] = kUnassigned;
}

void PartitionState::move(NodeID v, BlockID to, NodeWeight w) {
  if (assignment_[v] == to) return;
  unassign(v, w);
  place(v, to, w);
}

void PartitionState::clear_block_weights() {
  std::fill(block_weight_.begin(), block_weight_.end(), 0);
  std::fill(block_size_.begin(), block_size_.end(), 0);
  order_ = BlockOrder(k_, unit_weights_);
}

NodeWeight PartitionState::max_block_weight() const {
  return *std::max_element(block_weight_.begin(), block_weight_.end());
}

double PartitionState::imbalance() const {
  if (total_weight_ == 0) return 0.0;
  return static_cast<double>(max_block_weight()) * static_cast<double>(k_) / static_cast<double>(total_weight_) - 1.0;
}

void PartitionState::restore(std::vector<BlockID> assignment, std::span<const NodeWeight> block_weights,
                             std::span<const NodeID> block_sizes) {
  if (assignment.size() != assignment_.size() || block_weights.size() != block_weight_.size()) {
    throw InvariantError("restore with mismatching dimensions");
  }
  assignment_ = std::move(assignment);
  std::copy(block_weights.begin(), block_weights.end(), block_weight_.begin());
  std::copy(block_sizes.begin(), block_sizes.end(), block_size_.begin());
  order_ = BlockOrder::from_weights(block_weight_, unit_weights_);
}

}  // namespace streamdecomp
