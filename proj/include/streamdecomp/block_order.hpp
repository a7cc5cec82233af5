#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "streamdecomp/types.hpp"

namespace streamdecomp {

/// Keeps k blocks sorted by cardinality under unit increments and decrements.
///
/// `order()` is the array A (blocks, ascending cardinality), `position()` is B
/// (block -> index in A). Equal-cardinality runs of A are covered by buckets
/// holding [left, right]; every position points at its bucket. Both updates
/// touch a constant number of entries.
class SortedBlocks {
 public:
  struct Bucket {
    NodeWeight cardinality;
    std::int64_t left;
    std::int64_t right;
  };

  explicit SortedBlocks(BlockID k);

  /// Rebuilds the structure for arbitrary starting cardinalities.
  static SortedBlocks from_cardinalities(std::span<const NodeWeight> cardinalities);

  void increment(BlockID block);
  void decrement(BlockID block);

  [[nodiscard]] BlockID min_block() const { return order_[0]; }
  [[nodiscard]] NodeWeight cardinality(BlockID block) const {
    return buckets_[bucket_at_[static_cast<std::size_t>(position_[block])]].cardinality;
  }
  [[nodiscard]] BlockID k() const { return static_cast<BlockID>(order_.size()); }
  [[nodiscard]] std::span<const BlockID> order() const { return order_; }
  [[nodiscard]] std::span<const std::int64_t> position() const { return position_; }

  /// Bucket covering a position of A.
  [[nodiscard]] const Bucket& bucket_at(std::int64_t pos) const {
    return buckets_[bucket_at_[static_cast<std::size_t>(pos)]];
  }
  [[nodiscard]] std::size_t num_buckets() const { return buckets_.size() - free_.size(); }

 private:
  std::uint32_t new_bucket(NodeWeight cardinality, std::int64_t left, std::int64_t right);

  std::vector<BlockID> order_;           // A
  std::vector<std::int64_t> position_;   // B
  std::vector<std::uint32_t> bucket_at_; // bucket pointer per position of A
  std::vector<Bucket> buckets_;          // L (slots reused through free_)
  std::vector<std::uint32_t> free_;
};

/// Bucket priority queue over block weights for weighted nodes.
///
/// Buckets are indexed by weight and hold FIFO lists, so among equal-weight
/// blocks the one that reached its weight first comes first. Initially blocks
/// are queued by index. Memory is O(k + max block weight).
class BucketBlockQueue {
 public:
  explicit BucketBlockQueue(BlockID k);
  static BucketBlockQueue from_weights(std::span<const NodeWeight> weights);

  void add(BlockID block, NodeWeight delta);
  void remove(BlockID block, NodeWeight delta);

  [[nodiscard]] BlockID min_block() const { return head_[static_cast<std::size_t>(min_weight_)]; }
  [[nodiscard]] NodeWeight weight(BlockID block) const { return weight_[block]; }
  /// Strict total order consistent with ascending weight.
  [[nodiscard]] bool precedes(BlockID a, BlockID b) const {
    if (weight_[a] != weight_[b]) return weight_[a] < weight_[b];
    return stamp_[a] < stamp_[b];
  }

 private:
  void unlink(BlockID block);
  void push_back(BlockID block);

  std::vector<NodeWeight> weight_;
  std::vector<std::uint64_t> stamp_;
  std::vector<BlockID> prev_;
  std::vector<BlockID> next_;
  std::vector<BlockID> head_;
  std::vector<BlockID> tail_;
  NodeWeight min_weight_ = 0;
  std::uint64_t clock_ = 0;
};

/// Min-block query and tie order for a partition's block weights: SortedBlocks
/// when every node has unit weight, BucketBlockQueue otherwise.
class BlockOrder {
 public:
  BlockOrder(BlockID k, bool unit_weights);
  static BlockOrder from_weights(std::span<const NodeWeight> weights, bool unit_weights);

  void add(BlockID block, NodeWeight delta);
  void remove(BlockID block, NodeWeight delta);

  [[nodiscard]] BlockID min_block() const;
  /// True when `a` sorts before `b` (lighter, or equally heavy and earlier).
  [[nodiscard]] bool precedes(BlockID a, BlockID b) const;
  [[nodiscard]] bool unit_weights() const { return std::holds_alternative<SortedBlocks>(impl_); }
  [[nodiscard]] const SortedBlocks* sorted_blocks() const { return std::get_if<SortedBlocks>(&impl_); }

 private:
  explicit BlockOrder(std::variant<SortedBlocks, BucketBlockQueue> impl) : impl_(std::move(impl)) {}
  std::variant<SortedBlocks, BucketBlockQueue> impl_;
};

}  // namespace streamdecomp
