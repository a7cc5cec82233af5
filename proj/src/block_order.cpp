#include "streamdecomp/block_order.hpp"

#include <algorithm>
#include <numeric>

namespace streamdecomp {

SortedBlocks::SortedBlocks(BlockID k)
    : order_(static_cast<std::size_t>(k)), position_(static_cast<std::size_t>(k)), bucket_at_(static_cast<std::size_t>(k), 0) {
  if (k < 1) throw InputError("k must be at least 1");
  std::iota(order_.begin(), order_.end(), 0);
  std::iota(position_.begin(), position_.end(), 0);
  buckets_.push_back({0, 0, k - 1});
}

SortedBlocks SortedBlocks::from_cardinalities(std::span<const NodeWeight> cardinalities) {
  const auto k = static_cast<BlockID>(cardinalities.size());
  SortedBlocks sb(k);
  std::stable_sort(sb.order_.begin(), sb.order_.end(),
                   [&](BlockID a, BlockID b) { return cardinalities[a] < cardinalities[b]; });
  sb.buckets_.clear();
  for (std::int64_t pos = 0; pos < k; ++pos) {
    const BlockID block = sb.order_[pos];
    sb.position_[block] = pos;
    if (pos == 0 || cardinalities[sb.order_[pos - 1]] != cardinalities[block]) {
      sb.buckets_.push_back({cardinalities[block], pos, pos});
    } else {
      sb.buckets_.back().right = pos;
    }
    sb.bucket_at_[pos] = static_cast<std::uint32_t>(sb.buckets_.size() - 1);
  }
  return sb;
}

std::uint32_t SortedBlocks::new_bucket(NodeWeight cardinality, std::int64_t left, std::int64_t right) {
  if (!free_.empty()) {
    const auto slot = free_.back();
    free_.pop_back();
    buckets_[slot] = {cardinality, left, right};
    return slot;
  }
  buckets_.push_back({cardinality, left, right});
  return static_cast<std::uint32_t>(buckets_.size() - 1);
}

void SortedBlocks::increment(BlockID block) {
  const std::int64_t p = position_[block];
  const std::uint32_t current = bucket_at_[p];
  // Swap with the rightmost block of the same cardinality.
  const std::int64_t q = buckets_[current].right;
  const BlockID other = order_[q];
  std::swap(order_[p], order_[q]);
  position_[other] = p;
  position_[block] = q;
  --buckets_[current].right;

  const NodeWeight new_cardinality = buckets_[current].cardinality + 1;
  if (q + 1 < static_cast<std::int64_t>(order_.size()) && buckets_[bucket_at_[q + 1]].cardinality == new_cardinality) {
    bucket_at_[q] = bucket_at_[q + 1];
    --buckets_[bucket_at_[q]].left;
  } else {
    bucket_at_[q] = new_bucket(new_cardinality, q, q);
  }
  if (buckets_[current].right < buckets_[current].left) free_.push_back(current);
}

void SortedBlocks::decrement(BlockID block) {
  const std::int64_t p = position_[block];
  const std::uint32_t current = bucket_at_[p];
  if (buckets_[current].cardinality == 0) throw InvariantError("decrement of an empty block");
  // Mirror image of increment: swap with the leftmost block of the bucket.
  const std::int64_t q = buckets_[current].left;
  const BlockID other = order_[q];
  std::swap(order_[p], order_[q]);
  position_[other] = p;
  position_[block] = q;
  ++buckets_[current].left;

  const NodeWeight new_cardinality = buckets_[current].cardinality - 1;
  if (q > 0 && buckets_[bucket_at_[q - 1]].cardinality == new_cardinality) {
    bucket_at_[q] = bucket_at_[q - 1];
    ++buckets_[bucket_at_[q]].right;
  } else {
    bucket_at_[q] = new_bucket(new_cardinality, q, q);
  }
  if (buckets_[current].right < buckets_[current].left) free_.push_back(current);
}

BucketBlockQueue::BucketBlockQueue(BlockID k)
    : weight_(static_cast<std::size_t>(k), 0),
      stamp_(static_cast<std::size_t>(k)),
      prev_(static_cast<std::size_t>(k), -1),
      next_(static_cast<std::size_t>(k), -1),
      head_(1, -1),
      tail_(1, -1),
      clock_(static_cast<std::uint64_t>(k)) {
  if (k < 1) throw InputError("k must be at least 1");
  for (BlockID b = 0; b < k; ++b) {
    stamp_[b] = static_cast<std::uint64_t>(b);
    push_back(b);
  }
}

BucketBlockQueue BucketBlockQueue::from_weights(std::span<const NodeWeight> weights) {
  const auto k = static_cast<BlockID>(weights.size());
  BucketBlockQueue queue(k);
  for (BlockID b = 0; b < k; ++b) queue.unlink(b);
  queue.min_weight_ = weights.empty() ? 0 : *std::min_element(weights.begin(), weights.end());
  for (BlockID b = 0; b < k; ++b) {
    queue.weight_[b] = weights[b];
    queue.stamp_[b] = static_cast<std::uint64_t>(b);
    queue.push_back(b);
  }
  return queue;
}

void BucketBlockQueue::unlink(BlockID block) {
  const auto w = static_cast<std::size_t>(weight_[block]);
  if (prev_[block] >= 0) {
    next_[prev_[block]] = next_[block];
  } else {
    head_[w] = next_[block];
  }
  if (next_[block] >= 0) {
    prev_[next_[block]] = prev_[block];
  } else {
    tail_[w] = prev_[block];
  }
  prev_[block] = next_[block] = -1;
}

void BucketBlockQueue::push_back(BlockID block) {
  const auto w = static_cast<std::size_t>(weight_[block]);
  if (w >= head_.size()) {
    head_.resize(std::max(w + 1, head_.size() * 2), -1);
    tail_.resize(head_.size(), -1);
  }
  prev_[block] = tail_[w];
  next_[block] = -1;
  if (tail_[w] >= 0) {
    next_[tail_[w]] = block;
  } else {
    head_[w] = block;
  }
  tail_[w] = block;
}

void BucketBlockQueue::add(BlockID block, NodeWeight delta) {
  if (delta < 0) throw InvariantError("negative weight delta");
  if (delta == 0) return;
  unlink(block);
  weight_[block] += delta;
  stamp_[block] = clock_++;
  push_back(block);
  while (head_[static_cast<std::size_t>(min_weight_)] < 0) ++min_weight_;
}

void BucketBlockQueue::remove(BlockID block, NodeWeight delta) {
  if (delta < 0 || delta > weight_[block]) throw InvariantError("invalid weight removal");
  if (delta == 0) return;
  unlink(block);
  weight_[block] -= delta;
  stamp_[block] = clock_++;
  push_back(block);
  min_weight_ = std::min(min_weight_, weight_[block]);
  while (head_[static_cast<std::size_t>(min_weight_)] < 0) ++min_weight_;
}

BlockOrder::BlockOrder(BlockID k, bool unit_weights)
    : impl_(unit_weights ? std::variant<SortedBlocks, BucketBlockQueue>(SortedBlocks(k))
                         : std::variant<SortedBlocks, BucketBlockQueue>(BucketBlockQueue(k))) {}

BlockOrder BlockOrder::from_weights(std::span<const NodeWeight> weights, bool unit_weights) {
  if (unit_weights) return BlockOrder(SortedBlocks::from_cardinalities(weights));
  return BlockOrder(BucketBlockQueue::from_weights(weights));
}

void BlockOrder::add(BlockID block, NodeWeight delta) {
  if (auto* sorted = std::get_if<SortedBlocks>(&impl_)) {
    for (NodeWeight i = 0; i < delta; ++i) sorted->increment(block);
  } else {
    std::get<BucketBlockQueue>(impl_).add(block, delta);
  }
}

void BlockOrder::remove(BlockID block, NodeWeight delta) {
  if (auto* sorted = std::get_if<SortedBlocks>(&impl_)) {
    for (NodeWeight i = 0; i < delta; ++i) sorted->decrement(block);
  } else {
    std::get<BucketBlockQueue>(impl_).remove(block, delta);
  }
}

BlockID BlockOrder::min_block() const {
  return std::visit([](const auto& impl) { return impl.min_block(); }, impl_);
}

bool BlockOrder::precedes(BlockID a, BlockID b) const {
  if (const auto* sorted = std::get_if<SortedBlocks>(&impl_)) {
    return sorted->position()[a] < sorted->position()[b];
  }
  return std::get<BucketBlockQueue>(impl_).precedes(a, b);
}

}  // namespace streamdecomp
