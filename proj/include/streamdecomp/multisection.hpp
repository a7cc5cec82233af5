#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "streamdecomp/graph_stream.hpp"
#include "streamdecomp/hierarchy.hpp"
#include "streamdecomp/onepass.hpp"
#include "streamdecomp/partition_state.hpp"

namespace streamdecomp {

/// Layered hierarchy of block subproblems. Every tree node covers a contiguous
/// range [lo, hi] of final blocks; children of a node are stored contiguously
/// and split its range into nearly equal parts (the first t mod m children get
/// one extra leaf). Leaves are exactly the k final blocks.
class MultisectionTree {
 public:
  struct Node {
    std::int32_t parent = -1;
    std::uint32_t first_child = 0;
    std::uint32_t num_children = 0;
    BlockID lo = 0;
    BlockID hi = 0;
    std::uint32_t depth = 0;
    std::uint32_t height = 0;  // 0 for leaves

    [[nodiscard]] BlockID leaves() const { return hi - lo + 1; }
    [[nodiscard]] bool is_leaf() const { return num_children == 0; }
  };

  /// Recursive b-section for arbitrary k (children per node: min(b, t)).
  static MultisectionTree build_hierarchy(BlockID k, std::uint32_t b);
  /// Tree following S top-down: the root splits into a_l parts, then a_{l-1}...
  /// Fan-outs of 1 add nothing and are skipped.
  static MultisectionTree build_from_spec(const HierarchySpec& spec);

  [[nodiscard]] BlockID k() const { return k_; }
  [[nodiscard]] const Node& node(std::uint32_t i) const { return nodes_[i]; }
  [[nodiscard]] std::size_t size() const { return nodes_.size(); }
  [[nodiscard]] std::uint32_t root() const { return 0; }
  [[nodiscard]] std::uint32_t leaf_node(BlockID block) const { return leaf_node_[static_cast<std::size_t>(block)]; }
  [[nodiscard]] std::uint32_t height() const { return nodes_[0].height; }
  [[nodiscard]] std::uint32_t max_fanout() const;

  /// Index (0-based, among the children of `parent`) of the child whose range
  /// holds `block`. `block` must lie in the parent's range.
  [[nodiscard]] std::uint32_t child_slot(std::uint32_t parent, BlockID block) const {
    const Node& p = nodes_[parent];
    const auto t = static_cast<std::uint32_t>(p.leaves());
    const std::uint32_t m = p.num_children;
    const std::uint32_t q = t / m;
    const std::uint32_t r = t % m;
    const auto off = static_cast<std::uint32_t>(block - p.lo);
    if (off < r * (q + 1)) return off / (q + 1);
    return r + (off - r * (q + 1)) / q;
  }

 private:
  template <typename Fanout>
  static MultisectionTree build(BlockID k, Fanout fanout);

  BlockID k_ = 0;
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> leaf_node_;
};

/// alpha / sqrt(t) for a tree node covering t final blocks.
[[nodiscard]] double heterogeneous_alpha(const MultisectionTree& tree, std::uint32_t node, double alpha);

enum class OmsScorer { fennel, ldg };
[[nodiscard]] OmsScorer parse_oms_scorer(std::string_view name);

struct OmsConfig {
  OmsScorer scorer = OmsScorer::fennel;
  FennelParams fennel;            // alpha <= 0: Fennel's alpha for the full k
  std::uint32_t hash_bottom_layers = 0;  // subproblems at height <= h are hashed
  unsigned threads = 1;
  std::uint64_t seed = 0;         // salts the bottom-layer hash
};

/// Block weights for every tree node plus the final assignment. Weights are
/// updated through atomic_ref so that several assigners can share them.
class OmsState {
 public:
  OmsState(const MultisectionTree& tree, NodeID n, NodeWeight l_max, double alpha);

  [[nodiscard]] const MultisectionTree& tree() const { return *tree_; }
  [[nodiscard]] NodeWeight l_max() const { return l_max_; }
  [[nodiscard]] double alpha() const { return alpha_; }
  [[nodiscard]] NodeWeight weight(std::uint32_t node) const;
  [[nodiscard]] NodeWeight capacity(std::uint32_t node) const { return tree_->node(node).leaves() * l_max_; }
  [[nodiscard]] BlockID block_of(NodeID v) const;
  [[nodiscard]] std::vector<BlockID>& assignment() { return assignment_; }
  [[nodiscard]] std::uint64_t violations() const;

  /// Adds `w` to every node on the root-to-leaf path of `block` and records it.
  void commit(NodeID v, BlockID block, NodeWeight w);
  void flag_violation();

 private:
  const MultisectionTree* tree_;
  NodeWeight l_max_;
  double alpha_;
  std::vector<NodeWeight> weight_;
  std::vector<BlockID> assignment_;
  std::uint64_t violations_ = 0;
};

/// Per-call scratch (children tallies); one per thread.
struct OmsScratch {
  std::vector<double> affinity;
};

/// Descends from the root, picking at each tree node the best child under the
/// configured scorer with neighbor tallies restricted to that node's range.
/// Ties go to the lighter child, then the lower index.
BlockID oms_assign(const StreamedNodeRecord& record, OmsState& state, const OmsConfig& config, OmsScratch& scratch);

struct OmsStats {
  double alpha = 0.0;
  std::uint64_t violations = 0;
};

/// Sequential single pass (threads == 1) over a stream.
[[nodiscard]] PartitionState run_oms(GraphStream& stream, const MultisectionTree& tree, double epsilon,
                                     const OmsConfig& config, OmsStats* stats = nullptr);

/// Node-parallel pass over a preloaded graph. Contiguous id ranges go to
/// `config.threads` workers; capacity checks are not synchronized, so rare
/// overloads are possible and counted as violations. Results vary with the
/// thread count.
[[nodiscard]] PartitionState run_oms_parallel(const InMemoryGraph& graph, const MultisectionTree& tree, double epsilon,
                                              const OmsConfig& config, OmsStats* stats = nullptr);

}  // namespace streamdecomp
