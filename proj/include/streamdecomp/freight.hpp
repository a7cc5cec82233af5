#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "streamdecomp/hypergraph_stream.hpp"
#include "streamdecomp/onepass.hpp"
#include "streamdecomp/partition_state.hpp"

namespace streamdecomp {

enum class NetStatus : std::uint8_t { untouched, single_block, cut };

/// Per-net state: whether the streamed pins span one block or several, and the
/// block d_e of the most recently streamed pin.
class NetTracker {
 public:
  explicit NetTracker(NetID num_nets) : status_(num_nets, NetStatus::untouched), last_(num_nets, kUnassigned) {}

  [[nodiscard]] NetStatus status(NetID e) const { return status_[e]; }
  [[nodiscard]] BlockID last_block(NetID e) const { return last_[e]; }
  [[nodiscard]] NetID num_nets() const { return status_.size(); }

  void record_pin(NetID e, BlockID block) {
    if (status_[e] == NetStatus::untouched) {
      status_[e] = NetStatus::single_block;
    } else if (status_[e] == NetStatus::single_block && last_[e] != block) {
      status_[e] = NetStatus::cut;
    }
    last_[e] = block;
  }

 private:
  std::vector<NetStatus> status_;
  std::vector<BlockID> last_;
};

enum class FreightObjective { connectivity, cut_net };
[[nodiscard]] FreightObjective parse_freight_objective(std::string_view name);
[[nodiscard]] std::string_view to_string(FreightObjective objective);

struct FreightConfig {
  FreightObjective objective = FreightObjective::connectivity;
  FennelParams fennel;  // alpha <= 0: derived from the net and node counts
};

/// Scores the blocks touched by the node's nets explicitly (S1) and compares
/// the winner with the globally lightest block when that block is feasible and
/// untouched (S2). `config.fennel.alpha` must be resolved. Commits the choice to
/// the state and the tracker.
BlockID freight_assign(const StreamedHyperNodeRecord& record, PartitionState& state, NetTracker& tracker,
                       const FreightConfig& config, BlockAffinity& affinity);

struct FreightStats {
  double alpha = 0.0;
  std::uint64_t violations = 0;
  std::uint64_t e2_choices = 0;  // nodes placed on the lightest untouched block
};

[[nodiscard]] PartitionState run_freight(HypergraphStream& stream, BlockID k, double epsilon,
                                         const FreightConfig& config, FreightStats* stats = nullptr);

}  // namespace streamdecomp
