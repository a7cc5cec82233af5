#include "streamdecomp/freight.hpp"

namespace streamdecomp {

FreightObjective parse_freight_objective(std::string_view name) {
  if (name == "con" || name == "connectivity") return FreightObjective::connectivity;
  if (name == "cut" || name == "cutnet" || name == "cut-net") return FreightObjective::cut_net;
  throw InputError("unknown objective '" + std::string(name) + "' (expected con or cut)");
}

std::string_view to_string(FreightObjective objective) {
  return objective == FreightObjective::connectivity ? "con" : "cut";
}

BlockID freight_assign(const StreamedHyperNodeRecord& record, PartitionState& state, NetTracker& tracker,
                       const FreightConfig& config, BlockAffinity& affinity) {
  const double alpha = config.fennel.alpha;
  const double gamma = config.fennel.gamma;
  const bool hard = config.fennel.hard_balance;

  affinity.clear();
  for (const auto& net : record.nets) {
    const NetStatus status = tracker.status(net.id);
    if (status == NetStatus::untouched) continue;
    if (config.objective == FreightObjective::cut_net && status == NetStatus::cut) continue;
    affinity.add(tracker.last_block(net.id), static_cast<double>(net.weight));
  }

  ScoredBlock best;
  for (BlockID b : affinity.touched()) {
    if (hard && !state.fits(b, record.weight)) continue;
    const ScoredBlock candidate{b, fennel_gain(affinity[b], record.weight, state.block_weight(b), alpha, gamma),
                                affinity[b]};
    if (ranks_higher(candidate, best, state.order())) best = candidate;
  }
  const BlockID lightest = state.lightest_block();
  if (!affinity.contains(lightest) && (!hard || state.fits(lightest, record.weight))) {
    const ScoredBlock candidate{lightest, fennel_gain(0.0, record.weight, state.block_weight(lightest), alpha, gamma),
                                0.0};
    if (ranks_higher(candidate, best, state.order())) best = candidate;
  }
  if (best.block == kUnassigned) {
    state.flag_violation();
    best.block = lightest;
  }

  state.assign(record.id, best.block, record.weight);
  for (const auto& net : record.nets) tracker.record_pin(net.id, best.block);
  return best.block;
}

PartitionState run_freight(HypergraphStream& stream, BlockID k, double epsilon, const FreightConfig& config,
                           FreightStats* stats) {
  const auto header = stream.header();
  PartitionState state(header.num_nodes, k, epsilon, total_node_weight(stream), !header.has_node_weights);
  FreightConfig resolved = config;
  if (resolved.fennel.alpha <= 0) {
    resolved.fennel.alpha = fennel_alpha(static_cast<double>(header.num_nodes), static_cast<double>(header.num_nets),
                                         k, resolved.fennel.gamma);
  }
  NetTracker tracker(header.num_nets);
  BlockAffinity affinity(k);
  StreamedHyperNodeRecord record;
  std::uint64_t e2 = 0;
  stream.rewind();
  while (stream.next(record)) {
    const BlockID b = freight_assign(record, state, tracker, resolved, affinity);
    if (!affinity.contains(b)) ++e2;
  }
  stream.rewind();
  if (stats) *stats = {resolved.fennel.alpha, state.violations(), e2};
  return state;
}

}  // namespace streamdecomp
