#include "streamdecomp/onepass.hpp"

#include <chrono>
#include <cmath>

namespace streamdecomp {

double fennel_alpha(double n, double m, BlockID k, double gamma) {
  if (n <= 0) throw InputError("fennel alpha needs n > 0");
  const double alpha = m * std::pow(static_cast<double>(k), gamma - 1.0) / std::pow(n, gamma);
  // An edgeless input would give alpha = 0 and make every block tie; any
  // positive value keeps the penalty meaningful.
  return alpha > 0 ? alpha : 1.0;
}

double fennel_penalty(NodeWeight node_weight, NodeWeight block_weight, double alpha, double gamma) {
  return static_cast<double>(node_weight) * alpha * gamma * std::pow(static_cast<double>(block_weight), gamma - 1.0);
}

void BlockAffinity::collect(const StreamedNodeRecord& record, const PartitionState& state) {
  clear();
  for (const auto& nb : record.neighbors) {
    const BlockID b = state.block_of(nb.id);
    if (b != kUnassigned) add(b, static_cast<double>(nb.weight));
  }
}

double fennel_gain(const StreamedNodeRecord& record, BlockID block, const PartitionState& state,
                   const FennelParams& params) {
  double affinity = 0.0;
  for (const auto& nb : record.neighbors) {
    if (state.block_of(nb.id) == block) affinity += static_cast<double>(nb.weight);
  }
  return fennel_gain(affinity, record.weight, state.block_weight(block), params.alpha, params.gamma);
}

BlockID ldg_choose(const StreamedNodeRecord& record, PartitionState& state, BlockAffinity& affinity) {
  affinity.collect(record, state);
  BlockID best = kUnassigned;
  double best_score = 0.0;
  const auto l_max = static_cast<double>(state.l_max());
  for (BlockID b = 0; b < state.k(); ++b) {
    if (!state.fits(b, record.weight)) continue;
    const double score = affinity[b] * (1.0 - static_cast<double>(state.block_weight(b)) / l_max);
    if (best == kUnassigned || score > best_score ||
        (score == best_score && state.block_size(b) < state.block_size(best))) {
      best = b;
      best_score = score;
    }
  }
  if (best == kUnassigned) {
    state.flag_violation();
    best = state.lightest_block();
  }
  return best;
}

BlockID ldg_assign(const StreamedNodeRecord& record, PartitionState& state, BlockAffinity& affinity) {
  const BlockID b = ldg_choose(record, state, affinity);
  state.assign(record.id, b, record.weight);
  return b;
}

BlockID fennel_choose(const StreamedNodeRecord& record, PartitionState& state, const FennelParams& params,
                      BlockAffinity& affinity) {
  affinity.collect(record, state);
  ScoredBlock best;
  for (BlockID b = 0; b < state.k(); ++b) {
    if (params.hard_balance && !state.fits(b, record.weight)) continue;
    const ScoredBlock candidate{
        b, fennel_gain(affinity[b], record.weight, state.block_weight(b), params.alpha, params.gamma), affinity[b]};
    if (ranks_higher(candidate, best, state.order())) best = candidate;
  }
  if (best.block == kUnassigned) {
    state.flag_violation();
    return state.lightest_block();
  }
  return best.block;
}

BlockID fennel_assign(const StreamedNodeRecord& record, PartitionState& state, const FennelParams& params,
                      BlockAffinity& affinity) {
  const BlockID b = fennel_choose(record, state, params, affinity);
  state.assign(record.id, b, record.weight);
  return b;
}

OnePassAlgorithm parse_onepass_algorithm(std::string_view name) {
  if (name == "hashing") return OnePassAlgorithm::hashing;
  if (name == "ldg") return OnePassAlgorithm::ldg;
  if (name == "fennel") return OnePassAlgorithm::fennel;
  throw InputError("unknown one-pass algorithm '" + std::string(name) + "'");
}

std::string_view to_string(OnePassAlgorithm algorithm) {
  switch (algorithm) {
    case OnePassAlgorithm::hashing: return "hashing";
    case OnePassAlgorithm::ldg: return "ldg";
    case OnePassAlgorithm::fennel: return "fennel";
  }
  return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

FennelParams resolved(const FennelParams& params, const GraphStreamHeader& header, BlockID k) {
  FennelParams out = params;
  if (out.alpha <= 0) {
    out.alpha = fennel_alpha(static_cast<double>(header.n), static_cast<double>(header.m), k, out.gamma);
  }
  return out;
}

}  // namespace

OnePassResult run_onepass(GraphStream& stream, const OnePassConfig& config, PartitionState& state) {
  if (config.passes < 1) throw InputError("passes must be at least 1");
  stream.rewind();
  const auto start = Clock::now();
  const FennelParams params = resolved(config.fennel, stream.header(), state.k());
  BlockAffinity affinity(state.k());
  StreamedNodeRecord record;
  const auto violations_before = state.violations();
  while (stream.next(record)) {
    switch (config.algorithm) {
      case OnePassAlgorithm::hashing:
        state.assign(record.id, hashing_assign(record.id, state.k()), record.weight);
        break;
      case OnePassAlgorithm::ldg:
        ldg_assign(record, state, affinity);
        break;
      case OnePassAlgorithm::fennel:
        fennel_assign(record, state, params, affinity);
        break;
    }
  }
  OnePassResult result;
  result.passes.push_back({1, config.algorithm == OnePassAlgorithm::fennel ? params.alpha : 0.0,
                           state.violations() - violations_before, elapsed_ms(start)});
  return result;
}

OnePassResult run_restream(GraphStream& stream, const OnePassConfig& config, PartitionState& state) {
  OnePassResult result;
  if (config.restream_alpha_growth < 1.0) throw InputError("alpha growth must be at least 1");
  FennelParams params = resolved(config.fennel, stream.header(), state.k());
  BlockAffinity affinity(state.k());
  StreamedNodeRecord record;
  for (int pass = 2; pass <= config.passes; ++pass) {
    const auto start = Clock::now();
    const auto violations_before = state.violations();
    stream.rewind();
    switch (config.algorithm) {
      case OnePassAlgorithm::hashing:
        // Hashing ignores the state; another pass reproduces the same result.
        while (stream.next(record)) {
        }
        break;
      case OnePassAlgorithm::ldg:
        state.clear_block_weights();
        while (stream.next(record)) {
          state.place(record.id, ldg_choose(record, state, affinity), record.weight);
        }
        break;
      case OnePassAlgorithm::fennel:
        params.alpha *= config.restream_alpha_growth;
        while (stream.next(record)) {
          state.unassign(record.id, record.weight);
          state.assign(record.id, fennel_choose(record, state, params, affinity), record.weight);
        }
        break;
    }
    result.passes.push_back({pass, config.algorithm == OnePassAlgorithm::fennel ? params.alpha : 0.0,
                             state.violations() - violations_before, elapsed_ms(start)});
  }
  stream.rewind();
  return result;
}

PartitionState partition_onepass(GraphStream& stream, BlockID k, double epsilon, const OnePassConfig& config,
                                 OnePassResult* result) {
  const auto& header = stream.header();
  PartitionState state(header.n, k, epsilon, total_node_weight(stream), !header.has_node_weights);
  auto first = run_onepass(stream, config, state);
  auto rest = run_restream(stream, config, state);
  if (result) {
    *result = std::move(first);
    result->passes.insert(result->passes.end(), rest.passes.begin(), rest.passes.end());
  }
  return state;
}

}  // namespace streamdecomp
