#include "streamdecomp/heistream.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace streamdecomp {

BatchModelKind parse_batch_model(std::string_view name) {
  if (name == "basic") return BatchModelKind::basic;
  if (name == "extended") return BatchModelKind::extended;
  throw InputError("unknown batch model '" + std::string(name) + "'");
}

std::string_view to_string(BatchModelKind kind) { return kind == BatchModelKind::basic ? "basic" : "extended"; }

double ModelGraph::weighted_degree(std::uint32_t v) const {
  double sum = 0.0;
  for (auto e = xadj[v]; e < xadj[v + 1]; ++e) sum += adjwgt[e];
  return sum;
}

ModelGraph ModelGraph::from_edges(std::vector<NodeWeight> node_weights, std::uint32_t num_mutable,
                                  BlockID num_artificial,
                                  std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> edges) {
  ModelGraph g;
  g.vwgt = std::move(node_weights);
  g.num_mutable = num_mutable;
  g.num_artificial = num_artificial;
  if (g.vwgt.size() != num_mutable + static_cast<std::size_t>(num_artificial)) {
    throw InvariantError("model node count mismatch");
  }
  const std::size_t undirected = edges.size();
  edges.reserve(2 * undirected);
  for (std::size_t i = 0; i < undirected; ++i) {
    const auto [u, v, w] = edges[i];
    edges.emplace_back(v, u, w);
  }
  std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
    return std::get<0>(a) != std::get<0>(b) ? std::get<0>(a) < std::get<0>(b) : std::get<1>(a) < std::get<1>(b);
  });
  const std::uint32_t n = g.num_nodes();
  g.xadj.assign(n + 1, 0);
  std::size_t i = 0;
  for (std::uint32_t u = 0; u < n; ++u) {
    while (i < edges.size() && std::get<0>(edges[i]) == u) {
      const auto v = std::get<1>(edges[i]);
      double w = 0.0;
      while (i < edges.size() && std::get<0>(edges[i]) == u && std::get<1>(edges[i]) == v) w += std::get<2>(edges[i++]);
      if (v == u) continue;
      g.adjncy.push_back(v);
      g.adjwgt.push_back(w);
    }
    g.xadj[u + 1] = g.adjncy.size();
  }
  return g;
}

RawBatch load_batch(GraphStream& stream, NodeID delta) {
  if (delta < 1) throw InputError("delta must be at least 1");
  RawBatch batch;
  StreamedNodeRecord record;
  while (batch.records.size() < delta && stream.next(record)) {
    if (batch.records.empty()) batch.first = record.id;
    batch.records.push_back(record);
  }
  return batch;
}

BatchModel build_model(const RawBatch& batch, const PartitionState& state, const HeiStreamConfig& config,
                       bool restream, std::mt19937_64& rng) {
  const BlockID k = state.k();
  const auto nb = static_cast<std::uint32_t>(batch.size());
  const BlockID art = (restream || batch.first > 0) ? k : 0;
  BatchModel model;
  model.first = batch.first;
  model.true_weight.resize(nb);
  std::vector<NodeWeight> vwgt(nb + static_cast<std::size_t>(art), 0);
  for (std::uint32_t u = 0; u < nb; ++u) {
    model.true_weight[u] = batch.records[u].weight;
    vwgt[u] = batch.records[u].weight;
  }
  for (BlockID j = 0; j < art; ++j) vwgt[nb + j] = state.block_weight(j);
  if (restream) {
    model.prior_block.resize(nb);
    for (std::uint32_t u = 0; u < nb; ++u) {
      const BlockID b = state.block_of(batch.first + u);
      if (b == kUnassigned) throw InvariantError("restream over an unassigned node");
      model.prior_block[u] = b;
      vwgt[nb + b] -= batch.records[u].weight;
    }
  }

  std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> edges;
  struct Ghost {
    NodeID id;
    std::uint32_t local;
    EdgeWeight weight;
  };
  std::vector<Ghost> ghosts;
  const auto artificial_edge = [&](std::uint32_t u, NodeID neighbor, EdgeWeight w) {
    const BlockID b = state.block_of(neighbor);
    if (b == kUnassigned) throw InvariantError("neighbor outside the batch has no block");
    edges.emplace_back(u, nb + static_cast<std::uint32_t>(b), static_cast<double>(w));
  };
  for (std::uint32_t u = 0; u < nb; ++u) {
    const auto& record = batch.records[u];
    for (const auto& nbr : record.neighbors) {
      switch (classify_neighbor(batch, nbr.id)) {
        case NeighborKind::past:
          artificial_edge(u, nbr.id, nbr.weight);
          break;
        case NeighborKind::in_batch:
          if (nbr.id > record.id) {
            edges.emplace_back(u, static_cast<std::uint32_t>(nbr.id - batch.first), static_cast<double>(nbr.weight));
          }
          break;
        case NeighborKind::future:
          if (restream) {
            artificial_edge(u, nbr.id, nbr.weight);
          } else if (config.model == BatchModelKind::extended) {
            ghosts.push_back({nbr.id, u, nbr.weight});
          }
          break;
      }
    }
  }

  if (!ghosts.empty()) {
    std::sort(ghosts.begin(), ghosts.end(),
              [](const Ghost& a, const Ghost& b) { return a.id != b.id ? a.id < b.id : a.local < b.local; });
    for (std::size_t i = 0; i < ghosts.size();) {
      std::size_t j = i;
      while (j < ghosts.size() && ghosts[j].id == ghosts[i].id) ++j;
      std::uniform_int_distribution<std::size_t> pick(i, j - 1);
      const std::uint32_t host = ghosts[pick(rng)].local;
      // The ghost's own weight is unknown until it is streamed; count it as 1.
      vwgt[host] += 1;
      model.ghost_inflation += 1;
      ++model.ghosts;
      for (std::size_t g = i; g < j; ++g) {
        if (ghosts[g].local != host) {
          edges.emplace_back(ghosts[g].local, host, static_cast<double>(ghosts[g].weight) / 2.0);
        }
      }
      i = j;
    }
  }
  model.graph = ModelGraph::from_edges(std::move(vwgt), nb, art, std::move(edges));
  return model;
}

std::uint32_t coarsening_threshold(std::uint32_t model_nodes, BlockID k, int x) {
  const auto xk = static_cast<std::uint64_t>(x) * static_cast<std::uint64_t>(k);
  return static_cast<std::uint32_t>(std::max<std::uint64_t>(model_nodes / (2 * xk), xk));
}

std::vector<std::uint32_t> label_propagation_clustering(const ModelGraph& graph, NodeWeight cluster_cap, int rounds,
                                                        std::mt19937_64& rng, const std::vector<BlockID>* blocks) {
  const std::uint32_t nm = graph.num_mutable;
  std::vector<std::uint32_t> labels(nm);
  std::iota(labels.begin(), labels.end(), 0u);
  std::vector<NodeWeight> cluster_weight(graph.vwgt.begin(), graph.vwgt.begin() + nm);
  std::vector<std::uint32_t> order(nm);
  std::iota(order.begin(), order.end(), 0u);
  std::vector<double> strength(nm, 0.0);
  std::vector<char> seen(nm, 0);
  std::vector<std::uint32_t> touched;

  for (int round = 0; round < rounds; ++round) {
    std::shuffle(order.begin(), order.end(), rng);
    std::uint64_t moved = 0;
    for (const std::uint32_t v : order) {
      const std::uint32_t current = labels[v];
      touched.clear();
      for (auto e = graph.xadj[v]; e < graph.xadj[v + 1]; ++e) {
        const std::uint32_t u = graph.adjncy[e];
        if (u >= nm) continue;
        if (blocks && (*blocks)[u] != (*blocks)[v]) continue;
        const std::uint32_t label = labels[u];
        if (!seen[label]) {
          seen[label] = 1;
          touched.push_back(label);
        }
        strength[label] += graph.adjwgt[e];
      }
      std::uint32_t best = current;
      double best_strength = strength[current];
      std::uint64_t ties = 1;
      for (const std::uint32_t label : touched) {
        if (label == current) continue;
        if (cluster_weight[label] + graph.vwgt[v] > cluster_cap) continue;
        const double s = strength[label];
        if (s > best_strength) {
          best = label;
          best_strength = s;
          ties = 1;
        } else if (s == best_strength) {
          ++ties;
          if (std::uniform_int_distribution<std::uint64_t>(0, ties - 1)(rng) == 0) best = label;
        }
      }
      for (const std::uint32_t label : touched) {
        strength[label] = 0.0;
        seen[label] = 0;
      }
      if (best != current) {
        cluster_weight[current] -= graph.vwgt[v];
        cluster_weight[best] += graph.vwgt[v];
        labels[v] = best;
        ++moved;
      }
    }
    if (moved == 0) break;
  }
  return labels;
}

ModelGraph contract(const ModelGraph& graph, std::span<const std::uint32_t> labels, std::vector<std::uint32_t>& map) {
  const std::uint32_t n = graph.num_nodes();
  const std::uint32_t nm = graph.num_mutable;
  constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> coarse_of_label(nm, unset);
  map.assign(n, 0);
  std::uint32_t coarse_mutable = 0;
  for (std::uint32_t v = 0; v < nm; ++v) {
    auto& id = coarse_of_label[labels[v]];
    if (id == unset) id = coarse_mutable++;
    map[v] = id;
  }
  for (std::uint32_t v = nm; v < n; ++v) map[v] = coarse_mutable + (v - nm);
  const std::uint32_t cn = coarse_mutable + static_cast<std::uint32_t>(graph.num_artificial);

  ModelGraph coarse;
  coarse.num_mutable = coarse_mutable;
  coarse.num_artificial = graph.num_artificial;
  coarse.vwgt.assign(cn, 0);
  for (std::uint32_t v = 0; v < n; ++v) coarse.vwgt[map[v]] += graph.vwgt[v];

  // Members grouped by coarse node (counting sort).
  std::vector<std::uint32_t> start(cn + 1, 0);
  for (std::uint32_t v = 0; v < n; ++v) ++start[map[v] + 1];
  std::partial_sum(start.begin(), start.end(), start.begin());
  std::vector<std::uint32_t> members(n);
  {
    auto fill = start;
    for (std::uint32_t v = 0; v < n; ++v) members[fill[map[v]]++] = v;
  }
  std::vector<double> acc(cn, 0.0);
  std::vector<char> seen(cn, 0);
  std::vector<std::uint32_t> touched;
  coarse.xadj.assign(cn + 1, 0);
  for (std::uint32_t c = 0; c < cn; ++c) {
    touched.clear();
    for (auto i = start[c]; i < start[c + 1]; ++i) {
      const std::uint32_t v = members[i];
      for (auto e = graph.xadj[v]; e < graph.xadj[v + 1]; ++e) {
        const std::uint32_t cu = map[graph.adjncy[e]];
        if (cu == c) continue;
        if (!seen[cu]) {
          seen[cu] = 1;
          touched.push_back(cu);
        }
        acc[cu] += graph.adjwgt[e];
      }
    }
    std::sort(touched.begin(), touched.end());
    for (const std::uint32_t cu : touched) {
      coarse.adjncy.push_back(cu);
      coarse.adjwgt.push_back(acc[cu]);
      acc[cu] = 0.0;
      seen[cu] = 0;
    }
    coarse.xadj[c + 1] = coarse.adjncy.size();
  }
  return coarse;
}

CoarseningHierarchy coarsen(const ModelGraph& model, NodeWeight cluster_cap, BlockID k, const HeiStreamConfig& config,
                            std::mt19937_64& rng, const std::vector<BlockID>* blocks) {
  CoarseningHierarchy hierarchy;
  hierarchy.levels.push_back(model);
  const std::uint32_t threshold = coarsening_threshold(model.num_nodes(), k, config.x);
  std::vector<BlockID> level_blocks;
  if (blocks) level_blocks = *blocks;
  while (hierarchy.levels.back().num_nodes() > threshold) {
    const ModelGraph& fine = hierarchy.levels.back();
    const auto labels = label_propagation_clustering(fine, cluster_cap, config.coarsen_rounds, rng,
                                                     blocks ? &level_blocks : nullptr);
    std::vector<std::uint32_t> map;
    ModelGraph coarse = contract(fine, labels, map);
    if (static_cast<double>(coarse.num_nodes()) > (1.0 - config.min_shrink) * static_cast<double>(fine.num_nodes())) {
      break;
    }
    if (blocks) {
      std::vector<BlockID> coarse_blocks(coarse.num_nodes(), kUnassigned);
      for (std::uint32_t v = 0; v < fine.num_nodes(); ++v) coarse_blocks[map[v]] = level_blocks[v];
      level_blocks = std::move(coarse_blocks);
    }
    hierarchy.maps.push_back(std::move(map));
    hierarchy.levels.push_back(std::move(coarse));
  }
  return hierarchy;
}

std::vector<BlockID> initial_partition(const ModelGraph& coarsest, BlockID k, NodeWeight l_max, double alpha,
                                       double gamma, BlockOrder order, std::uint64_t* violations) {
  const std::uint32_t n = coarsest.num_nodes();
  std::vector<BlockID> partition(n, kUnassigned);
  std::vector<NodeWeight> weight(static_cast<std::size_t>(k), 0);
  for (std::uint32_t v = coarsest.num_mutable; v < n; ++v) {
    partition[v] = coarsest.artificial_block(v);
    weight[partition[v]] += coarsest.vwgt[v];
  }
  BlockAffinity affinity(k);
  for (std::uint32_t v = 0; v < coarsest.num_mutable; ++v) {
    affinity.clear();
    for (auto e = coarsest.xadj[v]; e < coarsest.xadj[v + 1]; ++e) {
      const BlockID b = partition[coarsest.adjncy[e]];
      if (b != kUnassigned) affinity.add(b, coarsest.adjwgt[e]);
    }
    const NodeWeight c = coarsest.vwgt[v];
    ScoredBlock best;
    for (BlockID b = 0; b < k; ++b) {
      if (weight[b] + c > l_max) continue;
      const ScoredBlock candidate{b, fennel_gain(affinity[b], c, weight[b], alpha, gamma), affinity[b]};
      if (ranks_higher(candidate, best, order)) best = candidate;
    }
    if (best.block == kUnassigned) {
      if (violations) ++*violations;
      best.block = order.min_block();
    }
    partition[v] = best.block;
    weight[best.block] += c;
    order.add(best.block, c);
  }
  return partition;
}

std::vector<NodeWeight> model_block_weights(const ModelGraph& graph, std::span<const BlockID> partition, BlockID k) {
  std::vector<NodeWeight> weight(static_cast<std::size_t>(k), 0);
  for (std::uint32_t v = 0; v < graph.num_nodes(); ++v) weight[partition[v]] += graph.vwgt[v];
  return weight;
}

void refine_level(const ModelGraph& graph, std::vector<BlockID>& partition, BlockID k, NodeWeight l_max, double alpha,
                  double gamma, const HeiStreamConfig& config, std::mt19937_64& rng, RefineStats& stats) {
  auto weight = model_block_weights(graph, partition, k);
  std::vector<std::uint32_t> order(graph.num_mutable);
  std::iota(order.begin(), order.end(), 0u);
  BlockAffinity affinity(k);
  std::bernoulli_distribution coin(0.5);
  for (int round = 0; round < config.localsearch_rounds; ++round) {
    std::shuffle(order.begin(), order.end(), rng);
    std::uint64_t moved = 0;
    for (const std::uint32_t v : order) {
      const BlockID own = partition[v];
      const NodeWeight c = graph.vwgt[v];
      weight[own] -= c;
      affinity.clear();
      for (auto e = graph.xadj[v]; e < graph.xadj[v + 1]; ++e) affinity.add(partition[graph.adjncy[e]], graph.adjwgt[e]);
      const double own_score = fennel_gain(affinity[own], c, weight[own], alpha, gamma);
      BlockID best = kUnassigned;
      double best_score = 0.0;
      for (const BlockID b : affinity.touched()) {
        if (b == own || weight[b] + c > l_max) continue;
        const double s = fennel_gain(affinity[b], c, weight[b], alpha, gamma);
        if (best == kUnassigned || s > best_score ||
            (s == best_score && (affinity[b] > affinity[best] ||
                                 (affinity[b] == affinity[best] &&
                                  (weight[b] < weight[best] || (weight[b] == weight[best] && b < best)))))) {
          best = b;
          best_score = s;
        }
      }
      BlockID target = own;
      if (best != kUnassigned) {
        if (best_score > own_score) {
          target = best;
        } else if (best_score == own_score && config.random_ties && coin(rng)) {
          target = best;
          ++stats.coin_flip_moves;
        }
      }
      weight[target] += c;
      if (target != own) {
        partition[v] = target;
        ++moved;
        ++stats.moves;
        stats.min_applied_gain = std::min(stats.min_applied_gain, best_score - own_score);
      }
    }
    ++stats.rounds;
    if (moved == 0) break;
  }
}

std::vector<BlockID> project(std::span<const BlockID> coarse, std::span<const std::uint32_t> map) {
  std::vector<BlockID> fine(map.size());
  for (std::size_t v = 0; v < map.size(); ++v) fine[v] = coarse[map[v]];
  return fine;
}

std::vector<BlockID> uncoarsen_refine(const CoarseningHierarchy& hierarchy, std::vector<BlockID> coarse_partition,
                                      BlockID k, NodeWeight l_max, double alpha, double gamma,
                                      const HeiStreamConfig& config, std::mt19937_64& rng, RefineStats* stats) {
  RefineStats local;
  RefineStats& s = stats ? *stats : local;
  std::vector<BlockID> partition = std::move(coarse_partition);
  refine_level(hierarchy.coarsest(), partition, k, l_max, alpha, gamma, config, rng, s);
  for (std::size_t level = hierarchy.maps.size(); level-- > 0;) {
    partition = project(partition, hierarchy.maps[level]);
    refine_level(hierarchy.levels[level], partition, k, l_max, alpha, gamma, config, rng, s);
  }
  return partition;
}

void commit_batch(const BatchModel& model, std::span<const BlockID> model_partition, PartitionState& state,
                  bool restream) {
  const auto nb = static_cast<std::uint32_t>(model.true_weight.size());
  if (restream) {
    for (std::uint32_t u = 0; u < nb; ++u) state.unassign(model.first + u, model.true_weight[u]);
  }
  for (std::uint32_t u = 0; u < nb; ++u) {
    const NodeWeight w = model.true_weight[u];
    BlockID b = model_partition[u];
    if (b < 0 || b >= state.k()) throw InvariantError("model partition has an invalid block");
    if (!state.fits(b, w)) {
      b = state.lightest_block();
      if (!state.fits(b, w)) state.flag_violation();
    }
    state.assign(model.first + u, b, w);
  }
}

double model_edge_cut(const ModelGraph& graph, std::span<const BlockID> partition) {
  double cut = 0.0;
  for (std::uint32_t v = 0; v < graph.num_nodes(); ++v) {
    for (auto e = graph.xadj[v]; e < graph.xadj[v + 1]; ++e) {
      const std::uint32_t u = graph.adjncy[e];
      if (u > v && partition[u] != partition[v]) cut += graph.adjwgt[e];
    }
  }
  return cut;
}

double model_objective(const ModelGraph& graph, std::span<const BlockID> partition, BlockID k, double alpha,
                       double gamma) {
  double total = 0.0;
  for (std::uint32_t v = 0; v < graph.num_nodes(); ++v) {
    for (auto e = graph.xadj[v]; e < graph.xadj[v + 1]; ++e) {
      if (graph.adjncy[e] > v) total += graph.adjwgt[e];
    }
  }
  double penalty = 0.0;
  for (const NodeWeight w : model_block_weights(graph, partition, k)) {
    penalty += std::pow(static_cast<double>(w), gamma);
  }
  return total - model_edge_cut(graph, partition) - alpha * penalty;
}

PartitionState run_heistream(GraphStream& stream, BlockID k, double epsilon, const HeiStreamConfig& config,
                             HeiStreamStats* stats) {
  if (config.passes < 1) throw InputError("passes must be at least 1");
  if (config.x < 1) throw InputError("x must be at least 1");
  const auto header = stream.header();
  PartitionState state(header.n, k, epsilon, total_node_weight(stream), !header.has_node_weights);
  const double gamma = config.fennel.gamma;
  const double alpha = config.fennel.alpha > 0
                           ? config.fennel.alpha
                           : fennel_alpha(static_cast<double>(header.n), static_cast<double>(header.m), k, gamma);
  HeiStreamStats local;
  HeiStreamStats& s = stats ? *stats : local;
  s = HeiStreamStats{};
  s.alpha = alpha;
  std::mt19937_64 rng(config.seed);

  for (int pass = 1; pass <= config.passes; ++pass) {
    const bool restream = pass > 1;
    stream.rewind();
    while (true) {
      const RawBatch batch = load_batch(stream, config.delta);
      if (batch.empty()) break;
      ++s.batches;
      const BatchModel model = build_model(batch, state, config, restream, rng);
      s.ghosts += model.ghosts;
      std::vector<BlockID> blocks;
      if (restream) {
        blocks = model.prior_block;
        for (BlockID j = 0; j < model.graph.num_artificial; ++j) blocks.push_back(j);
      }
      const auto hierarchy = coarsen(model.graph, state.l_max(), k, config, rng, restream ? &blocks : nullptr);
      s.levels += hierarchy.levels.size();
      std::vector<BlockID> coarse;
      if (restream) {
        coarse = blocks;
        for (const auto& map : hierarchy.maps) {
          std::vector<BlockID> next(map.empty() ? 0 : *std::max_element(map.begin(), map.end()) + 1, kUnassigned);
          for (std::size_t v = 0; v < map.size(); ++v) next[map[v]] = coarse[v];
          coarse = std::move(next);
        }
      } else {
        coarse = initial_partition(hierarchy.coarsest(), k, state.l_max(), alpha, gamma, state.order());
      }
      const auto partition =
          uncoarsen_refine(hierarchy, std::move(coarse), k, state.l_max(), alpha, gamma, config, rng, &s.refine);
      commit_batch(model, partition, state, restream);
    }
  }
  stream.rewind();
  s.violations = state.violations();
  return state;
}

}  // namespace streamdecomp
