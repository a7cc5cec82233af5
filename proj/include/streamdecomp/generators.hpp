#pragma once

#include <cstdint>
#include <string_view>

#include "streamdecomp/graph_stream.hpp"
#include "streamdecomp/hypergraph_stream.hpp"

namespace streamdecomp::gen {

/// Random geometric graph in the unit square with radius chosen for the given
/// expected average degree. Node ids follow a row-major cell order, so the
/// stream has spatial locality like the usual rgg benchmark files.
[[nodiscard]] InMemoryGraph rgg2d(NodeID n, double avg_degree, std::uint64_t seed);

/// Same in the unit cube.
[[nodiscard]] InMemoryGraph rgg3d(NodeID n, double avg_degree, std::uint64_t seed);

/// w x h grid with 4-neighborhoods, row-major ids.
[[nodiscard]] InMemoryGraph grid2d(NodeID w, NodeID h);

/// Preferential attachment: node i links to `edges_per_node` earlier nodes.
[[nodiscard]] InMemoryGraph barabasi_albert(NodeID n, NodeID edges_per_node, std::uint64_t seed);

/// Planted partition: `blocks` groups of consecutive ids, intra probability
/// p_in, inter probability p_out (sampled by geometric skipping).
[[nodiscard]] InMemoryGraph planted_partition(NodeID n, NodeID blocks, double p_in, double p_out, std::uint64_t seed);

/// Erdos-Renyi G(n, p) (small n; quadratic).
[[nodiscard]] InMemoryGraph gnp(NodeID n, double p, std::uint64_t seed);

/// Row-net hypergraph of a stencil matrix on a w x h (x d) grid: one net per
/// row holding the columns of its nonzeros. `points` is 5 or 9 in 2D, 7 or 27
/// in 3D (d > 1).
[[nodiscard]] InMemoryHypergraph stencil_row_net(NodeID w, NodeID h, NodeID d, int points);

/// Row-net hypergraph of a random banded sparse matrix: row i has `per_row`
/// nonzeros at columns within `bandwidth` of i plus the diagonal.
[[nodiscard]] InMemoryHypergraph banded_row_net(NodeID n, NodeID per_row, NodeID bandwidth, std::uint64_t seed);

/// Random hypergraph with nets of size 2..max_net_size and an exact pin budget
/// cap (useful for oracle tests).
[[nodiscard]] InMemoryHypergraph random_hypergraph(NodeID n, NetID nets, std::uint64_t max_pins, std::uint32_t max_net_size,
                                                   std::uint64_t seed);

/// Graph as a hypergraph with one size-2 net per edge (edge weight as net weight).
[[nodiscard]] InMemoryHypergraph graph_as_hypergraph(const InMemoryGraph& graph);

/// Clique expansion: every net becomes a clique, weights add up over nets.
[[nodiscard]] InMemoryGraph clique_expansion(const InMemoryHypergraph& hypergraph);

/// Builds a graph from a generator description such as "rgg2d:n=10000:deg=8:seed=1"
/// or "grid2d:w=100:h=100"; used by the CLI.
[[nodiscard]] InMemoryGraph from_description(std::string_view description);
[[nodiscard]] InMemoryHypergraph hypergraph_from_description(std::string_view description);

}  // namespace streamdecomp::gen
