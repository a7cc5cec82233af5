#include "streamdecomp/generators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <unordered_map>

namespace streamdecomp::gen {

namespace {

using EdgeList = std::vector<std::tuple<NodeID, NodeID, EdgeWeight>>;

template <int D>
InMemoryGraph random_geometric(NodeID n, double avg_degree, std::uint64_t seed) {
  if (n == 0) return InMemoryGraph{};
  double radius;
  if constexpr (D == 2) {
    radius = std::sqrt(avg_degree / (std::numbers::pi * static_cast<double>(n)));
  } else {
    radius = std::cbrt(3.0 * avg_degree / (4.0 * std::numbers::pi * static_cast<double>(n)));
  }
  radius = std::min(radius, 1.0);
  const auto cells = std::max<std::int64_t>(1, static_cast<std::int64_t>(1.0 / radius));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  struct Point {
    std::array<double, D> x;
    std::int64_t cell;
  };
  auto cell_coord = [&](double v) { return std::min<std::int64_t>(cells - 1, static_cast<std::int64_t>(v * cells)); };
  std::vector<Point> points(n);
  for (auto& p : points) {
    for (auto& c : p.x) c = unit(rng);
    std::int64_t cell = 0;
    for (int d = D - 1; d >= 0; --d) cell = cell * cells + cell_coord(p.x[d]);
    p.cell = cell;
  }
  std::sort(points.begin(), points.end(), [](const Point& a, const Point& b) {
    return a.cell != b.cell ? a.cell < b.cell : a.x[0] < b.x[0];
  });

  std::int64_t num_cells = 1;
  for (int d = 0; d < D; ++d) num_cells *= cells;
  std::vector<NodeID> cell_begin(static_cast<std::size_t>(num_cells) + 1, 0);
  for (const auto& p : points) ++cell_begin[static_cast<std::size_t>(p.cell) + 1];
  for (std::size_t c = 1; c < cell_begin.size(); ++c) cell_begin[c] += cell_begin[c - 1];

  const double r2 = radius * radius;
  EdgeList edges;
  edges.reserve(static_cast<std::size_t>(static_cast<double>(n) * avg_degree / 2.0 * 1.1));
  for (NodeID u = 0; u < n; ++u) {
    std::array<std::int64_t, D> coord;
    for (int d = 0; d < D; ++d) coord[d] = cell_coord(points[u].x[d]);
    std::array<std::int64_t, D> off;
    off.fill(-1);
    while (true) {
      bool inside = true;
      std::int64_t cell = 0;
      for (int d = D - 1; d >= 0; --d) {
        const std::int64_t c = coord[d] + off[d];
        if (c < 0 || c >= cells) inside = false;
        cell = cell * cells + c;
      }
      if (inside) {
        for (NodeID v = cell_begin[cell]; v < cell_begin[cell + 1]; ++v) {
          if (v <= u) continue;
          double dist = 0.0;
          for (int d = 0; d < D; ++d) dist += (points[u].x[d] - points[v].x[d]) * (points[u].x[d] - points[v].x[d]);
          if (dist <= r2) edges.emplace_back(u, v, 1);
        }
      }
      int d = 0;
      while (d < D && off[d] == 1) off[d++] = -1;
      if (d == D) break;
      ++off[d];
    }
  }
  return InMemoryGraph::from_edges(n, edges);
}

// Next index hit by independent Bernoulli(p) trials starting at `from`.
NodeID geometric_skip(NodeID from, double p, std::mt19937_64& rng) {
  if (p >= 1.0) return from;
  if (p <= 0.0) return std::numeric_limits<NodeID>::max();
  std::uniform_real_distribution<double> unit(std::numeric_limits<double>::min(), 1.0);
  const double skip = std::floor(std::log(unit(rng)) / std::log1p(-p));
  if (skip > 1e18) return std::numeric_limits<NodeID>::max();
  return from + static_cast<NodeID>(skip);
}

std::unordered_map<std::string, std::string> parse_params(std::string_view description, std::string& kind) {
  std::unordered_map<std::string, std::string> params;
  std::size_t pos = description.find(':');
  kind = std::string(description.substr(0, pos));
  while (pos != std::string_view::npos) {
    const std::size_t next = description.find(':', pos + 1);
    const auto item = description.substr(pos + 1, next == std::string_view::npos ? std::string_view::npos : next - pos - 1);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw InputError("generator parameter '" + std::string(item) + "' lacks '='");
    params.emplace(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
    pos = next;
  }
  return params;
}

double param(const std::unordered_map<std::string, std::string>& params, const std::string& key, double fallback) {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    throw InputError("generator parameter " + key + " is not a number");
  }
}

}  // namespace

InMemoryGraph rgg2d(NodeID n, double avg_degree, std::uint64_t seed) { return random_geometric<2>(n, avg_degree, seed); }

InMemoryGraph rgg3d(NodeID n, double avg_degree, std::uint64_t seed) { return random_geometric<3>(n, avg_degree, seed); }

InMemoryGraph grid2d(NodeID w, NodeID h) {
  EdgeList edges;
  for (NodeID y = 0; y < h; ++y) {
    for (NodeID x = 0; x < w; ++x) {
      const NodeID v = y * w + x;
      if (x + 1 < w) edges.emplace_back(v, v + 1, 1);
      if (y + 1 < h) edges.emplace_back(v, v + w, 1);
    }
  }
  return InMemoryGraph::from_edges(w * h, edges);
}

InMemoryGraph barabasi_albert(NodeID n, NodeID edges_per_node, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  EdgeList edges;
  std::vector<NodeID> endpoints;
  const NodeID core = std::min(n, edges_per_node + 1);
  for (NodeID u = 0; u < core; ++u) {
    for (NodeID v = u + 1; v < core; ++v) {
      edges.emplace_back(u, v, 1);
      endpoints.push_back(u);
      endpoints.push_back(v);
    }
  }
  std::vector<NodeID> targets;
  for (NodeID u = core; u < n; ++u) {
    targets.clear();
    while (targets.size() < edges_per_node) {
      std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
      const NodeID t = endpoints.empty() ? 0 : endpoints[pick(rng)];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (NodeID t : targets) {
      edges.emplace_back(u, t, 1);
      endpoints.push_back(u);
      endpoints.push_back(t);
    }
  }
  return InMemoryGraph::from_edges(n, edges);
}

InMemoryGraph planted_partition(NodeID n, NodeID blocks, double p_in, double p_out, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  blocks = std::max<NodeID>(1, blocks);
  const NodeID block_size = (n + blocks - 1) / blocks;
  EdgeList edges;
  for (NodeID u = 0; u < n; ++u) {
    const NodeID block_end = std::min(n, (u / block_size + 1) * block_size);
    for (NodeID v = geometric_skip(u + 1, p_in, rng); v < block_end; v = geometric_skip(v + 1, p_in, rng)) {
      edges.emplace_back(u, v, 1);
    }
    for (NodeID v = geometric_skip(block_end, p_out, rng); v < n; v = geometric_skip(v + 1, p_out, rng)) {
      edges.emplace_back(u, v, 1);
    }
  }
  return InMemoryGraph::from_edges(n, edges);
}

InMemoryGraph gnp(NodeID n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  EdgeList edges;
  for (NodeID u = 0; u < n; ++u) {
    for (NodeID v = u + 1; v < n; ++v) {
      if (coin(rng)) edges.emplace_back(u, v, 1);
    }
  }
  return InMemoryGraph::from_edges(n, edges);
}

InMemoryHypergraph stencil_row_net(NodeID w, NodeID h, NodeID d, int points) {
  d = std::max<NodeID>(1, d);
  const bool full = (d == 1 && points == 9) || (d > 1 && points == 27);
  if (!full && !((d == 1 && points == 5) || (d > 1 && points == 7))) {
    throw InputError("stencil points must be 5 or 9 in 2D, 7 or 27 in 3D");
  }
  InMemoryHypergraph hg;
  hg.num_nodes = w * h * d;
  const std::int64_t dz_max = d > 1 ? 1 : 0;
  std::vector<NodeID> pins;
  for (NodeID z = 0; z < d; ++z) {
    for (NodeID y = 0; y < h; ++y) {
      for (NodeID x = 0; x < w; ++x) {
        pins.clear();
        for (std::int64_t dz = -dz_max; dz <= dz_max; ++dz) {
          for (std::int64_t dy = -1; dy <= 1; ++dy) {
            for (std::int64_t dx = -1; dx <= 1; ++dx) {
              const int nonzero = (dx != 0) + (dy != 0) + (dz != 0);
              if (!full && nonzero > 1) continue;
              const std::int64_t nx = static_cast<std::int64_t>(x) + dx;
              const std::int64_t ny = static_cast<std::int64_t>(y) + dy;
              const std::int64_t nz = static_cast<std::int64_t>(z) + dz;
              if (nx < 0 || ny < 0 || nz < 0 || nx >= static_cast<std::int64_t>(w) ||
                  ny >= static_cast<std::int64_t>(h) || nz >= static_cast<std::int64_t>(d)) {
                continue;
              }
              pins.push_back((static_cast<NodeID>(nz) * h + static_cast<NodeID>(ny)) * w + static_cast<NodeID>(nx));
            }
          }
        }
        hg.add_net(pins);
      }
    }
  }
  return hg;
}

InMemoryHypergraph banded_row_net(NodeID n, NodeID per_row, NodeID bandwidth, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  InMemoryHypergraph hg;
  hg.num_nodes = n;
  std::vector<NodeID> pins;
  for (NodeID i = 0; i < n; ++i) {
    const NodeID lo = i >= bandwidth ? i - bandwidth : 0;
    const NodeID hi = std::min(n - 1, i + bandwidth);
    const NodeID want = std::min<NodeID>(per_row, hi - lo + 1);
    pins.assign(1, i);
    std::uniform_int_distribution<NodeID> pick(lo, hi);
    while (pins.size() < want) {
      const NodeID c = pick(rng);
      if (std::find(pins.begin(), pins.end(), c) == pins.end()) pins.push_back(c);
    }
    std::sort(pins.begin(), pins.end());
    hg.add_net(pins);
  }
  return hg;
}

InMemoryHypergraph random_hypergraph(NodeID n, NetID nets, std::uint64_t max_pins, std::uint32_t max_net_size,
                                     std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  InMemoryHypergraph hg;
  hg.num_nodes = n;
  if (n < 2) return hg;
  const std::uint32_t cap = static_cast<std::uint32_t>(std::min<NodeID>(std::max(2u, max_net_size), n));
  std::uniform_int_distribution<std::uint32_t> size_dist(2, cap);
  std::uniform_int_distribution<NodeID> node_dist(0, n - 1);
  std::vector<NodeID> pins;
  for (NetID e = 0; e < nets; ++e) {
    const std::uint32_t size = size_dist(rng);
    if (hg.num_pins() + size > max_pins) break;
    pins.clear();
    while (pins.size() < size) {
      const NodeID v = node_dist(rng);
      if (std::find(pins.begin(), pins.end(), v) == pins.end()) pins.push_back(v);
    }
    hg.add_net(pins);
  }
  return hg;
}

InMemoryHypergraph graph_as_hypergraph(const InMemoryGraph& graph) {
  InMemoryHypergraph hg;
  hg.num_nodes = graph.num_nodes();
  for (NodeID u = 0; u < graph.num_nodes(); ++u) {
    for (EdgeID e = graph.xadj[u]; e < graph.xadj[u + 1]; ++e) {
      const NodeID v = graph.adjncy[e];
      if (v > u) hg.add_net({u, v}, graph.adjwgt.empty() ? 1 : graph.adjwgt[e]);
    }
  }
  if (graph.has_node_weights) hg.node_weights = graph.vwgt;
  return hg;
}

InMemoryGraph clique_expansion(const InMemoryHypergraph& hypergraph) {
  EdgeList edges;
  for (NetID e = 0; e < hypergraph.num_nets(); ++e) {
    const auto begin = hypergraph.net_offsets[e];
    const auto end = hypergraph.net_offsets[e + 1];
    for (auto i = begin; i < end; ++i) {
      for (auto j = i + 1; j < end; ++j) {
        edges.emplace_back(hypergraph.pins[i], hypergraph.pins[j], hypergraph.net_weight(e));
      }
    }
  }
  return InMemoryGraph::from_edges(hypergraph.num_nodes, edges, hypergraph.node_weights);
}

InMemoryGraph from_description(std::string_view description) {
  std::string kind;
  const auto p = parse_params(description, kind);
  const auto n = static_cast<NodeID>(param(p, "n", 10000));
  const auto seed = static_cast<std::uint64_t>(param(p, "seed", 1));
  if (kind == "rgg2d") return rgg2d(n, param(p, "deg", 8), seed);
  if (kind == "rgg3d") return rgg3d(n, param(p, "deg", 10), seed);
  if (kind == "grid2d") return grid2d(static_cast<NodeID>(param(p, "w", 100)), static_cast<NodeID>(param(p, "h", 100)));
  if (kind == "ba") return barabasi_albert(n, static_cast<NodeID>(param(p, "m", 4)), seed);
  if (kind == "planted") {
    return planted_partition(n, static_cast<NodeID>(param(p, "blocks", 32)), param(p, "pin", 0.05), param(p, "pout", 1e-4),
                             seed);
  }
  if (kind == "gnp") return gnp(n, param(p, "p", 0.01), seed);
  throw InputError("unknown graph generator '" + kind + "'");
}

InMemoryHypergraph hypergraph_from_description(std::string_view description) {
  if (description.starts_with("graph:")) return graph_as_hypergraph(from_description(description.substr(6)));
  std::string kind;
  const auto p = parse_params(description, kind);
  const auto seed = static_cast<std::uint64_t>(param(p, "seed", 1));
  if (kind == "stencil") {
    return stencil_row_net(static_cast<NodeID>(param(p, "w", 100)), static_cast<NodeID>(param(p, "h", 100)),
                           static_cast<NodeID>(param(p, "d", 1)), static_cast<int>(param(p, "points", 5)));
  }
  if (kind == "banded") {
    return banded_row_net(static_cast<NodeID>(param(p, "n", 10000)), static_cast<NodeID>(param(p, "per_row", 8)),
                          static_cast<NodeID>(param(p, "band", 50)), seed);
  }
  if (kind == "random") {
    return random_hypergraph(static_cast<NodeID>(param(p, "n", 1000)), static_cast<NetID>(param(p, "nets", 1000)),
                             static_cast<std::uint64_t>(param(p, "pins", 1e9)),
                             static_cast<std::uint32_t>(param(p, "size", 8)), seed);
  }
  throw InputError("unknown hypergraph generator '" + kind + "'");
}

}  // namespace streamdecomp::gen
