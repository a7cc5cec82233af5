#include "streamdecomp/graph_stream.hpp"

#include <algorithm>
#include <numeric>

#include "line_parser.hpp"

namespace streamdecomp {

MetisGraphStream::MetisGraphStream(const std::filesystem::path& path) : path_(path) {
  in_.open(path_);
  if (!in_) throw InputError("cannot open graph file '" + path_.string() + "'");
  read_header();
}

bool MetisGraphStream::next_content_line() {
  while (std::getline(in_, line_)) {
    ++line_number_;
    if (!detail::is_comment(line_)) return true;
  }
  return false;
}

void MetisGraphStream::read_header() {
  if (!next_content_line()) throw InputError(path_.string() + ": missing header");
  detail::LineParser parser(line_);
  header_ = GraphStreamHeader{};
  header_.n = parser.require("node count in header");
  header_.m = parser.require("edge count in header");
  if (!parser.at_end()) {
    const auto flags = detail::parse_format_flags(parser.peek_token());
    std::uint64_t ignored = 0;
    parser.next(ignored);
    header_.has_edge_weights = flags.last;
    header_.has_node_weights = flags.middle;
    has_node_sizes_ = flags.first;
    std::uint64_t ncon = 1;
    if (parser.next(ncon) && ncon != 1) {
      throw InputError(path_.string() + ": only ncon=1 is supported");
    }
  }
  if (!parser.at_end()) throw InputError(path_.string() + ": trailing tokens in header");
  if (header_.n == 0) throw InputError(path_.string() + ": graph must have at least one node");
}

bool MetisGraphStream::next(StreamedNodeRecord& record) {
  if (finished_) return false;
  if (next_id_ == header_.n) {
    while (std::getline(in_, line_)) {
      ++line_number_;
      if (detail::is_comment(line_)) continue;
      if (!detail::LineParser(line_).at_end()) {
        throw InputError(path_.string() + ":" + std::to_string(line_number_) + ": more node lines than n=" +
                         std::to_string(header_.n));
      }
    }
    if (degree_sum_ != 2 * header_.m) {
      throw InputError(path_.string() + ": edge count mismatch: header m=" + std::to_string(header_.m) +
                       " but adjacency lists hold " + std::to_string(degree_sum_) + " entries");
    }
    finished_ = true;
    return false;
  }
  if (!next_content_line()) {
    throw InputError(path_.string() + ": unexpected end of file after " + std::to_string(next_id_) + " of " +
                     std::to_string(header_.n) + " nodes");
  }
  const auto where = [&] { return path_.string() + ":" + std::to_string(line_number_) + ": "; };
  detail::LineParser parser(line_);
  record.id = next_id_;
  record.weight = 1;
  record.neighbors.clear();
  if (has_node_sizes_) parser.require("node size");
  if (header_.has_node_weights) {
    record.weight = static_cast<NodeWeight>(parser.require("node weight"));
    if (record.weight < 1) throw InputError(where() + "node weight must be positive");
  }
  std::uint64_t target = 0;
  while (parser.next(target)) {
    if (target < 1 || target > header_.n) {
      throw InputError(where() + "neighbor out of range: " + std::to_string(target));
    }
    if (target - 1 == record.id) throw InputError(where() + "self-loop");
    EdgeWeight weight = 1;
    if (header_.has_edge_weights) {
      weight = static_cast<EdgeWeight>(parser.require("edge weight"));
      if (weight < 1) throw InputError(where() + "edge weight must be positive");
    }
    record.neighbors.push_back({target - 1, weight});
  }
  degree_sum_ += record.neighbors.size();
  ++next_id_;
  return true;
}

void MetisGraphStream::rewind() {
  in_.clear();
  in_.seekg(0);
  line_number_ = 0;
  next_id_ = 0;
  degree_sum_ = 0;
  finished_ = false;
  read_header();
}

NodeWeight InMemoryGraph::total_node_weight() const {
  if (vwgt.empty()) return static_cast<NodeWeight>(num_nodes());
  return std::accumulate(vwgt.begin(), vwgt.end(), NodeWeight{0});
}

InMemoryGraph InMemoryGraph::from_edges(NodeID n,
                                        const std::vector<std::tuple<NodeID, NodeID, EdgeWeight>>& edges,
                                        std::vector<NodeWeight> node_weights) {
  std::vector<std::vector<Neighbor>> adjacency(n);
  bool weighted_edges = false;
  for (const auto& [u, v, w] : edges) {
    if (u >= n || v >= n) throw InputError("edge endpoint out of range");
    if (u == v) continue;
    adjacency[u].push_back({v, w});
    adjacency[v].push_back({u, w});
    weighted_edges |= (w != 1);
  }
  InMemoryGraph graph;
  graph.xadj.assign(1, 0);
  for (auto& list : adjacency) {
    std::sort(list.begin(), list.end(), [](const Neighbor& a, const Neighbor& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (!graph.adjncy.empty() && graph.xadj.back() < graph.adjncy.size() && graph.adjncy.back() == list[i].id) {
        graph.adjwgt.back() += list[i].weight;
        weighted_edges = true;
        continue;
      }
      graph.adjncy.push_back(list[i].id);
      graph.adjwgt.push_back(list[i].weight);
    }
    graph.xadj.push_back(graph.adjncy.size());
  }
  graph.has_edge_weights = weighted_edges;
  if (!node_weights.empty()) {
    if (node_weights.size() != n) throw InputError("node weight count does not match n");
    graph.has_node_weights = std::any_of(node_weights.begin(), node_weights.end(), [](NodeWeight w) { return w != 1; });
    graph.vwgt = std::move(node_weights);
  }
  return graph;
}

InMemoryGraphStream::InMemoryGraphStream(const InMemoryGraph& graph) : graph_(&graph) {
  header_.n = graph.num_nodes();
  header_.m = graph.num_edges();
  header_.has_node_weights = graph.has_node_weights;
  header_.has_edge_weights = graph.has_edge_weights;
}

bool InMemoryGraphStream::next(StreamedNodeRecord& record) {
  if (next_id_ >= header_.n) return false;
  const NodeID v = next_id_++;
  record.id = v;
  record.weight = graph_->vwgt.empty() ? 1 : graph_->vwgt[v];
  record.neighbors.clear();
  for (EdgeID e = graph_->xadj[v]; e < graph_->xadj[v + 1]; ++e) {
    record.neighbors.push_back({graph_->adjncy[e], graph_->adjwgt.empty() ? 1 : graph_->adjwgt[e]});
  }
  return true;
}

GraphFormat parse_graph_format(std::string_view name) {
  if (name == "metis") return GraphFormat::metis;
  throw InputError("unknown graph format '" + std::string(name) + "'");
}

std::unique_ptr<GraphStream> open_graph_stream(const std::filesystem::path& path, GraphFormat format) {
  switch (format) {
    case GraphFormat::metis:
      return std::make_unique<MetisGraphStream>(path);
  }
  throw InputError("unsupported graph format");
}

InMemoryGraph load_graph(GraphStream& stream) {
  stream.rewind();
  InMemoryGraph graph;
  graph.has_node_weights = stream.header().has_node_weights;
  graph.has_edge_weights = stream.header().has_edge_weights;
  graph.xadj.reserve(stream.header().n + 1);
  graph.adjncy.reserve(2 * stream.header().m);
  graph.adjwgt.reserve(2 * stream.header().m);
  if (graph.has_node_weights) graph.vwgt.reserve(stream.header().n);
  StreamedNodeRecord record;
  while (stream.next(record)) {
    for (const auto& nb : record.neighbors) {
      graph.adjncy.push_back(nb.id);
      graph.adjwgt.push_back(nb.weight);
    }
    graph.xadj.push_back(graph.adjncy.size());
    if (graph.has_node_weights) graph.vwgt.push_back(record.weight);
  }
  stream.rewind();
  return graph;
}

void write_metis(const std::filesystem::path& path, const InMemoryGraph& graph) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << graph.num_nodes() << ' ' << graph.num_edges();
  if (graph.has_node_weights || graph.has_edge_weights) {
    out << ' ' << (graph.has_node_weights ? "1" : "0") << (graph.has_edge_weights ? "1" : "0");
  }
  out << '\n';
  std::string line;
  for (NodeID v = 0; v < graph.num_nodes(); ++v) {
    line.clear();
    if (graph.has_node_weights) line += std::to_string(graph.vwgt.empty() ? 1 : graph.vwgt[v]);
    for (EdgeID e = graph.xadj[v]; e < graph.xadj[v + 1]; ++e) {
      if (!line.empty()) line += ' ';
      line += std::to_string(graph.adjncy[e] + 1);
      if (graph.has_edge_weights) {
        line += ' ';
        line += std::to_string(graph.adjwgt.empty() ? 1 : graph.adjwgt[e]);
      }
    }
    out << line << '\n';
  }
}

NodeWeight total_node_weight(GraphStream& stream) {
  if (!stream.header().has_node_weights) return static_cast<NodeWeight>(stream.header().n);
  stream.rewind();
  NodeWeight total = 0;
  StreamedNodeRecord record;
  while (stream.next(record)) total += record.weight;
  stream.rewind();
  return total;
}

}  // namespace streamdecomp
