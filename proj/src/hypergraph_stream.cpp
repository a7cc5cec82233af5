#include "streamdecomp/hypergraph_stream.hpp"

#include <algorithm>
#include <numeric>

#include "line_parser.hpp"

namespace streamdecomp {

NodeMajorHypergraphStream::NodeMajorHypergraphStream(const std::filesystem::path& path) : path_(path) {
  in_.open(path_);
  if (!in_) throw InputError("cannot open hypergraph file '" + path_.string() + "'");
  read_header();
}

bool NodeMajorHypergraphStream::next_content_line() {
  while (std::getline(in_, line_)) {
    ++line_number_;
    if (!detail::is_comment(line_)) return true;
  }
  return false;
}

void NodeMajorHypergraphStream::read_header() {
  if (!next_content_line()) throw InputError(path_.string() + ": missing header");
  detail::LineParser parser(line_);
  header_ = HypergraphStreamHeader{};
  header_.num_nodes = parser.require("node count in header");
  header_.num_nets = parser.require("net count in header");
  header_.num_pins = parser.require("pin count in header");
  if (!parser.at_end()) {
    const auto flags = detail::parse_format_flags(parser.peek_token());
    std::uint64_t ignored = 0;
    parser.next(ignored);
    header_.has_net_weights = flags.last;
    header_.has_node_weights = flags.middle;
  }
  if (!parser.at_end()) throw InputError(path_.string() + ": trailing tokens in header");
  if (header_.num_nodes == 0) throw InputError(path_.string() + ": hypergraph must have at least one node");
}

bool NodeMajorHypergraphStream::next(StreamedHyperNodeRecord& record) {
  if (finished_) return false;
  if (next_id_ == header_.num_nodes) {
    while (std::getline(in_, line_)) {
      ++line_number_;
      if (detail::is_comment(line_)) continue;
      if (!detail::LineParser(line_).at_end()) throw InputError(path_.string() + ": more node lines than declared");
    }
    if (pins_seen_ != header_.num_pins) {
      throw InputError(path_.string() + ": pin-count mismatch: header says " + std::to_string(header_.num_pins) +
                       ", body holds " + std::to_string(pins_seen_));
    }
    finished_ = true;
    return false;
  }
  if (!next_content_line()) {
    throw InputError(path_.string() + ": unexpected end of file after " + std::to_string(next_id_) + " nodes");
  }
  const auto where = [&] { return path_.string() + ":" + std::to_string(line_number_) + ": "; };
  detail::LineParser parser(line_);
  record.id = next_id_;
  record.weight = 1;
  record.nets.clear();
  if (header_.has_node_weights) {
    record.weight = static_cast<NodeWeight>(parser.require("node weight"));
    if (record.weight < 1) throw InputError(where() + "node weight must be positive");
  }
  std::uint64_t net = 0;
  while (parser.next(net)) {
    if (net < 1 || net > header_.num_nets) throw InputError(where() + "net id out of range: " + std::to_string(net));
    EdgeWeight weight = 1;
    if (header_.has_net_weights) {
      weight = static_cast<EdgeWeight>(parser.require("net weight"));
      if (weight < 1) throw InputError(where() + "net weight must be positive");
    }
    record.nets.push_back({net - 1, weight});
  }
  if (record.nets.size() > 1) {
    auto ids = std::vector<NetID>(record.nets.size());
    std::transform(record.nets.begin(), record.nets.end(), ids.begin(), [](const IncidentNet& e) { return e.id; });
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) throw InputError(where() + "net listed twice");
  }
  pins_seen_ += record.nets.size();
  ++next_id_;
  return true;
}

void NodeMajorHypergraphStream::rewind() {
  in_.clear();
  in_.seekg(0);
  line_number_ = 0;
  next_id_ = 0;
  pins_seen_ = 0;
  finished_ = false;
  read_header();
}

void InMemoryHypergraph::add_net(const std::vector<NodeID>& net_pins, EdgeWeight weight) {
  for (NodeID v : net_pins) {
    if (v >= num_nodes) throw InputError("pin out of range");
  }
  pins.insert(pins.end(), net_pins.begin(), net_pins.end());
  net_offsets.push_back(pins.size());
  if (weight != 1 && net_weights.empty()) {
    net_weights.assign(num_nets(), 1);
    net_weights.back() = weight;
  } else if (!net_weights.empty()) {
    net_weights.push_back(weight);
  }
}

InMemoryHypergraphStream::InMemoryHypergraphStream(const InMemoryHypergraph& hg) : node_weights_(hg.node_weights) {
  header_.num_nodes = hg.num_nodes;
  header_.num_nets = hg.num_nets();
  header_.num_pins = hg.num_pins();
  header_.has_net_weights = !hg.net_weights.empty();
  header_.has_node_weights = !hg.node_weights.empty();
  offsets_.assign(hg.num_nodes + 1, 0);
  for (NodeID v : hg.pins) ++offsets_[v + 1];
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  incidence_.resize(hg.num_pins());
  auto fill = offsets_;
  for (NetID e = 0; e < hg.num_nets(); ++e) {
    for (auto p = hg.net_offsets[e]; p < hg.net_offsets[e + 1]; ++p) {
      incidence_[fill[hg.pins[p]]++] = {e, hg.net_weight(e)};
    }
  }
}

bool InMemoryHypergraphStream::next(StreamedHyperNodeRecord& record) {
  if (next_id_ >= header_.num_nodes) return false;
  const NodeID v = next_id_++;
  record.id = v;
  record.weight = node_weights_.empty() ? 1 : node_weights_[v];
  record.nets.assign(incidence_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
                     incidence_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]));
  return true;
}

std::unique_ptr<HypergraphStream> open_hypergraph_node_stream(const std::filesystem::path& path) {
  return std::make_unique<NodeMajorHypergraphStream>(path);
}

InMemoryHypergraph read_hmetis(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open hMetis file '" + path.string() + "'");
  std::string line;
  const auto next_line = [&] {
    while (std::getline(in, line)) {
      if (!detail::is_comment(line)) return true;
    }
    return false;
  };
  if (!next_line()) throw InputError(path.string() + ": missing header");
  detail::LineParser header(line);
  const NetID num_nets = header.require("net count");
  InMemoryHypergraph hg;
  hg.num_nodes = header.require("node count");
  detail::FormatFlags flags;
  if (!header.at_end()) {
    flags = detail::parse_format_flags(header.peek_token());
    std::uint64_t ignored = 0;
    header.next(ignored);
  }
  std::vector<NodeID> net;
  for (NetID e = 0; e < num_nets; ++e) {
    if (!next_line()) throw InputError(path.string() + ": expected " + std::to_string(num_nets) + " nets");
    detail::LineParser parser(line);
    EdgeWeight weight = 1;
    if (flags.last) weight = static_cast<EdgeWeight>(parser.require("net weight"));
    if (weight < 1) throw InputError(path.string() + ": net weight must be positive");
    net.clear();
    std::uint64_t pin = 0;
    while (parser.next(pin)) {
      if (pin < 1 || pin > hg.num_nodes) throw InputError(path.string() + ": pin out of range: " + std::to_string(pin));
      net.push_back(pin - 1);
    }
    auto sorted = net;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw InputError(path.string() + ": duplicate pin in net " + std::to_string(e + 1));
    }
    hg.add_net(net, weight);
  }
  if (flags.middle) {
    hg.node_weights.resize(hg.num_nodes);
    for (NodeID v = 0; v < hg.num_nodes; ++v) {
      if (!next_line()) throw InputError(path.string() + ": missing node weights");
      hg.node_weights[v] = static_cast<NodeWeight>(detail::LineParser(line).require("node weight"));
    }
  }
  return hg;
}

void write_hmetis(const std::filesystem::path& path, const InMemoryHypergraph& hg) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  const bool net_w = !hg.net_weights.empty();
  const bool node_w = !hg.node_weights.empty();
  out << hg.num_nets() << ' ' << hg.num_nodes;
  if (net_w || node_w) out << ' ' << (node_w ? "1" : "0") << (net_w ? "1" : "0");
  out << '\n';
  for (NetID e = 0; e < hg.num_nets(); ++e) {
    std::string line;
    if (net_w) line = std::to_string(hg.net_weights[e]);
    for (auto p = hg.net_offsets[e]; p < hg.net_offsets[e + 1]; ++p) {
      if (!line.empty()) line += ' ';
      line += std::to_string(hg.pins[p] + 1);
    }
    out << line << '\n';
  }
  if (node_w) {
    for (NodeWeight w : hg.node_weights) out << w << '\n';
  }
}

void write_node_major(const std::filesystem::path& path, const InMemoryHypergraph& hg) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  InMemoryHypergraphStream stream(hg);
  const auto& h = stream.header();
  out << h.num_nodes << ' ' << h.num_nets << ' ' << h.num_pins;
  if (h.has_net_weights || h.has_node_weights) {
    out << ' ' << (h.has_node_weights ? "1" : "0") << (h.has_net_weights ? "1" : "0");
  }
  out << '\n';
  StreamedHyperNodeRecord record;
  std::string line;
  while (stream.next(record)) {
    line.clear();
    if (h.has_node_weights) line += std::to_string(record.weight);
    for (const auto& net : record.nets) {
      if (!line.empty()) line += ' ';
      line += std::to_string(net.id + 1);
      if (h.has_net_weights) {
        line += ' ';
        line += std::to_string(net.weight);
      }
    }
    out << line << '\n';
  }
}

std::uint64_t transpose_hmetis(const std::filesystem::path& hmetis_in, const std::filesystem::path& node_major_out) {
  const auto hg = read_hmetis(hmetis_in);
  write_node_major(node_major_out, hg);
  return hg.num_pins();
}

InMemoryHypergraph load_hypergraph(HypergraphStream& stream) {
  stream.rewind();
  const auto& h = stream.header();
  InMemoryHypergraph hg;
  hg.num_nodes = h.num_nodes;
  std::vector<std::vector<NodeID>> nets(h.num_nets);
  std::vector<EdgeWeight> weights(h.num_nets, 1);
  if (h.has_node_weights) hg.node_weights.reserve(h.num_nodes);
  StreamedHyperNodeRecord record;
  while (stream.next(record)) {
    if (h.has_node_weights) hg.node_weights.push_back(record.weight);
    for (const auto& net : record.nets) {
      nets[net.id].push_back(record.id);
      weights[net.id] = net.weight;
    }
  }
  stream.rewind();
  for (NetID e = 0; e < h.num_nets; ++e) {
    hg.pins.insert(hg.pins.end(), nets[e].begin(), nets[e].end());
    hg.net_offsets.push_back(hg.pins.size());
  }
  if (h.has_net_weights) hg.net_weights = std::move(weights);
  return hg;
}

NodeWeight total_node_weight(HypergraphStream& stream) {
  if (!stream.header().has_node_weights) return static_cast<NodeWeight>(stream.header().num_nodes);
  stream.rewind();
  NodeWeight total = 0;
  StreamedHyperNodeRecord record;
  while (stream.next(record)) total += record.weight;
  stream.rewind();
  return total;
}

}  // namespace streamdecomp
