#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "streamdecomp/types.hpp"

namespace streamdecomp {

struct HypergraphStreamHeader {
  NodeID num_nodes = 0;
  NetID num_nets = 0;
  std::uint64_t num_pins = 0;
  bool has_node_weights = false;
  bool has_net_weights = false;
};

struct IncidentNet {
  NetID id;
  EdgeWeight weight;
};

struct StreamedHyperNodeRecord {
  NodeID id = 0;
  NodeWeight weight = 1;
  std::vector<IncidentNet> nets;
};

class HypergraphStream {
 public:
  virtual ~HypergraphStream() = default;
  [[nodiscard]] virtual const HypergraphStreamHeader& header() const = 0;
  virtual bool next(StreamedHyperNodeRecord& record) = 0;
  virtual void rewind() = 0;
};

/// Node-major hypergraph file.
///
///   header:  "num_nodes num_nets num_pins [fmt]"
///   line i:  [node weight] net ids (1-based) incident to node i
///
/// fmt follows hMetis: "10" node weights, "1" net weights, "11" both. With net
/// weights every incident net is written as a "net weight" pair, mirroring the
/// METIS edge-weight layout. '%' lines are comments.
class NodeMajorHypergraphStream final : public HypergraphStream {
 public:
  explicit NodeMajorHypergraphStream(const std::filesystem::path& path);

  [[nodiscard]] const HypergraphStreamHeader& header() const override { return header_; }
  bool next(StreamedHyperNodeRecord& record) override;
  void rewind() override;

 private:
  void read_header();
  bool next_content_line();

  std::filesystem::path path_;
  std::ifstream in_;
  std::string line_;
  HypergraphStreamHeader header_;
  NodeID next_id_ = 0;
  std::uint64_t pins_seen_ = 0;
  std::uint64_t line_number_ = 0;
  bool finished_ = false;
};

/// Net-major hypergraph held in memory (the hMetis layout).
struct InMemoryHypergraph {
  NodeID num_nodes = 0;
  std::vector<std::uint64_t> net_offsets{0};
  std::vector<NodeID> pins;
  std::vector<EdgeWeight> net_weights;   // empty: unit
  std::vector<NodeWeight> node_weights;  // empty: unit

  [[nodiscard]] NetID num_nets() const { return net_offsets.size() - 1; }
  [[nodiscard]] std::uint64_t num_pins() const { return pins.size(); }
  [[nodiscard]] EdgeWeight net_weight(NetID e) const { return net_weights.empty() ? 1 : net_weights[e]; }
  [[nodiscard]] NodeWeight node_weight(NodeID v) const { return node_weights.empty() ? 1 : node_weights[v]; }
  void add_net(const std::vector<NodeID>& net_pins, EdgeWeight weight = 1);
};

/// Node-major view of an in-memory hypergraph, built by transposition.
class InMemoryHypergraphStream final : public HypergraphStream {
 public:
  explicit InMemoryHypergraphStream(const InMemoryHypergraph& hypergraph);

  [[nodiscard]] const HypergraphStreamHeader& header() const override { return header_; }
  bool next(StreamedHyperNodeRecord& record) override;
  void rewind() override { next_id_ = 0; }

 private:
  HypergraphStreamHeader header_;
  std::vector<std::uint64_t> offsets_;
  std::vector<IncidentNet> incidence_;
  std::vector<NodeWeight> node_weights_;
  NodeID next_id_ = 0;
};

[[nodiscard]] std::unique_ptr<HypergraphStream> open_hypergraph_node_stream(const std::filesystem::path& path);

/// Reads an hMetis file: header "num_nets num_nodes [fmt]", one net per line
/// (optionally preceded by its weight), then node weights when fmt has "10".
[[nodiscard]] InMemoryHypergraph read_hmetis(const std::filesystem::path& path);

void write_hmetis(const std::filesystem::path& path, const InMemoryHypergraph& hypergraph);
void write_node_major(const std::filesystem::path& path, const InMemoryHypergraph& hypergraph);

/// Offline conversion of an hMetis (net-major) file into the node-major stream
/// format. Returns the pin count written.
std::uint64_t transpose_hmetis(const std::filesystem::path& hmetis_in, const std::filesystem::path& node_major_out);

/// Drains a node-major stream back into a net-major hypergraph.
[[nodiscard]] InMemoryHypergraph load_hypergraph(HypergraphStream& stream);

[[nodiscard]] NodeWeight total_node_weight(HypergraphStream& stream);

}  // namespace streamdecomp
