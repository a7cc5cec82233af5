#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "streamdecomp/types.hpp"

namespace streamdecomp {

struct GraphStreamHeader {
  NodeID n = 0;
  std::uint64_t m = 0;  // undirected edges
  bool has_node_weights = false;
  bool has_edge_weights = false;
};

struct Neighbor {
  NodeID id;
  EdgeWeight weight;
};

/// One node of the input stream. Ids are 0-based.
struct StreamedNodeRecord {
  NodeID id = 0;
  NodeWeight weight = 1;
  std::vector<Neighbor> neighbors;
};

/// Sequential node stream. `next` yields records in ascending id order and
/// returns false once the stream is exhausted; end-of-stream consistency
/// checks (node and edge counts) run on that final call.
class GraphStream {
 public:
  virtual ~GraphStream() = default;
  [[nodiscard]] virtual const GraphStreamHeader& header() const = 0;
  virtual bool next(StreamedNodeRecord& record) = 0;
  virtual void rewind() = 0;
};

/// METIS adjacency file read one line at a time.
///
/// Header is "n m [fmt [ncon]]". The last fmt digit enables edge weights, the
/// middle one node weights, the first one node sizes (parsed and dropped).
/// Lines starting with '%' are comments. Files are 1-based.
class MetisGraphStream final : public GraphStream {
 public:
  explicit MetisGraphStream(const std::filesystem::path& path);

  [[nodiscard]] const GraphStreamHeader& header() const override { return header_; }
  bool next(StreamedNodeRecord& record) override;
  void rewind() override;

 private:
  void read_header();
  bool next_content_line();

  std::filesystem::path path_;
  std::ifstream in_;
  std::string line_;
  GraphStreamHeader header_;
  bool has_node_sizes_ = false;
  NodeID next_id_ = 0;
  std::uint64_t degree_sum_ = 0;
  std::uint64_t line_number_ = 0;
  bool finished_ = false;
};

/// Compact adjacency-array graph; used for tests, generators, and preloaded
/// streams when I/O must be excluded from timings.
struct InMemoryGraph {
  std::vector<EdgeID> xadj{0};
  std::vector<NodeID> adjncy;
  std::vector<EdgeWeight> adjwgt;
  std::vector<NodeWeight> vwgt;
  bool has_node_weights = false;
  bool has_edge_weights = false;

  [[nodiscard]] NodeID num_nodes() const { return xadj.size() - 1; }
  [[nodiscard]] std::uint64_t num_edges() const { return adjncy.size() / 2; }
  [[nodiscard]] NodeWeight total_node_weight() const;

  /// Builds a symmetric graph from an undirected edge list. Duplicate edges are
  /// merged by summing weights; self-loops are dropped.
  static InMemoryGraph from_edges(NodeID n,
                                  const std::vector<std::tuple<NodeID, NodeID, EdgeWeight>>& edges,
                                  std::vector<NodeWeight> node_weights = {});
};

class InMemoryGraphStream final : public GraphStream {
 public:
  explicit InMemoryGraphStream(const InMemoryGraph& graph);

  [[nodiscard]] const GraphStreamHeader& header() const override { return header_; }
  bool next(StreamedNodeRecord& record) override;
  void rewind() override { next_id_ = 0; }

 private:
  const InMemoryGraph* graph_;
  GraphStreamHeader header_;
  NodeID next_id_ = 0;
};

enum class GraphFormat { metis };

[[nodiscard]] GraphFormat parse_graph_format(std::string_view name);

[[nodiscard]] std::unique_ptr<GraphStream> open_graph_stream(const std::filesystem::path& path,
                                                             GraphFormat format = GraphFormat::metis);

/// Drains a stream into memory (rewinds it first and afterwards).
[[nodiscard]] InMemoryGraph load_graph(GraphStream& stream);

void write_metis(const std::filesystem::path& path, const InMemoryGraph& graph);

/// Sum of node weights, by a separate pass when the header declares weights.
[[nodiscard]] NodeWeight total_node_weight(GraphStream& stream);

}  // namespace streamdecomp
