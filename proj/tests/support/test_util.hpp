#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "streamdecomp/graph_stream.hpp"
#include "streamdecomp/hypergraph_stream.hpp"

namespace testutil {

/// Scratch directory removed at scope exit.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("streamdecomp-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  [[nodiscard]] std::filesystem::path file(const std::string& name) const { return path_ / name; }
  [[nodiscard]] const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::filesystem::path write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
  return path;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::vector<streamdecomp::StreamedNodeRecord> drain(streamdecomp::GraphStream& stream) {
  std::vector<streamdecomp::StreamedNodeRecord> records;
  streamdecomp::StreamedNodeRecord record;
  stream.rewind();
  while (stream.next(record)) records.push_back(record);
  return records;
}

inline std::vector<streamdecomp::StreamedHyperNodeRecord> drain(streamdecomp::HypergraphStream& stream) {
  std::vector<streamdecomp::StreamedHyperNodeRecord> records;
  streamdecomp::StreamedHyperNodeRecord record;
  stream.rewind();
  while (stream.next(record)) records.push_back(record);
  return records;
}

inline std::vector<streamdecomp::BlockID> random_partition(std::size_t n, streamdecomp::BlockID k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<streamdecomp::BlockID> pick(0, k - 1);
  std::vector<streamdecomp::BlockID> p(n);
  for (auto& b : p) b = pick(rng);
  return p;
}

/// Random graph with weights in [1, max_node_weight] and [1, max_edge_weight].
inline streamdecomp::InMemoryGraph random_weighted_graph(streamdecomp::NodeID n, double p, int max_node_weight,
                                                         int max_edge_weight, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::uniform_int_distribution<int> nw(1, max_node_weight), ew(1, max_edge_weight);
  std::vector<std::tuple<streamdecomp::NodeID, streamdecomp::NodeID, streamdecomp::EdgeWeight>> edges;
  for (streamdecomp::NodeID u = 0; u < n; ++u) {
    for (streamdecomp::NodeID v = u + 1; v < n; ++v) {
      if (coin(rng)) edges.emplace_back(u, v, ew(rng));
    }
  }
  std::vector<streamdecomp::NodeWeight> weights(n);
  for (auto& w : weights) w = nw(rng);
  return streamdecomp::InMemoryGraph::from_edges(n, edges, max_node_weight > 1 ? weights : std::vector<streamdecomp::NodeWeight>{});
}

}  // namespace testutil
