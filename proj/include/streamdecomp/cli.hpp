#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "streamdecomp/metrics.hpp"

namespace streamdecomp::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kInputError = 2, kInvariantFailure = 3 };

/// Everything needed to rerun a command; echoed into the metrics JSON.
struct RunSpec {
  std::string command = "partition";  // partition, hpartition, map, metrics, transpose, bench
  std::string algorithm = "fennel";
  std::string input;                   // path, "-" (stdin) or "gen:<generator description>"
  std::string format;                  // empty: by command (metis / nodemajor)
  BlockID k = 2;
  std::string hierarchy;
  std::string distances;
  double epsilon = 0.03;
  std::uint64_t seed = 0;
  int repeats = 1;
  int passes = 1;
  double alpha_growth = 2.0;
  double alpha = 0.0;  // <= 0: derived from the input
  double gamma = 1.5;
  bool time_core = false;
  std::string output;
  std::string metrics_json;
  std::string metrics_csv;
  // heistream
  NodeID delta = 32768;
  std::string model = "extended";
  int x = 4;
  // oms
  std::uint32_t base = 2;
  unsigned threads = 1;
  std::uint32_t hash_bottom_layers = 0;
  std::string scorer = "fennel";
  // freight
  std::string objective = "con";
};

[[nodiscard]] nlohmann::json to_json(const RunSpec& spec);
[[nodiscard]] RunSpec run_spec_from_json(const nlohmann::json& json);

struct RunResult {
  std::vector<BlockID> partition;
  QualityReport quality;
  NodeWeight l_max = 0;
  double alpha = 0.0;
  std::uint64_t violations = 0;
  double runtime_ms = 0.0;        // core when time_core, else end-to-end
  double total_runtime_ms = 0.0;  // parse + algorithm
  double core_runtime_ms = 0.0;   // algorithm only (equal to total when streaming from disk)
};

/// Runs a partition, hpartition or map spec (no files written).
[[nodiscard]] RunResult execute(const RunSpec& spec);

/// Metrics object: the quality keys, timing, provenance and the embedded spec.
[[nodiscard]] nlohmann::json result_json(const RunSpec& spec, const RunResult& result);

inline const std::vector<std::string> kCsvColumns = {
    "instance", "algorithm", "k",           "epsilon",        "seed",           "repeat",
    "edge_cut", "cut_net",   "connectivity", "imbalance",     "comm_cost",      "runtime_ms",
    "core_runtime_ms",       "violations"};
[[nodiscard]] std::string csv_header();
[[nodiscard]] std::string csv_row(const RunSpec& spec, const RunResult& result, int repeat);

/// One row of the long-form bench CSV (string cells, header order).
using CsvRow = std::map<std::string, std::string>;
[[nodiscard]] std::vector<CsvRow> read_csv(std::istream& in);

struct SummaryRow {
  std::string algorithm;
  BlockID k = 0;
  std::size_t instances = 0;
  std::size_t rows = 0;
  std::map<std::string, std::optional<double>> means;  // metric -> mean (empty when no values)
};

/// Per-(algorithm, k) aggregation: runs of the same instance are averaged
/// arithmetically, then instances are combined by geometric mean. Imbalance and
/// any metric that is zero somewhere in the group use the arithmetic mean.
[[nodiscard]] std::vector<SummaryRow> summarize(const std::vector<CsvRow>& rows);
[[nodiscard]] double geometric_mean(const std::vector<double>& values);

/// Full command line; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace streamdecomp::cli
