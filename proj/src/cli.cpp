#include "streamdecomp/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>

#include "CLI11.hpp"
#include "streamdecomp/freight.hpp"
#include "streamdecomp/generators.hpp"
#include "streamdecomp/heistream.hpp"
#include "streamdecomp/multisection.hpp"
#include "streamdecomp/onepass.hpp"

namespace streamdecomp::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

bool is_generated(const std::string& input) { return input.rfind("gen:", 0) == 0; }

// Stdin is copied to a temporary file so that multi-pass readers can rewind.
class InputPath {
 public:
  explicit InputPath(const std::string& input) {
    if (input != "-") {
      path_ = input;
      return;
    }
    path_ = fs::temp_directory_path() /
            ("streamdecomp-stdin-" + std::to_string(Clock::now().time_since_epoch().count()));
    std::ofstream out(path_, std::ios::binary);
    out << std::cin.rdbuf();
    temporary_ = true;
  }
  InputPath(const InputPath&) = delete;
  InputPath& operator=(const InputPath&) = delete;
  ~InputPath() {
    if (temporary_) {
      std::error_code ec;
      fs::remove(path_, ec);
    }
  }
  [[nodiscard]] const fs::path& path() const { return path_; }

 private:
  fs::path path_;
  bool temporary_ = false;
};

std::string hypergraph_format(const RunSpec& spec) {
  if (!spec.format.empty()) return spec.format;
  if (fs::path(spec.input).extension() == ".hgr") return "hmetis";
  return "nodemajor";
}

std::optional<HierarchySpec> hierarchy_of(const RunSpec& spec) {
  if (spec.hierarchy.empty()) return std::nullopt;
  return parse_hierarchy(spec.hierarchy, spec.distances);
}

FennelParams fennel_params(const RunSpec& spec) {
  FennelParams params;
  params.gamma = spec.gamma;
  params.alpha = spec.alpha;
  return params;
}

RunResult execute_hypergraph(const RunSpec& spec) {
  const auto start = Clock::now();
  InputPath input(is_generated(spec.input) ? std::string() : spec.input);
  const std::string format = hypergraph_format(spec);
  InMemoryHypergraph hg;
  std::unique_ptr<HypergraphStream> stream;
  if (is_generated(spec.input)) {
    hg = gen::hypergraph_from_description(spec.input.substr(4));
  } else if (format == "hmetis") {
    hg = read_hmetis(input.path());
  } else if (format == "nodemajor") {
    stream = open_hypergraph_node_stream(input.path());
    if (spec.time_core) {
      hg = load_hypergraph(*stream);
      stream.reset();
    }
  } else {
    throw InputError("unknown hypergraph format '" + format + "'");
  }
  if (!stream) stream = std::make_unique<InMemoryHypergraphStream>(hg);

  RunResult result;
  const auto core_start = Clock::now();
  std::optional<PartitionState> state;
  if (spec.algorithm == "freight") {
    FreightConfig config;
    config.objective = parse_freight_objective(spec.objective);
    config.fennel = fennel_params(spec);
    FreightStats stats;
    state.emplace(run_freight(*stream, spec.k, spec.epsilon, config, &stats));
    result.alpha = stats.alpha;
  } else if (spec.algorithm == "hashing") {
    const auto& header = stream->header();
    state.emplace(header.num_nodes, spec.k, spec.epsilon, total_node_weight(*stream), !header.has_node_weights);
    StreamedHyperNodeRecord record;
    stream->rewind();
    while (stream->next(record)) state->assign(record.id, hashing_assign(record.id, spec.k), record.weight);
    stream->rewind();
  } else {
    throw InputError("unknown hypergraph algorithm '" + spec.algorithm + "' (expected freight or hashing)");
  }
  result.core_runtime_ms = ms_since(core_start);
  result.total_runtime_ms = ms_since(start);
  if (!spec.time_core && !hg.num_nodes) result.core_runtime_ms = result.total_runtime_ms;
  result.runtime_ms = spec.time_core ? result.core_runtime_ms : result.total_runtime_ms;

  verify_block_weights(*stream, *state);
  result.partition.assign(state->assignment().begin(), state->assignment().end());
  result.quality = evaluate_hypergraph(*stream, result.partition, spec.k);
  result.l_max = state->l_max();
  for (const auto w : state->block_weights()) {
    if (w > state->l_max()) ++result.violations;
  }
  result.violations = std::max(result.violations, state->violations());
  return result;
}

RunResult execute_graph(const RunSpec& spec) {
  const auto start = Clock::now();
  const auto hierarchy = hierarchy_of(spec);
  const BlockID k = hierarchy ? hierarchy->k() : spec.k;
  if (spec.command == "map" && !hierarchy) throw InputError("map needs --hierarchy");
  if (!spec.format.empty() && spec.format != "metis") throw InputError("unknown graph format '" + spec.format + "'");

  InputPath input(is_generated(spec.input) ? std::string() : spec.input);
  InMemoryGraph graph;
  bool in_memory = false;
  std::unique_ptr<GraphStream> stream;
  if (is_generated(spec.input)) {
    graph = gen::from_description(spec.input.substr(4));
    in_memory = true;
  } else {
    stream = open_graph_stream(input.path());
    if (spec.time_core || (spec.algorithm == "oms" && spec.threads > 1)) {
      graph = load_graph(*stream);
      stream.reset();
      in_memory = true;
    }
  }
  if (!stream) stream = std::make_unique<InMemoryGraphStream>(graph);

  RunResult result;
  const auto core_start = Clock::now();
  std::optional<PartitionState> state;
  if (spec.algorithm == "hashing" || spec.algorithm == "ldg" || spec.algorithm == "fennel") {
    OnePassConfig config;
    config.algorithm = parse_onepass_algorithm(spec.algorithm);
    config.passes = spec.passes;
    config.restream_alpha_growth = spec.alpha_growth;
    config.seed = spec.seed;
    config.fennel = fennel_params(spec);
    OnePassResult passes;
    state.emplace(partition_onepass(*stream, k, spec.epsilon, config, &passes));
    if (!passes.passes.empty()) result.alpha = passes.passes.front().alpha;
  } else if (spec.algorithm == "heistream") {
    HeiStreamConfig config;
    config.delta = spec.delta;
    config.model = parse_batch_model(spec.model);
    config.x = spec.x;
    config.passes = spec.passes;
    config.seed = spec.seed;
    config.fennel = fennel_params(spec);
    HeiStreamStats stats;
    state.emplace(run_heistream(*stream, k, spec.epsilon, config, &stats));
    result.alpha = stats.alpha;
  } else if (spec.algorithm == "oms") {
    const auto tree = hierarchy ? MultisectionTree::build_from_spec(*hierarchy)
                                : MultisectionTree::build_hierarchy(k, spec.base);
    OmsConfig config;
    config.scorer = parse_oms_scorer(spec.scorer);
    config.fennel = fennel_params(spec);
    config.hash_bottom_layers = spec.hash_bottom_layers;
    config.threads = std::max(1u, spec.threads);
    config.seed = spec.seed;
    OmsStats stats;
    if (config.threads > 1) {
      state.emplace(run_oms_parallel(graph, tree, spec.epsilon, config, &stats));
    } else {
      state.emplace(run_oms(*stream, tree, spec.epsilon, config, &stats));
    }
    result.alpha = stats.alpha;
  } else {
    throw InputError("unknown algorithm '" + spec.algorithm + "' (expected hashing, ldg, fennel, heistream or oms)");
  }
  result.core_runtime_ms = ms_since(core_start);
  result.total_runtime_ms = ms_since(start);
  if (!in_memory) result.core_runtime_ms = result.total_runtime_ms;
  result.runtime_ms = spec.time_core ? result.core_runtime_ms : result.total_runtime_ms;

  verify_block_weights(*stream, *state);
  result.partition.assign(state->assignment().begin(), state->assignment().end());
  std::optional<DistanceCode> code;
  if (hierarchy) code.emplace(*hierarchy);
  result.quality = evaluate_graph(*stream, result.partition, k, code ? &*code : nullptr);
  result.l_max = state->l_max();
  result.violations = state->violations();
  return result;
}

// Shortest representation that reads back to the same double.
std::string fmt_double(double value) {
  char buffer[64];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, end);
}

std::string instance_name(const std::string& input) {
  std::string name = is_generated(input) ? input.substr(4) : fs::path(input).filename().string();
  for (auto& c : name) {
    if (c == ',') c = ';';
  }
  return name;
}

void write_partition(const fs::path& path, std::span<const BlockID> partition) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  std::string buffer;
  for (const BlockID b : partition) {
    buffer += std::to_string(b);
    buffer += '\n';
  }
  out << buffer;
}

std::vector<BlockID> read_partition(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open partition file " + path.string());
  std::vector<BlockID> partition;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      partition.push_back(static_cast<BlockID>(std::stol(line)));
    } catch (const std::exception&) {
      throw InputError("bad block id '" + line + "' in " + path.string());
    }
  }
  return partition;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) parts.push_back(item);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

struct Destinations {
  std::string partition;
  std::string metrics_json;
  std::string metrics_csv;
};

Destinations destinations_of(const RunSpec& spec) { return {spec.output, spec.metrics_json, spec.metrics_csv}; }

void emit_outputs(const RunSpec& spec, const RunResult& result, const Destinations& to, std::ostream& out,
                  std::ostream& err) {
  if (result.violations > 0) {
    err << "warning: " << result.violations << " placement(s) exceeded L_max = " << result.l_max << "\n";
  }
  if (!to.partition.empty()) write_partition(to.partition, result.partition);
  const auto j = result_json(spec, result);
  if (!to.metrics_json.empty()) {
    std::ofstream file(to.metrics_json);
    if (!file) throw InputError("cannot write " + to.metrics_json);
    file << j.dump(2) << "\n";
  }
  if (!to.metrics_csv.empty()) {
    std::ofstream file(to.metrics_csv);
    if (!file) throw InputError("cannot write " + to.metrics_csv);
    file << csv_header() << csv_row(spec, result, 0);
  }
  out << j.dump(2) << "\n";
}

std::uint64_t seed_fallback() {
  if (const char* env = std::getenv("STREAMDECOMP_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw InputError("STREAMDECOMP_SEED is not an unsigned integer");
    }
  }
  return 0;
}

void add_shared(CLI::App* sub, RunSpec& spec, bool single_run = true) {
  if (single_run) {
    sub->add_option("input", spec.input, "Input file, '-' for stdin, or gen:<description>")->required();
    sub->add_option("--k", spec.k, "Number of blocks")->check(CLI::Range(1, std::numeric_limits<BlockID>::max()));
  }
  sub->add_option("--epsilon", spec.epsilon, "Allowed imbalance")->check(CLI::NonNegativeNumber);
  sub->add_option("--passes", spec.passes, "Number of streaming passes")->check(CLI::PositiveNumber);
  sub->add_option("--alpha-growth", spec.alpha_growth, "ReFennel alpha factor per extra pass");
  sub->add_option("--alpha", spec.alpha, "Fennel alpha (default: from n, m, k)");
  sub->add_option("--gamma", spec.gamma, "Fennel gamma");
  sub->add_option("--seed", spec.seed, "Random seed (fallback: STREAMDECOMP_SEED)");
  sub->add_option("--output", spec.output, "Partition output file");
  sub->add_option("--metrics-json", spec.metrics_json, "Metrics JSON file");
  sub->add_option("--metrics-csv", spec.metrics_csv, "Metrics CSV file");
  sub->add_flag("--time-core", spec.time_core, "Load the input first and time only the algorithm");
  sub->add_option("--format", spec.format, "Input format (metis | nodemajor | hmetis)");
}

void add_graph_options(CLI::App* sub, RunSpec& spec) {
  sub->add_option("--algorithm", spec.algorithm, "hashing | ldg | fennel | heistream | oms");
  sub->add_option("--delta", spec.delta, "HeiStream batch size")->check(CLI::PositiveNumber);
  sub->add_option("--model", spec.model, "HeiStream batch model (basic | extended)");
  sub->add_option("--x", spec.x, "HeiStream coarsening factor")->check(CLI::PositiveNumber);
  sub->add_option("--base", spec.base, "OMS fan-out of the nh tree")->check(CLI::Range(2u, 1u << 20));
  sub->add_option("--hierarchy", spec.hierarchy, "Machine hierarchy a1:a2:...");
  sub->add_option("--distances", spec.distances, "Layer distances d1:d2:...");
  sub->add_option("--threads", spec.threads, "OMS worker threads")->check(CLI::PositiveNumber);
  sub->add_option("--hash-bottom-layers", spec.hash_bottom_layers, "OMS: hash subproblems of height <= h");
  sub->add_option("--scorer", spec.scorer, "OMS scorer (fennel | ldg)");
}

}  // namespace

json to_json(const RunSpec& spec) {
  return json{{"command", spec.command},
              {"algorithm", spec.algorithm},
              {"input", spec.input},
              {"format", spec.format},
              {"k", spec.k},
              {"hierarchy", spec.hierarchy},
              {"distances", spec.distances},
              {"epsilon", spec.epsilon},
              {"seed", spec.seed},
              {"repeats", spec.repeats},
              {"passes", spec.passes},
              {"alpha_growth", spec.alpha_growth},
              {"alpha", spec.alpha},
              {"gamma", spec.gamma},
              {"time_core", spec.time_core},
              {"output", spec.output},
              {"metrics_json", spec.metrics_json},
              {"metrics_csv", spec.metrics_csv},
              {"delta", spec.delta},
              {"model", spec.model},
              {"x", spec.x},
              {"base", spec.base},
              {"threads", spec.threads},
              {"hash_bottom_layers", spec.hash_bottom_layers},
              {"scorer", spec.scorer},
              {"objective", spec.objective}};
}

RunSpec run_spec_from_json(const json& j) {
  RunSpec spec;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) j.at(key).get_to(field);
  };
  get("command", spec.command);
  get("algorithm", spec.algorithm);
  get("input", spec.input);
  get("format", spec.format);
  get("k", spec.k);
  get("hierarchy", spec.hierarchy);
  get("distances", spec.distances);
  get("epsilon", spec.epsilon);
  get("seed", spec.seed);
  get("repeats", spec.repeats);
  get("passes", spec.passes);
  get("alpha_growth", spec.alpha_growth);
  get("alpha", spec.alpha);
  get("gamma", spec.gamma);
  get("time_core", spec.time_core);
  get("output", spec.output);
  get("metrics_json", spec.metrics_json);
  get("metrics_csv", spec.metrics_csv);
  get("delta", spec.delta);
  get("model", spec.model);
  get("x", spec.x);
  get("base", spec.base);
  get("threads", spec.threads);
  get("hash_bottom_layers", spec.hash_bottom_layers);
  get("scorer", spec.scorer);
  get("objective", spec.objective);
  return spec;
}

RunResult execute(const RunSpec& spec) {
  if (spec.input.empty()) throw InputError("no input given");
  if (spec.k < 1) throw InputError("k must be positive");
  if (spec.command == "hpartition") return execute_hypergraph(spec);
  if (spec.command == "partition" || spec.command == "map") return execute_graph(spec);
  throw InputError("command '" + spec.command + "' does not produce a partition");
}

json result_json(const RunSpec& spec, const RunResult& result) {
  const auto& q = result.quality;
  json j{{"edge_cut", q.edge_cut},
         {"cut_net", q.cut_net},
         {"connectivity", q.connectivity},
         {"imbalance", q.imbalance},
         {"comm_cost", q.comm_cost ? json(*q.comm_cost) : json(nullptr)},
         {"runtime_ms", result.runtime_ms},
         {"total_runtime_ms", result.total_runtime_ms},
         {"core_runtime_ms", result.core_runtime_ms},
         {"algorithm", spec.algorithm},
         {"k", q.block_weights.empty() ? spec.k : static_cast<BlockID>(q.block_weights.size())},
         {"epsilon", spec.epsilon},
         {"seed", spec.seed},
         {"gamma", spec.gamma},
         {"alpha", result.alpha},
         {"l_max", result.l_max},
         {"max_block_weight", q.max_block_weight},
         {"total_weight", q.total_weight},
         {"violations", result.violations},
         {"n", result.partition.size()},
         {"run_spec", to_json(spec)}};
  return j;
}

std::string csv_header() {
  std::string line;
  for (std::size_t i = 0; i < kCsvColumns.size(); ++i) {
    if (i) line += ',';
    line += kCsvColumns[i];
  }
  return line + "\n";
}

std::string csv_row(const RunSpec& spec, const RunResult& result, int repeat) {
  const auto& q = result.quality;
  const BlockID k = q.block_weights.empty() ? spec.k : static_cast<BlockID>(q.block_weights.size());
  std::ostringstream row;
  row << instance_name(spec.input) << ',' << spec.algorithm << ',' << k << ',' << fmt_double(spec.epsilon) << ','
      << spec.seed << ',' << repeat << ',' << q.edge_cut << ',' << q.cut_net << ',' << q.connectivity << ','
      << fmt_double(q.imbalance) << ',' << (q.comm_cost ? std::to_string(*q.comm_cost) : std::string()) << ','
      << fmt_double(result.runtime_ms) << ',' << fmt_double(result.core_runtime_ms) << ',' << result.violations
      << "\n";
  return row.str();
}

std::vector<CsvRow> read_csv(std::istream& in) {
  std::string line;
  std::vector<std::string> header;
  std::vector<CsvRow> rows;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split(line, ',');
    if (header.empty()) {
      header = std::move(cells);
      continue;
    }
    if (cells.size() != header.size()) {
      throw InputError("CSV line " + std::to_string(line_number) + " has " + std::to_string(cells.size()) +
                       " cells, header has " + std::to_string(header.size()));
    }
    CsvRow row;
    for (std::size_t i = 0; i < header.size(); ++i) row[header[i]] = cells[i];
    rows.push_back(std::move(row));
  }
  return rows;
}

double geometric_mean(const std::vector<double>& values) {
  if (values.empty()) throw InputError("geometric mean of an empty group");
  double log_sum = 0.0;
  for (const double v : values) {
    if (v <= 0.0) throw InputError("geometric mean needs positive values");
    log_sum += std::log(v);
  }
  return std::exp(log_sum / static_cast<double>(values.size()));
}

std::vector<SummaryRow> summarize(const std::vector<CsvRow>& rows) {
  static const std::vector<std::string> metrics = {"runtime_ms", "core_runtime_ms", "edge_cut",  "cut_net",
                                                   "connectivity", "imbalance",     "comm_cost"};
  if (rows.empty()) throw InputError("summary input has no rows");
  // (algorithm, k) -> instance -> rows
  std::map<std::pair<std::string, BlockID>, std::map<std::string, std::vector<const CsvRow*>>> groups;
  for (const auto& row : rows) {
    const auto algorithm = row.find("algorithm");
    const auto k = row.find("k");
    const auto instance = row.find("instance");
    if (algorithm == row.end() || k == row.end() || instance == row.end()) {
      throw InputError("summary input needs instance, algorithm and k columns");
    }
    BlockID kv;
    try {
      kv = static_cast<BlockID>(std::stol(k->second));
    } catch (const std::exception&) {
      throw InputError("bad k '" + k->second + "'");
    }
    groups[{algorithm->second, kv}][instance->second].push_back(&row);
  }

  std::vector<SummaryRow> summary;
  for (const auto& [key, instances] : groups) {
    SummaryRow out;
    out.algorithm = key.first;
    out.k = key.second;
    out.instances = instances.size();
    for (const auto& [name, list] : instances) out.rows += list.size();
    for (const auto& metric : metrics) {
      std::vector<double> per_instance;
      for (const auto& [name, list] : instances) {
        double sum = 0.0;
        std::size_t count = 0;
        for (const CsvRow* row : list) {
          const auto cell = row->find(metric);
          if (cell == row->end() || cell->second.empty()) continue;
          try {
            sum += std::stod(cell->second);
          } catch (const std::exception&) {
            throw InputError("bad " + metric + " value '" + cell->second + "'");
          }
          ++count;
        }
        if (count) per_instance.push_back(sum / static_cast<double>(count));
      }
      if (per_instance.empty()) {
        out.means[metric] = std::nullopt;
        continue;
      }
      const bool arithmetic = metric == "imbalance" ||
                              std::any_of(per_instance.begin(), per_instance.end(), [](double v) { return v <= 0.0; });
      if (arithmetic) {
        double sum = 0.0;
        for (const double v : per_instance) sum += v;
        out.means[metric] = sum / static_cast<double>(per_instance.size());
      } else {
        out.means[metric] = geometric_mean(per_instance);
      }
    }
    summary.push_back(std::move(out));
  }
  return summary;
}

namespace {

int run_metrics(const RunSpec& base, const std::string& partition_path, const std::string& run_json, bool hypergraph,
                bool k_given, std::ostream& out, std::ostream& err) {
  // `spec` is what the output reports; the input read is always base.input.
  RunSpec spec = base;
  json previous;
  if (!run_json.empty()) {
    std::ifstream in(run_json);
    if (!in) throw InputError("cannot open " + run_json);
    try {
      previous = json::parse(in);
    } catch (const json::exception& e) {
      throw InputError("bad run JSON: " + std::string(e.what()));
    }
    if (previous.contains("run_spec")) spec = run_spec_from_json(previous.at("run_spec"));
    hypergraph = hypergraph || spec.command == "hpartition";
  }
  const auto partition = read_partition(partition_path);
  const auto hierarchy = hierarchy_of(spec);
  BlockID k = hierarchy ? hierarchy->k() : 0;
  if (!k && (!run_json.empty() || k_given)) k = spec.k;
  const std::string& source = base.input;

  RunResult result;
  result.partition = partition;
  if (hypergraph) {
    InputPath input(is_generated(source) ? std::string() : source);
    InMemoryHypergraph hg;
    std::unique_ptr<HypergraphStream> stream;
    if (is_generated(source)) {
      hg = gen::hypergraph_from_description(source.substr(4));
      stream = std::make_unique<InMemoryHypergraphStream>(hg);
    } else if (hypergraph_format(base) == "hmetis") {
      hg = read_hmetis(input.path());
      stream = std::make_unique<InMemoryHypergraphStream>(hg);
    } else {
      stream = open_hypergraph_node_stream(input.path());
    }
    result.quality = evaluate_hypergraph(*stream, partition, k);
  } else {
    InputPath input(is_generated(source) ? std::string() : source);
    InMemoryGraph graph;
    std::unique_ptr<GraphStream> stream;
    if (is_generated(source)) {
      graph = gen::from_description(source.substr(4));
      stream = std::make_unique<InMemoryGraphStream>(graph);
    } else {
      stream = open_graph_stream(input.path());
    }
    std::optional<DistanceCode> code;
    if (hierarchy) code.emplace(*hierarchy);
    result.quality = evaluate_graph(*stream, partition, k, code ? &*code : nullptr);
  }
  const BlockID blocks = static_cast<BlockID>(result.quality.block_weights.size());
  result.l_max = compute_lmax(result.quality.total_weight, blocks, spec.epsilon);
  if (!previous.is_null()) {
    result.runtime_ms = previous.value("runtime_ms", 0.0);
    result.total_runtime_ms = previous.value("total_runtime_ms", 0.0);
    result.core_runtime_ms = previous.value("core_runtime_ms", 0.0);
    result.alpha = previous.value("alpha", 0.0);
    result.violations = previous.value("violations", std::uint64_t{0});
  } else {
    spec.command = "metrics";
    for (const auto w : result.quality.block_weights) {
      if (w > result.l_max) ++result.violations;
    }
  }
  emit_outputs(spec, result, {std::string(), base.metrics_json, base.metrics_csv}, out, err);
  return kOk;
}

int run_bench(const RunSpec& base, const std::vector<std::string>& inputs, const std::string& algorithms,
              const std::string& ks, bool hypergraph, std::ostream& out, std::ostream& err) {
  std::ofstream file;
  std::ostream* sink = &out;
  if (!base.output.empty()) {
    file.open(base.output);
    if (!file) throw InputError("cannot write " + base.output);
    sink = &file;
  }
  std::mutex writer;
  *sink << csv_header();
  std::vector<BlockID> k_values;
  for (const auto v : parse_colon_list([&] {
         std::string s = ks;
         std::replace(s.begin(), s.end(), ',', ':');
         return s;
       }())) {
    if (v < 1) throw InputError("bench k values must be positive");
    k_values.push_back(static_cast<BlockID>(v));
  }
  const auto algorithm_list = split(algorithms, ',');
  for (const auto& input : inputs) {
    for (const auto& algorithm : algorithm_list) {
      for (const BlockID k : k_values) {
        for (int r = 0; r < base.repeats; ++r) {
          RunSpec spec = base;
          spec.command = hypergraph ? "hpartition" : "partition";
          spec.input = input;
          spec.algorithm = algorithm;
          spec.k = k;
          spec.seed = base.seed + static_cast<std::uint64_t>(r);
          spec.output.clear();
          if (hypergraph && algorithm.rfind("freight", 0) == 0) {
            spec.algorithm = "freight";
            if (algorithm.size() > 8) spec.objective = algorithm.substr(8);
          }
          const auto result = execute(spec);
          if (result.violations > 0) err << "warning: " << input << " " << algorithm << " k=" << k << " exceeded L_max\n";
          RunSpec labelled = spec;
          labelled.algorithm = algorithm;
          const std::lock_guard lock(writer);
          *sink << csv_row(labelled, result, r) << std::flush;
        }
      }
    }
  }
  return kOk;
}

int run_summary(const std::string& input, const std::string& output, std::ostream& out) {
  std::ifstream in(input);
  if (!in) throw InputError("cannot open " + input);
  const auto summary = summarize(read_csv(in));
  std::ofstream file;
  std::ostream* sink = &out;
  if (!output.empty()) {
    file.open(output);
    if (!file) throw InputError("cannot write " + output);
    sink = &file;
  }
  static const std::vector<std::string> metrics = {"runtime_ms", "core_runtime_ms", "edge_cut",  "cut_net",
                                                   "connectivity", "imbalance",     "comm_cost"};
  *sink << "algorithm,k,instances,rows";
  for (const auto& m : metrics) *sink << ',' << m;
  *sink << "\n";
  for (const auto& row : summary) {
    *sink << row.algorithm << ',' << row.k << ',' << row.instances << ',' << row.rows;
    for (const auto& m : metrics) {
      const auto it = row.means.find(m);
      *sink << ',' << (it != row.means.end() && it->second ? fmt_double(*it->second) : std::string());
    }
    *sink << "\n";
  }
  return kOk;
}

int run_generate(const std::string& description, const std::string& output, const std::string& format) {
  if (output.empty()) throw InputError("generate needs --output");
  if (format == "metis") {
    write_metis(output, gen::from_description(description));
  } else if (format == "hmetis") {
    write_hmetis(output, gen::hypergraph_from_description(description));
  } else if (format == "nodemajor") {
    write_node_major(output, gen::hypergraph_from_description(description));
  } else {
    throw InputError("unknown output format '" + format + "'");
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Streaming graph and hypergraph partitioning and process mapping", "streamdecomp"};
  app.require_subcommand(1);

  RunSpec spec;
  std::string partition_path, run_json, algorithms = "hashing,ldg,fennel,heistream", ks = "2,8,32";
  std::string transpose_output = "-";
  std::string generator, generate_format = "metis";
  std::vector<std::string> bench_inputs;
  bool hypergraph = false;

  auto* partition = app.add_subcommand("partition", "Partition a METIS graph");
  add_shared(partition, spec);
  add_graph_options(partition, spec);

  auto* heistream = app.add_subcommand("heistream", "Buffered streaming partitioning (HeiStream)");
  add_shared(heistream, spec);
  add_graph_options(heistream, spec);

  auto* hpartition = app.add_subcommand("hpartition", "Partition a node-major hypergraph stream");
  add_shared(hpartition, spec);
  hpartition->add_option("--algorithm", spec.algorithm, "freight | hashing");
  hpartition->add_option("--objective", spec.objective, "con | cut");

  auto* freight = app.add_subcommand("freight", "FREIGHT hypergraph partitioning");
  add_shared(freight, spec);
  freight->add_option("--objective", spec.objective, "con | cut");

  auto* map = app.add_subcommand("map", "Map a graph onto a machine hierarchy");
  add_shared(map, spec);
  add_graph_options(map, spec);

  auto* metrics = app.add_subcommand("metrics", "Evaluate a partition file");
  add_shared(metrics, spec);
  metrics->add_option("--partition", partition_path, "Partition file")->required();
  metrics->add_option("--run-json", run_json, "Metrics JSON of the generating run");
  metrics->add_option("--hierarchy", spec.hierarchy, "Machine hierarchy a1:a2:...");
  metrics->add_option("--distances", spec.distances, "Layer distances d1:d2:...");
  metrics->add_option("--algorithm", spec.algorithm, "Algorithm label for the output");
  metrics->add_flag("--hypergraph", hypergraph, "Input is a hypergraph");

  auto* transpose = app.add_subcommand("transpose", "Convert hMetis (net-major) to the node-major stream format");
  transpose->add_option("input", spec.input, "hMetis file")->required();
  transpose->add_option("output", transpose_output, "Node-major output ('-' for stdout)");

  auto* bench = app.add_subcommand("bench", "Run an experiment matrix into long-form CSV");
  add_shared(bench, spec, false);
  add_graph_options(bench, spec);
  bench->add_option("inputs", bench_inputs, "Inputs")->required();
  bench->add_option("--algorithms", algorithms, "Comma-separated algorithms");
  bench->add_option("--k", ks, "Comma-separated k values");
  bench->add_option("--repeats", spec.repeats, "Seeds per configuration")->check(CLI::PositiveNumber);
  bench->add_option("--objective", spec.objective, "FREIGHT objective");
  bench->add_flag("--hypergraph", hypergraph, "Inputs are hypergraphs (algorithms freight-con, freight-cut, hashing)");

  std::string summary_input, summary_output;
  auto* summary = app.add_subcommand("summary", "Geometric means per (algorithm, k) of a bench CSV");
  summary->add_option("csv", summary_input, "Bench CSV")->required();
  summary->add_option("--output", summary_output, "Output CSV");

  auto* generate = app.add_subcommand("generate", "Write a synthetic instance");
  generate->add_option("description", generator, "e.g. rgg2d:n=10000:deg=8:seed=1 or stencil:w=100:h=100")->required();
  generate->add_option("--output", spec.output, "Output file")->required();
  generate->add_option("--format", generate_format, "metis | hmetis | nodemajor");

  std::vector<const char*> argv;
  argv.push_back("streamdecomp");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    auto* chosen = app.get_subcommands().front();
    if (const auto* seed = chosen->get_option_no_throw("--seed"); seed && seed->count() == 0) {
      spec.seed = seed_fallback();
    }
    if (chosen == transpose) {
      InputPath input(spec.input);
      const auto pins = transpose_hmetis(input.path(), transpose_output == "-" ? fs::path("/dev/stdout")
                                                                               : fs::path(transpose_output));
      err << "transposed " << pins << " pins\n";
      return kOk;
    }
    if (chosen == summary) return run_summary(summary_input, summary_output, out);
    if (chosen == generate) return run_generate(generator, spec.output, generate_format);
    if (chosen == bench) {
      return run_bench(spec, bench_inputs, algorithms, ks, hypergraph, out, err);
    }
    if (chosen == metrics) return run_metrics(spec, partition_path, run_json, hypergraph, metrics->count("--k") > 0, out, err);

    if (chosen == heistream) {
      spec.algorithm = "heistream";
      spec.command = "partition";
    } else if (chosen == freight) {
      spec.algorithm = "freight";
      spec.command = "hpartition";
    } else if (chosen == hpartition) {
      spec.command = "hpartition";
      if (hpartition->count("--algorithm") == 0) spec.algorithm = "freight";
    } else if (chosen == map) {
      spec.command = "map";
      if (map->count("--algorithm") == 0) spec.algorithm = "oms";
      if (spec.hierarchy.empty()) throw InputError("map needs --hierarchy");
    } else {
      spec.command = "partition";
    }
    if (!spec.hierarchy.empty() && chosen->count("--k")) {
      if (parse_hierarchy(spec.hierarchy, spec.distances).k() != spec.k) {
        err << "error: --k does not match the product of --hierarchy\n";
        return kUsage;
      }
    }
    if (!spec.hierarchy.empty()) spec.k = parse_hierarchy(spec.hierarchy, spec.distances).k();
    const auto result = execute(spec);
    emit_outputs(spec, result, destinations_of(spec), out, err);
    return kOk;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const InvariantError& e) {
    err << "invariant failure: " << e.what() << "\n";
    return kInvariantFailure;
  } catch (const fs::filesystem_error& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInvariantFailure;
  }
}

}  // namespace streamdecomp::cli
