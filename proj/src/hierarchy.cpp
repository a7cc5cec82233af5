#include "streamdecomp/hierarchy.hpp"

#include <bit>
#include <charconv>
#include <limits>

namespace streamdecomp {

BlockID HierarchySpec::k() const {
  std::int64_t k = 1;
  for (auto ai : a) k *= ai;
  return static_cast<BlockID>(k);
}

void HierarchySpec::validate() const {
  if (a.empty()) throw InputError("hierarchy needs at least one layer");
  if (d.size() != a.size()) throw InputError("hierarchy and distance lists differ in length");
  std::int64_t k = 1;
  for (auto ai : a) {
    if (ai < 1) throw InputError("hierarchy fan-out must be positive");
    k *= ai;
    if (k > std::numeric_limits<BlockID>::max()) throw InputError("hierarchy has too many PEs");
  }
  for (auto di : d) {
    if (di < 0) throw InputError("distances must be nonnegative");
  }
}

bool HierarchySpec::distances_nondecreasing() const {
  for (std::size_t i = 1; i < d.size(); ++i) {
    if (d[i] < d[i - 1]) return false;
  }
  return true;
}

namespace {
template <typename T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ':';
    out += std::to_string(values[i]);
  }
  return out;
}
}  // namespace

std::string HierarchySpec::hierarchy_string() const { return join(a); }
std::string HierarchySpec::distance_string() const { return join(d); }

std::vector<std::int64_t> parse_colon_list(std::string_view text) {
  std::vector<std::int64_t> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = std::min(text.find(':', start), text.size());
    const auto token = text.substr(start, end - start);
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) {
      throw InputError("malformed list '" + std::string(text) + "'");
    }
    values.push_back(value);
    start = end + 1;
  }
  return values;
}

HierarchySpec parse_hierarchy(std::string_view hierarchy, std::string_view distances) {
  HierarchySpec spec;
  for (auto v : parse_colon_list(hierarchy)) {
    if (v < 1 || v > std::numeric_limits<std::uint32_t>::max()) throw InputError("bad fan-out in hierarchy");
    spec.a.push_back(static_cast<std::uint32_t>(v));
  }
  if (distances.empty()) {
    for (std::size_t i = 0; i < spec.a.size(); ++i) spec.d.push_back(static_cast<std::int64_t>(i + 1));
  } else {
    spec.d = parse_colon_list(distances);
  }
  spec.validate();
  return spec;
}

DistanceCode::DistanceCode(HierarchySpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  k_ = spec_.k();
  std::uint32_t max_a = 1;
  for (auto ai : spec_.a) max_a = std::max(max_a, ai);
  bits_ = std::max(1u, static_cast<unsigned>(std::bit_width(max_a - 1)));
  h_.assign(spec_.layers() + 1, 1);
  for (std::size_t i = 0; i < spec_.layers(); ++i) h_[i + 1] = h_[i] * spec_.a[i];
  if (bits_ * spec_.layers() > 64) return;
  codes_.resize(static_cast<std::size_t>(k_));
  for (BlockID pe = 0; pe < k_; ++pe) {
    std::uint64_t code = 0;
    for (std::size_t i = 0; i < spec_.layers(); ++i) {
      const auto digit = static_cast<std::uint64_t>((pe / h_[i]) % spec_.a[i]);
      code |= digit << (i * bits_);
    }
    codes_[static_cast<std::size_t>(pe)] = code;
  }
}

std::int64_t DistanceCode::distance(BlockID a, BlockID b) const {
  if (a == b) return 0;
  if (codes_.empty()) return distance_by_division(a, b);
  const std::uint64_t x = codes_[static_cast<std::size_t>(a)] ^ codes_[static_cast<std::size_t>(b)];
  const auto top = 63u - static_cast<unsigned>(std::countl_zero(x));
  return spec_.d[top / bits_];
}

std::int64_t DistanceCode::distance_by_division(BlockID a, BlockID b) const {
  if (a == b) return 0;
  // Two PEs share every layer above i exactly when a / h_{i+1} == b / h_{i+1}.
  for (std::size_t i = 0; i < spec_.layers(); ++i) {
    if (a / h_[i + 1] == b / h_[i + 1]) return spec_.d[i];
  }
  return spec_.d.back();
}

}  // namespace streamdecomp
