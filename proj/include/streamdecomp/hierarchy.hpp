#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "streamdecomp/types.hpp"

namespace streamdecomp {

/// Machine hierarchy S = a_1:...:a_l with distances D = d_1:...:d_l. Layer 1 is
/// the innermost (e.g. cores per processor). PE b has mixed-radix digits
/// r_i = (b / prod_{t<i} a_t) mod a_i.
struct HierarchySpec {
  std::vector<std::uint32_t> a;
  std::vector<std::int64_t> d;

  [[nodiscard]] std::size_t layers() const { return a.size(); }
  [[nodiscard]] BlockID k() const;
  /// Throws InputError on an empty hierarchy, zero fan-out, a product above the
  /// BlockID range or a distance list of different length.
  void validate() const;
  /// False when some d_i > d_{i+1}; callers may warn.
  [[nodiscard]] bool distances_nondecreasing() const;

  [[nodiscard]] std::string hierarchy_string() const;
  [[nodiscard]] std::string distance_string() const;
};

/// Parses "4:16:2" style lists.
[[nodiscard]] std::vector<std::int64_t> parse_colon_list(std::string_view text);
/// `distances` may be empty, in which case d_i = i (1-based layer index).
[[nodiscard]] HierarchySpec parse_hierarchy(std::string_view hierarchy, std::string_view distances = {});

/// PE-distance lookup through packed binary codes.
///
/// Each PE gets an l-section code, s = max(1, ceil(log2 max a_i)) bits per
/// section, layer l in the most significant section. The distance of two PEs
/// is d_i for the section holding the leftmost set bit of their XOR. When
/// l*s exceeds 64 bits the division method is used instead.
class DistanceCode {
 public:
  explicit DistanceCode(HierarchySpec spec);

  [[nodiscard]] std::int64_t distance(BlockID a, BlockID b) const;
  /// Same quantity computed by repeated division with h_i = prod_{t<i} a_t.
  [[nodiscard]] std::int64_t distance_by_division(BlockID a, BlockID b) const;

  [[nodiscard]] std::uint64_t code(BlockID pe) const { return codes_[static_cast<std::size_t>(pe)]; }
  [[nodiscard]] unsigned bits_per_section() const { return bits_; }
  [[nodiscard]] bool uses_codes() const { return !codes_.empty(); }
  [[nodiscard]] BlockID k() const { return k_; }
  [[nodiscard]] const HierarchySpec& spec() const { return spec_; }

 private:
  HierarchySpec spec_;
  BlockID k_;
  unsigned bits_;
  std::vector<std::uint64_t> codes_;
  std::vector<std::int64_t> h_;  // h_[i] = prod_{t<i} a_t, size l + 1
};

}  // namespace streamdecomp
