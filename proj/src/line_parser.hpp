#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>

#include "streamdecomp/types.hpp"

namespace streamdecomp::detail {

/// Whitespace-separated unsigned integer tokenizer over one text line.
class LineParser {
 public:
  explicit LineParser(std::string_view line) : rest_(line) {}

  /// Returns false when the line holds no further tokens.
  bool next(std::uint64_t& value) {
    skip_space();
    if (rest_.empty()) return false;
    auto [ptr, ec] = std::from_chars(rest_.data(), rest_.data() + rest_.size(), value);
    if (ec != std::errc{}) {
      throw InputError("expected unsigned integer near '" + std::string(rest_.substr(0, 16)) + "'");
    }
    rest_.remove_prefix(static_cast<std::size_t>(ptr - rest_.data()));
    if (!rest_.empty() && !is_space(rest_.front())) {
      throw InputError("unexpected character '" + std::string(1, rest_.front()) + "'");
    }
    return true;
  }

  std::uint64_t require(const char* what) {
    std::uint64_t value = 0;
    if (!next(value)) throw InputError(std::string("missing ") + what);
    return value;
  }

  [[nodiscard]] bool at_end() {
    skip_space();
    return rest_.empty();
  }

  /// The raw next token, without consuming it.
  [[nodiscard]] std::string_view peek_token() {
    skip_space();
    std::size_t len = 0;
    while (len < rest_.size() && !is_space(rest_[len])) ++len;
    return rest_.substr(0, len);
  }

 private:
  static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }
  void skip_space() {
    while (!rest_.empty() && is_space(rest_.front())) rest_.remove_prefix(1);
  }

  std::string_view rest_;
};

inline bool is_comment(std::string_view line) { return !line.empty() && line.front() == '%'; }

/// Decodes a METIS/hMetis style fmt token ("1", "10", "011", ...) by digit
/// position from the right.
struct FormatFlags {
  bool last = false;    // edge / net weights
  bool middle = false;  // node weights
  bool first = false;   // node sizes (METIS only)
};

inline FormatFlags parse_format_flags(std::string_view token) {
  FormatFlags flags;
  if (token.size() > 3) throw InputError("fmt field '" + std::string(token) + "' too long");
  for (char c : token) {
    if (c != '0' && c != '1') throw InputError("fmt field '" + std::string(token) + "' must be binary");
  }
  const auto digit = [&](std::size_t from_right) {
    return token.size() > from_right && token[token.size() - 1 - from_right] == '1';
  };
  flags.last = digit(0);
  flags.middle = digit(1);
  flags.first = digit(2);
  return flags;
}

}  // namespace streamdecomp::detail
