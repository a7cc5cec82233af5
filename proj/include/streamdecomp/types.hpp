#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace streamdecomp {

using NodeID = std::uint64_t;
using NetID = std::uint64_t;
using EdgeID = std::uint64_t;
using BlockID = std::int32_t;
using NodeWeight = std::int64_t;
using EdgeWeight = std::int64_t;

inline constexpr BlockID kUnassigned = -1;

/// Malformed or inconsistent input (file format, flags, out-of-range ids).
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// A violated internal invariant; indicates a bug rather than bad input.
class InvariantError : public std::logic_error {
 public:
  explicit InvariantError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace streamdecomp
