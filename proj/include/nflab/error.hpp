#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace nflab {

enum class ErrorKind {
  Syntax,
  ExponentRange,
  UnknownIdentifier,
  Indeterminate,
  EssentialSingularity,
  NonHolomorphic,
  PoleAtZStar,
  MaximizationFailed,
  MinUnreliable,
  InvalidArgument,
  Config,
};

const char* to_string(ErrorKind kind);

// Single exception type for the library; callers dispatch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what,
        std::optional<std::size_t> offset = std::nullopt)
      : std::runtime_error(what), kind_(kind), offset_(offset) {}

  ErrorKind kind() const noexcept { return kind_; }
  // Byte offset into the parsed text, for parser errors.
  std::optional<std::size_t> offset() const noexcept { return offset_; }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> offset_;
};

}  // namespace nflab
