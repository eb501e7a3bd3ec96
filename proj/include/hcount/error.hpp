#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hcount {

enum class ErrorCode {
  InvalidHypergraph,
  IsolatedVertex,
  TooLarge,
  UnknownPatternVertex,
  SizeMismatch,
  EdgeTooLarge,
  DuplicateVertexInEdge,
  VertexIdOutOfRange,
  BasisMismatch,
  ConfigMismatch,
  VersionMismatch,
  FingerprintMismatch,
  CorruptPayload,
  InvalidEpsilon,
  TooFewCopies,
  ParseError,
  SizeLimit,
  Io,
  Usage,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure in the library surfaces as an Error carrying a code and, for
// text inputs, the 1-based line number that triggered it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> line = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> line() const noexcept { return line_; }
  const std::string& detail() const noexcept { return detail_; }

  // Same error with a prefix such as a file name.
  Error with_context(const std::string& context) const {
    return Error(code_, context + ": " + detail_, line_);
  }

 private:
  ErrorCode code_;
  std::string detail_;
  std::optional<std::size_t> line_;
};

}  // namespace hcount
