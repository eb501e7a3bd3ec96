#include "hcount/error.hpp"

namespace hcount {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidHypergraph: return "InvalidHypergraph";
    case ErrorCode::IsolatedVertex: return "IsolatedVertex";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::UnknownPatternVertex: return "UnknownPatternVertex";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::EdgeTooLarge: return "EdgeTooLarge";
    case ErrorCode::DuplicateVertexInEdge: return "DuplicateVertexInEdge";
    case ErrorCode::VertexIdOutOfRange: return "VertexIdOutOfRange";
    case ErrorCode::BasisMismatch: return "BasisMismatch";
    case ErrorCode::ConfigMismatch: return "ConfigMismatch";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::FingerprintMismatch: return "FingerprintMismatch";
    case ErrorCode::CorruptPayload: return "CorruptPayload";
    case ErrorCode::InvalidEpsilon: return "InvalidEpsilon";
    case ErrorCode::TooFewCopies: return "TooFewCopies";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SizeLimit: return "SizeLimit";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Usage: return "Usage";
  }
  return "Unknown";
}

namespace {

std::string decorate(ErrorCode code, const std::string& message,
                     std::optional<std::size_t> line) {
  std::string out(to_string(code));
  if (line) out += " at line " + std::to_string(*line);
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> line)
    : std::runtime_error(decorate(code, message, line)),
      code_(code),
      detail_(message),
      line_(line) {}

}  // namespace hcount
