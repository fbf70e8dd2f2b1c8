#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace stabgen {

enum class ErrorKind {
  kInvalidArgument,
  kMalformedSequence,
  kNonFinite,
  kUnencodable,  // float exponent outside the single-digit vocabulary range
  kEvalSingular,
  kEvalOverflow,
  kComplexValue,  // complex Jacobian / equilibrium where a real one is required
  kNoConvergence,
  kOverflow,
  kQuadratureStall,
  kGramianSingular,
  kNonIntegerRecurrence,
  kUnknownVariant,
  kInvalidConfig,
  kTargetUnreachable,
  kIo,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by the token parsers; `index()` is the position of the offending
/// token (or the sequence length when the input is truncated).
class MalformedSequence : public Error {
 public:
  MalformedSequence(std::size_t index, const std::string& reason);

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

}  // namespace stabgen
