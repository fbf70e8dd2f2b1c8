#include "stabgen/error.hpp"

namespace stabgen {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kMalformedSequence: return "MalformedSequence";
    case ErrorKind::kNonFinite: return "NonFinite";
    case ErrorKind::kUnencodable: return "Unencodable";
    case ErrorKind::kEvalSingular: return "EvalSingular";
    case ErrorKind::kEvalOverflow: return "EvalOverflow";
    case ErrorKind::kComplexValue: return "ComplexValue";
    case ErrorKind::kNoConvergence: return "NoConvergence";
    case ErrorKind::kOverflow: return "Overflow";
    case ErrorKind::kQuadratureStall: return "QuadratureStall";
    case ErrorKind::kGramianSingular: return "GramianSingular";
    case ErrorKind::kNonIntegerRecurrence: return "NonIntegerRecurrence";
    case ErrorKind::kUnknownVariant: return "UnknownVariant";
    case ErrorKind::kInvalidConfig: return "InvalidConfig";
    case ErrorKind::kTargetUnreachable: return "TargetUnreachable";
    case ErrorKind::kIo: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

MalformedSequence::MalformedSequence(std::size_t index, const std::string& reason)
    : Error(ErrorKind::kMalformedSequence,
            reason + " at token " + std::to_string(index)),
      index_(index) {}

}  // namespace stabgen
