#include "projektor/error.hpp"

namespace projektor {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InputError: return "INPUT_ERROR";
    case ErrorCode::EmptySubspace: return "EMPTY_SUBSPACE";
    case ErrorCode::Empty: return "EMPTY";
    case ErrorCode::ZeroNorm: return "ZERO_NORM";
    case ErrorCode::PreconditionViolated: return "PRECONDITION_VIOLATED";
    case ErrorCode::ConstructionFailed: return "CONSTRUCTION_FAILED";
    case ErrorCode::ChainDegraded: return "CHAIN_DEGRADED";
    case ErrorCode::Exhausted: return "EXHAUSTED";
    case ErrorCode::Mismatch: return "MISMATCH";
  }
  return "UNKNOWN";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace projektor
