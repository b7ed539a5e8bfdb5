#pragma once

#include <stdexcept>
#include <string>

namespace projektor {

enum class ErrorCode {
  InputError,
  EmptySubspace,
  Empty,
  ZeroNorm,
  PreconditionViolated,
  ConstructionFailed,
  ChainDegraded,
  Exhausted,
  Mismatch,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace projektor
