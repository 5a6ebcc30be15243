#pragma once

#include <stdexcept>
#include <string>

namespace shiftlab {

enum class ErrorCode {
  InvalidInput,
  PrecisionExhausted,
  Undecided,
  NotInSystem,
  LimitExceeded,
  InsufficientPrefix,
  WeightsNotNormalized,
  ModeMismatch,
  SupportTooLarge,
  NoClosureInRange,
  NotReadable,
  NoCountsInRange,
  HorizonTooSmall,
  Usage,
};

const char* to_string(ErrorCode code) noexcept;

// Guard and search-bound failures map to exit code 3, everything else to 2.
bool is_limit_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace shiftlab
