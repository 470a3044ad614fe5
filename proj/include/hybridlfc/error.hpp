#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hybridlfc {

enum class ErrorCode {
  InvalidBand,
  OrderOutOfRange,
  InvalidArgument,
  OutOfOrderTime,
  NonFiniteState,
  ZeroNominal,
  DegenerateState,
  DegenerateAggregate,
  Config,
  SlewViolation,
};

constexpr std::string_view error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidBand: return "invalid-band";
    case ErrorCode::OrderOutOfRange: return "order-out-of-range";
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::OutOfOrderTime: return "out-of-order-time";
    case ErrorCode::NonFiniteState: return "non-finite-state";
    case ErrorCode::ZeroNominal: return "zero-nominal";
    case ErrorCode::DegenerateState: return "degenerate-state";
    case ErrorCode::DegenerateAggregate: return "degenerate-aggregate";
    case ErrorCode::Config: return "config";
    case ErrorCode::SlewViolation: return "slew-violation";
  }
  return "unknown";
}

/// Single exception type for the library; `code()` identifies the fault.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hybridlfc
