#pragma once

#include <stdexcept>
#include <string>

namespace nlwave {

/// Base of all library errors. `kind` separates bad inputs (CLI exit 1)
/// from runtime failures of a computation (CLI exit 2).
class Error : public std::runtime_error {
 public:
  enum class Kind { Input, Runtime };

  Error(Kind kind, std::string code, const std::string& msg)
      : std::runtime_error(msg), kind_(kind), code_(std::move(code)) {}

  Kind kind() const { return kind_; }
  const std::string& code() const { return code_; }

 private:
  Kind kind_;
  std::string code_;
};

#define NLWAVE_DEFINE_ERROR(Name, KindValue)                      \
  class Name : public Error {                                     \
   public:                                                        \
    explicit Name(const std::string& msg)                         \
        : Error(Error::Kind::KindValue, #Name, msg) {}            \
  };

NLWAVE_DEFINE_ERROR(ConfigError, Input)
NLWAVE_DEFINE_ERROR(InvalidArgument, Input)
NLWAVE_DEFINE_ERROR(LengthMismatch, Input)
NLWAVE_DEFINE_ERROR(NonPositiveParameter, Input)
NLWAVE_DEFINE_ERROR(OutOfTableRange, Input)
NLWAVE_DEFINE_ERROR(DecayViolation, Input)
NLWAVE_DEFINE_ERROR(NonPositiveSymbol, Input)
NLWAVE_DEFINE_ERROR(SpeedTooSlow, Input)
NLWAVE_DEFINE_ERROR(SingularSymbol, Input)

NLWAVE_DEFINE_ERROR(NonRealResult, Runtime)
NLWAVE_DEFINE_ERROR(NonFiniteState, Runtime)
NLWAVE_DEFINE_ERROR(ZeroDenominator, Runtime)
NLWAVE_DEFINE_ERROR(DivergenceDetected, Runtime)

#undef NLWAVE_DEFINE_ERROR

}  // namespace nlwave
