#ifndef MOTZKIN_ERRORS_HPP
#define MOTZKIN_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace motzkin {

enum class ErrorKind {
  OddLength,
  NegativeHeight,
  NonzeroEndpoint,
  ColorMismatch,
  InvalidColor,
  ParseError,
  InvalidParams,
  SizeLimitExceeded,
  NoConvergence,
  NotPSD,
  NegativeEntry,
  PiAExceedsHalf,
  PreconditionViolated,
  InvalidStart,
  IoError,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for the library; callers branch on kind().
class MotzkinError : public std::runtime_error {
 public:
  MotzkinError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace motzkin

#endif  // MOTZKIN_ERRORS_HPP
