#include "motzkin/errors.hpp"

namespace motzkin {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::OddLength: return "OddLength";
    case ErrorKind::NegativeHeight: return "NegativeHeight";
    case ErrorKind::NonzeroEndpoint: return "NonzeroEndpoint";
    case ErrorKind::ColorMismatch: return "ColorMismatch";
    case ErrorKind::InvalidColor: return "InvalidColor";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::SizeLimitExceeded: return "SizeLimitExceeded";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::NegativeEntry: return "NegativeEntry";
    case ErrorKind::PiAExceedsHalf: return "PiAExceedsHalf";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::InvalidStart: return "InvalidStart";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace motzkin
