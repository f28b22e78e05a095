#include "motzkin/params.hpp"

#include <cmath>
#include <sstream>

#include "motzkin/errors.hpp"

namespace motzkin {

void ModelParams::validate() const {
  if (n < 1) throw MotzkinError(ErrorKind::InvalidParams, "n must be >= 1, got " + std::to_string(n));
  if (s < 1) throw MotzkinError(ErrorKind::InvalidParams, "s must be >= 1, got " + std::to_string(s));
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw MotzkinError(ErrorKind::InvalidParams, "t must be finite and > 0");
  }
}

void ModelParams::require_theorem_regime() const {
  validate();
  if (s < 2) throw MotzkinError(ErrorKind::PreconditionViolated, "requires s >= 2");
  if (!(t > 1.0)) throw MotzkinError(ErrorKind::PreconditionViolated, "requires t > 1");
}

std::string ModelParams::to_string() const {
  std::ostringstream os;
  os.precision(17);
  os << "(n=" << n << ", s=" << s << ", t=" << t << ")";
  return os.str();
}

}  // namespace motzkin
