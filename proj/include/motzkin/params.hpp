#ifndef MOTZKIN_PARAMS_HPP
#define MOTZKIN_PARAMS_HPP

#include <string>

namespace motzkin {

/// Chain half-length n (the chain has 2n sites), color count s and
/// deformation parameter t.
struct ModelParams {
  int n = 1;
  int s = 1;
  double t = 1.0;

  int length() const { return 2 * n; }
  int local_dim() const { return 2 * s + 1; }

  /// Throws InvalidParams unless n >= 1, s >= 1, t > 0 (finite).
  void validate() const;

  /// Theorem-level hypothesis: s >= 2 and t > 1. Throws PreconditionViolated.
  void require_theorem_regime() const;

  std::string to_string() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

}  // namespace motzkin

#endif  // MOTZKIN_PARAMS_HPP
