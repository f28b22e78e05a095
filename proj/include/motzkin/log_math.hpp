#ifndef MOTZKIN_LOG_MATH_HPP
#define MOTZKIN_LOG_MATH_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace motzkin {

// log(sum_i exp(args[i])), shifted by the max argument.
inline double log_sum_exp(std::span<const double> args) {
  if (args.empty()) return -std::numeric_limits<double>::infinity();
  const double top = *std::max_element(args.begin(), args.end());
  if (!std::isfinite(top)) return top;
  double sum = 0.0;
  for (double a : args) sum += std::exp(a - top);
  return top + std::log(sum);
}

// log(exp(a) + exp(b))
inline double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a + std::log1p(std::exp(b - a));
}

}  // namespace motzkin

#endif  // MOTZKIN_LOG_MATH_HPP
