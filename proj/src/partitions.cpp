#include "motzkin/partitions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "motzkin/errors.hpp"

namespace motzkin {

PartitionTable::PartitionTable(int max_a) {
  if (max_a < 0) throw MotzkinError(ErrorKind::InvalidParams, "partition table size must be >= 0");
  counts_.assign(static_cast<std::size_t>(max_a) + 1, 0);
  counts_[0] = 1;
  // p(a) = sum_{k>=1} (-1)^{k+1} [p(a - k(3k-1)/2) + p(a - k(3k+1)/2)]
  for (int a = 1; a <= max_a; ++a) {
    boost::multiprecision::cpp_int sum = 0;
    for (int k = 1;; ++k) {
      const int g1 = k * (3 * k - 1) / 2;
      if (g1 > a) break;
      const int g2 = k * (3 * k + 1) / 2;
      boost::multiprecision::cpp_int term = counts_[a - g1];
      if (g2 <= a) term += counts_[a - g2];
      if (k % 2 == 1) {
        sum += term;
      } else {
        sum -= term;
      }
    }
    counts_[a] = sum;
  }
}

double PartitionTable::as_double(int a) const { return counts_.at(a).convert_to<double>(); }

boost::multiprecision::cpp_int partition_count(int a) { return PartitionTable(a)[a]; }

double hardy_ramanujan(double a) {
  if (!(a > 0.0)) throw MotzkinError(ErrorKind::InvalidParams, "Hardy-Ramanujan estimate needs a > 0");
  return std::exp(std::numbers::pi * std::sqrt(2.0 * a / 3.0)) / (4.0 * std::sqrt(3.0) * a);
}

}  // namespace motzkin
