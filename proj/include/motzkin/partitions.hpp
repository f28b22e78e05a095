#ifndef MOTZKIN_PARTITIONS_HPP
#define MOTZKIN_PARTITIONS_HPP

#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace motzkin {

/// p(0)..p(max_a) by Euler's pentagonal-number recurrence, exact.
class PartitionTable {
 public:
  explicit PartitionTable(int max_a);

  int max_a() const { return static_cast<int>(counts_.size()) - 1; }
  const boost::multiprecision::cpp_int& operator[](int a) const { return counts_.at(a); }
  double as_double(int a) const;

 private:
  std::vector<boost::multiprecision::cpp_int> counts_;
};

boost::multiprecision::cpp_int partition_count(int a);

/// exp(pi sqrt(2a/3)) / (4 sqrt(3) a); a must be positive.
double hardy_ramanujan(double a);

}  // namespace motzkin

#endif  // MOTZKIN_PARTITIONS_HPP
