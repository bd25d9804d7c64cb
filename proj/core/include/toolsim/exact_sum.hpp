#pragma once

#include <array>
#include <compare>
#include <cstdint>

namespace toolsim {

/// Exact accumulator for sums of non-negative finite doubles. The value is
/// held as an integer multiple of 2^-1074 (the smallest subnormal), so every
/// addition is exact and comparisons never depend on summation order.
/// Capacity is ample for sums below 2^50.
class ExactSum {
 public:
  ExactSum() { limbs_.fill(0); }

  /// Throws std::invalid_argument for negative or non-finite input.
  ExactSum& add(double x);
  ExactSum& operator+=(double x) { return add(x); }
  ExactSum& operator+=(const ExactSum& other);

  /// Correctly rounded (round-half-even) nearest double.
  double to_double() const;
  bool is_zero() const;

  friend std::strong_ordering operator<=>(const ExactSum& a, const ExactSum& b);
  friend bool operator==(const ExactSum& a, const ExactSum& b) { return a.limbs_ == b.limbs_; }

 private:
  static constexpr std::size_t kLimbs = 18;  // 1152 bits
  void add_shifted(std::uint64_t value, unsigned shift);

  std::array<std::uint64_t, kLimbs> limbs_;  // little-endian
};

}  // namespace toolsim
