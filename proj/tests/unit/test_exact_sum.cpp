#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "toolsim/exact_sum.hpp"

using toolsim::ExactSum;

TEST(ExactSum, EmptyIsZero) {
  ExactSum s;
  EXPECT_TRUE(s.is_zero());
  EXPECT_EQ(s.to_double(), 0.0);
}

TEST(ExactSum, TenthsRoundOnce) {
  ExactSum s;
  std::vector<double> v(10, 0.1);
  for (double x : v) s += x;
  // Naive left-to-right summation gives 0.9999999999999999.
  EXPECT_EQ(s.to_double(), 1.0);
  EXPECT_EQ(s.to_double(), oracle::fsum(v));
}

TEST(ExactSum, SubnormalsAndLargeValues) {
  ExactSum s;
  const double tiny = std::numeric_limits<double>::denorm_min();
  s += tiny;
  s += 1e12;
  s += tiny;
  EXPECT_EQ(s.to_double(), 1e12);
  ExactSum t;
  t += tiny;
  t += tiny;
  EXPECT_EQ(t.to_double(), 2 * tiny);
}

TEST(ExactSum, RejectsNegativeAndNonFinite) {
  ExactSum s;
  EXPECT_THROW(s += -1.0, std::invalid_argument);
  EXPECT_THROW(s += std::numeric_limits<double>::infinity(), std::invalid_argument);
  EXPECT_THROW(s += std::nan(""), std::invalid_argument);
}

TEST(ExactSum, OrderIndependentComparison) {
  ExactSum a, b;
  a += 0.1;
  a += 0.2;
  b += 0.2;
  b += 0.1;
  EXPECT_EQ(a, b);
  ExactSum c;
  c += 0.3;
  EXPECT_NE(a, c);  // 0.1 + 0.2 and 0.3 differ exactly
  EXPECT_TRUE((a <=> c) != 0);
}

TEST(ExactSum, MatchesFsumOnRandomSums) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> len(1, 40);
  std::uniform_int_distribution<int> exp(-60, 60);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<double> v;
    ExactSum s;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) {
      double x = u(rng);
      if (trial % 3 == 0) x = std::ldexp(x, exp(rng));
      v.push_back(x);
      s += x;
    }
    ASSERT_EQ(s.to_double(), oracle::fsum(v)) << "trial " << trial;
  }
}

TEST(ExactSum, MergeEqualsSequentialAdds) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 4.0);
  for (int trial = 0; trial < 200; ++trial) {
    ExactSum left, right, all;
    for (int i = 0; i < 10; ++i) {
      const double x = u(rng);
      (i % 2 ? left : right) += x;
      all += x;
    }
    left += right;
    ASSERT_EQ(left, all);
  }
}
