#include "toolsim/exact_sum.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace toolsim {

namespace {

constexpr int kScale = 1074;

}  // namespace

void ExactSum::add_shifted(std::uint64_t value, unsigned shift) {
  std::size_t limb = shift / 64;
  const unsigned offset = shift % 64;
  std::uint64_t lo = value << offset;
  std::uint64_t hi = offset == 0 ? 0 : value >> (64 - offset);
  std::uint64_t carry = 0;
  for (std::uint64_t part : {lo, hi}) {
    if (limb >= kLimbs) {
      if (part != 0 || carry != 0) throw std::overflow_error("ExactSum overflow");
      return;
    }
    const std::uint64_t before = limbs_[limb];
    std::uint64_t sum = before + part;
    std::uint64_t c = sum < before ? 1 : 0;
    const std::uint64_t with_carry = sum + carry;
    c += with_carry < sum ? 1 : 0;
    limbs_[limb++] = with_carry;
    carry = c;
  }
  while (carry != 0) {
    if (limb >= kLimbs) throw std::overflow_error("ExactSum overflow");
    limbs_[limb] += 1;
    carry = limbs_[limb] == 0 ? 1 : 0;
    ++limb;
  }
}

ExactSum& ExactSum::add(double x) {
  if (!std::isfinite(x) || x < 0.0) throw std::invalid_argument("ExactSum accepts only finite non-negative values");
  if (x == 0.0) return *this;
  const auto bits = std::bit_cast<std::uint64_t>(x);
  const auto biased = static_cast<unsigned>((bits >> 52) & 0x7ff);
  const std::uint64_t fraction = bits & ((std::uint64_t{1} << 52) - 1);
  if (biased == 0) {
    add_shifted(fraction, 0);
  } else {
    add_shifted(fraction | (std::uint64_t{1} << 52), biased - 1);
  }
  return *this;
}

ExactSum& ExactSum::operator+=(const ExactSum& other) {
  std::uint64_t carry = 0;
  for (std::size_t i = 0; i < kLimbs; ++i) {
    const std::uint64_t a = limbs_[i];
    const std::uint64_t s = a + other.limbs_[i];
    std::uint64_t c = s < a ? 1 : 0;
    const std::uint64_t t = s + carry;
    c += t < s ? 1 : 0;
    limbs_[i] = t;
    carry = c;
  }
  if (carry != 0) throw std::overflow_error("ExactSum overflow");
  return *this;
}

bool ExactSum::is_zero() const {
  for (auto l : limbs_) {
    if (l != 0) return false;
  }
  return true;
}

double ExactSum::to_double() const {
  int top = -1;
  for (int i = static_cast<int>(kLimbs) - 1; i >= 0; --i) {
    if (limbs_[static_cast<std::size_t>(i)] != 0) {
      top = i * 64 + 63 - std::countl_zero(limbs_[static_cast<std::size_t>(i)]);
      break;
    }
  }
  if (top < 0) return 0.0;
  auto bit = [this](int index) -> std::uint64_t {
    return (limbs_[static_cast<std::size_t>(index / 64)] >> (index % 64)) & 1u;
  };
  if (top < 53) {
    // Fits in the significand: exact.
    return std::ldexp(static_cast<double>(limbs_[0]), -kScale);
  }
  const int low = top - 52;  // index of the least significant kept bit
  std::uint64_t mantissa = 0;
  for (int i = top; i >= low; --i) mantissa = (mantissa << 1) | bit(i);
  const bool guard = bit(low - 1) != 0;
  bool sticky = false;
  for (int i = low - 2; i >= 0 && !sticky; --i) {
    if (i % 64 == 63 && limbs_[static_cast<std::size_t>(i / 64)] == 0) {
      i -= 63;
      continue;
    }
    sticky = bit(i) != 0;
  }
  int exponent = low - kScale;
  if (guard && (sticky || (mantissa & 1u))) {
    ++mantissa;
    if (mantissa == (std::uint64_t{1} << 53)) {
      mantissa >>= 1;
      ++exponent;
    }
  }
  return std::ldexp(static_cast<double>(mantissa), exponent);
}

std::strong_ordering operator<=>(const ExactSum& a, const ExactSum& b) {
  for (std::size_t i = ExactSum::kLimbs; i-- > 0;) {
    if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] <=> b.limbs_[i];
  }
  return std::strong_ordering::equal;
}

}  // namespace toolsim
