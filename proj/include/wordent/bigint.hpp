#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace wordent {

/// Arbitrary-precision unsigned integer, little-endian 64-bit limbs.
/// Supports exactly what the budgets and certificates need: addition,
/// multiplication, small-divisor division, comparison and natural log.
class BigUint {
 public:
  BigUint() = default;
  BigUint(uint64_t v) {  // NOLINT: implicit by design
    if (v) limbs_.push_back(v);
  }
  static BigUint pow(uint64_t base, unsigned exp);

  bool is_zero() const { return limbs_.empty(); }
  bool fits_u64() const { return limbs_.size() <= 1; }
  uint64_t as_u64() const { return limbs_.empty() ? 0 : limbs_[0]; }
  size_t limb_count() const { return limbs_.size(); }
  size_t bit_width() const;

  BigUint& operator+=(const BigUint& rhs);
  friend BigUint operator+(BigUint a, const BigUint& b) { return a += b; }
  BigUint& mul_small(uint64_t k);
  friend BigUint operator*(const BigUint& a, const BigUint& b);

  /// Divides in place by d (d != 0), returns the remainder.
  uint64_t divmod_small(uint64_t d);

  std::strong_ordering operator<=>(const BigUint& rhs) const;
  bool operator==(const BigUint& rhs) const { return limbs_ == rhs.limbs_; }

  /// Natural log; requires a nonzero value. Accurate to ~1e-15 relative.
  double log_nat() const;
  double to_double() const;  // +inf on overflow
  std::string to_string() const;

 private:
  void trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
  }
  std::vector<uint64_t> limbs_;
};

}  // namespace wordent
