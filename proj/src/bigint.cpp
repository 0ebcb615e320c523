#include "wordent/bigint.hpp"

#include <algorithm>
#include <cmath>

namespace wordent {

using u128 = unsigned __int128;

BigUint BigUint::pow(uint64_t base, unsigned exp) {
  BigUint r(1);
  for (unsigned i = 0; i < exp; ++i) r.mul_small(base);
  return r;
}

size_t BigUint::bit_width() const {
  if (limbs_.empty()) return 0;
  return 64 * (limbs_.size() - 1) + (64 - __builtin_clzll(limbs_.back()));
}

BigUint& BigUint::operator+=(const BigUint& rhs) {
  if (rhs.limbs_.size() > limbs_.size()) limbs_.resize(rhs.limbs_.size(), 0);
  uint64_t carry = 0;
  for (size_t i = 0; i < limbs_.size(); ++i) {
    u128 s = (u128)limbs_[i] + carry + (i < rhs.limbs_.size() ? rhs.limbs_[i] : 0);
    limbs_[i] = (uint64_t)s;
    carry = (uint64_t)(s >> 64);
  }
  if (carry) limbs_.push_back(carry);
  return *this;
}

BigUint& BigUint::mul_small(uint64_t k) {
  if (k == 0 || limbs_.empty()) {
    limbs_.clear();
    return *this;
  }
  uint64_t carry = 0;
  for (auto& l : limbs_) {
    u128 p = (u128)l * k + carry;
    l = (uint64_t)p;
    carry = (uint64_t)(p >> 64);
  }
  if (carry) limbs_.push_back(carry);
  return *this;
}

BigUint operator*(const BigUint& a, const BigUint& b) {
  BigUint r;
  if (a.limbs_.empty() || b.limbs_.empty()) return r;
  r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
  for (size_t i = 0; i < a.limbs_.size(); ++i) {
    uint64_t carry = 0;
    for (size_t j = 0; j < b.limbs_.size(); ++j) {
      u128 p = (u128)a.limbs_[i] * b.limbs_[j] + r.limbs_[i + j] + carry;
      r.limbs_[i + j] = (uint64_t)p;
      carry = (uint64_t)(p >> 64);
    }
    r.limbs_[i + b.limbs_.size()] += carry;
  }
  r.trim();
  return r;
}

uint64_t BigUint::divmod_small(uint64_t d) {
  u128 rem = 0;
  for (size_t i = limbs_.size(); i-- > 0;) {
    u128 cur = (rem << 64) | limbs_[i];
    limbs_[i] = (uint64_t)(cur / d);
    rem = cur % d;
  }
  trim();
  return (uint64_t)rem;
}

std::strong_ordering BigUint::operator<=>(const BigUint& rhs) const {
  if (limbs_.size() != rhs.limbs_.size())
    return limbs_.size() <=> rhs.limbs_.size();
  for (size_t i = limbs_.size(); i-- > 0;)
    if (limbs_[i] != rhs.limbs_[i]) return limbs_[i] <=> rhs.limbs_[i];
  return std::strong_ordering::equal;
}

double BigUint::log_nat() const {
  size_t bits = bit_width();
  if (bits <= 64) return std::log((double)limbs_[0]);
  // top 64 bits as mantissa
  size_t shift = bits - 64;
  size_t limb = shift / 64, off = shift % 64;
  uint64_t m = limbs_[limb] >> off;
  if (off && limb + 1 < limbs_.size()) m |= limbs_[limb + 1] << (64 - off);
  return std::log((double)m) + (double)shift * 0.6931471805599453;
}

double BigUint::to_double() const {
  double r = 0;
  for (size_t i = limbs_.size(); i-- > 0;) r = r * 1.8446744073709552e19 + (double)limbs_[i];
  return r;
}

std::string BigUint::to_string() const {
  if (limbs_.empty()) return "0";
  BigUint tmp = *this;
  std::string out;
  while (!tmp.is_zero()) {
    uint64_t r = tmp.divmod_small(10000000000000000000ull);
    std::string chunk = std::to_string(r);
    if (!tmp.is_zero())
      chunk = std::string(19 - chunk.size(), '0') + chunk;
    out = chunk + out;
  }
  return out;
}

}  // namespace wordent
