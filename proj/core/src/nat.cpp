#include "ctlcode/nat.hpp"

#include <limits>

namespace ctlcode {

Nat::Nat(const Big& v) { *this = normalize(v); }

Nat Nat::normalize(Big v) {
  Nat n;
  if (v <= Big(std::numeric_limits<std::uint64_t>::max())) {
    n.small_ = static_cast<std::uint64_t>(v);
  } else {
    n.big_ = std::make_shared<const Big>(std::move(v));
  }
  return n;
}

Nat::Big Nat::to_big() const { return big_ ? *big_ : Big(small_); }

bool Nat::odd() const { return big_ ? bit_test(*big_, 0) : (small_ & 1U) != 0; }

Nat operator+(const Nat& a, const Nat& b) {
  std::uint64_t r;
  if (a.is_small() && b.is_small() && !__builtin_add_overflow(a.small_, b.small_, &r)) return r;
  return Nat::normalize(a.to_big() + b.to_big());
}

Nat operator*(const Nat& a, const Nat& b) {
  std::uint64_t r;
  if (a.is_small() && b.is_small() && !__builtin_mul_overflow(a.small_, b.small_, &r)) return r;
  return Nat::normalize(a.to_big() * b.to_big());
}

Nat monus(const Nat& a, const Nat& b) {
  if (a.is_small() && b.is_small()) return a.small_ > b.small_ ? a.small_ - b.small_ : 0;
  if (a <= b) return Nat();
  return Nat::normalize(a.to_big() - b.to_big());
}

Nat total_div(const Nat& a, const Nat& b) {
  if (b.is_zero()) return Nat();
  if (a.is_small() && b.is_small()) return a.small_ / b.small_;
  return Nat::normalize(a.to_big() / b.to_big());
}

Nat total_mod(const Nat& a, const Nat& b) {
  if (b.is_zero()) return Nat();
  if (a.is_small() && b.is_small()) return a.small_ % b.small_;
  return Nat::normalize(a.to_big() % b.to_big());
}

bool operator==(const Nat& a, const Nat& b) {
  if (a.is_small() != b.is_small()) return false;  // normalized representation
  return a.is_small() ? a.small_ == b.small_ : *a.big_ == *b.big_;
}

std::strong_ordering operator<=>(const Nat& a, const Nat& b) {
  if (a.is_small() && b.is_small()) return a.small_ <=> b.small_;
  if (a.is_small()) return std::strong_ordering::less;
  if (b.is_small()) return std::strong_ordering::greater;
  int c = a.big_->compare(*b.big_);
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

std::string Nat::to_string() const { return big_ ? big_->str() : std::to_string(small_); }

}  // namespace ctlcode
