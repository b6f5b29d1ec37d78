#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <compare>
#include <cstdint>
#include <memory>
#include <string>

namespace ctlcode {

/// Unbounded natural number with a 64-bit fast path. Subtraction is monus
/// (truncated at zero); division and remainder by zero yield zero.
class Nat {
 public:
  using Big = boost::multiprecision::cpp_int;

  Nat() = default;
  Nat(std::uint64_t v) : small_(v) {}  // NOLINT(google-explicit-constructor)
  explicit Nat(const Big& v);

  bool is_small() const { return !big_; }
  std::uint64_t small() const { return small_; }
  Big to_big() const;
  bool is_zero() const { return !big_ && small_ == 0; }
  bool odd() const;

  friend Nat operator+(const Nat& a, const Nat& b);
  friend Nat operator*(const Nat& a, const Nat& b);
  friend Nat monus(const Nat& a, const Nat& b);
  friend Nat total_div(const Nat& a, const Nat& b);
  friend Nat total_mod(const Nat& a, const Nat& b);

  friend bool operator==(const Nat& a, const Nat& b);
  friend std::strong_ordering operator<=>(const Nat& a, const Nat& b);

  std::string to_string() const;

 private:
  static Nat normalize(Big v);

  std::uint64_t small_ = 0;
  std::shared_ptr<const Big> big_;  // set only when the value exceeds 64 bits
};

}  // namespace ctlcode
