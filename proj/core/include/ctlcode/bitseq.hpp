#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ctlcode {

/// A finite sequence of binary digits. The empty sequence is a valid value.
///
/// Textual form: a string over {0,1} (empty string for the empty sequence),
/// or `x` followed by hex digits, expanded big-endian, four bits per digit.
class BitSeq {
 public:
  BitSeq() = default;
  BitSeq(std::initializer_list<int> bits);
  explicit BitSeq(std::vector<bool> bits) : bits_(std::move(bits)) {}

  /// Parses the 0/1 form or the `x`-prefixed hex form. Throws
  /// std::invalid_argument on any other character.
  static BitSeq parse(std::string_view text);

  /// ASCII encoding: 8 bits per byte, most significant bit first.
  static BitSeq from_ascii(std::string_view text);

  /// Inverse of from_ascii; false when the length is not a multiple of 8.
  bool to_ascii(std::string& out) const;

  /// Appends the low `width` bits of `value`, most significant first.
  void append_uint(std::uint64_t value, unsigned width);

  std::uint64_t read_uint(std::size_t offset, unsigned width) const;

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  bool operator[](std::size_t i) const { return bits_[i]; }
  void push_back(bool bit) { bits_.push_back(bit); }
  void append(const BitSeq& other);
  BitSeq slice(std::size_t offset, std::size_t length) const;

  std::string to_string() const;
  /// Short rendering for reports: full text up to `limit` bits, otherwise a
  /// length-and-prefix summary.
  std::string abbrev(std::size_t limit = 48) const;

  const std::vector<bool>& bits() const { return bits_; }

  friend bool operator==(const BitSeq&, const BitSeq&) = default;
  friend std::strong_ordering operator<=>(const BitSeq& a, const BitSeq& b);

 private:
  std::vector<bool> bits_;
};

BitSeq concat(const BitSeq& a, const BitSeq& b);

/// A finite sequence of bit sequences, the argument type of machine functions.
using BitSeqs = std::vector<BitSeq>;

}  // namespace ctlcode

template <>
struct std::hash<ctlcode::BitSeq> {
  std::size_t operator()(const ctlcode::BitSeq& b) const noexcept {
    return std::hash<std::vector<bool>>{}(b.bits());
  }
};
