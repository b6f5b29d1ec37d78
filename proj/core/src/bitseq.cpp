#include "ctlcode/bitseq.hpp"

#include <stdexcept>

namespace ctlcode {

BitSeq::BitSeq(std::initializer_list<int> bits) {
  bits_.reserve(bits.size());
  for (int b : bits) {
    if (b != 0 && b != 1) throw std::invalid_argument("bit must be 0 or 1");
    bits_.push_back(b == 1);
  }
}

BitSeq BitSeq::parse(std::string_view text) {
  BitSeq out;
  if (!text.empty() && text.front() == 'x') {
    for (char c : text.substr(1)) {
      int v;
      if (c >= '0' && c <= '9') {
        v = c - '0';
      } else if (c >= 'a' && c <= 'f') {
        v = c - 'a' + 10;
      } else if (c >= 'A' && c <= 'F') {
        v = c - 'A' + 10;
      } else {
        throw std::invalid_argument("bad hex digit in bit sequence: " + std::string(text));
      }
      out.append_uint(static_cast<std::uint64_t>(v), 4);
    }
    return out;
  }
  out.bits_.reserve(text.size());
  for (char c : text) {
    if (c == '0') {
      out.bits_.push_back(false);
    } else if (c == '1') {
      out.bits_.push_back(true);
    } else {
      throw std::invalid_argument("bad character in bit sequence: '" + std::string(1, c) + "'");
    }
  }
  return out;
}

BitSeq BitSeq::from_ascii(std::string_view text) {
  BitSeq out;
  out.bits_.reserve(text.size() * 8);
  for (unsigned char c : text) out.append_uint(c, 8);
  return out;
}

bool BitSeq::to_ascii(std::string& out) const {
  if (bits_.size() % 8 != 0) return false;
  out.clear();
  out.reserve(bits_.size() / 8);
  for (std::size_t i = 0; i < bits_.size(); i += 8) {
    out.push_back(static_cast<char>(read_uint(i, 8)));
  }
  return true;
}

void BitSeq::append_uint(std::uint64_t value, unsigned width) {
  for (unsigned k = width; k-- > 0;) bits_.push_back(((value >> k) & 1U) != 0);
}

std::uint64_t BitSeq::read_uint(std::size_t offset, unsigned width) const {
  std::uint64_t v = 0;
  for (unsigned k = 0; k < width; ++k) v = (v << 1) | (bits_[offset + k] ? 1U : 0U);
  return v;
}

void BitSeq::append(const BitSeq& other) {
  bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
}

BitSeq BitSeq::slice(std::size_t offset, std::size_t length) const {
  if (offset > bits_.size() || length > bits_.size() - offset) {
    throw std::out_of_range("bit sequence slice out of range");
  }
  return BitSeq(std::vector<bool>(bits_.begin() + static_cast<std::ptrdiff_t>(offset),
                                  bits_.begin() + static_cast<std::ptrdiff_t>(offset + length)));
}

std::string BitSeq::to_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (bool b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

std::string BitSeq::abbrev(std::size_t limit) const {
  if (bits_.empty()) return "ε";
  if (bits_.size() <= limit) return to_string();
  return "<" + std::to_string(bits_.size()) + " bits: " + slice(0, limit).to_string() + "...>";
}

std::strong_ordering operator<=>(const BitSeq& a, const BitSeq& b) {
  if (auto c = a.size() <=> b.size(); c != 0) return c;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  return std::strong_ordering::equal;
}

BitSeq concat(const BitSeq& a, const BitSeq& b) {
  BitSeq out = a;
  out.append(b);
  return out;
}

}  // namespace ctlcode
