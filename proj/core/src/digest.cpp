#include "ctlcode/digest.hpp"

#include <openssl/evp.h>

#include <array>
#include <memory>

#include "ctlcode/error.hpp"
#include "ctlcode/translators.hpp"

namespace ctlcode {

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 15];
  }
  return out;
}

std::vector<ManifestEntry> parse_digest_manifest(std::string_view text) {
  std::vector<ManifestEntry> out;
  std::size_t line = 0;
  for (auto l : split_lines(text)) {
    ++line;
    if (l.empty() || l.front() == '#') continue;
    auto sep = l.find("  ");
    if (sep != 64 || l.size() <= 66) throw ParseError(line, "expected `<sha256>  <path>`");
    out.push_back({std::string(l.substr(0, 64)), std::string(l.substr(66))});
  }
  return out;
}

std::string format_digest_manifest(const std::vector<ManifestEntry>& entries) {
  std::string out;
  for (const auto& e : entries) out += e.digest + "  " + e.path + "\n";
  return out;
}

}  // namespace ctlcode
