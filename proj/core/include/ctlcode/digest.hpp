#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ctlcode {

/// Lower-case hexadecimal SHA-256.
std::string sha256_hex(std::string_view bytes);

struct ManifestEntry {
  std::string digest;
  std::string path;  // relative to the manifest's directory
};

/// `sha256sum` layout: `<hex>  <path>` per line. Throws ParseError.
std::vector<ManifestEntry> parse_digest_manifest(std::string_view text);
std::string format_digest_manifest(const std::vector<ManifestEntry>& entries);

}  // namespace ctlcode
