#pragma once

// The frozen self-hosted translators. They are produced once by the
// generators in asset_gen.hpp, checked in under assets/ and pinned by the
// SHA-256 digests in assets/MANIFEST.

#include <filesystem>
#include <map>
#include <string>

#include "ctlcode/bitseq.hpp"

namespace ctlcode {

struct AssetSet {
  std::string asm_prime;     // assembler for ASM, written in ASM
  std::string compil_prime;  // SRC to ASM compiler, written in SRC
  std::string compil_i;      // SRC to ICN compiler, written in SRC
  BitSeq interp_exe;         // ICN interpreter, executable
};

/// $CTLCODE_ASSET_DIR when set, else the assets/ directory of the source tree.
std::filesystem::path default_asset_dir();

/// Reads the four assets and verifies every MANIFEST digest. Throws Error.
AssetSet load_assets(const std::filesystem::path& dir);

/// Asset files keyed by path relative to the asset directory, including the
/// readable sources the ASM and executable assets were compiled from.
std::map<std::string, std::string> generate_asset_files();

/// Writes generate_asset_files() and a fresh MANIFEST into `dir`.
void write_assets(const std::filesystem::path& dir);

/// asm_0 := host_assemble(asm').
BitSeq bootstrap_assembler(const AssetSet& assets);

}  // namespace ctlcode
