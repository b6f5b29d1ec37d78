#include "ctlcode/assets.hpp"

#include <cstdlib>

#include "ctlcode/asset_gen.hpp"
#include "ctlcode/digest.hpp"
#include "ctlcode/error.hpp"
#include "ctlcode/file_formats.hpp"
#include "ctlcode/translators.hpp"

#ifndef CTLCODE_ASSET_DIR
#define CTLCODE_ASSET_DIR "assets"
#endif

namespace ctlcode {

namespace fs = std::filesystem;

fs::path default_asset_dir() {
  if (const char* env = std::getenv("CTLCODE_ASSET_DIR"); env && *env) return env;
  return CTLCODE_ASSET_DIR;
}

AssetSet load_assets(const fs::path& dir) {
  const auto manifest = parse_digest_manifest(read_file(dir / "MANIFEST"));
  std::map<std::string, std::string> contents;
  for (const auto& e : manifest) {
    auto body = read_file(dir / e.path);
    if (sha256_hex(body) != e.digest) throw Error("digest mismatch for " + (dir / e.path).string());
    contents.emplace(e.path, std::move(body));
  }
  auto need = [&](const std::string& name) -> const std::string& {
    auto it = contents.find(name);
    if (it == contents.end()) throw Error("MANIFEST does not pin " + name);
    return it->second;
  };
  AssetSet a;
  a.asm_prime = need("asm_prime.asm");
  a.compil_prime = need("compil_prime.src");
  a.compil_i = need("compil_i.src");
  try {
    a.interp_exe = parse_exe_txt(need("interp.exe.txt"));
  } catch (const ParseError& e) {
    throw Error("interp.exe.txt: " + std::string(e.what()));
  }
  return a;
}

std::map<std::string, std::string> generate_asset_files() {
  const auto assembler_src = generate_assembler_src();
  const auto interp_src = generate_interpreter_src();
  return {
      {"src/assembler.src", assembler_src},
      {"src/interp.src", interp_src},
      {"asm_prime.asm", host_compile(assembler_src)},
      {"compil_prime.src", generate_compiler_src(CompilerTarget::Assembly)},
      {"compil_i.src", generate_compiler_src(CompilerTarget::Intermediate)},
      {"interp.exe.txt", format_exe_txt(host_assemble(host_compile(interp_src)))},
  };
}

void write_assets(const fs::path& dir) {
  std::vector<ManifestEntry> entries;
  for (const auto& [name, body] : generate_asset_files()) {
    fs::create_directories((dir / name).parent_path());
    write_file(dir / name, body);
    entries.push_back({sha256_hex(body), name});
  }
  write_file(dir / "MANIFEST", format_digest_manifest(entries));
}

BitSeq bootstrap_assembler(const AssetSet& assets) {
  try {
    return host_assemble(assets.asm_prime);
  } catch (const ParseError& e) {
    throw Error("asm_prime.asm does not assemble: " + std::string(e.what()));
  }
}

}  // namespace ctlcode
