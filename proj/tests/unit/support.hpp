#pragma once

// Shared helpers for the unit suites: repository paths, a cached asset load
// and a small program builder.

#include <filesystem>
#include <string>

#include "ctlcode/assets.hpp"
#include "ctlcode/toy_machine.hpp"

namespace test {

inline std::filesystem::path source_dir() { return CTLCODE_SOURCE_DIR; }
inline std::filesystem::path corpora() { return source_dir() / "corpora"; }

inline const ctlcode::AssetSet& assets() {
  static const ctlcode::AssetSet a = ctlcode::load_assets(source_dir() / "assets");
  return a;
}

inline ctlcode::ToyProgram prog(std::initializer_list<ctlcode::ToyInstruction> ins) {
  return ctlcode::ToyProgram{std::vector<ctlcode::ToyInstruction>(ins)};
}

inline ctlcode::BitSeq bits(const std::string& s) { return ctlcode::BitSeq::parse(s); }

}  // namespace test
