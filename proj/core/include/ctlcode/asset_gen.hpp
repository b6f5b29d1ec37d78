#pragma once

// Generators for the self-hosted TM programs: an ASM assembler, SRC compilers
// targeting ASM and ICN, and an ICN interpreter. Each is produced as SRC text
// by a small structured emitter and then frozen under assets/ with digests.
//
// Output convention of the three translators, on a single input argument:
//   success  out1 = translation, out2 = empty, out3 = 1
//   failure  out1 = empty, out2 = "error: line N\n" (ASCII), out3 = 0

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ctlcode/toy_machine.hpp"

namespace ctlcode {

/// Base-32 value of an upper-case word with A=1 .. Z=26.
std::uint64_t mnemonic_hash(std::string_view word);

/// Line-oriented SRC emitter with named cells, a constant pool, fresh labels
/// and non-recursive subroutines.
class SrcBuilder {
 public:
  /// Cells are handed out from `first_cell` in steps of `stride`.
  SrcBuilder(std::uint64_t first_cell, std::uint64_t stride);

  std::uint64_t var(const std::string& name);
  std::uint64_t konst(std::uint64_t value);
  /// Consecutive cells initialised to `values`; requires stride 1.
  std::uint64_t table(const std::string& name, const std::vector<std::uint64_t>& values);
  std::string fresh(std::string_view stem);

  void op(Opcode op, std::uint64_t operand = 0);
  void jump(Opcode op, std::string_view label);
  void label(std::string_view name);
  void note(std::string_view text);
  void gap();

  void call(const std::string& sub);
  void begin_sub(const std::string& sub);
  /// Emits the return dispatch; every call site must already be emitted.
  void end_sub(const std::string& sub);

  /// Header comment, constant initialisation, then the body.
  std::string text(std::string_view title) const;

 private:
  std::uint64_t alloc();

  std::uint64_t next_cell_;
  std::uint64_t stride_;
  std::map<std::string, std::uint64_t> vars_;
  std::map<std::uint64_t, std::uint64_t> consts_;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> inits_;  // cell, value
  std::map<std::string, std::vector<std::string>> sites_;
  std::map<std::string, unsigned> fresh_counts_;
  std::vector<std::string> body_;
};

struct AssemblerOptions {
  /// Emit operand bytes least significant first; used to build a
  /// deliberately wrong assembler.
  bool reverse_operand_bytes = false;
};

enum class CompilerTarget { Assembly, Intermediate };

std::string generate_assembler_src(const AssemblerOptions& options = {});
std::string generate_compiler_src(CompilerTarget target);
std::string generate_interpreter_src();

}  // namespace ctlcode
