#pragma once

// TM: a fuel-bounded accumulator machine whose executable codes are bit
// sequences of 40-bit instructions (8-bit opcode, 32-bit big-endian operand).
//
// Input is demand-driven: NEXTBIT reads the current argument (2 once it is
// exhausted), NEXTARG moves to the next argument. Touching an argument that
// does not exist halts the machine with the outputs written so far, so a run
// on chi and on chi extended with more arguments agree step for step until
// the shorter run halts that way.

#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "ctlcode/bitseq.hpp"
#include "ctlcode/machine.hpp"
#include "ctlcode/nat.hpp"

namespace ctlcode {

enum class Opcode : std::uint8_t {
  HALT = 0,
  LDI,
  LDM,
  LDX,
  STM,
  STX,
  ADD,
  SUB,
  MUL,
  DIV,
  MOD,
  JMP,
  JZ,
  JNZ,
  NEXTBIT,
  NEXTARG,
  OUTBIT,
};

inline constexpr unsigned kOpcodeCount = 17;
inline constexpr unsigned kInstructionBits = 40;
inline constexpr std::uint64_t kOperandLimit = std::uint64_t{1} << 32;

std::string_view mnemonic(Opcode op);
std::optional<Opcode> opcode_from_mnemonic(std::string_view text);
/// False for HALT, NEXTBIT and NEXTARG, which must carry operand 0.
bool takes_operand(Opcode op);

struct ToyInstruction {
  Opcode op = Opcode::HALT;
  std::uint64_t operand = 0;
  friend bool operator==(const ToyInstruction&, const ToyInstruction&) = default;
};

struct ToyProgram {
  std::vector<ToyInstruction> instructions;
  friend bool operator==(const ToyProgram&, const ToyProgram&) = default;
};

/// nullopt is the not-executable verdict.
std::optional<ToyProgram> decode(const BitSeq& bits);
/// Throws std::invalid_argument for an operand >= 2^32 or a nonzero operand
/// on an operand-less opcode.
BitSeq encode(const ToyProgram& program);

struct Halted {
  std::map<std::uint64_t, BitSeq> buffers;  // written buffers only
  std::uint64_t count = 0;                  // K: highest written buffer index
  std::uint64_t steps = 0;

  /// mf_n view: Bits for n <= K (unwritten buffers are empty), Mea beyond.
  OutVal output(std::uint64_t n) const;
  friend bool operator==(const Halted& a, const Halted& b) {
    return a.buffers == b.buffers && a.count == b.count;
  }
};

struct FuelExhausted {
  friend bool operator==(const FuelExhausted&, const FuelExhausted&) = default;
};

using RunResult = std::variant<Halted, FuelExhausted>;

/// Mutable machine state of one run; exposed for tracing.
struct ToyExecState {
  std::uint64_t pc = 0;
  Nat acc;
  std::vector<Nat> low_mem;  // dense part of memory
  std::map<Nat, Nat> high_mem;
  std::uint64_t arg_index = 1;  // 1-based
  std::uint64_t bit_offset = 0;
  Halted out;
  std::uint64_t fuel_left = 0;

  const Nat& load(const Nat& addr) const;
  void store(const Nat& addr, Nat value);
};

RunResult run(const ToyProgram& program, const BitSeqs& inputs, std::uint64_t fuel);
/// Throws NotExecutable when `exe` does not decode.
RunResult run(const BitSeq& exe, const BitSeqs& inputs, std::uint64_t fuel);

/// TM as a code controlled machine structure: Bseq is every bit sequence,
/// Exec is decode-succeeds. mf(n, <x, y...>) is Mea for non-executable x and
/// for an empty argument list, Div on fuel exhaustion, and otherwise the
/// n-th output buffer or Mea past the last one.
MachineStructure as_machine_structure(std::uint64_t fuel);

}  // namespace ctlcode
