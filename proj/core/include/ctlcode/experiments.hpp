#pragma once

// Experiment drivers over TM and the self-hosted assets: the assembler and
// compiler fixed points, interpreter correctness, and the packaged compiling
// and disassembling machines.
//
// M(x, y...) below is the first output of TM on <x, y...>; a translation leg
// that yields Mea or Div aborts the experiment with a FAIL line.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ctlcode/assets.hpp"
#include "ctlcode/bitseq.hpp"
#include "ctlcode/error.hpp"
#include "ctlcode/machine.hpp"

namespace ctlcode {

struct CheckLine {
  std::string id;
  RuleStatus status = RuleStatus::Pass;
  std::string detail;
};

struct ExperimentReport {
  std::string title;
  std::vector<CheckLine> checks;

  const CheckLine* find(std::string_view id) const;
  bool passed() const;  // no FAIL line
  /// One `ID: STATUS (detail)` line per check.
  std::string render() const;
};

struct ExperimentOptions {
  std::uint64_t translator_fuel = 64'000'000;  // legs running a translator
  std::uint64_t run_fuel = 1'000'000;          // direct runs of translated programs
  std::uint64_t interp_factor = 64;            // interpreter legs get run_fuel * factor
  std::size_t n_max = 4;
};

/// Thrown when a leg yields Mea or Div for its first output.
class LegFailure : public Error {
 public:
  using Error::Error;
};

/// First output of TM on <x> ++ args. Throws LegFailure.
BitSeq apply_code(const BitSeq& x, const BitSeqs& args, std::uint64_t fuel);

struct AssemblerInputs {
  BitSeq asm0;                         // existing assembler, executable
  std::string asm_prime;               // new assembler, ASM text
  std::vector<std::string> programs;   // ASM corpus
  std::vector<BitSeqs> data;           // inputs for comparing translated programs
};

struct CompilerInputs {
  BitSeq asm0;
  std::string compil_asm;              // existing compiler, ASM text
  std::string compil_prime;            // new compiler, SRC text
  std::vector<std::string> programs;   // SRC corpus
  std::vector<BitSeqs> data;
};

struct InterpCase {
  std::string name;
  std::string src;
  std::vector<BitSeqs> inputs;
};

struct InterpreterInputs {
  BitSeq asm0;
  std::string compil_asm;    // SRC to ASM compiler, ASM text
  std::string compil_i_asm;  // SRC to ICN compiler, ASM text
  BitSeq interp;
  std::vector<InterpCase> cases;
};

AssemblerInputs assembler_inputs(const AssetSet& a, std::vector<std::string> programs,
                                 std::vector<BitSeqs> data);
CompilerInputs compiler_inputs(const AssetSet& a, std::vector<std::string> programs,
                               std::vector<BitSeqs> data);
InterpreterInputs interpreter_inputs(const AssetSet& a, std::vector<InterpCase> cases);

struct NamedText {
  std::string name;  // file stem
  std::string text;
};

/// Files of `dir` with extension `ext` (".asm", ".src"), sorted by name.
std::vector<NamedText> read_corpus_texts(const std::filesystem::path& dir, std::string_view ext);
/// `dir`/data.inputs, or no vectors when the file is absent.
std::vector<BitSeqs> read_corpus_data(const std::filesystem::path& dir);
/// Every NAME.src of `dir` paired with NAME.inputs.
std::vector<InterpCase> read_interp_cases(const std::filesystem::path& dir);

/// V, E1, E2, E3+ (three further self-applications) and E3, in that order.
ExperimentReport assembler_fixpoint_experiment(const AssemblerInputs& in,
                                               const ExperimentOptions& opt = {});
/// V, C1, C2 and C3.
ExperimentReport compiler_fixpoint_experiment(const CompilerInputs& in,
                                              const ExperimentOptions& opt = {});
/// One I line per case, plus a summary line.
ExperimentReport interpreter_experiment(const InterpreterInputs& in,
                                        const ExperimentOptions& opt = {});

/// Compiling machine: one SRC input, outputs ASM text, error listing and the
/// executable. Disassembling machine: one executable input, outputs ASM text
/// and error listing. Both are dedicated structures.
MachineStructure compiling_machine();
MachineStructure disassembling_machine();

/// The three implications relating the two machines.
ExperimentReport example1_properties(const std::vector<BitSeq>& cf_inputs,
                                     const std::vector<BitSeq>& df_inputs);

}  // namespace ctlcode
