#pragma once

// The execution architecture: a file store with a loaded-code slot and an
// absorbing state of divergence, the effect and yield functions, and the
// services H_s over its states.
//
// Instruction syntax:
//   set:f:bits  rmv:f  cp:f1:f2  mv:f1:f2  cat:f1:f2  eq:f1:f2  neq:f1:f2
//   exists:f  load:f  exe:f1:..:fm/g1:..:gn
// Bits are a 0/1 string (possibly empty) or `x` followed by hex digits.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ctlcode/bitseq.hpp"
#include "ctlcode/machine.hpp"
#include "ctlcode/thread.hpp"

namespace ctlcode {

struct EAInstruction {
  enum class Op { Set, Remove, Copy, Move, Cat, Eq, Neq, Exists, Load, Exe };
  Op op = Op::Set;
  std::string f1, f2;  // operands in textual order
  BitSeq bits;         // Set
  std::vector<std::string> inputs, outputs;  // Exe

  friend bool operator==(const EAInstruction&, const EAInstruction&) = default;
};

bool valid_file_name(std::string_view name);

/// Throws ParseError.
EAInstruction parse_instruction(std::string_view text);
std::optional<EAInstruction> try_parse_instruction(std::string_view text);
std::string format_instruction(const EAInstruction& i);

struct EAState {
  bool diverged = false;
  std::map<std::string, BitSeq> files;  // sigma
  std::optional<BitSeq> loaded;         // empty: no loaded executable code

  static EAState live(std::map<std::string, BitSeq> files = {},
                      std::optional<BitSeq> loaded = std::nullopt);
  static EAState divergence();

  const BitSeq* file(const std::string& name) const;
  friend bool operator==(const EAState&, const EAState&) = default;
};

/// Names of the table rows, used for coverage accounting.
inline constexpr std::array<std::string_view, 17> kEffRows = {
    "set",      "rmv",      "cp+",  "cp-",    "mv+",      "mv-",      "cat+",     "cat-",   "eq",
    "neq",      "exists",   "load+", "load-", "exe:bits", "exe:noop", "exe:div", "diverged"};
inline constexpr std::array<std::string_view, 21> kYldRows = {
    "set",    "rmv+",   "rmv-",   "cp+",      "cp-",     "mv+",      "mv-",
    "cat+",   "cat-",   "eq:T",   "eq:F",     "neq:T",   "neq:F",    "exists+",
    "exists-", "load+", "load-",  "exe:T",    "exe:F",   "exe:D",    "diverged"};

struct EAStep {
  EAState state;
  Reply reply = Reply::True;
  std::string_view eff_row;
  std::string_view yld_row;
};

/// eff and yld together; the machine function is evaluated once.
EAStep step(const EAInstruction& i, const EAState& s, const MachineStructure& m);
EAState eff(const EAInstruction& i, const EAState& s, const MachineStructure& m);
Reply yld(const EAInstruction& i, const EAState& s, const MachineStructure& m);
EAState ceff(const EAState& s, const std::vector<EAInstruction>& gamma,
             const MachineStructure& m);

/// H_s. Methods that do not parse as instructions reply D and lead to the
/// state of divergence. The machine structure must outlive the service.
class EAService final : public Service {
 public:
  EAService(EAState backing, const MachineStructure& m) : backing_(std::move(backing)), m_(&m) {}

  std::pair<Reply, ServicePtr> consume(std::string_view method) const override;
  bool is_undefined() const override { return backing_.diverged; }
  bool same_as(const Service& other) const override;
  std::string describe() const override;

  const EAState& backing() const { return backing_; }
  const MachineStructure& machine() const { return *m_; }

 private:
  EAState backing_;
  const MachineStructure* m_;
};

std::shared_ptr<const EAService> service_of(EAState s, const MachineStructure& m);

/// Line 1 `loaded=<bits>|none` (or `diverged` alone), then `name<TAB>bits`
/// per file in name order. Throws ParseError.
EAState parse_snapshot(std::string_view text);
std::string format_snapshot(const EAState& s);

/// One instruction per line; blank lines and `#` comments are skipped.
/// Throws ParseError.
std::vector<EAInstruction> parse_script(std::string_view text);

}  // namespace ctlcode
