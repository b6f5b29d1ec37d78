#pragma once

// Control code notations: a code set with a projection psi onto executable
// codes and an injective bit sequence representation rho. Codes are either
// bit sequences or texts, so identity-rho and text notations share one path.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ctlcode/bitseq.hpp"
#include "ctlcode/machine.hpp"

namespace ctlcode {

using Code = std::variant<BitSeq, std::string>;

std::string render_code(const Code& c);

enum class NotationClass { Assembly, Source, Intermediate, ExecutableForm };

std::string_view to_string(NotationClass c);
std::optional<NotationClass> notation_class_from_string(std::string_view s);

struct ControlCodeNotation {
  std::string name;
  NotationClass cls = NotationClass::ExecutableForm;
  std::function<bool(const Code&)> member;
  std::function<std::optional<BitSeq>(const Code&)> project;    // psi
  std::function<std::optional<BitSeq>(const Code&)> represent;  // rho
  bool carrier_is_bitseq = false;
  /// Inverse of rho restricted to members; decides membership of outputs.
  std::function<std::optional<Code>(const BitSeq&)> decode;
};

// Notations over TM. Text notations use 8-bit ASCII, most significant bit
// first. A text whose representation is itself executable is excluded,
// except the empty text, which stands for the empty executable.
ControlCodeNotation executable_notation();
ControlCodeNotation asm_notation();
ControlCodeNotation src_notation();
ControlCodeNotation icn_notation();

/// Interprets decoder identifiers of the manifest: exe, asm, src, icn.
std::optional<ControlCodeNotation> notation_for_decoder(std::string_view decoder);

/// meaning(m, psi(c)); throws Error for a non-member or an undefined psi.
MachineFunction cc_meaning(const MachineStructure& m, const ControlCodeNotation& ccn,
                           const Code& c);

struct ClauseResult {
  std::string clause;
  bool ok = true;
  std::optional<std::string> witness;
};

struct NotationReport {
  std::vector<ClauseResult> clauses;
  bool ok() const;
  std::string render() const;
};

/// Checks projection into Exec, rho-injectivity over the sample, and the
/// identity conditions for bit sequence carriers.
NotationReport validate_notation(const MachineStructure& m, const ControlCodeNotation& ccn,
                                 const std::vector<Code>& sample);

struct TranslResult {
  enum class Failure { None, NotInTarget, Meaningless, Divergent };
  bool ok = true;
  Failure failure = Failure::None;
  std::optional<std::size_t> failing_index;  // into the sample
  std::string detail;
};

/// For every sampled code of `from`, mf_1(<psi_home(cc), rho_from(code)>)
/// must be the representation of some member of `to`.
TranslResult transl_check(const MachineStructure& m, const Code& cc,
                          const ControlCodeNotation& home, const ControlCodeNotation& from,
                          const ControlCodeNotation& to, const std::vector<Code>& sample);

class NotationRegistry {
 public:
  /// Throws Error when the name is taken.
  void add(ControlCodeNotation n);
  const ControlCodeNotation* find(std::string_view name) const;
  std::vector<std::string> names(NotationClass cls) const;
  const std::map<std::string, ControlCodeNotation, std::less<>>& all() const { return by_name_; }

  /// Lines `name class decoder`; `#` comments and blank lines are skipped.
  /// Throws ParseError.
  static NotationRegistry from_manifest(std::string_view text);

 private:
  std::map<std::string, ControlCodeNotation, std::less<>> by_name_;
};

}  // namespace ctlcode
