#pragma once

// Machine functions, machine structures, meanings and the checkable
// properties over them. Universally quantified conditions are evaluated over
// a finite Corpus; a true verdict certifies the corpus, never the unbounded
// statement.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ctlcode/bitseq.hpp"

namespace ctlcode {

/// Output of mf_n: a bit sequence, Mea (fewer than n outputs) or Div.
class OutVal {
 public:
  enum class Kind { Bits, Mea, Div };

  static OutVal bits(BitSeq payload) { return OutVal(Kind::Bits, std::move(payload)); }
  static OutVal mea() { return OutVal(Kind::Mea, {}); }
  static OutVal div() { return OutVal(Kind::Div, {}); }

  Kind kind() const { return kind_; }
  bool is_bits() const { return kind_ == Kind::Bits; }
  bool is_mea() const { return kind_ == Kind::Mea; }
  bool is_div() const { return kind_ == Kind::Div; }
  /// Only meaningful for Kind::Bits; empty otherwise.
  const BitSeq& payload() const { return payload_; }

  std::string to_string() const;

  friend bool operator==(const OutVal&, const OutVal&) = default;

 private:
  OutVal(Kind k, BitSeq p) : kind_(k), payload_(std::move(p)) {}
  Kind kind_;
  BitSeq payload_;
};

/// The family mf_n, n >= 1. `fuel_budget` is the step bound under which Div
/// approximates non-termination.
class MachineFunction {
 public:
  using Eval = std::function<OutVal(std::size_t n, const BitSeqs& args)>;
  /// Optional bulk evaluator returning mf_1..mf_{n_max}; lets implementations
  /// backed by a single run avoid re-running per index.
  using EvalUpto = std::function<std::vector<OutVal>(std::size_t n_max, const BitSeqs& args)>;

  MachineFunction(Eval eval, std::uint64_t fuel_budget, EvalUpto upto = {});

  OutVal eval(std::size_t n, const BitSeqs& args) const;
  /// Element i holds mf_{i+1}(args).
  std::vector<OutVal> eval_upto(std::size_t n_max, const BitSeqs& args) const;
  std::uint64_t fuel_budget() const { return fuel_budget_; }

 private:
  Eval eval_;
  EvalUpto upto_;
  std::uint64_t fuel_budget_;
};

enum class StructureKind { CodeControlled, Dedicated };

struct MachineStructure {
  std::string name;
  std::function<bool(const BitSeq&)> bseq_member;
  MachineFunction mf;
  std::function<bool(const BitSeq&)> exec_member;
  StructureKind kind = StructureKind::CodeControlled;

  bool is_exec(const BitSeq& x) const { return exec_member(x); }
};

/// Finite witness set standing in for "all inputs".
struct Corpus {
  std::vector<BitSeqs> inputs;
  std::size_t n_max = 1;

  /// Throws std::invalid_argument when empty or n_max == 0.
  void validate() const;
};

std::string render_args(const BitSeqs& args);

/// |x|_M: mf'(n, <y...>) = mf(n, <x, y...>). Throws NotExecutable.
MachineFunction meaning(const MachineStructure& m, const BitSeq& x);

struct Counterexample {
  BitSeqs input;
  std::size_t n = 0;
  OutVal lhs = OutVal::mea();
  OutVal rhs = OutVal::mea();

  std::string describe() const;
};

struct EquivalenceResult {
  bool equivalent = true;
  std::optional<Counterexample> witness;
  explicit operator bool() const { return equivalent; }
};

/// Corpus-bounded semi-decision of x1 ≡_M x2; returns the first differing
/// (input, n) in corpus order. Throws NotExecutable.
EquivalenceResult behaviourally_equivalent(const MachineStructure& m, const BitSeq& x1,
                                           const BitSeq& x2, const Corpus& c);

/// Same comparison for two arbitrary machine functions.
EquivalenceResult functions_agree(const MachineFunction& f, const MachineFunction& g,
                                  const Corpus& c);

enum class RuleStatus { Pass, Fail, Inconclusive };
const char* to_string(RuleStatus s);

struct RuleResult {
  std::string rule;
  RuleStatus status = RuleStatus::Pass;
  std::size_t checked = 0;
  std::size_t inconclusive = 0;
  std::optional<std::string> witness;
};

struct RuleReport {
  std::vector<RuleResult> rules;  // R1..R5 in order

  const RuleResult& rule(int k) const { return rules.at(static_cast<std::size_t>(k - 1)); }
  std::size_t hard_failures() const;
};

/// Evaluates the five machine-function rules over corpus inputs, extension
/// sequences and indices up to n_max. R2 is inconclusive (not failing) when
/// no Mea index is found within the bound.
RuleReport check_mf_rules(const MachineFunction& mf, const Corpus& c,
                          const std::vector<BitSeqs>& extensions);

struct PairWitness {
  BitSeq first;
  BitSeq second;
};

struct AsymmetryResult {
  bool asymmetric = false;
  std::optional<PairWitness> witness;
  explicit operator bool() const { return asymmetric; }
};

AsymmetryResult is_asymmetric(const MachineFunction& mf, const std::vector<PairWitness>& pairs);

struct OverruleWitness {
  BitSeq x1, x2;  // controllers
  BitSeq z1, z2;  // their constant outputs
};

struct OverruleResult {
  bool overrules = false;
  std::optional<OverruleWitness> witness;
  explicit operator bool() const { return overrules; }
};

/// Whether the first argument position overrules the second: two controllers
/// whose mf_1 output is a constant over every probe, with distinct constants.
/// Throws NotExecutable when a controller is not executable.
OverruleResult overrules(const MachineStructure& m, const std::vector<BitSeq>& controllers,
                         const std::vector<BitSeq>& probes);

/// The mirrored criterion: candidates placed in the second position overrule
/// the first position over the given first-position probes. No executability
/// precondition applies.
OverruleResult second_overrules_first(const MachineFunction& mf,
                                      const std::vector<BitSeq>& candidates,
                                      const std::vector<BitSeq>& first_probes);

}  // namespace ctlcode
