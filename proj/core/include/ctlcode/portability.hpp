#pragma once

// Installed, expansible, pre-installed and portable control codes, checked
// against supplied certificates (witness names, expansion threads, transfer
// plans) over a finite input corpus.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ctlcode/assets.hpp"
#include "ctlcode/exec_arch.hpp"
#include "ctlcode/machine.hpp"
#include "ctlcode/notation.hpp"
#include "ctlcode/thread.hpp"

namespace ctlcode {

struct Verdict {
  RuleStatus status = RuleStatus::Pass;  // Inconclusive: a fuel bound was hit
  std::string detail;

  bool holds() const { return status == RuleStatus::Pass; }
};

/// mf_n(<psi(c)> ++ bs) = mf_n(<sigma(f0), sigma(f1..fl)> ++ bs) for every
/// bs of the corpus and n <= n_max. Throws Error when a witness name is
/// unbound, repeated or f0 is not executable, or the service is undefined.
Verdict check_installed(const MachineStructure& m, const ControlCodeNotation& ccn, const Code& c,
                        const EAService& eas, const std::vector<std::string>& witness,
                        const Corpus& corpus);

/// Searches witness tuples of up to `max_names` distinct bound names with an
/// executable first name. Returns the first installing tuple.
std::optional<std::vector<std::string>> find_install_witness(
    const MachineStructure& m, const ControlCodeNotation& ccn, const Code& c,
    const EAService& eas, const Corpus& corpus, std::size_t max_names = 3);

/// Holds when the thread is set-free, applies to `eas` with focus `ea`
/// within `fuel` actions, yields exactly `target`'s backing state, and the
/// files of `eas` survive unchanged in `target`.
Verdict check_expansible(const EAService& eas, const EAService& target, const TermPtr& thread,
                         std::uint64_t fuel);

struct Expansion {
  TermPtr thread;
  EAState target;
};

/// Not installed (bounded search), expansible to the target, and installed
/// on the target with `install_witness`.
Verdict check_preinstalled(const MachineStructure& m, const ControlCodeNotation& ccn, const Code& c,
                           const EAService& eas, const Expansion& expansion,
                           const std::vector<std::string>& install_witness, const Corpus& corpus,
                           std::uint64_t fuel, std::size_t search_names = 3);

struct PortabilityCase {
  std::shared_ptr<const MachineStructure> src_machine, dst_machine;
  ControlCodeNotation ccn_src, ccn_dst;  // the same code set, psi over each machine
  Code code;
  EAState src_start;
  Expansion src_expansion;
  EAState dst_start;
  std::vector<std::string> plan;  // names copied by set instructions
  Expansion dst_expansion;        // certifies pre-installation at the destination
  std::vector<std::string> install_witness;
  Corpus corpus;
  std::uint64_t action_fuel = 64;  // bounds every thread application
};

/// P1 output agreement on non-divergent inputs, P2 source expansion, P3 plan
/// names fresh at the destination and pre-installation after set replay.
/// Returns one verdict line per clause; the last line is the overall verdict.
/// Throws Error when a plan name is already bound at the destination.
std::vector<std::pair<std::string, Verdict>> check_portable(const PortabilityCase& pc);

/// The thread ea.set:f1:sigma(f1) ; ... ; S for the plan names.
TermPtr set_replay_thread(const EAState& from, const std::vector<std::string>& names);

struct PreinstallCase {
  std::shared_ptr<const MachineStructure> machine;
  ControlCodeNotation ccn;
  Code code;
  EAState start;
  Expansion expansion;
  std::vector<std::string> install_witness;
  std::vector<std::string> unexpanded_witness;  // shown not to install on `start`
  Corpus corpus;
  std::uint64_t action_fuel = 64;  // bounds every thread application
};

/// Example 3: fn1 holds the assembler, fn2 the ASM text of the SRC to ASM
/// compiler; load and execute produce the compiler executable in fn3.
PreinstallCase scenario_example3(const AssetSet& assets, const std::vector<std::string>& src_programs);

/// Example 4: the source side holds the compiler executable and `src_text`,
/// the destination (TM at twice the fuel) holds the assembler. Expanding the
/// source yields the ASM text in fn3, which is replayed to the destination
/// and assembled there into fn4.
PortabilityCase scenario_example4(const AssetSet& assets, const std::string& src_text,
                                  const std::vector<BitSeqs>& data);

struct PortReport {
  std::vector<std::pair<std::string, Verdict>> lines;
  bool passed() const;  // every line PASS
  std::string render() const;
};

PortReport run_preinstall_case(const PreinstallCase& pc);
PortReport run_portability_case(const PortabilityCase& pc);

/// Writes a fixture directory (manifest, snapshots, thread files, code and
/// corpus) that run_port_manifest reproduces.
void write_port_fixture(const std::filesystem::path& dir, const PreinstallCase& pc);
void write_port_fixture(const std::filesystem::path& dir, const PortabilityCase& pc);

/// Loads a fixture manifest: `key = value` lines, paths relative to the
/// manifest. The `notation` key names a registry entry, or a decoder
/// identifier when no registry is given. Throws ParseError or Error.
PortReport run_port_manifest(const std::filesystem::path& manifest,
                             const NotationRegistry* registry = nullptr);

}  // namespace ctlcode
