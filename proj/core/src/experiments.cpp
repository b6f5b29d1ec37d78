#include "ctlcode/experiments.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "ctlcode/error.hpp"
#include "ctlcode/file_formats.hpp"
#include "ctlcode/toy_machine.hpp"
#include "ctlcode/translators.hpp"

namespace ctlcode {

const CheckLine* ExperimentReport::find(std::string_view id) const {
  for (const auto& c : checks) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

bool ExperimentReport::passed() const {
  for (const auto& c : checks) {
    if (c.status == RuleStatus::Fail) return false;
  }
  return true;
}

std::string ExperimentReport::render() const {
  std::ostringstream os;
  os << "# " << title << '\n';
  for (const auto& c : checks) {
    os << c.id << ": " << to_string(c.status);
    if (!c.detail.empty()) os << " (" << c.detail << ")";
    os << '\n';
  }
  return os.str();
}

BitSeq apply_code(const BitSeq& x, const BitSeqs& args, std::uint64_t fuel) {
  auto program = decode(x);
  if (!program) throw LegFailure("controlling code " + x.abbrev() + " is not executable");
  auto result = run(*program, args, fuel);
  if (std::holds_alternative<FuelExhausted>(result)) {
    throw LegFailure("output 1 is Div under fuel " + std::to_string(fuel));
  }
  auto out = std::get<Halted>(result).output(1);
  if (!out.is_bits()) throw LegFailure("output 1 is Mea");
  return out.payload();
}

namespace {

BitSeq ascii(std::string_view s) { return BitSeq::from_ascii(s); }

CheckLine pass(std::string id, std::string detail) {
  return {std::move(id), RuleStatus::Pass, std::move(detail)};
}
CheckLine fail(std::string id, std::string detail) {
  return {std::move(id), RuleStatus::Fail, std::move(detail)};
}

// Runs one check; a failing leg or a non-executable operand becomes a FAIL
// line for that check instead of aborting the whole report.
void attempt(ExperimentReport& r, const std::string& id, const std::function<CheckLine()>& body) {
  try {
    r.checks.push_back(body());
  } catch (const Error& e) {
    r.checks.push_back(fail(id, e.what()));
  }
}

Corpus data_corpus(const std::vector<BitSeqs>& data, std::size_t n_max) {
  Corpus c{data, n_max};
  if (c.inputs.empty()) c.inputs.emplace_back();
  return c;
}

std::string program_label(std::size_t i) { return "program #" + std::to_string(i + 1); }

}  // namespace

std::vector<NamedText> read_corpus_texts(const std::filesystem::path& dir, std::string_view ext) {
  std::vector<NamedText> out;
  if (!std::filesystem::is_directory(dir)) throw Error("no corpus directory " + dir.string());
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ext) {
      out.push_back({e.path().stem().string(), read_file(e.path())});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const NamedText& a, const NamedText& b) { return a.name < b.name; });
  return out;
}

std::vector<BitSeqs> read_corpus_data(const std::filesystem::path& dir) {
  const auto p = dir / "data.inputs";
  if (!std::filesystem::exists(p)) return {};
  return parse_input_vectors(read_file(p));
}

std::vector<InterpCase> read_interp_cases(const std::filesystem::path& dir) {
  std::vector<InterpCase> out;
  for (auto& t : read_corpus_texts(dir, ".src")) {
    const auto inputs = dir / (t.name + ".inputs");
    if (!std::filesystem::exists(inputs)) throw Error("missing " + inputs.string());
    out.push_back({t.name, std::move(t.text), parse_input_vectors(read_file(inputs))});
  }
  return out;
}

AssemblerInputs assembler_inputs(const AssetSet& a, std::vector<std::string> programs,
                                 std::vector<BitSeqs> data) {
  return {bootstrap_assembler(a), a.asm_prime, std::move(programs), std::move(data)};
}

CompilerInputs compiler_inputs(const AssetSet& a, std::vector<std::string> programs,
                               std::vector<BitSeqs> data) {
  return {bootstrap_assembler(a), host_compile(a.compil_prime), a.compil_prime,
          std::move(programs), std::move(data)};
}

InterpreterInputs interpreter_inputs(const AssetSet& a, std::vector<InterpCase> cases) {
  return {bootstrap_assembler(a), host_compile(a.compil_prime), host_compile(a.compil_i),
          a.interp_exe, std::move(cases)};
}

ExperimentReport assembler_fixpoint_experiment(const AssemblerInputs& in,
                                               const ExperimentOptions& opt) {
  ExperimentReport r{"assembler fixed point", {}};
  const auto tm_run = as_machine_structure(opt.run_fuel);
  const auto tm_tr = as_machine_structure(opt.translator_fuel);
  const auto fuel = opt.translator_fuel;
  const BitSeq rho_new = ascii(in.asm_prime);

  std::vector<BitSeq> by_asm0;
  attempt(r, "V", [&] {
    for (std::size_t i = 0; i < in.programs.size(); ++i) {
      by_asm0.push_back(apply_code(in.asm0, {ascii(in.programs[i])}, fuel));
      BitSeq expected;
      try {
        expected = host_assemble(in.programs[i]);
      } catch (const ParseError&) {
      }
      if (by_asm0.back() != expected) {
        return fail("V", "asm_0 and the host assembler differ on " + program_label(i));
      }
    }
    return pass("V", "asm_0 matches the host assembler on " +
                         std::to_string(in.programs.size()) + " programs");
  });

  BitSeq asm2, asm3;
  bool have_chain = false;
  attempt(r, "E1", [&] {
    asm2 = apply_code(in.asm0, {rho_new}, fuel);
    asm3 = apply_code(asm2, {rho_new}, fuel);
    have_chain = true;
    if (by_asm0.size() != in.programs.size()) return fail("E1", "asm_0 leg did not complete");
    const auto data = data_corpus(in.data, opt.n_max);
    for (std::size_t i = 0; i < in.programs.size(); ++i) {
      auto e2 = apply_code(asm2, {ascii(in.programs[i])}, fuel);
      auto eq = behaviourally_equivalent(tm_run, by_asm0[i], e2, data);
      if (!eq) return fail("E1", program_label(i) + ": " + eq.witness->describe());
    }
    return pass("E1", std::to_string(in.programs.size()) + " programs x " +
                          std::to_string(data.inputs.size()) + " inputs");
  });
  if (!have_chain) return r;

  attempt(r, "E2", [&] {
    Corpus programs{{}, opt.n_max};
    for (const auto& p : in.programs) programs.inputs.push_back({ascii(p)});
    programs.inputs.push_back({rho_new});
    auto eq = behaviourally_equivalent(tm_tr, asm2, asm3, programs);
    if (!eq) return fail("E2", eq.witness->describe());
    return pass("E2", std::to_string(programs.inputs.size()) + " inputs, 0 counterexamples, asm'' " +
                          (asm2 == in.asm0 ? "equals" : "differs from") + " asm_0");
  });

  BitSeq asm4;
  bool have_asm4 = false;
  attempt(r, "E3+", [&] {
    asm4 = apply_code(asm3, {rho_new}, fuel);
    have_asm4 = true;
    BitSeq cur = asm4;
    for (int k = 1; k <= 3; ++k) {
      cur = apply_code(cur, {rho_new}, fuel);
      if (cur != asm4) return fail("E3+", "further iteration " + std::to_string(k) + " differs");
    }
    return pass("E3+", "3 further iterations bit-identical");
  });

  attempt(r, "E3", [&] {
    if (!have_asm4) asm4 = apply_code(asm3, {rho_new}, fuel);
    if (asm4 != asm3) return fail("E3", "asm''' differs from M(asm''', rho(asm'))");
    return pass("E3", "bit-exact");
  });
  return r;
}

ExperimentReport compiler_fixpoint_experiment(const CompilerInputs& in,
                                              const ExperimentOptions& opt) {
  ExperimentReport r{"compiler fixed point", {}};
  const auto tm_run = as_machine_structure(opt.run_fuel);
  const auto tm_tr = as_machine_structure(opt.translator_fuel);
  const auto fuel = opt.translator_fuel;
  const BitSeq rho_new = ascii(in.compil_prime);

  BitSeq compil_exe, compil2, compil2_exe;
  bool have_chain = false;
  attempt(r, "V", [&] {
    compil_exe = apply_code(in.asm0, {ascii(in.compil_asm)}, fuel);
    compil2 = apply_code(compil_exe, {rho_new}, fuel);
    compil2_exe = apply_code(in.asm0, {compil2}, fuel);
    have_chain = true;
    for (std::size_t i = 0; i < in.programs.size(); ++i) {
      auto out = apply_code(compil_exe, {ascii(in.programs[i])}, fuel);
      BitSeq expected;
      try {
        expected = ascii(host_compile(in.programs[i]));
      } catch (const ParseError&) {
      }
      if (out != expected) {
        return fail("V", "existing compiler and host compiler differ on " + program_label(i));
      }
    }
    return pass("V", "existing compiler matches the host compiler on " +
                         std::to_string(in.programs.size()) + " programs");
  });
  if (!have_chain) return r;

  attempt(r, "C1", [&] {
    const auto data = data_corpus(in.data, opt.n_max);
    for (std::size_t i = 0; i < in.programs.size(); ++i) {
      const BitSeq src = ascii(in.programs[i]);
      auto lhs = apply_code(in.asm0, {apply_code(compil_exe, {src}, fuel)}, fuel);
      auto rhs = apply_code(in.asm0, {apply_code(compil2_exe, {src}, fuel)}, fuel);
      auto eq = behaviourally_equivalent(tm_run, lhs, rhs, data);
      if (!eq) return fail("C1", program_label(i) + ": " + eq.witness->describe());
    }
    return pass("C1", std::to_string(in.programs.size()) + " programs x " +
                          std::to_string(data.inputs.size()) + " inputs");
  });

  BitSeq compil3, compil3_exe;
  bool have_third = false;
  auto third = [&] {
    if (have_third) return;
    compil3 = apply_code(compil2_exe, {rho_new}, fuel);
    compil3_exe = apply_code(in.asm0, {compil3}, fuel);
    have_third = true;
  };
  attempt(r, "C2", [&] {
    third();
    Corpus programs{{}, opt.n_max};
    for (const auto& p : in.programs) programs.inputs.push_back({ascii(p)});
    programs.inputs.push_back({rho_new});
    auto eq = behaviourally_equivalent(tm_tr, compil2_exe, compil3_exe, programs);
    if (!eq) return fail("C2", eq.witness->describe());
    return pass("C2", std::to_string(programs.inputs.size()) + " inputs, 0 counterexamples");
  });

  attempt(r, "C3", [&] {
    third();
    auto again = apply_code(compil3_exe, {rho_new}, fuel);
    if (again != compil3) return fail("C3", "compil''' differs from M(M(asm, compil'''), rho(compil'))");
    return pass("C3", "bit-exact");
  });
  return r;
}

ExperimentReport interpreter_experiment(const InterpreterInputs& in, const ExperimentOptions& opt) {
  ExperimentReport r{"interpreter correctness", {}};
  const auto fuel = opt.translator_fuel;
  BitSeq to_asm, to_icn;
  attempt(r, "setup", [&] {
    to_asm = apply_code(in.asm0, {ascii(in.compil_asm)}, fuel);
    to_icn = apply_code(in.asm0, {ascii(in.compil_i_asm)}, fuel);
    return pass("setup", "compilers assembled");
  });
  if (!r.passed()) return r;

  std::size_t vectors = 0, divergent = 0, failed = 0;
  for (const auto& c : in.cases) {
    const std::string id = "I[" + c.name + "]";
    attempt(r, id, [&] {
      const BitSeq src = ascii(c.src);
      const BitSeq exe = apply_code(in.asm0, {apply_code(to_asm, {src}, fuel)}, fuel);
      const BitSeq icn = apply_code(to_icn, {src}, fuel);
      bool diverged = false;
      for (const auto& v : c.inputs) {
        auto compare = [&](std::uint64_t scale) {
          const auto direct = as_machine_structure(opt.run_fuel * scale);
          const auto interp = as_machine_structure(opt.run_fuel * opt.interp_factor * scale);
          BitSeqs lhs_args{exe};
          lhs_args.insert(lhs_args.end(), v.begin(), v.end());
          BitSeqs rhs_args{in.interp, icn};
          rhs_args.insert(rhs_args.end(), v.begin(), v.end());
          return std::pair{direct.mf.eval_upto(opt.n_max, lhs_args),
                           interp.mf.eval_upto(opt.n_max, rhs_args)};
        };
        auto [lhs, rhs] = compare(1);
        for (std::size_t n = 1; n <= opt.n_max; ++n) {
          if (lhs[n - 1] != rhs[n - 1]) {
            Counterexample w{v, n, lhs[n - 1], rhs[n - 1]};
            return fail(id, w.describe());
          }
        }
        if (lhs[0].is_div()) {
          auto [lhs4, rhs4] = compare(4);
          if (!lhs4[0].is_div() || !rhs4[0].is_div()) {
            return fail(id, "Div verdict not stable at 4x fuel on " + render_args(v));
          }
          diverged = true;
        }
        ++vectors;
      }
      if (diverged) ++divergent;
      return pass(id, std::to_string(c.inputs.size()) + " input vectors, n <= " +
                          std::to_string(opt.n_max) +
                          (diverged ? ", Div/Div stable at 4x fuel" : ""));
    });
    if (r.checks.back().status == RuleStatus::Fail) ++failed;
  }
  r.checks.push_back({"I", failed == 0 ? RuleStatus::Pass : RuleStatus::Fail,
                      std::to_string(in.cases.size()) + " programs, " + std::to_string(vectors) +
                          " vectors, " + std::to_string(divergent) + " divergent, " +
                          std::to_string(failed) + " failing"});
  return r;
}

namespace {

BitSeq error_listing(const std::string& message) { return ascii("error: " + message + "\n"); }

// cf on a single input: ASM text, error listing, executable.
std::vector<BitSeq> compile_outputs(const BitSeq& x) {
  std::string text;
  if (!x.to_ascii(text)) return {BitSeq{}, error_listing("input is not ASCII text"), BitSeq{}};
  try {
    auto asm_text = host_compile(text);
    if (asm_text.empty()) return {BitSeq{}, error_listing("empty program"), BitSeq{}};
    return {ascii(asm_text), BitSeq{}, host_assemble(asm_text)};
  } catch (const ParseError& e) {
    return {BitSeq{}, error_listing(e.what()), BitSeq{}};
  }
}

// df on a single input: ASM text, error listing.
std::vector<BitSeq> disassemble_outputs(const BitSeq& x) {
  auto d = host_disassemble(x);
  if (!d.text) return {BitSeq{}, error_listing(d.errors)};
  if (d.text->empty()) return {BitSeq{}, error_listing("empty program")};
  return {ascii(*d.text), BitSeq{}};
}

MachineStructure dedicated(std::string name, std::vector<BitSeq> (*outputs)(const BitSeq&)) {
  auto upto = [outputs](std::size_t n_max, const BitSeqs& args) {
    std::vector<OutVal> out;
    std::vector<BitSeq> produced;
    if (!args.empty()) produced = outputs(args.front());
    for (std::size_t n = 1; n <= n_max; ++n) {
      out.push_back(n <= produced.size() ? OutVal::bits(produced[n - 1]) : OutVal::mea());
    }
    return out;
  };
  MachineFunction mf([upto](std::size_t n, const BitSeqs& args) { return upto(n, args).back(); },
                     1, upto);
  return MachineStructure{std::move(name), [](const BitSeq&) { return true; }, std::move(mf),
                          [](const BitSeq&) { return false; }, StructureKind::Dedicated};
}

}  // namespace

MachineStructure compiling_machine() { return dedicated("cf", compile_outputs); }
MachineStructure disassembling_machine() { return dedicated("df", disassemble_outputs); }

ExperimentReport example1_properties(const std::vector<BitSeq>& cf_inputs,
                                     const std::vector<BitSeq>& df_inputs) {
  ExperimentReport r{"compiling and disassembling machines", {}};
  const auto cf = compiling_machine();
  const auto df = disassembling_machine();
  const auto empty = OutVal::bits({});

  std::size_t held = 0;
  std::optional<std::string> bad;
  for (const auto& x : cf_inputs) {
    auto v = cf.mf.eval_upto(3, {x});
    if (v[1] != empty) continue;
    ++held;
    if (v[0] == empty && !bad) bad = "cf_1 empty on " + x.abbrev();
  }
  r.checks.push_back(bad ? fail("X1", *bad)
                         : pass("X1", std::to_string(held) + " of " +
                                          std::to_string(cf_inputs.size()) +
                                          " inputs compile without errors"));

  held = 0;
  bad.reset();
  for (const auto& x : df_inputs) {
    auto v = df.mf.eval_upto(2, {x});
    if (v[1] != empty) continue;
    ++held;
    if (v[0] == empty && !bad) bad = "df_1 empty on " + x.abbrev();
  }
  r.checks.push_back(bad ? fail("X2", *bad)
                         : pass("X2", std::to_string(held) + " of " +
                                          std::to_string(df_inputs.size()) +
                                          " inputs disassemble without errors"));

  held = 0;
  bad.reset();
  for (const auto& x : cf_inputs) {
    auto v = cf.mf.eval_upto(3, {x});
    if (v[1] != empty) continue;
    ++held;
    if (df.mf.eval(1, {v[2].payload()}) != v[0] && !bad) {
      bad = "df_1(cf_3) differs from cf_1 on " + x.abbrev();
    }
  }
  r.checks.push_back(bad ? fail("X3", *bad)
                         : pass("X3", "disassembly inverts assembly on " + std::to_string(held) +
                                          " inputs"));
  return r;
}

}  // namespace ctlcode
