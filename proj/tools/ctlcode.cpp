// ctlcode: command-line workbench over the toy machine, its translators, the
// execution architecture and the experiment drivers.
//
// Exit status: 0 when every check of the report passes, 1 when a check
// fails, 2 for usage errors and unreadable inputs.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ctlcode/assets.hpp"
#include "ctlcode/error.hpp"
#include "ctlcode/exec_arch.hpp"
#include "ctlcode/experiments.hpp"
#include "ctlcode/file_formats.hpp"
#include "ctlcode/notation.hpp"
#include "ctlcode/portability.hpp"
#include "ctlcode/random_cases.hpp"
#include "ctlcode/thread.hpp"
#include "ctlcode/toy_machine.hpp"
#include "ctlcode/translators.hpp"

namespace fs = std::filesystem;
using namespace ctlcode;

namespace {

constexpr int kPass = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

// Input trouble (unreadable or malformed files) maps to the usage status.
struct InputError : Error {
  using Error::Error;
};

std::string slurp(const fs::path& p) {
  try {
    return read_file(p);
  } catch (const Error& e) {
    throw InputError(e.what());
  }
}

template <class F>
auto parsing(const fs::path& p, F&& f) {
  try {
    return f(slurp(p));
  } catch (const ParseError& e) {
    throw InputError(p.string() + ": " + e.what());
  }
}

BitSeq read_exe(const fs::path& p) {
  return parsing(p, [](const std::string& t) { return parse_exe_txt(t); });
}

BitSeq read_bits(const fs::path& p) {
  auto text = slurp(p);
  auto a = text.find_first_not_of(" \t\r\n");
  auto b = text.find_last_not_of(" \t\r\n");
  std::string body = a == std::string::npos ? "" : text.substr(a, b - a + 1);
  if (body == "e") body.clear();
  try {
    return BitSeq::parse(body);
  } catch (const std::invalid_argument& e) {
    throw InputError(p.string() + ": " + e.what());
  }
}

void emit(const fs::path& out, std::string_view content) {
  if (out.empty()) {
    std::cout << content;
  } else {
    write_file(out, content);
  }
}

AssetSet assets_from(const std::string& dir) {
  return load_assets(dir.empty() ? default_asset_dir() : fs::path(dir));
}

int report_status(bool passed) { return passed ? kPass : kCheckFailed; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Control code workbench: toy machine, translators, execution architecture"};
  app.require_subcommand(1);
  std::string asset_dir;
  app.add_option("--assets", asset_dir, "Directory of the frozen translator assets");
  fs::path notations_file;
  app.add_option("--notations", notations_file, "Notation registry manifest (name class decoder)");

  int status = kPass;
  std::function<int()> action;

  // tm-run
  auto* tm = app.add_subcommand("tm-run", "Run an executable and print its outputs");
  fs::path tm_exe;
  std::vector<fs::path> tm_inputs;
  std::uint64_t tm_fuel = 1'000'000;
  std::optional<std::size_t> tm_nmax;
  tm->add_option("exe", tm_exe, "Executable (.exe.txt)")->required();
  tm->add_option("--in", tm_inputs, "File holding one input bit sequence; repeatable");
  tm->add_option("--fuel", tm_fuel, "Step budget");
  tm->add_option("--n-max", tm_nmax, "Print outputs 1..K (default: up to the first Mea)");
  tm->callback([&] {
    action = [&] {
      const auto m = as_machine_structure(tm_fuel);
      BitSeqs args{read_exe(tm_exe)};
      for (const auto& p : tm_inputs) args.push_back(read_bits(p));
      std::vector<OutVal> outs;
      if (tm_nmax) {
        outs = m.mf.eval_upto(*tm_nmax, args);
      } else {
        for (std::size_t n = 1;; ++n) {
          outs = m.mf.eval_upto(n, args);
          if (!outs.back().is_bits()) break;
        }
      }
      for (std::size_t n = 1; n <= outs.size(); ++n) {
        std::cout << "out[" << n << "] = " << outs[n - 1].to_string() << '\n';
      }
      return kPass;
    };
  });

  // asm
  auto* as = app.add_subcommand("asm", "Assemble ASM text into an executable");
  fs::path as_in, as_out;
  as->add_option("asmfile", as_in)->required();
  as->add_option("-o,--output", as_out, "Output .exe.txt (default: stdout)");
  as->callback([&] {
    action = [&] {
      emit(as_out, format_exe_txt(host_assemble(slurp(as_in))));
      return kPass;
    };
  });

  // compile
  auto* co = app.add_subcommand("compile", "Compile SRC text into ASM text");
  fs::path co_in, co_out;
  co->add_option("srcfile", co_in)->required();
  co->add_option("-o,--output", co_out, "Output ASM file (default: stdout)");
  co->callback([&] {
    action = [&] {
      auto text = host_compile(slurp(co_in));
      emit(co_out, co_out.empty() ? text + "\n" : text);
      return kPass;
    };
  });

  // disasm
  auto* di = app.add_subcommand("disasm", "Disassemble an executable");
  fs::path di_in;
  di->add_option("exe", di_in)->required();
  di->callback([&] {
    action = [&] {
      auto d = host_disassemble(read_exe(di_in));
      if (!d.text) {
        std::cerr << d.errors;
        return kCheckFailed;
      }
      std::cout << *d.text << (d.text->empty() ? "" : "\n");
      return kPass;
    };
  });

  // icn
  auto* ic = app.add_subcommand("icn", "Assemble ASM text into an intermediate code");
  fs::path ic_in, ic_out;
  ic->add_option("asmfile", ic_in)->required();
  ic->add_option("-o,--output", ic_out, "Output .icn.txt (default: stdout)");
  ic->callback([&] {
    action = [&] {
      emit(ic_out, format_exe_txt(make_icn(slurp(ic_in))));
      return kPass;
    };
  });

  // ea-script
  auto* ea = app.add_subcommand("ea-script", "Run instructions against a snapshot");
  fs::path ea_snap, ea_script, ea_out;
  std::uint64_t ea_fuel = 64'000'000;
  ea->add_option("snapshot", ea_snap)->required();
  ea->add_option("script", ea_script)->required();
  ea->add_option("-o,--output", ea_out, "Write the final snapshot here");
  ea->add_option("--fuel", ea_fuel, "Step budget for exe instructions");
  ea->callback([&] {
    action = [&] {
      auto s = parsing(ea_snap, [](const std::string& t) { return parse_snapshot(t); });
      auto script = parsing(ea_script, [](const std::string& t) { return parse_script(t); });
      const auto m = as_machine_structure(ea_fuel);
      std::string replies;
      for (const auto& i : script) {
        auto r = step(i, s, m);
        std::cout << format_instruction(i) << " -> " << to_string(r.reply) << '\n';
        replies += (replies.empty() ? "" : " ") + std::string(to_string(r.reply));
        s = std::move(r.state);
      }
      std::cout << "replies: " << replies << '\n';
      if (!ea_out.empty()) write_file(ea_out, format_snapshot(s));
      return kPass;
    };
  });

  // thread-apply
  auto* ta = app.add_subcommand("thread-apply", "Apply a thread to the service of a snapshot");
  fs::path ta_snap, ta_thread, ta_out;
  std::uint64_t ta_fuel = 1000, ta_machine_fuel = 64'000'000;
  ta->add_option("snapshot", ta_snap)->required();
  ta->add_option("threadfile", ta_thread)->required();
  ta->add_option("--fuel", ta_fuel, "Maximum number of actions processed");
  ta->add_option("--machine-fuel", ta_machine_fuel, "Step budget for exe instructions");
  ta->add_option("-o,--output", ta_out, "Write the resulting snapshot here");
  ta->callback([&] {
    action = [&] {
      auto s = parsing(ta_snap, [](const std::string& t) { return parse_snapshot(t); });
      auto p = parsing(ta_thread, [](const std::string& t) { return parse_thread(t); });
      const auto m = as_machine_structure(ta_machine_fuel);
      auto r = apply(p, "ea", service_of(s, m), ta_fuel);
      for (const auto& [method, reply] : r.trace) {
        std::cout << "ea." << method << " -> " << to_string(reply) << '\n';
      }
      std::cout << "outcome: " << to_string(r.outcome);
      if (!r.reason.empty()) std::cout << " (" << r.reason << ")";
      std::cout << '\n';
      const auto* eas = dynamic_cast<const EAService*>(r.service.get());
      const EAState out = eas ? eas->backing() : EAState::divergence();
      if (!ta_out.empty()) write_file(ta_out, format_snapshot(out));
      return report_status(r.outcome == ApplyResult::Outcome::Converged);
    };
  });

  // experiment
  auto* ex = app.add_subcommand("experiment", "Run a named experiment over a corpus");
  std::string ex_name;
  fs::path ex_corpus;
  ExperimentOptions ex_opt;
  ex->add_option("name", ex_name, "assembler-fixpoint | compiler-fixpoint | interpreter | example1")
      ->required()
      ->check(CLI::IsMember({"assembler-fixpoint", "compiler-fixpoint", "interpreter", "example1"}));
  ex->add_option("--corpus", ex_corpus, "Corpus directory")->required();
  ex->add_option("--fuel", ex_opt.translator_fuel, "Step budget for translator legs");
  ex->add_option("--run-fuel", ex_opt.run_fuel, "Step budget for translated programs");
  ex->add_option("--n-max", ex_opt.n_max, "Output indices compared");
  ex->callback([&] {
    action = [&] {
      ExperimentReport r;
      auto texts = [&](std::string_view ext) {
        std::vector<std::string> out;
        for (auto& t : read_corpus_texts(ex_corpus, ext)) out.push_back(std::move(t.text));
        return out;
      };
      if (ex_name == "assembler-fixpoint") {
        r = assembler_fixpoint_experiment(
            assembler_inputs(assets_from(asset_dir), texts(".asm"), read_corpus_data(ex_corpus)),
            ex_opt);
      } else if (ex_name == "compiler-fixpoint") {
        r = compiler_fixpoint_experiment(
            compiler_inputs(assets_from(asset_dir), texts(".src"), read_corpus_data(ex_corpus)),
            ex_opt);
      } else if (ex_name == "interpreter") {
        r = interpreter_experiment(
            interpreter_inputs(assets_from(asset_dir), read_interp_cases(ex_corpus)), ex_opt);
      } else {
        std::vector<BitSeq> cf, df;
        std::vector<std::string> src, asms;
        for (const auto& dir : {ex_corpus, ex_corpus / "src", ex_corpus / "asm"}) {
          if (!fs::is_directory(dir)) continue;
          for (auto& t : read_corpus_texts(dir, ".src")) src.push_back(std::move(t.text));
          for (auto& t : read_corpus_texts(dir, ".asm")) asms.push_back(std::move(t.text));
        }
        for (const auto& t : src) cf.push_back(BitSeq::from_ascii(t));
        for (const auto& t : asms) {
          cf.push_back(BitSeq::from_ascii(t));
          try {
            df.push_back(host_assemble(t));
          } catch (const ParseError&) {
          }
        }
        df.push_back(BitSeq{1, 0, 1});
        r = example1_properties(cf, df);
      }
      std::cout << r.render();
      return report_status(r.passed());
    };
  });

  // check-rules
  auto* cr = app.add_subcommand("check-rules", "Check the machine-function rules on random cases");
  std::size_t cr_cases = 1000, cr_nmax = 4;
  std::uint64_t cr_seed = 1, cr_fuel = 2000;
  cr->add_option("--cases", cr_cases, "Number of random cases");
  cr->add_option("--seed", cr_seed, "Random seed");
  cr->add_option("--fuel", cr_fuel, "Step budget per run");
  cr->add_option("--n-max", cr_nmax, "Output indices inspected");
  cr->callback([&] {
    action = [&] {
      auto sweep = rule_sweep(as_machine_structure(cr_fuel), random_rule_cases(cr_seed, cr_cases),
                              cr_nmax);
      std::cout << "# " << sweep.cases << " cases, seed " << cr_seed << '\n';
      for (const auto& r : sweep.totals.rules) {
        std::cout << r.rule << ": " << to_string(r.status) << " (" << r.checked << " checked";
        if (r.inconclusive) std::cout << ", " << r.inconclusive << " inconclusive";
        if (r.witness) std::cout << "; " << *r.witness;
        std::cout << ")\n";
      }
      return report_status(sweep.totals.hard_failures() == 0);
    };
  });

  // port-check
  auto* pc = app.add_subcommand("port-check", "Check a pre-installation or portability fixture");
  fs::path pc_manifest;
  pc->add_option("manifest", pc_manifest)->required();
  pc->callback([&] {
    action = [&] {
      PortReport r;
      try {
        std::optional<NotationRegistry> registry;
        if (!notations_file.empty()) {
          registry = NotationRegistry::from_manifest(slurp(notations_file));
        }
        r = run_port_manifest(pc_manifest, registry ? &*registry : nullptr);
      } catch (const ParseError& e) {
        throw InputError(e.what());
      }
      std::cout << r.render();
      return report_status(r.passed());
    };
  });

  // fmt
  auto* fm = app.add_subcommand("fmt", "Print the canonical form of an ASM or SRC file");
  fs::path fm_in;
  bool fm_in_place = false;
  fm->add_option("file", fm_in, "A .asm or .src file")->required();
  fm->add_flag("-i,--in-place", fm_in_place, "Rewrite the file instead of printing");
  fm->callback([&] {
    action = [&] {
      const auto text = slurp(fm_in);
      std::string out;
      if (fm_in.extension() == ".asm") {
        out = format_asm_text(text);
      } else if (fm_in.extension() == ".src") {
        out = format_src_text(text);
      } else {
        throw InputError("fmt needs a .asm or .src file");
      }
      if (fm_in_place) {
        write_file(fm_in, out);
      } else {
        std::cout << out << (out.empty() ? "" : "\n");
      }
      return kPass;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kPass : kUsage;
  }
  try {
    status = action();
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCheckFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
  return status;
}
