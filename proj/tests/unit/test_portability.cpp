#include <filesystem>

#include "ctlcode/error.hpp"
#include "ctlcode/experiments.hpp"
#include "ctlcode/file_formats.hpp"
#include "ctlcode/portability.hpp"
#include "ctlcode/translators.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace ctlcode;
using test::bits;
namespace fs = std::filesystem;

namespace {

const MachineStructure& toy() {
  static const MachineStructure m = as_machine_structure(64'000'000);
  return m;
}

const std::string kFlip = "NEXTBIT\nSTM 1\nLDI 2\nSUB 1\nJZ 9\nLDI 1\nSUB 1\nOUTBIT 1\nJMP 0";

Corpus small_corpus() { return Corpus{{{}, {bits("1")}, {bits("0110")}}, 2}; }

std::vector<std::string> src_texts() {
  std::vector<std::string> out;
  for (auto& t : read_corpus_texts(test::corpora() / "src", ".src")) out.push_back(t.text);
  return out;
}

PortabilityCase example4() {
  return scenario_example4(test::assets(), read_file(test::corpora() / "src" / "concat.src"),
                           parse_input_vectors(read_file(test::corpora() / "src" / "data.inputs")));
}

}  // namespace

TEST_SUITE("portability") {
  TEST_CASE("installed code") {
    const auto x = host_assemble(kFlip);
    EAService eas(EAState::live({{"f0", x}, {"g", bits("1")}}), toy());
    CHECK(check_installed(toy(), executable_notation(), Code{x}, eas, {"f0"}, small_corpus()).holds());
    CHECK(check_installed(toy(), asm_notation(), Code{kFlip}, eas, {"f0"}, small_corpus()).holds());
    // A different program is not installed under f0.
    CHECK_FALSE(check_installed(toy(), asm_notation(), Code{std::string("LDI 1\nOUTBIT 1")}, eas,
                                {"f0"}, small_corpus())
                    .holds());
    auto w = find_install_witness(toy(), asm_notation(), Code{kFlip}, eas, small_corpus());
    REQUIRE(w);
    CHECK(*w == std::vector<std::string>{"f0"});

    CHECK_THROWS_AS(check_installed(toy(), asm_notation(), Code{kFlip}, eas, {}, small_corpus()), Error);
    CHECK_THROWS_AS(check_installed(toy(), asm_notation(), Code{kFlip}, eas, {"f0", "f0"}, small_corpus()),
                    Error);
    CHECK_THROWS_AS(check_installed(toy(), asm_notation(), Code{kFlip}, eas, {"nope"}, small_corpus()),
                    Error);
    CHECK_THROWS_AS(check_installed(toy(), asm_notation(), Code{kFlip}, eas, {"g"}, small_corpus()), Error);
    EAService dead(EAState::divergence(), toy());
    CHECK_THROWS_AS(check_installed(toy(), asm_notation(), Code{kFlip}, dead, {"f0"}, small_corpus()),
                    Error);
  }

  TEST_CASE("expansible services") {
    const auto s = EAState::live({{"a", bits("10")}});
    const auto t = EAState::live({{"a", bits("10")}, {"b", bits("10")}});
    EAService from(s, toy()), to(t, toy());
    CHECK(check_expansible(from, to, parse_thread("ea.cp:a:b ; S"), 8).holds());
    // set instructions are excluded.
    CHECK_FALSE(check_expansible(from, to, parse_thread("ea.set:b:10 ; S"), 8).holds());
    // Existing files must survive.
    EAService gone(EAState::live({{"b", bits("10")}}), toy());
    CHECK_FALSE(check_expansible(from, gone, parse_thread("ea.mv:a:b ; S"), 8).holds());
    // The result must be exactly the target.
    CHECK_FALSE(check_expansible(from, to, parse_thread("S"), 8).holds());
    CHECK_FALSE(check_expansible(from, to, parse_thread("D"), 8).holds());
  }

  TEST_CASE("set replay thread") {
    const auto s = EAState::live({{"a", bits("10")}, {"b", BitSeq{}}});
    auto t = set_replay_thread(s, {"a", "b"});
    CHECK(render(t) == "ea.set:a:10 ; ea.set:b: ; S");
    auto r = apply(t, "ea", service_of(EAState{}, toy()), 8);
    REQUIRE(r.outcome == ApplyResult::Outcome::Converged);
    CHECK(dynamic_cast<const EAService&>(*r.service).backing() == s);
  }

  TEST_CASE("a compiler assembled on demand is pre-installed") {
    auto pc = scenario_example3(test::assets(), src_texts());
    auto r = run_preinstall_case(pc);
    CHECK_MESSAGE(r.passed(), r.render());
    REQUIRE(r.lines.front().first == "unexpanded");
    CHECK(r.lines.back().first == "pre-installed");

    EAService start(pc.start, *pc.machine);
    CHECK_FALSE(check_installed(*pc.machine, pc.ccn, pc.code, start, {"fn1", "fn2"}, pc.corpus).holds());
    EAService target(pc.expansion.target, *pc.machine);
    CHECK(check_installed(*pc.machine, pc.ccn, pc.code, target, {"fn3"}, pc.corpus).holds());

    // Already installed: not pre-installed.
    auto installed = pc;
    installed.start = pc.expansion.target;
    installed.expansion.thread = parse_thread("S");
    CHECK_FALSE(run_preinstall_case(installed).passed());

    // An expansion that never converges.
    auto spinning = pc;
    spinning.expansion.thread = parse_thread("rec X { X = ea.exists:fn1 ; X } in X");
    CHECK_FALSE(run_preinstall_case(spinning).passed());
  }

  TEST_CASE("a source program is portable to a machine with an assembler") {
    auto pc = example4();
    auto r = run_portability_case(pc);
    CHECK_MESSAGE(r.passed(), r.render());
    REQUIRE(r.lines.size() == 4);
    CHECK(r.lines[0].first == "P1");
    CHECK(r.lines[3].first == "portable");

    // Without the assembler at the destination the replayed text cannot be
    // assembled there.
    auto no_asm = pc;
    no_asm.dst_start.files.erase("fn1");
    no_asm.dst_expansion.target.files.erase("fn1");
    no_asm.dst_expansion.target.loaded.reset();
    auto broken = run_portability_case(no_asm);
    CHECK_FALSE(broken.passed());
    CHECK(broken.lines[2].second.status == RuleStatus::Fail);

    // A plan name already bound at the destination.
    auto clash = pc;
    clash.dst_start.files["fn3"] = bits("1");
    CHECK_THROWS_AS(check_portable(clash), Error);
    CHECK_FALSE(run_portability_case(clash).passed());

    // A destination that runs out of fuel disagrees on outputs.
    auto starved = pc;
    starved.dst_machine = std::make_shared<const MachineStructure>(as_machine_structure(10));
    auto s = run_portability_case(starved);
    CHECK_FALSE(s.passed());
    CHECK(s.lines[0].second.status == RuleStatus::Fail);
  }

  TEST_CASE("fixture manifests reproduce the scenarios") {
    const auto tmp = fs::temp_directory_path() / "ctlcode-port-fixtures";
    fs::remove_all(tmp);
    write_port_fixture(tmp / "e4", example4());
    auto r = run_port_manifest(tmp / "e4" / "manifest");
    CHECK_MESSAGE(r.passed(), r.render());

    auto reg = NotationRegistry::from_manifest(read_file(test::source_dir() / "notations.manifest"));
    CHECK(run_port_manifest(tmp / "e4" / "manifest", &reg).passed());
    auto renamed = NotationRegistry::from_manifest("exe executable exe\nprog source src\n");
    CHECK_THROWS_AS(run_port_manifest(tmp / "e4" / "manifest", &renamed), Error);

    CHECK_THROWS_AS(run_port_manifest(tmp / "missing" / "manifest"), Error);
    fs::remove_all(tmp);
  }

  TEST_CASE("shipped fixtures pass") {
    for (const char* name : {"example3", "example4"}) {
      CAPTURE(name);
      auto r = run_port_manifest(test::source_dir() / "fixtures" / name / "manifest");
      CHECK_MESSAGE(r.passed(), r.render());
    }
  }
}
