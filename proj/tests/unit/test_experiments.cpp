#include "ctlcode/asset_gen.hpp"
#include "ctlcode/experiments.hpp"
#include "ctlcode/translators.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace ctlcode;
using test::bits;

namespace {

std::vector<std::string> texts(const std::string& sub, std::string_view ext) {
  std::vector<std::string> out;
  for (auto& t : read_corpus_texts(test::corpora() / sub, ext)) out.push_back(t.text);
  return out;
}

std::size_t occurrences(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_SUITE("experiments") {
  TEST_CASE("apply_code reports failing legs") {
    CHECK(apply_code(host_assemble("LDI 1\nOUTBIT 1"), {}, 100) == BitSeq{1});
    CHECK_THROWS_AS(apply_code(BitSeq{}, {}, 100), LegFailure);
    CHECK_THROWS_AS(apply_code(host_assemble("JMP 0"), {}, 100), LegFailure);
  }

  TEST_CASE("corpus readers") {
    auto asm_files = read_corpus_texts(test::corpora() / "asm", ".asm");
    REQUIRE(asm_files.size() >= 20);
    CHECK(std::is_sorted(asm_files.begin(), asm_files.end(),
                         [](const auto& a, const auto& b) { return a.name < b.name; }));
    CHECK(read_corpus_data(test::corpora() / "asm").size() >= 3);
    CHECK(read_corpus_data(test::corpora() / "interp").empty());
    auto cases = read_interp_cases(test::corpora() / "interp");
    REQUIRE(cases.size() >= 10);
    for (const auto& c : cases) CHECK(c.inputs.size() >= 3);
  }

  TEST_CASE("assembler fixed point with the shipped assets") {
    auto r = assembler_fixpoint_experiment(
        assembler_inputs(test::assets(), texts("asm", ".asm"), read_corpus_data(test::corpora() / "asm")));
    CHECK_MESSAGE(r.passed(), r.render());
    REQUIRE(r.checks.size() == 5);
    CHECK(r.checks.back().id == "E3");
    CHECK(r.checks.back().detail == "bit-exact");
    REQUIRE(r.find("E2"));
    CHECK(r.find("E2")->detail.find("asm'' equals asm_0") != std::string::npos);
  }

  TEST_CASE("an assembler emitting reversed operand bytes fails E1") {
    auto in = assembler_inputs(test::assets(), texts("asm", ".asm"),
                               read_corpus_data(test::corpora() / "asm"));
    in.asm_prime = host_compile(generate_assembler_src({.reverse_operand_bytes = true}));
    auto r = assembler_fixpoint_experiment(in);
    CHECK_FALSE(r.passed());
    REQUIRE(r.find("E1"));
    CHECK(r.find("E1")->status == RuleStatus::Fail);
    CHECK_FALSE(r.find("E1")->detail.empty());
    CHECK(r.render().find("E1: FAIL") != std::string::npos);
  }

  TEST_CASE("compiler fixed point") {
    auto in = compiler_inputs(test::assets(), texts("src", ".src"),
                              read_corpus_data(test::corpora() / "src"));
    auto r = compiler_fixpoint_experiment(in);
    CHECK_MESSAGE(r.passed(), r.render());
    CHECK(r.find("C3")->detail == "bit-exact");

    in.programs.clear();
    auto vacuous = compiler_fixpoint_experiment(in);
    CHECK(vacuous.find("C1")->status == RuleStatus::Pass);
    CHECK(vacuous.find("C3")->status == RuleStatus::Pass);
  }

  TEST_CASE("a compiler with a corrupted opcode table fails C1") {
    auto in = compiler_inputs(test::assets(), texts("src", ".src"),
                              read_corpus_data(test::corpora() / "src"));
    // SUB's table entry is overwritten with ADD's mnemonic hash.
    REQUIRE(occurrences(in.compil_prime, "LDI 20130\n") == 1);
    in.compil_prime.replace(in.compil_prime.find("LDI 20130\n"), 10, "LDI 1156\n");
    auto r = compiler_fixpoint_experiment(in);
    REQUIRE(r.find("C1"));
    CHECK(r.find("C1")->status == RuleStatus::Fail);
  }

  TEST_CASE("interpreter correctness on small programs") {
    std::vector<InterpCase> cases = {
        {"one", "LDI 1\nOUTBIT 1\nHALT", {{}, {bits("1")}, {bits("0"), bits("1")}}},
        {"echo",
         "@a:\nNEXTBIT\nSTM 1\nLDI 2\nSUB 1\nJZ @b\nLDM 1\nOUTBIT 1\nJMP @a\n@b:",
         {{bits("")}, {bits("1")}, {bits("0110")}}},
        {"spin", "@x:\nJMP @x", {{}, {bits("1")}, {bits("01")}}},
    };
    ExperimentOptions opt;
    opt.run_fuel = 20'000;
    auto r = interpreter_experiment(interpreter_inputs(test::assets(), cases), opt);
    CHECK_MESSAGE(r.passed(), r.render());
    CHECK(r.find("I[spin]")->detail.find("Div/Div stable") != std::string::npos);
    CHECK(r.find("I")->detail.find("1 divergent") != std::string::npos);
  }

  TEST_CASE("compiling and disassembling machines") {
    const auto cf = compiling_machine();
    const auto df = disassembling_machine();
    CHECK(cf.kind == StructureKind::Dedicated);
    auto v = cf.mf.eval_upto(3, {BitSeq::from_ascii("@a:\nJMP @a")});
    CHECK(v[0] == OutVal::bits(BitSeq::from_ascii("JMP 0")));
    CHECK(v[1] == OutVal::bits({}));
    CHECK(v[2] == OutVal::bits(host_assemble("JMP 0")));
    auto e = cf.mf.eval_upto(3, {BitSeq::from_ascii("JMP @b")});
    CHECK(e[1] != OutVal::bits({}));
    auto d = df.mf.eval_upto(2, {bits("1")});
    CHECK(d[1] != OutVal::bits({}));

    std::vector<BitSeq> cf_in, df_in;
    for (const auto& t : texts("src", ".src")) cf_in.push_back(BitSeq::from_ascii(t));
    for (const auto& t : texts("asm", ".asm")) {
      cf_in.push_back(BitSeq::from_ascii(t));
      df_in.push_back(host_assemble(t));
    }
    cf_in.push_back(BitSeq::from_ascii("JMP @nowhere"));
    df_in.push_back(bits("101"));
    auto r = example1_properties(cf_in, df_in);
    CHECK_MESSAGE(r.passed(), r.render());
    CHECK(r.checks.size() == 3);
  }
}
