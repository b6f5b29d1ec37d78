#include "ctlcode/error.hpp"
#include "ctlcode/machine.hpp"
#include "ctlcode/toy_machine.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace ctlcode;
using test::bits;
using test::prog;

namespace {

const MachineStructure& toy() {
  static const MachineStructure m = as_machine_structure(10'000);
  return m;
}

BitSeq emit_const(int bit) {
  return encode(prog({{Opcode::LDI, std::uint64_t(bit)}, {Opcode::OUTBIT, 1}}));
}

// Copies argument 1 to output 1.
BitSeq echo_exe() {
  return encode(prog({{Opcode::NEXTBIT, 0},
                      {Opcode::STM, 1},
                      {Opcode::LDI, 2},
                      {Opcode::SUB, 1},
                      {Opcode::JZ, 8},
                      {Opcode::LDM, 1},
                      {Opcode::OUTBIT, 1},
                      {Opcode::JMP, 0}}));
}

MachineFunction table_mf(std::vector<OutVal> row) {
  return MachineFunction(
      [row](std::size_t n, const BitSeqs&) { return n <= row.size() ? row[n - 1] : OutVal::mea(); },
      1);
}

}  // namespace

TEST_SUITE("machine") {
  TEST_CASE("OutVal rendering") {
    CHECK(OutVal::mea().to_string() == "Mea");
    CHECK(OutVal::div().to_string() == "Div");
    CHECK(OutVal::bits(bits("01")).to_string() == "Bits(01)");
  }

  TEST_CASE("meaning fixes the controlling input") {
    const auto e1 = emit_const(1);
    auto mf = meaning(toy(), e1);
    CHECK(mf.eval(1, {}) == OutVal::bits(BitSeq{1}));
    CHECK(mf.eval(1, {}) == toy().mf.eval(1, {e1}));
    auto echo = meaning(toy(), echo_exe());
    CHECK(echo.eval(1, {bits("0110")}) == toy().mf.eval(1, {echo_exe(), bits("0110")}));
    CHECK(echo.eval(1, {bits("0110")}) == OutVal::bits(bits("0110")));
    CHECK_THROWS_AS(meaning(toy(), bits("1")), NotExecutable);
  }

  TEST_CASE("behavioural equivalence") {
    Corpus c{{{}, {bits("1")}, {bits("01"), bits("1")}}, 2};
    CHECK(behaviourally_equivalent(toy(), echo_exe(), echo_exe(), c));
    auto r = behaviourally_equivalent(toy(), emit_const(0), emit_const(1), c);
    CHECK_FALSE(r);
    REQUIRE(r.witness);
    CHECK(r.witness->input.empty());
    CHECK(r.witness->n == 1);
    CHECK(r.witness->lhs == OutVal::bits(BitSeq{0}));
    CHECK(r.witness->rhs == OutVal::bits(BitSeq{1}));
    // Different code, same behaviour.
    auto padded = encode(prog({{Opcode::LDI, 1}, {Opcode::OUTBIT, 1}, {Opcode::HALT, 0}}));
    CHECK(behaviourally_equivalent(toy(), emit_const(1), padded, c));
    CHECK_THROWS_AS(behaviourally_equivalent(toy(), bits("1"), padded, c), NotExecutable);
  }

  TEST_CASE("corpus validation") {
    CHECK_THROWS_AS(Corpus{}.validate(), std::invalid_argument);
    CHECK_THROWS_AS((Corpus{{{}}, 0}.validate()), std::invalid_argument);
  }

  TEST_CASE("rules on the constant-Div function") {
    MachineFunction all_div([](std::size_t, const BitSeqs&) { return OutVal::div(); }, 1);
    Corpus c{{{}, {bits("1")}}, 4};
    auto r = check_mf_rules(all_div, c, {{bits("0")}});
    CHECK(r.hard_failures() == 0);
    for (int k = 1; k <= 5; ++k) CHECK(r.rule(k).status == RuleStatus::Pass);
  }

  TEST_CASE("rule violations are reported with a witness") {
    Corpus c{{{}}, 3};
    auto r1 = check_mf_rules(table_mf({OutVal::div(), OutVal::mea()}), c, {});
    CHECK(r1.rule(1).status == RuleStatus::Fail);
    REQUIRE(r1.rule(1).witness);
    CHECK(r1.rule(1).witness->find("mf_1=Div") != std::string::npos);

    auto r3 = check_mf_rules(table_mf({OutVal::mea(), OutVal::bits({})}), c, {});
    CHECK(r3.rule(3).status == RuleStatus::Fail);
    CHECK(r3.rule(1).status == RuleStatus::Pass);

    // R2 needs a Mea index within the bound.
    auto r2 = check_mf_rules(
        table_mf({OutVal::bits({}), OutVal::bits({}), OutVal::bits({}), OutVal::bits({})}), c, {});
    CHECK(r2.rule(2).status == RuleStatus::Inconclusive);
    CHECK(r2.hard_failures() == 0);

    // Extending the input turns Div into a value: R4.
    MachineFunction grows(
        [](std::size_t, const BitSeqs& a) { return a.empty() ? OutVal::div() : OutVal::mea(); }, 1);
    auto r4 = check_mf_rules(grows, c, {{bits("1")}});
    CHECK(r4.rule(4).status == RuleStatus::Fail);

    // Extending the input loses an output: R5.
    MachineFunction shrinks(
        [](std::size_t n, const BitSeqs& a) {
          return a.empty() && n == 1 ? OutVal::bits({}) : OutVal::mea();
        },
        1);
    auto r5 = check_mf_rules(shrinks, c, {{bits("1")}});
    CHECK(r5.rule(5).status == RuleStatus::Fail);
    CHECK(r5.hard_failures() == 1);
  }

  TEST_CASE("the toy machine satisfies the rules on hand-picked programs") {
    Corpus c{{{emit_const(1)}, {echo_exe(), bits("10")}, {encode(prog({{Opcode::JMP, 0}}))},
              {bits("1"), bits("0")}},
             3};
    auto r = check_mf_rules(toy().mf, c, {{bits("1")}, {}});
    CHECK(r.hard_failures() == 0);
  }

  TEST_CASE("asymmetry") {
    MachineFunction constant([](std::size_t, const BitSeqs&) { return OutVal::bits(BitSeq{1}); },
                             1);
    CHECK_FALSE(is_asymmetric(constant, {{bits("0"), bits("1")}, {echo_exe(), bits("1")}}));
    auto r = is_asymmetric(toy().mf, {{echo_exe(), bits("1")}});
    CHECK(r);
    REQUIRE(r.witness);
    CHECK(r.witness->first == echo_exe());
    CHECK_FALSE(is_asymmetric(toy().mf, {}));
  }

  TEST_CASE("overruling") {
    std::vector<BitSeq> probes = {{}, bits("1"), bits("0110"), emit_const(1)};
    auto r = overrules(toy(), {emit_const(0), emit_const(1)}, probes);
    CHECK(r);
    REQUIRE(r.witness);
    CHECK(r.witness->z1 == BitSeq{0});
    CHECK(r.witness->z2 == BitSeq{1});
    CHECK_FALSE(overrules(toy(), {emit_const(0)}, probes));
    CHECK_FALSE(overrules(toy(), {echo_exe(), emit_const(1)}, probes));
    CHECK_FALSE(overrules(toy(), {emit_const(0), emit_const(0)}, probes));
    CHECK_THROWS_AS(overrules(toy(), {bits("1")}, probes), NotExecutable);

    // In the second position the data never controls TM.
    CHECK_FALSE(second_overrules_first(toy().mf, {emit_const(0), emit_const(1)},
                                       {emit_const(0), echo_exe()}));
  }
}
