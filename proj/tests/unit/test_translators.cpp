#include <random>

#include "ctlcode/error.hpp"
#include "ctlcode/random_cases.hpp"
#include "ctlcode/translators.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace ctlcode;
using test::bits;
using test::prog;

namespace {

std::size_t parse_error_line(std::string_view text, bool src) {
  try {
    src ? (void)host_compile(text) : (void)parse_asm(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_SUITE("translators") {
  TEST_CASE("host assembler") {
    CHECK(host_assemble("HALT") == BitSeq(std::vector<bool>(40, false)));
    CHECK(host_assemble("LDI 1\nOUTBIT 1\nHALT") ==
          encode(prog({{Opcode::LDI, 1}, {Opcode::OUTBIT, 1}, {Opcode::HALT, 0}})));
    CHECK(host_assemble("LDI 1\nOUTBIT 1\nHALT\n") == host_assemble("LDI 1\nOUTBIT 1\nHALT"));
    CHECK(host_assemble("").empty());
    BitSeq ldi;
    ldi.append_uint(1, 8);
    ldi.append_uint(4294967295U, 32);
    CHECK(host_assemble("LDI 4294967295") == ldi);
  }

  TEST_CASE("assembler rejections carry the line") {
    CHECK(parse_error_line("HALT\nFOO 1", false) == 2);
    CHECK(parse_error_line("LDI", false) == 1);
    CHECK(parse_error_line("HALT 1", false) == 1);
    CHECK(parse_error_line("HALT\nLDI 4294967296", false) == 2);
    CHECK(host_assemble("LDI 01") == host_assemble("LDI 1"));
    CHECK(parse_error_line("HALT\n\nHALT", false) == 2);
    CHECK(parse_error_line("HALT\n\n", false) == 2);
    CHECK(parse_error_line("ldi 1", false) == 1);
  }

  TEST_CASE("compiler resolves labels to instruction indices") {
    CHECK(host_compile("HALT") == "HALT");
    CHECK(host_compile("@top:\nJMP @top") == "JMP 0");
    CHECK(host_compile("# loop\nLDI 1\n\n@a:\n@b:\nJNZ @c\nJMP @b\n@c:\nHALT") ==
          "LDI 1\nJNZ 3\nJMP 1\nHALT");
    CHECK(host_compile("JMP @end\n@end:") == "JMP 1");
    CHECK(parse_error_line("JMP @nowhere", true) == 1);
    CHECK(parse_error_line("@a:\n@a:", true) == 2);
    CHECK(parse_error_line("HALT\nLDI @a\n@a:", true) == 2);
  }

  TEST_CASE("disassembly inverts assembly on canonical text") {
    const std::string canonical = "LDI 5\nSTM 1\nNEXTBIT\nOUTBIT 1\nJMP 0\nHALT";
    auto d = host_disassemble(host_assemble(canonical));
    REQUIRE(d.text);
    CHECK(*d.text == canonical);
    CHECK(d.errors.empty());

    auto bad = host_disassemble(bits("10101010"));
    CHECK_FALSE(bad.text);
    CHECK_FALSE(bad.errors.empty());

    std::mt19937_64 rng(5);
    for (int k = 0; k < 500; ++k) {
      auto p = random_program(rng);
      auto text = format_asm(p);
      CHECK(parse_asm(text) == p);
      auto back = host_disassemble(encode(p));
      REQUIRE(back.text);
      CHECK(*back.text == text);
    }
  }

  TEST_CASE("intermediate code") {
    CHECK(icn_header().to_string() == "01001001");
    CHECK(make_icn("HALT").to_string() == "01001001" + std::string(40, '0'));
    const std::string a = "LDI 1\nOUTBIT 1";
    CHECK(icn_payload(make_icn(a)) == host_assemble(a));
    CHECK_FALSE(icn_payload(host_assemble(a)));
    CHECK_FALSE(icn_payload(concat(icn_header(), bits("1"))));
  }

  TEST_CASE("formatters are canonical and idempotent") {
    CHECK(format_asm_text("  LDI   3 \r\n\r\nHALT\n") == "LDI 3\nHALT");
    const std::string src = "# c  \n@x:\t\n  LDI   3\nJMP @x   \n";
    const auto once = format_src_text(src);
    CHECK(once == "# c\n@x:\nLDI 3\nJMP @x");
    CHECK(format_src_text(once) == once);
    CHECK(format_asm_text(format_asm_text("HALT\n")) == "HALT");
    CHECK(host_compile(once) == "LDI 3\nJMP 0");
  }

  TEST_CASE("split_lines drops one trailing empty piece") {
    CHECK(split_lines("a\nb\n").size() == 2);
    CHECK(split_lines("a\n\n").size() == 2);
    CHECK(split_lines("").empty());
  }
}
