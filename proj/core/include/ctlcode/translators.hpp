#pragma once

// Host-side reference translators for the toy notations over TM:
//   ASM  lines `MNEMONIC` or `MNEMONIC <decimal>`, LF separated
//   SRC  ASM lines plus `@name:` labels, `JMP|JZ|JNZ @name`, `#` comments
//        and blank lines
//   ICN  the byte 'I' (01001001) followed by a TM executable
// A single trailing LF is accepted after the last line. Canonical text has
// none. These translators are the oracles the self-hosted assets are checked
// against.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ctlcode/bitseq.hpp"
#include "ctlcode/toy_machine.hpp"

namespace ctlcode {

/// Splits on LF, dropping the empty piece after a trailing LF.
std::vector<std::string_view> split_lines(std::string_view text);

/// Strict ASM parser. Throws ParseError carrying the 1-based line.
ToyProgram parse_asm(std::string_view text);
/// Canonical ASM text of a program.
std::string format_asm(const ToyProgram& program);

BitSeq host_assemble(std::string_view asm_text);
/// Two-pass SRC to canonical ASM translation. Throws ParseError.
std::string host_compile(std::string_view src_text);

struct Disassembly {
  std::optional<std::string> text;  // canonical ASM when the input decodes
  std::string errors;               // empty on success
};
Disassembly host_disassemble(const BitSeq& exe);

/// 01001001, ASCII 'I'.
const BitSeq& icn_header();
BitSeq make_icn(std::string_view asm_text);
/// The executable tail of an ICN code, or nullopt when the header is absent
/// or the tail does not decode.
std::optional<BitSeq> icn_payload(const BitSeq& icn);

/// Canonical form of an ASM text: tolerates CR, surplus spaces and blank
/// lines, then re-emits canonically. Throws ParseError.
std::string format_asm_text(std::string_view text);
/// Canonical form of a SRC text: LF endings, no trailing whitespace, canonical
/// instruction lines, no trailing LF. Comments, labels and blank lines stay.
std::string format_src_text(std::string_view text);

}  // namespace ctlcode
