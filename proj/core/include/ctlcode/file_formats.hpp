#pragma once

// Plain-text file formats shared by the CLI, tests and fixtures.
//   .exe.txt       line 1 `bits=<N>`, line 2 the 0/1 string
//   input vectors  one vector per line; whitespace separated 0/1 or x-hex
//                  tokens, `e` for the empty sequence, a bare `none` for the
//                  vector with no arguments, `#` starts a comment

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ctlcode/bitseq.hpp"

namespace ctlcode {

std::string read_file(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, std::string_view content);

/// Throws ParseError.
BitSeq parse_exe_txt(std::string_view text);
std::string format_exe_txt(const BitSeq& b);

/// Throws ParseError.
std::vector<BitSeqs> parse_input_vectors(std::string_view text);
std::string format_input_vector(const BitSeqs& v);

}  // namespace ctlcode
