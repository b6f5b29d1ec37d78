#include "ctlcode/file_formats.hpp"

#include <fstream>
#include <sstream>

#include "ctlcode/error.hpp"
#include "ctlcode/translators.hpp"

namespace ctlcode {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot read " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::filesystem::path& p, std::string_view content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + p.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("short write to " + p.string());
}

BitSeq parse_exe_txt(std::string_view text) {
  auto lines = split_lines(text);
  if (lines.empty() || lines[0].substr(0, 5) != "bits=") {
    throw ParseError(1, "expected `bits=<N>`");
  }
  std::size_t n = 0;
  try {
    std::size_t used = 0;
    n = std::stoull(std::string(lines[0].substr(5)), &used);
    if (used != lines[0].size() - 5) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw ParseError(1, "malformed bit count");
  }
  if (lines.size() > 2) throw ParseError(3, "unexpected content");
  std::string_view body = lines.size() == 2 ? lines[1] : std::string_view{};
  for (char c : body) {
    if (c != '0' && c != '1') throw ParseError(2, "expected a 0/1 string");
  }
  if (body.size() != n) {
    throw ParseError(2, "bit count " + std::to_string(body.size()) + " differs from header " +
                            std::to_string(n));
  }
  return BitSeq::parse(body);
}

std::string format_exe_txt(const BitSeq& b) {
  return "bits=" + std::to_string(b.size()) + "\n" + b.to_string() + "\n";
}

std::vector<BitSeqs> parse_input_vectors(std::string_view text) {
  std::vector<BitSeqs> out;
  std::size_t line = 0;
  for (auto l : split_lines(text)) {
    ++line;
    auto hash = l.find('#');
    std::istringstream is{std::string(l.substr(0, hash))};
    std::vector<std::string> tokens;
    for (std::string t; is >> t;) tokens.push_back(t);
    if (tokens.empty()) continue;
    if (tokens.size() == 1 && tokens[0] == "none") {
      out.emplace_back();
      continue;
    }
    BitSeqs v;
    for (const auto& t : tokens) {
      if (t == "e") {
        v.emplace_back();
        continue;
      }
      try {
        v.push_back(BitSeq::parse(t));
      } catch (const std::exception& e) {
        throw ParseError(line, e.what());
      }
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::string format_input_vector(const BitSeqs& v) {
  if (v.empty()) return "none";
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ' ';
    out += v[i].empty() ? "e" : v[i].to_string();
  }
  return out;
}

}  // namespace ctlcode
