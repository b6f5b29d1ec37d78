#include "ctlcode/translators.hpp"

#include <map>
#include <sstream>

#include "ctlcode/error.hpp"

namespace ctlcode {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  if (text.empty()) return lines;
  std::size_t start = 0;
  while (true) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
    if (start == text.size()) break;  // trailing LF
  }
  return lines;
}

namespace {

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_name_char(char c) { return (c >= 'a' && c <= 'z') || is_digit(c) || c == '_'; }

std::uint64_t parse_operand(std::string_view digits, std::size_t line) {
  if (digits.empty()) throw ParseError(line, "missing operand");
  std::uint64_t v = 0;
  for (char c : digits) {
    if (!is_digit(c)) throw ParseError(line, "malformed operand '" + std::string(digits) + "'");
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
    if (v >= kOperandLimit) throw ParseError(line, "operand exceeds 32 bits");
  }
  return v;
}

Opcode parse_mnemonic(std::string_view word, std::size_t line) {
  for (char c : word) {
    if (!is_upper(c)) throw ParseError(line, "unknown mnemonic '" + std::string(word) + "'");
  }
  auto op = opcode_from_mnemonic(word);
  if (!op) throw ParseError(line, "unknown mnemonic '" + std::string(word) + "'");
  return *op;
}

bool is_jump(Opcode op) { return op == Opcode::JMP || op == Opcode::JZ || op == Opcode::JNZ; }

// One instruction line, split into mnemonic and the raw operand token.
struct RawInstruction {
  Opcode op;
  std::optional<std::string_view> operand;
};

RawInstruction split_instruction(std::string_view text, std::size_t line) {
  auto sp = text.find(' ');
  RawInstruction r{parse_mnemonic(text.substr(0, sp), line), std::nullopt};
  if (sp != std::string_view::npos) r.operand = text.substr(sp + 1);
  if (takes_operand(r.op) && !r.operand) {
    throw ParseError(line, std::string(mnemonic(r.op)) + " needs an operand");
  }
  if (!takes_operand(r.op) && r.operand) {
    throw ParseError(line, std::string(mnemonic(r.op)) + " takes no operand");
  }
  return r;
}

std::string_view parse_label_name(std::string_view name, std::size_t line) {
  if (name.empty()) throw ParseError(line, "empty label name");
  for (char c : name) {
    if (!is_name_char(c)) throw ParseError(line, "malformed label name '" + std::string(name) + "'");
  }
  return name;
}

}  // namespace

ToyProgram parse_asm(std::string_view text) {
  ToyProgram p;
  std::size_t line = 0;
  for (auto l : split_lines(text)) {
    ++line;
    if (l.empty()) throw ParseError(line, "blank line");
    auto raw = split_instruction(l, line);
    std::uint64_t operand = raw.operand ? parse_operand(*raw.operand, line) : 0;
    p.instructions.push_back({raw.op, operand});
  }
  return p;
}

std::string format_asm(const ToyProgram& program) {
  std::string out;
  for (std::size_t i = 0; i < program.instructions.size(); ++i) {
    const auto& ins = program.instructions[i];
    if (i > 0) out += '\n';
    out += mnemonic(ins.op);
    if (takes_operand(ins.op)) {
      out += ' ';
      out += std::to_string(ins.operand);
    }
  }
  return out;
}

BitSeq host_assemble(std::string_view asm_text) { return encode(parse_asm(asm_text)); }

std::string host_compile(std::string_view src_text) {
  struct Pending {
    std::size_t index;
    std::string label;
    std::size_t line;
  };
  ToyProgram p;
  std::map<std::string, std::uint64_t, std::less<>> labels;
  std::vector<Pending> refs;
  std::size_t line = 0;
  for (auto l : split_lines(src_text)) {
    ++line;
    if (l.empty() || l.front() == '#') continue;
    if (l.front() == '@') {
      if (l.size() < 2 || l.back() != ':') throw ParseError(line, "malformed label definition");
      auto name = parse_label_name(l.substr(1, l.size() - 2), line);
      if (!labels.emplace(std::string(name), p.instructions.size()).second) {
        throw ParseError(line, "duplicate label '" + std::string(name) + "'");
      }
      continue;
    }
    auto raw = split_instruction(l, line);
    std::uint64_t operand = 0;
    if (raw.operand && !raw.operand->empty() && raw.operand->front() == '@') {
      if (!is_jump(raw.op)) {
        throw ParseError(line, std::string(mnemonic(raw.op)) + " cannot take a label operand");
      }
      auto name = parse_label_name(raw.operand->substr(1), line);
      refs.push_back({p.instructions.size(), std::string(name), line});
    } else if (raw.operand) {
      operand = parse_operand(*raw.operand, line);
    }
    p.instructions.push_back({raw.op, operand});
  }
  for (const auto& ref : refs) {
    auto it = labels.find(ref.label);
    if (it == labels.end()) throw ParseError(ref.line, "undefined label '" + ref.label + "'");
    p.instructions[ref.index].operand = it->second;
  }
  return format_asm(p);
}

Disassembly host_disassemble(const BitSeq& exe) {
  auto program = decode(exe);
  if (!program) {
    std::ostringstream os;
    if (exe.size() % kInstructionBits != 0) {
      os << "length " << exe.size() << " is not a multiple of " << kInstructionBits;
    } else {
      for (std::size_t off = 0; off < exe.size(); off += kInstructionBits) {
        auto code = exe.read_uint(off, 8);
        if (code >= kOpcodeCount) {
          os << "instruction " << off / kInstructionBits << ": bad opcode " << code;
          break;
        }
        if (!takes_operand(static_cast<Opcode>(code)) && exe.read_uint(off + 8, 32) != 0) {
          os << "instruction " << off / kInstructionBits << ": operand on operand-less opcode";
          break;
        }
      }
    }
    return {std::nullopt, os.str()};
  }
  return {format_asm(*program), ""};
}

const BitSeq& icn_header() {
  static const BitSeq header{0, 1, 0, 0, 1, 0, 0, 1};
  return header;
}

BitSeq make_icn(std::string_view asm_text) { return concat(icn_header(), host_assemble(asm_text)); }

std::optional<BitSeq> icn_payload(const BitSeq& icn) {
  const auto& h = icn_header();
  if (icn.size() < h.size() || icn.slice(0, h.size()) != h) return std::nullopt;
  auto tail = icn.slice(h.size(), icn.size() - h.size());
  if (!decode(tail)) return std::nullopt;
  return tail;
}

namespace {

std::string trim_right(std::string_view s) {
  auto end = s.find_last_not_of(" \t\r");
  return end == std::string_view::npos ? std::string() : std::string(s.substr(0, end + 1));
}

std::string collapse_spaces(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (c == ' ' || c == '\t') {
      space = !out.empty();
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += c;
  }
  return out;
}

std::string canonical_instruction(std::string_view l, std::size_t line) {
  auto raw = split_instruction(l, line);
  std::string out(mnemonic(raw.op));
  if (raw.operand) {
    out += ' ';
    if (!raw.operand->empty() && raw.operand->front() == '@') {
      out += *raw.operand;
    } else {
      out += std::to_string(parse_operand(*raw.operand, line));
    }
  }
  return out;
}

std::string join(const std::vector<std::string>& lines) {
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i > 0) out += '\n';
    out += lines[i];
  }
  return out;
}

}  // namespace

std::string format_asm_text(std::string_view text) {
  std::vector<std::string> kept;
  std::size_t line = 0;
  for (auto l : split_lines(text)) {
    ++line;
    auto t = collapse_spaces(trim_right(l));
    if (t.empty()) continue;
    kept.push_back(canonical_instruction(t, line));
  }
  return join(kept);
}

std::string format_src_text(std::string_view text) {
  std::vector<std::string> kept;
  std::size_t line = 0;
  for (auto l : split_lines(text)) {
    ++line;
    auto t = trim_right(l);
    if (t.empty() || t.front() == '#' || t.front() == '@') {
      kept.push_back(t);
    } else {
      kept.push_back(canonical_instruction(collapse_spaces(t), line));
    }
  }
  while (!kept.empty() && kept.back().empty()) kept.pop_back();
  return join(kept);
}

}  // namespace ctlcode
