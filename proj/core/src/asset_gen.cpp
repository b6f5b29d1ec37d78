#include "ctlcode/asset_gen.hpp"

#include <algorithm>
#include <stdexcept>

namespace ctlcode {

std::uint64_t mnemonic_hash(std::string_view word) {
  std::uint64_t h = 0;
  for (char c : word) h = h * 32 + static_cast<std::uint64_t>(c - 'A' + 1);
  return h;
}

SrcBuilder::SrcBuilder(std::uint64_t first_cell, std::uint64_t stride)
    : next_cell_(first_cell), stride_(stride) {}

std::uint64_t SrcBuilder::alloc() {
  auto c = next_cell_;
  next_cell_ += stride_;
  return c;
}

std::uint64_t SrcBuilder::var(const std::string& name) {
  auto it = vars_.find(name);
  if (it != vars_.end()) return it->second;
  auto c = alloc();
  vars_.emplace(name, c);
  return c;
}

std::uint64_t SrcBuilder::konst(std::uint64_t value) {
  auto it = consts_.find(value);
  if (it != consts_.end()) return it->second;
  if (value >= kOperandLimit) {
    konst(65536);
    var("init_tmp");
  }
  auto c = alloc();
  consts_.emplace(value, c);
  inits_.emplace_back(c, value);
  return c;
}

std::uint64_t SrcBuilder::table(const std::string& name, const std::vector<std::uint64_t>& values) {
  if (stride_ != 1) throw std::logic_error("tables need a cell stride of 1");
  for (auto v : values) {
    if (v >= kOperandLimit) {
      konst(65536);
      var("init_tmp");
    }
  }
  const auto base = next_cell_;
  for (auto v : values) inits_.emplace_back(alloc(), v);
  vars_.emplace(name, base);
  return base;
}

std::string SrcBuilder::fresh(std::string_view stem) {
  auto& n = fresh_counts_[std::string(stem)];
  return std::string(stem) + std::to_string(++n);
}

void SrcBuilder::op(Opcode op, std::uint64_t operand) {
  std::string line(mnemonic(op));
  if (takes_operand(op)) line += " " + std::to_string(operand);
  body_.push_back(std::move(line));
}

void SrcBuilder::jump(Opcode op, std::string_view label) {
  body_.push_back(std::string(mnemonic(op)) + " @" + std::string(label));
}

void SrcBuilder::label(std::string_view name) { body_.push_back("@" + std::string(name) + ":"); }
void SrcBuilder::note(std::string_view text) { body_.push_back("# " + std::string(text)); }
void SrcBuilder::gap() { body_.emplace_back(); }

void SrcBuilder::call(const std::string& sub) {
  auto& sites = sites_[sub];
  auto site = sub + "r" + std::to_string(sites.size() + 1);
  sites.push_back(site);
  op(Opcode::LDI, sites.size());
  op(Opcode::STM, var("ret_" + sub));
  jump(Opcode::JMP, sub);
  label(site);
}

void SrcBuilder::begin_sub(const std::string& sub) {
  gap();
  label(sub);
}

void SrcBuilder::end_sub(const std::string& sub) {
  const auto& sites = sites_[sub];
  if (sites.size() == 1) {
    jump(Opcode::JMP, sites.front());
    return;
  }
  op(Opcode::LDM, var("ret_" + sub));
  for (const auto& site : sites) {
    op(Opcode::SUB, konst(1));
    jump(Opcode::JZ, site);
  }
  op(Opcode::HALT);
}

std::string SrcBuilder::text(std::string_view title) const {
  std::vector<std::string> lines{"# " + std::string(title), "", "# constants"};
  auto small = [](auto& p) { return p.second < kOperandLimit; };
  std::vector<std::pair<std::uint64_t, std::uint64_t>> ordered(inits_);
  std::stable_partition(ordered.begin(), ordered.end(), small);
  for (auto [cell, value] : ordered) {
    if (value < kOperandLimit) {
      lines.push_back("LDI " + std::to_string(value));
      lines.push_back("STM " + std::to_string(cell));
      continue;
    }
    std::vector<std::uint64_t> digits;
    for (auto v = value; v != 0; v /= 65536) digits.push_back(v % 65536);
    std::reverse(digits.begin(), digits.end());
    const auto tmp = std::to_string(vars_.at("init_tmp"));
    const auto k = std::to_string(consts_.at(65536));
    lines.push_back("LDI " + std::to_string(digits.front()));
    lines.push_back("STM " + std::to_string(cell));
    for (std::size_t i = 1; i < digits.size(); ++i) {
      lines.push_back("LDI " + std::to_string(digits[i]));
      lines.push_back("STM " + tmp);
      lines.push_back("LDM " + std::to_string(cell));
      lines.push_back("MUL " + k);
      lines.push_back("ADD " + tmp);
      lines.push_back("STM " + std::to_string(cell));
    }
  }
  lines.emplace_back();
  lines.insert(lines.end(), body_.begin(), body_.end());
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i > 0) out += '\n';
    out += lines[i];
  }
  return out;
}

namespace {

using O = Opcode;

constexpr std::uint64_t kTableBase = 4096;
constexpr std::uint64_t kMaxOperand = kOperandLimit - 1;

// Shared code shapes over a builder.
struct Gen {
  SrcBuilder& b;

  std::uint64_t k(std::uint64_t v) { return b.konst(v); }
  std::uint64_t v(const std::string& name) { return b.var(name); }

  void set(std::uint64_t cell, std::uint64_t value) {
    b.op(O::LDI, value);
    b.op(O::STM, cell);
  }
  void copy(std::uint64_t from, std::uint64_t to) {
    b.op(O::LDM, from);
    b.op(O::STM, to);
  }
  void inc(std::uint64_t cell) {
    b.op(O::LDM, cell);
    b.op(O::ADD, k(1));
    b.op(O::STM, cell);
  }

  // Jumps to `target` when cell == c, for c >= 1; clobbers the accumulator.
  void jeq_byte(std::uint64_t cell, std::uint64_t c, const std::string& target) {
    auto skip = b.fresh("s");
    b.op(O::LDM, cell);
    if (c > 1) b.op(O::SUB, k(c - 1));
    b.jump(O::JZ, skip);
    b.op(O::SUB, k(1));
    b.jump(O::JZ, target);
    b.label(skip);
  }
  void jlt(std::uint64_t cell, std::uint64_t c, const std::string& target) {
    b.op(O::LDI, c);
    b.op(O::SUB, cell);
    b.jump(O::JNZ, target);
  }
  void jgt(std::uint64_t cell, std::uint64_t c, const std::string& target) {
    b.op(O::LDM, cell);
    b.op(O::SUB, k(c));
    b.jump(O::JNZ, target);
  }
  // Unbounded equality: (x - y) + (y - x) is zero exactly when x == y.
  void jeq(std::uint64_t x, std::uint64_t y, const std::string& target) {
    auto t = v("eq_t");
    b.op(O::LDM, x);
    b.op(O::SUB, y);
    b.op(O::STM, t);
    b.op(O::LDM, y);
    b.op(O::SUB, x);
    b.op(O::ADD, t);
    b.jump(O::JZ, target);
  }

  // Reads eight bits of the current argument into `ch`, most significant
  // first. A clean end of input goes to `eof`, a partial byte to `bad`.
  void read_char(std::uint64_t ch, const std::string& eof, const std::string& bad) {
    auto bit = v("rd_bit");
    auto left = v("rd_left");
    auto loop = b.fresh("rd");
    auto end = b.fresh("re");
    auto done = b.fresh("rk");
    set(ch, 0);
    set(left, 8);
    b.label(loop);
    b.op(O::NEXTBIT);
    b.op(O::STM, bit);
    b.op(O::SUB, k(1));
    b.jump(O::JNZ, end);
    b.op(O::LDM, ch);
    b.op(O::ADD, ch);
    b.op(O::ADD, bit);
    b.op(O::STM, ch);
    b.op(O::LDM, left);
    b.op(O::SUB, k(1));
    b.op(O::STM, left);
    b.jump(O::JNZ, loop);
    b.jump(O::JMP, done);
    b.label(end);
    b.op(O::LDI, 8);
    b.op(O::SUB, left);
    b.jump(O::JZ, eof);
    b.jump(O::JMP, bad);
    b.label(done);
  }

  // Writes the low `width` bits of `cell` to buffer `buf`, high bit first.
  void out_bits(std::uint64_t cell, unsigned width, std::uint64_t buf) {
    auto p = v("ob_p");
    auto loop = b.fresh("ob");
    set(p, std::uint64_t{1} << (width - 1));
    b.label(loop);
    b.op(O::LDM, cell);
    b.op(O::DIV, p);
    b.op(O::OUTBIT, buf);
    b.op(O::LDM, p);
    b.op(O::DIV, k(2));
    b.op(O::STM, p);
    b.jump(O::JNZ, loop);
  }

  void out_const_bits(const std::vector<int>& bits, std::uint64_t buf) {
    for (int bit : bits) {
      b.op(O::LDI, static_cast<std::uint64_t>(bit));
      b.op(O::OUTBIT, buf);
    }
  }

  // One instruction as 40 bits: opcode byte then four operand bytes.
  void out_instruction(std::uint64_t op, std::uint64_t operand, std::uint64_t buf, bool reverse) {
    out_bits(op, 8, buf);
    auto byte = v("ob_byte");
    for (int i = 0; i < 4; ++i) {
      int shift = reverse ? i : 3 - i;
      b.op(O::LDM, operand);
      if (shift > 0) b.op(O::DIV, k(std::uint64_t{1} << (8 * shift)));
      b.op(O::MOD, k(256));
      b.op(O::STM, byte);
      out_bits(byte, 8, buf);
    }
  }

  static std::string putc_sub(std::uint64_t buf) { return "pc" + std::to_string(buf); }
  static std::string putdec_sub(std::uint64_t buf) { return "pd" + std::to_string(buf); }

  void put_str(std::string_view s, std::uint64_t buf) {
    for (char c : s) {
      set(v("pc_ch"), static_cast<unsigned char>(c));
      b.call(putc_sub(buf));
    }
  }

  void emit_putc_sub(std::uint64_t buf) {
    auto ch = v("pc_ch");
    auto p = v("pc_p");
    auto sub = putc_sub(buf);
    b.begin_sub(sub);
    b.note("write the byte in pc_ch to buffer " + std::to_string(buf));
    set(p, 128);
    auto loop = b.fresh("pl");
    b.label(loop);
    b.op(O::LDM, ch);
    b.op(O::DIV, p);
    b.op(O::OUTBIT, buf);
    b.op(O::LDM, p);
    b.op(O::DIV, k(2));
    b.op(O::STM, p);
    b.jump(O::JNZ, loop);
    b.end_sub(sub);
  }

  void emit_putdec_sub(std::uint64_t buf) {
    auto val = v("pd_v");
    auto p = v("pd_p");
    auto t = v("pd_t");
    auto sub = putdec_sub(buf);
    b.begin_sub(sub);
    b.note("write pd_v in decimal to buffer " + std::to_string(buf));
    set(p, 1);
    auto grow = b.fresh("dg");
    auto digits = b.fresh("dd");
    b.label(grow);
    b.op(O::LDM, p);
    b.op(O::MUL, k(10));
    b.op(O::STM, t);
    b.op(O::SUB, val);
    b.jump(O::JNZ, digits);
    copy(t, p);
    b.jump(O::JMP, grow);
    b.label(digits);
    b.op(O::LDM, val);
    b.op(O::DIV, p);
    b.op(O::MOD, k(10));
    b.op(O::ADD, k(48));
    b.op(O::STM, v("pc_ch"));
    b.call(putc_sub(buf));
    b.op(O::LDM, p);
    b.op(O::DIV, k(10));
    b.op(O::STM, p);
    b.jump(O::JNZ, digits);
    b.end_sub(sub);
  }

  // HALT, NEXTBIT and NEXTARG take no operand.
  void branch_operand_class(std::uint64_t op, const std::string& takes, const std::string& none) {
    b.op(O::LDM, op);
    b.jump(O::JZ, none);
    b.op(O::SUB, k(13));
    b.jump(O::JZ, takes);
    b.op(O::SUB, k(1));
    b.jump(O::JZ, none);
    b.op(O::SUB, k(1));
    b.jump(O::JZ, none);
    b.jump(O::JMP, takes);
  }

  // Name characters are a-z, 0-9 and underscore.
  void check_name_char(std::uint64_t ch, const std::string& err) {
    auto ok = b.fresh("nc");
    jeq_byte(ch, '_', ok);
    jlt(ch, '0', err);
    jgt(ch, 'z', err);
    jlt(ch, '9' + 1, ok);
    jlt(ch, 'a', err);
    b.label(ok);
  }

  std::uint64_t mnemonic_table() {
    std::vector<std::uint64_t> hashes;
    for (unsigned i = 0; i < kOpcodeCount; ++i) {
      hashes.push_back(mnemonic_hash(mnemonic(static_cast<Opcode>(i))));
    }
    return b.table("mn", hashes);
  }

  // Reads a mnemonic whose first character is already in `ch`, stores the
  // opcode in `op`, records whether a space followed in `has_operand` and
  // whether input ended in `at_eof`, then falls through to `have`.
  void scan_mnemonic(std::uint64_t ch, std::uint64_t mn, const std::string& have,
                     const std::string& err) {
    auto h = v("mn_h");
    auto len = v("mn_len");
    auto has = v("has_operand");
    auto at_eof = v("at_eof");
    auto op = v("op");
    b.note("mnemonic");
    set(h, 0);
    set(len, 0);
    b.label("ml");
    jeq_byte(ch, ' ', "msp");
    jeq_byte(ch, '\n', "mnl");
    jlt(ch, 'A', err);
    jgt(ch, 'Z', err);
    inc(len);
    jgt(len, 7, err);
    b.op(O::LDM, h);
    b.op(O::MUL, k(32));
    b.op(O::ADD, ch);
    b.op(O::SUB, k(64));
    b.op(O::STM, h);
    read_char(ch, "meof", err);
    b.jump(O::JMP, "ml");
    b.label("msp");
    set(has, 1);
    b.jump(O::JMP, "look");
    b.label("mnl");
    set(has, 0);
    b.jump(O::JMP, "look");
    b.label("meof");
    set(has, 0);
    set(at_eof, 1);
    b.label("look");
    for (unsigned i = 0; i < kOpcodeCount; ++i) jeq(h, mn + i, "f" + std::to_string(i));
    b.jump(O::JMP, err);
    for (unsigned i = 0; i < kOpcodeCount; ++i) {
      b.label("f" + std::to_string(i));
      set(op, i);
      b.jump(O::JMP, have);
    }
  }

  void error_block(const std::string& err, std::uint64_t line) {
    b.gap();
    b.note("report the failing line");
    b.label(err);
    put_str("error: line ", 2);
    copy(line, v("pd_v"));
    b.call(putdec_sub(2));
    put_str("\n", 2);
    b.op(O::LDI, 0);
    b.op(O::OUTBIT, 3);
    b.op(O::HALT);
  }

  void success_block(const std::string& name) {
    b.label(name);
    b.op(O::LDI, 1);
    b.op(O::OUTBIT, 3);
    b.op(O::HALT);
  }
};

}  // namespace

std::string generate_assembler_src(const AssemblerOptions& options) {
  SrcBuilder b(0, 1);
  Gen g{b};
  const auto mn = g.mnemonic_table();
  const auto ch = g.v("ch");
  const auto line = g.v("line");
  const auto n = g.v("n");
  const auto op = g.v("op");
  const auto val = g.v("val");
  const auto digits = g.v("digits");
  const auto has = g.v("has_operand");
  const auto at_eof = g.v("at_eof");
  const auto ptr = g.v("ptr");
  const auto i = g.v("i");

  b.note("parse every line into the table at 4096 + 8i (opcode, operand)");
  g.set(n, 0);
  g.set(line, 0);
  b.label("line");
  g.inc(line);
  g.set(at_eof, 0);
  g.read_char(ch, "fin", "err");
  g.jeq_byte(ch, '\n', "err");
  g.scan_mnemonic(ch, mn, "have", "err");

  b.gap();
  b.note("operand");
  b.label("have");
  g.branch_operand_class(op, "takes", "none");
  b.label("none");
  b.op(O::LDM, has);
  b.jump(O::JNZ, "err");
  g.set(val, 0);
  b.jump(O::JMP, "store");
  b.label("takes");
  b.op(O::LDM, has);
  b.jump(O::JZ, "err");
  g.set(val, 0);
  g.set(digits, 0);
  b.label("dl");
  g.read_char(ch, "deof", "err");
  g.jeq_byte(ch, '\n', "dend");
  g.jlt(ch, '0', "err");
  g.jgt(ch, '9', "err");
  b.op(O::LDM, val);
  b.op(O::MUL, g.k(10));
  b.op(O::ADD, ch);
  b.op(O::SUB, g.k(48));
  b.op(O::STM, val);
  g.set(digits, 1);
  b.jump(O::JMP, "dl");
  b.label("deof");
  g.set(at_eof, 1);
  b.label("dend");
  b.op(O::LDM, digits);
  b.jump(O::JZ, "err");
  g.jgt(val, kMaxOperand, "err");

  b.gap();
  b.label("store");
  b.op(O::LDM, n);
  b.op(O::MUL, g.k(8));
  b.op(O::ADD, g.k(kTableBase));
  b.op(O::STM, ptr);
  b.op(O::LDM, op);
  b.op(O::STX, ptr);
  b.op(O::LDM, ptr);
  b.op(O::ADD, g.k(1));
  b.op(O::STM, ptr);
  b.op(O::LDM, val);
  b.op(O::STX, ptr);
  g.inc(n);
  b.op(O::LDM, at_eof);
  b.jump(O::JNZ, "fin");
  b.jump(O::JMP, "line");

  b.gap();
  b.note("emit 40 bits per instruction to buffer 1");
  b.label("fin");
  g.set(i, 0);
  b.label("el");
  b.op(O::LDM, n);
  b.op(O::SUB, i);
  b.jump(O::JZ, "done");
  b.op(O::LDM, i);
  b.op(O::MUL, g.k(8));
  b.op(O::ADD, g.k(kTableBase));
  b.op(O::STM, ptr);
  b.op(O::LDX, ptr);
  b.op(O::STM, op);
  b.op(O::LDM, ptr);
  b.op(O::ADD, g.k(1));
  b.op(O::STM, ptr);
  b.op(O::LDX, ptr);
  b.op(O::STM, val);
  g.out_instruction(op, val, 1, options.reverse_operand_bytes);
  g.inc(i);
  b.jump(O::JMP, "el");
  g.success_block("done");

  g.error_block("err", line);
  g.emit_putdec_sub(2);
  g.emit_putc_sub(2);
  return b.text("TM assembler: ASM text in argument 1, executable code in buffer 1");
}

std::string generate_compiler_src(CompilerTarget target) {
  SrcBuilder b(0, 1);
  Gen g{b};
  const auto mn = g.mnemonic_table();
  const auto ch = g.v("ch");
  const auto line = g.v("line");
  const auto n = g.v("n");
  const auto nlabels = g.v("nlabels");
  const auto op = g.v("op");
  const auto val = g.v("val");
  const auto digits = g.v("digits");
  const auto is_ref = g.v("is_ref");
  const auto has = g.v("has_operand");
  const auto at_eof = g.v("at_eof");
  const auto name = g.v("name");
  const auto name_len = g.v("name_len");
  const auto ptr = g.v("ptr");
  const auto lp = g.v("lp");
  const auto pv = g.v("pv");
  const auto t = g.v("t");
  const auto t2 = g.v("t2");
  const auto i = g.v("i");
  const auto j = g.v("j");
  const std::uint64_t label_base = kTableBase + 4;

  b.note("instruction i: 4096 + 8i holds opcode, operand, is_ref, line");
  b.note("label j: 4100 + 8j holds name, index");
  g.set(n, 0);
  g.set(nlabels, 0);
  g.set(line, 0);
  b.label("line");
  g.inc(line);
  g.set(at_eof, 0);
  g.read_char(ch, "res", "err");
  g.jeq_byte(ch, '\n', "line");
  g.jeq_byte(ch, '#', "cmt");
  g.jeq_byte(ch, '@', "ldef");
  g.scan_mnemonic(ch, mn, "have", "err");

  b.gap();
  b.note("operand: decimal or @label");
  b.label("have");
  g.branch_operand_class(op, "takes", "none");
  b.label("none");
  b.op(O::LDM, has);
  b.jump(O::JNZ, "err");
  g.set(val, 0);
  g.set(is_ref, 0);
  b.jump(O::JMP, "store");
  b.label("takes");
  b.op(O::LDM, has);
  b.jump(O::JZ, "err");
  g.read_char(ch, "err", "err");
  g.jeq_byte(ch, '@', "jref");
  g.set(val, 0);
  g.set(digits, 0);
  b.label("dc");
  g.jeq_byte(ch, '\n', "dend");
  g.jlt(ch, '0', "err");
  g.jgt(ch, '9', "err");
  b.op(O::LDM, val);
  b.op(O::MUL, g.k(10));
  b.op(O::ADD, ch);
  b.op(O::SUB, g.k(48));
  b.op(O::STM, val);
  g.set(digits, 1);
  g.read_char(ch, "deof", "err");
  b.jump(O::JMP, "dc");
  b.label("deof");
  g.set(at_eof, 1);
  b.label("dend");
  b.op(O::LDM, digits);
  b.jump(O::JZ, "err");
  g.jgt(val, kMaxOperand, "err");
  g.set(is_ref, 0);
  b.jump(O::JMP, "store");

  b.gap();
  b.note("label reference, only after JMP, JZ and JNZ");
  b.label("jref");
  b.op(O::LDM, op);
  b.op(O::SUB, g.k(10));
  b.jump(O::JZ, "err");
  b.op(O::SUB, g.k(3));
  b.jump(O::JZ, "jok");
  b.jump(O::JMP, "err");
  b.label("jok");
  g.set(name, 0);
  g.set(name_len, 0);
  b.label("jl");
  g.read_char(ch, "jeof", "err");
  g.jeq_byte(ch, '\n', "jend");
  g.check_name_char(ch, "err");
  b.op(O::LDM, name);
  b.op(O::MUL, g.k(256));
  b.op(O::ADD, ch);
  b.op(O::STM, name);
  g.inc(name_len);
  b.jump(O::JMP, "jl");
  b.label("jeof");
  g.set(at_eof, 1);
  b.label("jend");
  b.op(O::LDM, name_len);
  b.jump(O::JZ, "err");
  g.copy(name, val);
  g.set(is_ref, 1);

  b.gap();
  b.label("store");
  b.op(O::LDM, n);
  b.op(O::MUL, g.k(8));
  b.op(O::ADD, g.k(kTableBase));
  b.op(O::STM, ptr);
  for (auto field : {op, val, is_ref, line}) {
    if (field != op) {
      b.op(O::LDM, ptr);
      b.op(O::ADD, g.k(1));
      b.op(O::STM, ptr);
    }
    b.op(O::LDM, field);
    b.op(O::STX, ptr);
  }
  g.inc(n);
  b.op(O::LDM, at_eof);
  b.jump(O::JNZ, "res");
  b.jump(O::JMP, "line");

  b.gap();
  b.note("comment line");
  b.label("cmt");
  g.read_char(ch, "res", "err");
  g.jeq_byte(ch, '\n', "line");
  b.jump(O::JMP, "cmt");

  b.gap();
  b.note("label definition");
  b.label("ldef");
  g.set(name, 0);
  g.set(name_len, 0);
  b.label("ll");
  g.read_char(ch, "err", "err");
  g.jeq_byte(ch, ':', "lcol");
  g.check_name_char(ch, "err");
  b.op(O::LDM, name);
  b.op(O::MUL, g.k(256));
  b.op(O::ADD, ch);
  b.op(O::STM, name);
  g.inc(name_len);
  b.jump(O::JMP, "ll");
  b.label("lcol");
  b.op(O::LDM, name_len);
  b.jump(O::JZ, "err");
  g.read_char(ch, "leof", "err");
  g.jeq_byte(ch, '\n', "lok");
  b.jump(O::JMP, "err");
  b.label("leof");
  g.set(at_eof, 1);
  b.label("lok");
  g.set(j, 0);
  b.label("dup");
  b.op(O::LDM, nlabels);
  b.op(O::SUB, j);
  b.jump(O::JZ, "addl");
  b.op(O::LDM, j);
  b.op(O::MUL, g.k(8));
  b.op(O::ADD, g.k(label_base));
  b.op(O::STM, lp);
  b.op(O::LDX, lp);
  b.op(O::STM, t2);
  g.jeq(t2, name, "err");
  g.inc(j);
  b.jump(O::JMP, "dup");
  b.label("addl");
  b.op(O::LDM, nlabels);
  b.op(O::MUL, g.k(8));
  b.op(O::ADD, g.k(label_base));
  b.op(O::STM, lp);
  b.op(O::LDM, name);
  b.op(O::STX, lp);
  b.op(O::LDM, lp);
  b.op(O::ADD, g.k(1));
  b.op(O::STM, lp);
  b.op(O::LDM, n);
  b.op(O::STX, lp);
  g.inc(nlabels);
  b.op(O::LDM, at_eof);
  b.jump(O::JNZ, "res");
  b.jump(O::JMP, "line");

  b.gap();
  b.note("replace label names by instruction indices");
  b.label("res");
  g.set(i, 0);
  b.label("rl");
  b.op(O::LDM, n);
  b.op(O::SUB, i);
  b.jump(O::JZ, "emit");
  b.op(O::LDM, i);
  b.op(O::MUL, g.k(8));
  b.op(O::ADD, g.k(kTableBase));
  b.op(O::STM, ptr);
  b.op(O::ADD, g.k(2));
  b.op(O::STM, t);
  b.op(O::LDX, t);
  b.jump(O::JZ, "rnext");
  b.op(O::LDM, ptr);
  b.op(O::ADD, g.k(1));
  b.op(O::STM, pv);
  b.op(O::LDX, pv);
  b.op(O::STM, name);
  g.set(j, 0);
  b.label("rs");
  b.op(O::LDM, nlabels);
  b.op(O::SUB, j);
  b.jump(O::JZ, "rmiss");
  b.op(O::LDM, j);
  b.op(O::MUL, g.k(8));
  b.op(O::ADD, g.k(label_base));
  b.op(O::STM, lp);
  b.op(O::LDX, lp);
  b.op(O::STM, t2);
  g.jeq(t2, name, "rfound");
  g.inc(j);
  b.jump(O::JMP, "rs");
  b.label("rfound");
  b.op(O::LDM, lp);
  b.op(O::ADD, g.k(1));
  b.op(O::STM, lp);
  b.op(O::LDX, lp);
  b.op(O::STX, pv);
  b.jump(O::JMP, "rnext");
  b.label("rmiss");
  b.op(O::LDM, ptr);
  b.op(O::ADD, g.k(3));
  b.op(O::STM, t);
  b.op(O::LDX, t);
  b.op(O::STM, line);
  b.jump(O::JMP, "err");
  b.label("rnext");
  g.inc(i);
  b.jump(O::JMP, "rl");

  b.gap();
  b.label("emit");
  if (target == CompilerTarget::Intermediate) {
    b.note("ICN: the byte 'I', then 40 bits per instruction");
    g.out_const_bits({0, 1, 0, 0, 1, 0, 0, 1}, 1);
  } else {
    b.note("ASM text to buffer 1");
  }
  g.set(i, 0);
  b.label("el");
  b.op(O::LDM, n);
  b.op(O::SUB, i);
  b.jump(O::JZ, "done");
  if (target == CompilerTarget::Assembly) {
    b.op(O::LDM, i);
    b.jump(O::JZ, "nosep");
    g.put_str("\n", 1);
    b.label("nosep");
  }
  b.op(O::LDM, i);
  b.op(O::MUL, g.k(8));
  b.op(O::ADD, g.k(kTableBase));
  b.op(O::STM, ptr);
  b.op(O::LDX, ptr);
  b.op(O::STM, op);
  b.op(O::LDM, ptr);
  b.op(O::ADD, g.k(1));
  b.op(O::STM, ptr);
  b.op(O::LDX, ptr);
  b.op(O::STM, val);
  if (target == CompilerTarget::Intermediate) {
    g.out_instruction(op, val, 1, false);
  } else {
    const auto h = g.v("mn_h");
    const auto p = g.v("mp");
    b.op(O::LDM, op);
    b.op(O::ADD, g.k(mn));
    b.op(O::STM, t);
    b.op(O::LDX, t);
    b.op(O::STM, h);
    g.set(p, 1);
    b.label("mg");
    b.op(O::LDM, p);
    b.op(O::MUL, g.k(32));
    b.op(O::STM, t);
    b.op(O::SUB, h);
    b.jump(O::JNZ, "md");
    g.copy(t, p);
    b.jump(O::JMP, "mg");
    b.label("md");
    b.op(O::LDM, h);
    b.op(O::DIV, p);
    b.op(O::MOD, g.k(32));
    b.op(O::ADD, g.k(64));
    b.op(O::STM, g.v("pc_ch"));
    b.call(Gen::putc_sub(1));
    b.op(O::LDM, p);
    b.op(O::DIV, g.k(32));
    b.op(O::STM, p);
    b.jump(O::JNZ, "md");
    g.branch_operand_class(op, "etk", "etn");
    b.label("etk");
    g.put_str(" ", 1);
    g.copy(val, g.v("pd_v"));
    b.call(Gen::putdec_sub(1));
    b.label("etn");
  }
  g.inc(i);
  b.jump(O::JMP, "el");
  g.success_block("done");

  g.error_block("err", line);
  if (target == CompilerTarget::Assembly) g.emit_putdec_sub(1);
  g.emit_putdec_sub(2);
  if (target == CompilerTarget::Assembly) g.emit_putc_sub(1);
  g.emit_putc_sub(2);
  return b.text(target == CompilerTarget::Assembly
                    ? "SRC to ASM compiler: SRC text in argument 1, ASM text in buffer 1"
                    : "SRC to ICN compiler: SRC text in argument 1, ICN code in buffer 1");
}

std::string generate_interpreter_src() {
  // Own cells sit at even addresses; emulated address a lives at 2a + 1.
  SrcBuilder b(0, 2);
  Gen g{b};
  const std::uint64_t program_base = 8192;
  const auto ch = g.v("ch");
  const auto n = g.v("n");
  const auto op = g.v("op");
  const auto val = g.v("val");
  const auto bit = g.v("bit");
  const auto left = g.v("left");
  const auto ptr = g.v("ptr");
  const auto pc = g.v("pc");
  const auto acc = g.v("acc");
  const auto opd = g.v("opd");
  const auto a1 = g.v("a1");
  const auto a2 = g.v("a2");
  const auto t = g.v("t");
  const auto started = g.v("started");
  auto handler_label = [](std::string_view mnem) {
    std::string l = "x";
    for (char c : mnem) l += static_cast<char>(c - 'A' + 'a');
    return l;
  };

  b.note("load the ICN code: instruction i at 8192 + 4i (opcode, operand)");
  g.read_char(ch, "bad", "bad");
  g.jeq_byte(ch, 'I', "hdr");
  b.jump(O::JMP, "bad");
  b.label("hdr");
  g.set(n, 0);
  b.label("ld");
  g.read_char(op, "run", "bad");
  g.jgt(op, kOpcodeCount - 1, "bad");
  g.set(val, 0);
  g.set(left, 32);
  b.label("lb");
  b.op(O::NEXTBIT);
  b.op(O::STM, bit);
  b.op(O::SUB, g.k(1));
  b.jump(O::JNZ, "bad");
  b.op(O::LDM, val);
  b.op(O::ADD, val);
  b.op(O::ADD, bit);
  b.op(O::STM, val);
  b.op(O::LDM, left);
  b.op(O::SUB, g.k(1));
  b.op(O::STM, left);
  b.jump(O::JNZ, "lb");
  g.branch_operand_class(op, "lst", "lno");
  b.label("lno");
  b.op(O::LDM, val);
  b.jump(O::JNZ, "bad");
  b.label("lst");
  b.op(O::LDM, n);
  b.op(O::MUL, g.k(4));
  b.op(O::ADD, g.k(program_base));
  b.op(O::STM, ptr);
  b.op(O::LDM, op);
  b.op(O::STX, ptr);
  b.op(O::LDM, ptr);
  b.op(O::ADD, g.k(2));
  b.op(O::STM, ptr);
  b.op(O::LDM, val);
  b.op(O::STX, ptr);
  g.inc(n);
  b.jump(O::JMP, "ld");
  b.label("bad");
  b.op(O::HALT);

  b.gap();
  b.note("fetch and dispatch");
  b.label("run");
  g.set(pc, 0);
  g.set(acc, 0);
  g.set(started, 0);
  b.label("fetch");
  b.op(O::LDM, n);
  b.op(O::SUB, pc);
  b.jump(O::JZ, "halt");
  b.op(O::LDM, pc);
  b.op(O::MUL, g.k(4));
  b.op(O::ADD, g.k(program_base));
  b.op(O::STM, ptr);
  b.op(O::LDX, ptr);
  b.op(O::STM, op);
  b.op(O::LDM, ptr);
  b.op(O::ADD, g.k(2));
  b.op(O::STM, ptr);
  b.op(O::LDX, ptr);
  b.op(O::STM, opd);
  g.inc(pc);
  b.op(O::LDM, op);
  b.jump(O::JZ, "halt");
  for (unsigned code = 1; code < kOpcodeCount; ++code) {
    b.op(O::SUB, g.k(1));
    b.jump(O::JZ, handler_label(mnemonic(static_cast<Opcode>(code))));
  }
  b.label("halt");
  b.op(O::HALT);

  auto emu = [&](std::uint64_t from, std::uint64_t to) {
    b.op(O::LDM, from);
    b.op(O::ADD, from);
    b.op(O::ADD, g.k(1));
    b.op(O::STM, to);
  };
  auto handler = [&](std::string_view mnem) {
    b.gap();
    b.label(handler_label(mnem));
  };

  handler("LDI");
  g.copy(opd, acc);
  b.jump(O::JMP, "fetch");
  handler("LDM");
  emu(opd, a1);
  b.op(O::LDX, a1);
  b.op(O::STM, acc);
  b.jump(O::JMP, "fetch");
  handler("LDX");
  emu(opd, a1);
  b.op(O::LDX, a1);
  b.op(O::STM, t);
  emu(t, a2);
  b.op(O::LDX, a2);
  b.op(O::STM, acc);
  b.jump(O::JMP, "fetch");
  handler("STM");
  emu(opd, a1);
  b.op(O::LDM, acc);
  b.op(O::STX, a1);
  b.jump(O::JMP, "fetch");
  handler("STX");
  emu(opd, a1);
  b.op(O::LDX, a1);
  b.op(O::STM, t);
  emu(t, a2);
  b.op(O::LDM, acc);
  b.op(O::STX, a2);
  b.jump(O::JMP, "fetch");
  for (auto arith : {O::ADD, O::SUB, O::MUL, O::DIV, O::MOD}) {
    handler(mnemonic(arith));
    emu(opd, a1);
    b.op(O::LDX, a1);
    b.op(O::STM, t);
    b.op(O::LDM, acc);
    b.op(arith, t);
    b.op(O::STM, acc);
    b.jump(O::JMP, "fetch");
  }
  handler("JMP");
  g.copy(opd, pc);
  b.jump(O::JMP, "fetch");
  handler("JZ");
  b.op(O::LDM, acc);
  b.jump(O::JNZ, "fetch");
  g.copy(opd, pc);
  b.jump(O::JMP, "fetch");
  handler("JNZ");
  b.op(O::LDM, acc);
  b.jump(O::JZ, "fetch");
  g.copy(opd, pc);
  b.jump(O::JMP, "fetch");

  b.gap();
  b.note("argument 1 is the ICN code; the first input access moves past it");
  handler("NEXTBIT");
  b.op(O::LDM, started);
  b.jump(O::JNZ, "nb");
  b.op(O::NEXTARG);
  g.set(started, 1);
  b.label("nb");
  b.op(O::NEXTBIT);
  b.op(O::STM, acc);
  b.jump(O::JMP, "fetch");
  handler("NEXTARG");
  b.op(O::LDM, started);
  b.jump(O::JNZ, "na");
  b.op(O::NEXTARG);
  g.set(started, 1);
  b.label("na");
  b.op(O::NEXTARG);
  b.jump(O::JMP, "fetch");

  b.gap();
  b.note("buffers 1 to 32 are forwarded, 0 discards, anything above halts");
  handler("OUTBIT");
  b.op(O::LDM, opd);
  b.jump(O::JZ, "fetch");
  for (unsigned k = 1; k <= 32; ++k) {
    b.op(O::SUB, g.k(1));
    b.jump(O::JZ, "o" + std::to_string(k));
  }
  b.op(O::HALT);
  for (unsigned k = 1; k <= 32; ++k) {
    b.label("o" + std::to_string(k));
    b.op(O::LDM, acc);
    b.op(O::OUTBIT, k);
    b.jump(O::JMP, "fetch");
  }
  return b.text("ICN interpreter: ICN code in argument 1, its inputs after it");
}

}  // namespace ctlcode
