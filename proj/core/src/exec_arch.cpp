#include "ctlcode/exec_arch.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "ctlcode/error.hpp"
#include "ctlcode/translators.hpp"

namespace ctlcode {

bool valid_file_name(std::string_view name) {
  if (name.empty()) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '.' || c == '-';
  });
}

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto at = s.find(sep, start);
    out.emplace_back(s.substr(start, at == std::string_view::npos ? s.npos : at - start));
    if (at == std::string_view::npos) return out;
    start = at + 1;
  }
}

std::string checked_name(const std::string& name) {
  if (!valid_file_name(name)) throw ParseError(0, "bad file name '" + name + "'");
  return name;
}

std::vector<std::string> name_list(std::string_view s) {
  if (s.empty()) return {};
  auto names = split(s, ':');
  for (const auto& n : names) checked_name(n);
  return names;
}

std::string join(const std::vector<std::string>& v, char sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += v[i];
  }
  return out;
}

}  // namespace

EAInstruction parse_instruction(std::string_view text) {
  using Op = EAInstruction::Op;
  auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw ParseError(0, "'" + std::string(text) + "' is not an instruction");
  }
  const auto op = text.substr(0, colon);
  const auto rest = text.substr(colon + 1);
  EAInstruction i;
  if (op == "set") {
    auto sep = rest.find(':');
    if (sep == std::string_view::npos) throw ParseError(0, "set needs set:<file>:<bits>");
    i.op = Op::Set;
    i.f1 = checked_name(std::string(rest.substr(0, sep)));
    try {
      i.bits = BitSeq::parse(rest.substr(sep + 1));
    } catch (const std::invalid_argument& e) {
      throw ParseError(0, "bad bits in '" + std::string(text) + "': " + e.what());
    }
    return i;
  }
  if (op == "exe") {
    auto slash = rest.find('/');
    if (slash == std::string_view::npos || rest.find('/', slash + 1) != std::string_view::npos) {
      throw ParseError(0, "exe needs exactly one '/' between inputs and outputs");
    }
    i.op = Op::Exe;
    i.inputs = name_list(rest.substr(0, slash));
    i.outputs = name_list(rest.substr(slash + 1));
    return i;
  }
  static const std::pair<std::string_view, Op> unary[] = {
      {"rmv", Op::Remove}, {"exists", Op::Exists}, {"load", Op::Load}};
  static const std::pair<std::string_view, Op> binary[] = {
      {"cp", Op::Copy}, {"mv", Op::Move}, {"cat", Op::Cat}, {"eq", Op::Eq}, {"neq", Op::Neq}};
  auto parts = split(rest, ':');
  for (const auto& [name, o] : unary) {
    if (op != name) continue;
    if (parts.size() != 1) throw ParseError(0, std::string(name) + " takes one file name");
    i.op = o;
    i.f1 = checked_name(parts[0]);
    return i;
  }
  for (const auto& [name, o] : binary) {
    if (op != name) continue;
    if (parts.size() != 2) throw ParseError(0, std::string(name) + " takes two file names");
    i.op = o;
    i.f1 = checked_name(parts[0]);
    i.f2 = checked_name(parts[1]);
    return i;
  }
  throw ParseError(0, "unknown instruction '" + std::string(op) + "'");
}

std::optional<EAInstruction> try_parse_instruction(std::string_view text) {
  try {
    return parse_instruction(text);
  } catch (const ParseError&) {
    return std::nullopt;
  }
}

std::string format_instruction(const EAInstruction& i) {
  using Op = EAInstruction::Op;
  switch (i.op) {
    case Op::Set:
      return "set:" + i.f1 + ":" + i.bits.to_string();
    case Op::Remove:
      return "rmv:" + i.f1;
    case Op::Copy:
      return "cp:" + i.f1 + ":" + i.f2;
    case Op::Move:
      return "mv:" + i.f1 + ":" + i.f2;
    case Op::Cat:
      return "cat:" + i.f1 + ":" + i.f2;
    case Op::Eq:
      return "eq:" + i.f1 + ":" + i.f2;
    case Op::Neq:
      return "neq:" + i.f1 + ":" + i.f2;
    case Op::Exists:
      return "exists:" + i.f1;
    case Op::Load:
      return "load:" + i.f1;
    case Op::Exe:
      return "exe:" + join(i.inputs, ':') + "/" + join(i.outputs, ':');
  }
  return "?";
}

EAState EAState::live(std::map<std::string, BitSeq> files, std::optional<BitSeq> loaded) {
  return EAState{false, std::move(files), std::move(loaded)};
}

EAState EAState::divergence() { return EAState{true, {}, std::nullopt}; }

const BitSeq* EAState::file(const std::string& name) const {
  auto it = files.find(name);
  return it == files.end() ? nullptr : &it->second;
}

EAStep step(const EAInstruction& i, const EAState& s, const MachineStructure& m) {
  using Op = EAInstruction::Op;
  if (s.diverged) return {s, Reply::Divergent, "diverged", "diverged"};
  EAStep r{s, Reply::True, {}, {}};
  auto& sigma = r.state.files;
  const BitSeq* a = s.file(i.f1);
  const BitSeq* b = i.f2.empty() ? nullptr : s.file(i.f2);
  switch (i.op) {
    case Op::Set:
      sigma[i.f1] = i.bits;
      r.eff_row = r.yld_row = "set";
      return r;
    case Op::Remove:
      sigma.erase(i.f1);
      r.eff_row = "rmv";
      r.reply = a ? Reply::True : Reply::False;
      r.yld_row = a ? "rmv+" : "rmv-";
      return r;
    case Op::Copy:
    case Op::Move: {
      const bool copy = i.op == Op::Copy;
      if (a) {
        BitSeq v = *a;
        sigma[i.f2] = v;
        if (!copy) sigma.erase(i.f1);
      }
      r.reply = a ? Reply::True : Reply::False;
      r.eff_row = r.yld_row = copy ? (a ? "cp+" : "cp-") : (a ? "mv+" : "mv-");
      return r;
    }
    case Op::Cat:
      if (a && b) {
        BitSeq v = *b;
        v.append(*a);
        sigma[i.f2] = v;
      }
      r.reply = a && b ? Reply::True : Reply::False;
      r.eff_row = r.yld_row = a && b ? "cat+" : "cat-";
      return r;
    case Op::Eq:
    case Op::Neq: {
      const bool eq = i.op == Op::Eq;
      const bool holds = a && b && ((*a == *b) == eq);
      r.reply = holds ? Reply::True : Reply::False;
      r.eff_row = eq ? "eq" : "neq";
      r.yld_row = eq ? (holds ? "eq:T" : "eq:F") : (holds ? "neq:T" : "neq:F");
      return r;
    }
    case Op::Exists:
      r.reply = a ? Reply::True : Reply::False;
      r.eff_row = "exists";
      r.yld_row = a ? "exists+" : "exists-";
      return r;
    case Op::Load: {
      const bool ok = a && m.exec_member(*a);
      if (ok) r.state.loaded = *a;
      r.reply = ok ? Reply::True : Reply::False;
      r.eff_row = r.yld_row = ok ? "load+" : "load-";
      return r;
    }
    case Op::Exe:
      break;
  }

  auto noop = [&] {
    r.reply = Reply::False;
    r.eff_row = "exe:noop";
    r.yld_row = "exe:F";
    return r;
  };
  if (!s.loaded || !m.exec_member(*s.loaded)) return noop();
  BitSeqs args{*s.loaded};
  for (const auto& f : i.inputs) {
    const BitSeq* v = s.file(f);
    if (!v) return noop();
    args.push_back(*v);
  }
  const auto outs = m.mf.eval_upto(std::max<std::size_t>(1, i.outputs.size()), args);
  if (outs[0].is_mea()) return noop();
  if (outs[0].is_div()) return {EAState::divergence(), Reply::Divergent, "exe:div", "exe:D"};
  // Inputs were read above; writes apply left to right, so the rightmost
  // write to a repeated name wins.
  for (std::size_t k = 0; k < i.outputs.size(); ++k) {
    if (outs[k].is_bits()) {
      sigma[i.outputs[k]] = outs[k].payload();
    } else {
      sigma.erase(i.outputs[k]);
    }
  }
  r.eff_row = "exe:bits";
  r.yld_row = "exe:T";
  return r;
}

EAState eff(const EAInstruction& i, const EAState& s, const MachineStructure& m) {
  return step(i, s, m).state;
}

Reply yld(const EAInstruction& i, const EAState& s, const MachineStructure& m) {
  return step(i, s, m).reply;
}

EAState ceff(const EAState& s, const std::vector<EAInstruction>& gamma,
             const MachineStructure& m) {
  EAState cur = s;
  for (const auto& i : gamma) cur = eff(i, cur, m);
  return cur;
}

std::pair<Reply, ServicePtr> EAService::consume(std::string_view method) const {
  if (backing_.diverged) return {Reply::Divergent, undefined_service()};
  auto i = try_parse_instruction(method);
  if (!i) return {Reply::Divergent, service_of(EAState::divergence(), *m_)};
  auto r = step(*i, backing_, *m_);
  return {r.reply, service_of(std::move(r.state), *m_)};
}

bool EAService::same_as(const Service& other) const {
  if (const auto* o = dynamic_cast<const EAService*>(&other)) return o->backing_ == backing_;
  return is_undefined() && other.is_undefined();
}

std::string EAService::describe() const { return format_snapshot(backing_); }

std::shared_ptr<const EAService> service_of(EAState s, const MachineStructure& m) {
  return std::make_shared<const EAService>(std::move(s), m);
}

EAState parse_snapshot(std::string_view text) {
  auto lines = split_lines(text);
  if (lines.empty()) throw ParseError(1, "empty snapshot");
  if (lines[0] == "diverged") {
    for (std::size_t k = 1; k < lines.size(); ++k) {
      if (!lines[k].empty()) throw ParseError(k + 1, "a diverged snapshot has no files");
    }
    return EAState::divergence();
  }
  EAState s;
  auto head = lines[0];
  if (head.substr(0, 7) != "loaded=") throw ParseError(1, "expected loaded=<bits>|none");
  auto loaded = head.substr(7);
  try {
    if (loaded != "none") s.loaded = BitSeq::parse(loaded);
  } catch (const std::invalid_argument& e) {
    throw ParseError(1, e.what());
  }
  for (std::size_t k = 1; k < lines.size(); ++k) {
    auto l = lines[k];
    if (l.empty()) continue;
    auto tab = l.find('\t');
    if (tab == std::string_view::npos) throw ParseError(k + 1, "expected name<TAB>bits");
    std::string name(l.substr(0, tab));
    if (!valid_file_name(name)) throw ParseError(k + 1, "bad file name '" + name + "'");
    try {
      if (!s.files.emplace(name, BitSeq::parse(l.substr(tab + 1))).second) {
        throw ParseError(k + 1, "file " + name + " listed twice");
      }
    } catch (const std::invalid_argument& e) {
      throw ParseError(k + 1, e.what());
    }
  }
  return s;
}

std::string format_snapshot(const EAState& s) {
  if (s.diverged) return "diverged\n";
  std::ostringstream os;
  os << "loaded=" << (s.loaded ? s.loaded->to_string() : std::string("none")) << '\n';
  for (const auto& [name, bits] : s.files) os << name << '\t' << bits.to_string() << '\n';
  return os.str();
}

std::vector<EAInstruction> parse_script(std::string_view text) {
  std::vector<EAInstruction> out;
  std::size_t line = 0;
  for (auto l : split_lines(text)) {
    ++line;
    auto start = l.find_first_not_of(" \t");
    if (start == std::string_view::npos || l[start] == '#') continue;
    auto end = l.find_last_not_of(" \t");
    try {
      out.push_back(parse_instruction(l.substr(start, end - start + 1)));
    } catch (const ParseError& e) {
      throw ParseError(line, e.what());
    }
  }
  return out;
}

}  // namespace ctlcode
