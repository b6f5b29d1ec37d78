#include "ctlcode/notation.hpp"

#include <set>
#include <sstream>

#include "ctlcode/error.hpp"
#include "ctlcode/toy_machine.hpp"
#include "ctlcode/translators.hpp"

namespace ctlcode {

std::string render_code(const Code& c) {
  if (const auto* b = std::get_if<BitSeq>(&c)) return b->abbrev();
  const auto& s = std::get<std::string>(c);
  std::string out = "\"";
  for (char ch : s.substr(0, 40)) out += ch == '\n' ? std::string("\\n") : std::string(1, ch);
  if (s.size() > 40) out += "...";
  return out + "\"";
}

std::string_view to_string(NotationClass c) {
  switch (c) {
    case NotationClass::Assembly:
      return "assembly";
    case NotationClass::Source:
      return "source";
    case NotationClass::Intermediate:
      return "intermediate";
    case NotationClass::ExecutableForm:
      return "executable";
  }
  return "?";
}

std::optional<NotationClass> notation_class_from_string(std::string_view s) {
  for (auto c : {NotationClass::Assembly, NotationClass::Source, NotationClass::Intermediate,
                 NotationClass::ExecutableForm}) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

ControlCodeNotation executable_notation() {
  ControlCodeNotation n;
  n.name = "exe";
  n.cls = NotationClass::ExecutableForm;
  n.carrier_is_bitseq = true;
  n.member = [](const Code& c) {
    const auto* b = std::get_if<BitSeq>(&c);
    return b && decode(*b).has_value();
  };
  n.project = [](const Code& c) -> std::optional<BitSeq> {
    const auto* b = std::get_if<BitSeq>(&c);
    if (!b || !decode(*b)) return std::nullopt;
    return *b;
  };
  n.represent = n.project;
  n.decode = [](const BitSeq& b) -> std::optional<Code> {
    if (!decode(b)) return std::nullopt;
    return Code{b};
  };
  return n;
}

namespace {

bool represents_executable(const std::string& text) {
  return !text.empty() && decode(BitSeq::from_ascii(text)).has_value();
}

bool is_ascii(const std::string& s) {
  for (unsigned char ch : s) {
    if (ch > 127) return false;
  }
  return true;
}

// A text notation whose psi is `translate` and whose rho is ASCII.
ControlCodeNotation text_notation(std::string name, NotationClass cls,
                                  std::function<BitSeq(const std::string&)> translate) {
  ControlCodeNotation n;
  n.name = std::move(name);
  n.cls = cls;
  n.carrier_is_bitseq = false;
  auto member = [translate](const Code& c) {
    const auto* s = std::get_if<std::string>(&c);
    if (!s || !is_ascii(*s) || represents_executable(*s)) return false;
    try {
      translate(*s);
      return true;
    } catch (const ParseError&) {
      return false;
    }
  };
  n.member = member;
  n.project = [member, translate](const Code& c) -> std::optional<BitSeq> {
    if (!member(c)) return std::nullopt;
    return translate(std::get<std::string>(c));
  };
  n.represent = [member](const Code& c) -> std::optional<BitSeq> {
    if (!member(c)) return std::nullopt;
    return BitSeq::from_ascii(std::get<std::string>(c));
  };
  n.decode = [member](const BitSeq& b) -> std::optional<Code> {
    std::string s;
    if (!b.to_ascii(s)) return std::nullopt;
    Code c{s};
    if (!member(c)) return std::nullopt;
    return c;
  };
  return n;
}

}  // namespace

ControlCodeNotation asm_notation() {
  return text_notation("asm", NotationClass::Assembly,
                       [](const std::string& s) { return host_assemble(s); });
}

ControlCodeNotation src_notation() {
  return text_notation("src", NotationClass::Source,
                       [](const std::string& s) { return host_assemble(host_compile(s)); });
}

ControlCodeNotation icn_notation() {
  ControlCodeNotation n;
  n.name = "icn";
  n.cls = NotationClass::Intermediate;
  n.carrier_is_bitseq = true;
  n.member = [](const Code& c) {
    const auto* b = std::get_if<BitSeq>(&c);
    return b && icn_payload(*b).has_value();
  };
  n.project = [](const Code& c) -> std::optional<BitSeq> {
    const auto* b = std::get_if<BitSeq>(&c);
    if (!b) return std::nullopt;
    return icn_payload(*b);
  };
  n.represent = [](const Code& c) -> std::optional<BitSeq> {
    const auto* b = std::get_if<BitSeq>(&c);
    if (!b || !icn_payload(*b)) return std::nullopt;
    return *b;
  };
  n.decode = [](const BitSeq& b) -> std::optional<Code> {
    if (!icn_payload(b)) return std::nullopt;
    return Code{b};
  };
  return n;
}

std::optional<ControlCodeNotation> notation_for_decoder(std::string_view decoder) {
  if (decoder == "exe") return executable_notation();
  if (decoder == "asm") return asm_notation();
  if (decoder == "src") return src_notation();
  if (decoder == "icn") return icn_notation();
  return std::nullopt;
}

MachineFunction cc_meaning(const MachineStructure& m, const ControlCodeNotation& ccn,
                           const Code& c) {
  if (!ccn.member(c)) throw Error("not a member of " + ccn.name + ": " + render_code(c));
  auto x = ccn.project(c);
  if (!x) throw Error("projection undefined on " + render_code(c));
  return meaning(m, *x);
}

bool NotationReport::ok() const {
  for (const auto& c : clauses) {
    if (!c.ok) return false;
  }
  return true;
}

std::string NotationReport::render() const {
  std::ostringstream os;
  for (const auto& c : clauses) {
    os << c.clause << ": " << (c.ok ? "PASS" : "FAIL");
    if (c.witness) os << " (" << *c.witness << ")";
    os << '\n';
  }
  return os.str();
}

NotationReport validate_notation(const MachineStructure& m, const ControlCodeNotation& ccn,
                                 const std::vector<Code>& sample) {
  ClauseResult projects{"psi maps into Exec", true, std::nullopt};
  ClauseResult injective{"rho injective", true, std::nullopt};
  ClauseResult identity_psi{"psi identity on executable carriers", true, std::nullopt};
  ClauseResult identity_rho{"rho identity on bit sequence carriers", true, std::nullopt};
  auto fail = [](ClauseResult& r, std::string why) {
    if (r.ok) {
      r.ok = false;
      r.witness = std::move(why);
    }
  };
  std::map<BitSeq, std::size_t> seen;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const Code& c = sample[i];
    const auto what = "sample[" + std::to_string(i) + "] " + render_code(c);
    auto x = ccn.project(c);
    if (!x || !m.exec_member(*x)) fail(projects, what);
    auto r = ccn.represent(c);
    if (!r) {
      fail(injective, what + " has no representation");
      continue;
    }
    auto [it, fresh] = seen.emplace(*r, i);
    if (!fresh && sample[it->second] != c) {
      fail(injective, "sample[" + std::to_string(it->second) + "] and sample[" +
                          std::to_string(i) + "] share " + r->abbrev());
    }
    if (ccn.carrier_is_bitseq) {
      const auto* b = std::get_if<BitSeq>(&c);
      if (!b) {
        fail(identity_rho, what + " is not a bit sequence");
        continue;
      }
      if (m.exec_member(*b) && (!x || *x != *b)) fail(identity_psi, what);
      if (*r != *b) fail(identity_rho, what);
    } else if (m.exec_member(*r) && !r->empty()) {
      fail(identity_rho, what + " represents an executable code");
    }
  }
  return NotationReport{{projects, injective, identity_psi, identity_rho}};
}

TranslResult transl_check(const MachineStructure& m, const Code& cc,
                          const ControlCodeNotation& home, const ControlCodeNotation& from,
                          const ControlCodeNotation& to, const std::vector<Code>& sample) {
  if (!home.member(cc)) throw Error("translator is not a member of " + home.name);
  const BitSeq x = *home.project(cc);
  for (std::size_t i = 0; i < sample.size(); ++i) {
    auto r = from.represent(sample[i]);
    if (!r) throw Error("sample[" + std::to_string(i) + "] is not a member of " + from.name);
    auto out = m.mf.eval_upto(1, {x, *r}).front();
    TranslResult res;
    res.ok = false;
    res.failing_index = i;
    if (out.kind() == OutVal::Kind::Mea) {
      res.failure = TranslResult::Failure::Meaningless;
      res.detail = "output 1 is Mea on " + render_code(sample[i]);
      return res;
    }
    if (out.kind() == OutVal::Kind::Div) {
      res.failure = TranslResult::Failure::Divergent;
      res.detail = "output 1 is Div on " + render_code(sample[i]);
      return res;
    }
    if (!to.decode(out.payload())) {
      res.failure = TranslResult::Failure::NotInTarget;
      res.detail = "output " + out.payload().abbrev() + " on " + render_code(sample[i]) +
                   " is not in " + to.name;
      return res;
    }
  }
  return TranslResult{};
}

void NotationRegistry::add(ControlCodeNotation n) {
  auto name = n.name;
  if (!by_name_.emplace(name, std::move(n)).second) {
    throw Error("notation '" + name + "' registered twice");
  }
}

const ControlCodeNotation* NotationRegistry::find(std::string_view name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : &it->second;
}

std::vector<std::string> NotationRegistry::names(NotationClass cls) const {
  std::vector<std::string> out;
  for (const auto& [name, n] : by_name_) {
    if (n.cls == cls) out.push_back(name);
  }
  return out;
}

NotationRegistry NotationRegistry::from_manifest(std::string_view text) {
  NotationRegistry reg;
  std::size_t line = 0;
  for (auto l : split_lines(text)) {
    ++line;
    std::istringstream is{std::string(l)};
    std::string name, cls, decoder, extra;
    if (!(is >> name) || name.front() == '#') continue;
    if (!(is >> cls >> decoder) || (is >> extra)) {
      throw ParseError(line, "expected `name class decoder`");
    }
    auto c = notation_class_from_string(cls);
    if (!c) throw ParseError(line, "unknown class '" + cls + "'");
    auto n = notation_for_decoder(decoder);
    if (!n) throw ParseError(line, "unknown decoder '" + decoder + "'");
    n->name = name;
    n->cls = *c;
    try {
      reg.add(std::move(*n));
    } catch (const Error& e) {
      throw ParseError(line, e.what());
    }
  }
  return reg;
}

}  // namespace ctlcode
