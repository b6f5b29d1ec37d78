#include "ctlcode/portability.hpp"

#include <functional>
#include <set>
#include <sstream>

#include "ctlcode/error.hpp"
#include "ctlcode/file_formats.hpp"
#include "ctlcode/toy_machine.hpp"
#include "ctlcode/translators.hpp"

namespace ctlcode {

namespace {

Verdict pass(std::string detail) { return {RuleStatus::Pass, std::move(detail)}; }
Verdict fail(std::string detail) { return {RuleStatus::Fail, std::move(detail)}; }

std::string tuple_text(const std::vector<std::string>& names) {
  std::string s = "<";
  for (std::size_t i = 0; i < names.size(); ++i) s += (i ? "," : "") + names[i];
  return s + ">";
}

BitSeq psi_of(const ControlCodeNotation& ccn, const Code& c) {
  if (!ccn.member(c)) throw Error("code is not a member of " + ccn.name + ": " + render_code(c));
  auto x = ccn.project(c);
  if (!x) throw Error("projection undefined on " + render_code(c));
  return *x;
}

ServicePtr copy_service(const EAService& eas) { return service_of(eas.backing(), eas.machine()); }

}  // namespace

Verdict check_installed(const MachineStructure& m, const ControlCodeNotation& ccn, const Code& c,
                        const EAService& eas, const std::vector<std::string>& witness,
                        const Corpus& corpus) {
  if (eas.is_undefined()) throw Error("installation needs a live service");
  if (witness.empty()) throw Error("an install witness names at least f0");
  const auto& sigma = eas.backing().files;
  std::set<std::string> seen;
  BitSeqs prefix;
  for (const auto& f : witness) {
    if (!seen.insert(f).second) throw Error("witness name " + f + " is repeated");
    auto it = sigma.find(f);
    if (it == sigma.end()) throw Error("witness name " + f + " is not in use");
    prefix.push_back(it->second);
  }
  if (!m.exec_member(prefix.front())) throw Error(witness.front() + " is not executable");
  const BitSeq x = psi_of(ccn, c);
  for (const auto& bs : corpus.inputs) {
    BitSeqs lhs_args{x};
    lhs_args.insert(lhs_args.end(), bs.begin(), bs.end());
    BitSeqs rhs_args = prefix;
    rhs_args.insert(rhs_args.end(), bs.begin(), bs.end());
    auto lhs = m.mf.eval_upto(corpus.n_max, lhs_args);
    auto rhs = m.mf.eval_upto(corpus.n_max, rhs_args);
    for (std::size_t n = 1; n <= corpus.n_max; ++n) {
      if (lhs[n - 1] != rhs[n - 1]) {
        return fail(tuple_text(witness) + ": " +
                    Counterexample{bs, n, lhs[n - 1], rhs[n - 1]}.describe());
      }
    }
  }
  return pass(tuple_text(witness) + " on " + std::to_string(corpus.inputs.size()) +
              " inputs, n <= " + std::to_string(corpus.n_max));
}

std::optional<std::vector<std::string>> find_install_witness(
    const MachineStructure& m, const ControlCodeNotation& ccn, const Code& c,
    const EAService& eas, const Corpus& corpus, std::size_t max_names) {
  if (eas.is_undefined()) return std::nullopt;
  std::vector<std::string> names;
  for (const auto& [f, bits] : eas.backing().files) names.push_back(f);
  std::vector<std::string> tuple;
  std::vector<bool> used(names.size(), false);
  std::optional<std::vector<std::string>> found;
  std::function<void()> extend = [&] {
    if (found) return;
    if (!tuple.empty() && check_installed(m, ccn, c, eas, tuple, corpus).holds()) {
      found = tuple;
      return;
    }
    if (tuple.size() == max_names) return;
    for (std::size_t k = 0; k < names.size() && !found; ++k) {
      if (used[k]) continue;
      if (tuple.empty() && !m.exec_member(*eas.backing().file(names[k]))) continue;
      used[k] = true;
      tuple.push_back(names[k]);
      extend();
      tuple.pop_back();
      used[k] = false;
    }
  };
  extend();
  return found;
}

Verdict check_expansible(const EAService& eas, const EAService& target, const TermPtr& thread,
                         std::uint64_t fuel) {
  if (eas.is_undefined() || target.is_undefined()) return fail("both services must be live");
  for (const auto& a : actions(thread)) {
    if (a.method.rfind("set:", 0) == 0) return fail("thread contains " + a.render());
  }
  for (const auto& [f, bits] : eas.backing().files) {
    const BitSeq* t = target.backing().file(f);
    if (!t) return fail(f + " is in use but missing from the target");
    if (*t != bits) return fail(f + " changes between the service and the target");
  }
  auto r = apply(thread, "ea", copy_service(eas), fuel);
  if (r.outcome == ApplyResult::Outcome::FuelExhausted) {
    return {RuleStatus::Inconclusive, r.reason};
  }
  if (r.outcome == ApplyResult::Outcome::Undefined) return fail("apply is undefined: " + r.reason);
  if (!r.service->same_as(target)) return fail("apply converges to a different state");
  return pass(std::to_string(r.actions) + " actions reach the target");
}

namespace {

std::vector<std::pair<std::string, Verdict>> preinstall_lines(
    const MachineStructure& m, const ControlCodeNotation& ccn, const Code& c, const EAService& eas,
    const Expansion& expansion, const std::vector<std::string>& install_witness,
    const Corpus& corpus, std::uint64_t fuel, std::size_t search_names) {
  std::vector<std::pair<std::string, Verdict>> lines;
  auto found = find_install_witness(m, ccn, c, eas, corpus, search_names);
  if (!found && install_witness.size() > search_names) {
    try {
      if (check_installed(m, ccn, c, eas, install_witness, corpus).holds()) found = install_witness;
    } catch (const Error&) {
    }
  }
  lines.emplace_back("not-installed",
                     found ? fail("installed with " + tuple_text(*found))
                           : pass("no witness of up to " + std::to_string(search_names) +
                                  " names installs the code"));
  EAService target(expansion.target, eas.machine());
  lines.emplace_back("expansible", check_expansible(eas, target, expansion.thread, fuel));
  Verdict installed;
  try {
    installed = check_installed(m, ccn, c, target, install_witness, corpus);
  } catch (const Error& e) {
    installed = fail(e.what());
  }
  lines.emplace_back("installed-on-target", installed);
  return lines;
}

Verdict combine(const std::vector<std::pair<std::string, Verdict>>& lines) {
  for (const auto& [name, v] : lines) {
    if (!v.holds()) return {v.status, name + ": " + v.detail};
  }
  return pass("all clauses hold");
}

}  // namespace

Verdict check_preinstalled(const MachineStructure& m, const ControlCodeNotation& ccn, const Code& c,
                           const EAService& eas, const Expansion& expansion,
                           const std::vector<std::string>& install_witness, const Corpus& corpus,
                           std::uint64_t fuel, std::size_t search_names) {
  return combine(preinstall_lines(m, ccn, c, eas, expansion, install_witness, corpus, fuel,
                                  search_names));
}

TermPtr set_replay_thread(const EAState& from, const std::vector<std::string>& names) {
  TermPtr t = stop();
  for (auto it = names.rbegin(); it != names.rend(); ++it) {
    const BitSeq* v = from.file(*it);
    if (!v) throw Error("plan name " + *it + " is not in use on the expanded source");
    t = prefix({"ea", "set:" + *it + ":" + v->to_string()}, t);
  }
  return t;
}

std::vector<std::pair<std::string, Verdict>> check_portable(const PortabilityCase& pc) {
  const auto& m = *pc.src_machine;
  const auto& m2 = *pc.dst_machine;
  std::vector<std::pair<std::string, Verdict>> lines;

  // P1
  {
    Verdict v = pass("");
    const BitSeq x = psi_of(pc.ccn_src, pc.code);
    const BitSeq x2 = psi_of(pc.ccn_dst, pc.code);
    std::size_t compared = 0, divergent = 0;
    for (const auto& bs : pc.corpus.inputs) {
      for (const auto& b : bs) {
        if (m.bseq_member(b) && !m2.bseq_member(b)) {
          v = fail(b.abbrev() + " is a bit sequence of the source structure only");
        }
      }
      if (!v.holds()) break;
      BitSeqs a{x}, a2{x2};
      a.insert(a.end(), bs.begin(), bs.end());
      a2.insert(a2.end(), bs.begin(), bs.end());
      auto lhs = m.mf.eval_upto(pc.corpus.n_max, a);
      if (lhs[0].is_div()) {
        ++divergent;
        continue;
      }
      auto rhs = m2.mf.eval_upto(pc.corpus.n_max, a2);
      for (std::size_t n = 1; n <= pc.corpus.n_max && v.holds(); ++n) {
        if (lhs[n - 1] != rhs[n - 1]) {
          v = fail(Counterexample{bs, n, lhs[n - 1], rhs[n - 1]}.describe());
        }
      }
      if (!v.holds()) break;
      ++compared;
    }
    if (v.holds()) {
      v.detail = std::to_string(compared) + " inputs agree, " + std::to_string(divergent) +
                 " divergent on the source skipped";
    }
    lines.emplace_back("P1", v);
  }

  // P2
  EAService src0(pc.src_start, m);
  EAService src1(pc.src_expansion.target, m);
  lines.emplace_back("P2", check_expansible(src0, src1, pc.src_expansion.thread, pc.action_fuel));

  // P3
  for (const auto& f : pc.plan) {
    if (pc.dst_start.file(f)) throw Error("plan name " + f + " is already in use at the destination");
  }
  Verdict p3 = pass("");
  std::set<std::string> distinct(pc.plan.begin(), pc.plan.end());
  if (distinct.size() != pc.plan.size()) p3 = fail("plan names are not distinct");
  for (const auto& f : pc.plan) {
    if (p3.holds() && !pc.src_expansion.target.file(f)) {
      p3 = fail("plan name " + f + " is not in use on the expanded source");
    }
  }
  if (p3.holds()) {
    auto replay = apply(set_replay_thread(pc.src_expansion.target, pc.plan), "ea",
                        service_of(pc.dst_start, m2), pc.action_fuel);
    if (replay.outcome != ApplyResult::Outcome::Converged) {
      p3 = fail("set replay does not converge: " + replay.reason);
    } else {
      const auto& dst1 = dynamic_cast<const EAService&>(*replay.service);
      p3 = check_preinstalled(m2, pc.ccn_dst, pc.code, dst1, pc.dst_expansion, pc.install_witness,
                              pc.corpus, pc.action_fuel);
      if (p3.holds()) {
        p3.detail = "pre-installed after replaying " + tuple_text(pc.plan) + "; install witness " +
                    tuple_text(pc.install_witness);
      }
    }
  }
  lines.emplace_back("P3", p3);
  lines.emplace_back("portable", combine(lines));
  return lines;
}

namespace {

EAState with(EAState s, std::map<std::string, BitSeq> files, std::optional<BitSeq> loaded) {
  for (auto& [f, v] : files) s.files[f] = std::move(v);
  if (loaded) s.loaded = std::move(loaded);
  return s;
}

}  // namespace

PreinstallCase scenario_example3(const AssetSet& assets,
                                 const std::vector<std::string>& src_programs) {
  PreinstallCase pc;
  pc.machine = std::make_shared<const MachineStructure>(as_machine_structure(64'000'000));
  const BitSeq asm0 = bootstrap_assembler(assets);
  const std::string compiler_asm = host_compile(assets.compil_prime);
  pc.ccn = asm_notation();
  pc.code = compiler_asm;
  pc.start = EAState::live({{"fn1", asm0}, {"fn2", BitSeq::from_ascii(compiler_asm)}});
  pc.expansion.thread = parse_thread("ea.load:fn1 ; ea.exe:fn2/fn3 ; S");
  pc.expansion.target = with(pc.start, {{"fn3", host_assemble(compiler_asm)}}, asm0);
  pc.install_witness = {"fn3"};
  pc.unexpanded_witness = {"fn1", "fn2"};
  pc.corpus.n_max = 3;
  pc.corpus.inputs.push_back({});
  pc.corpus.inputs.push_back({BitSeq{}});
  pc.corpus.inputs.push_back({BitSeq{1}});
  for (const auto& s : src_programs) pc.corpus.inputs.push_back({BitSeq::from_ascii(s)});
  pc.corpus.inputs.push_back({BitSeq::from_ascii("@x:\nJMP @y")});
  return pc;
}

PortabilityCase scenario_example4(const AssetSet& assets, const std::string& src_text,
                                  const std::vector<BitSeqs>& data) {
  PortabilityCase pc;
  pc.src_machine = std::make_shared<const MachineStructure>(as_machine_structure(64'000'000));
  pc.dst_machine = std::make_shared<const MachineStructure>(as_machine_structure(128'000'000));
  pc.ccn_src = src_notation();
  pc.ccn_dst = src_notation();
  pc.code = src_text;
  const BitSeq asm0 = bootstrap_assembler(assets);
  const BitSeq compiler_exe = host_assemble(host_compile(assets.compil_prime));
  const std::string program_asm = host_compile(src_text);
  pc.src_start = EAState::live({{"fn1", compiler_exe}, {"fn2", BitSeq::from_ascii(src_text)}});
  pc.src_expansion.thread = parse_thread("ea.load:fn1 ; ea.exe:fn2/fn3 ; S");
  pc.src_expansion.target =
      with(pc.src_start, {{"fn3", BitSeq::from_ascii(program_asm)}}, compiler_exe);
  pc.dst_start = EAState::live({{"fn1", asm0}});
  pc.plan = {"fn3"};
  pc.dst_expansion.thread = parse_thread("ea.load:fn1 ; ea.exe:fn3/fn4 ; S");
  pc.dst_expansion.target = with(pc.dst_start,
                                 {{"fn3", BitSeq::from_ascii(program_asm)},
                                  {"fn4", host_assemble(program_asm)}},
                                 asm0);
  pc.install_witness = {"fn4"};
  pc.corpus = Corpus{data, 4};
  return pc;
}

bool PortReport::passed() const {
  for (const auto& [name, v] : lines) {
    if (v.status != RuleStatus::Pass) return false;
  }
  return true;
}

std::string PortReport::render() const {
  std::ostringstream os;
  for (const auto& [name, v] : lines) {
    os << name << ": " << to_string(v.status);
    if (!v.detail.empty()) os << " (" << v.detail << ")";
    os << '\n';
  }
  return os.str();
}

PortReport run_preinstall_case(const PreinstallCase& pc) {
  PortReport r;
  const auto& m = *pc.machine;
  EAService eas(pc.start, m);
  if (!pc.unexpanded_witness.empty()) {
    Verdict v;
    try {
      v = check_installed(m, pc.ccn, pc.code, eas, pc.unexpanded_witness, pc.corpus);
      v = v.holds() ? fail("installed on the unexpanded service with " +
                           tuple_text(pc.unexpanded_witness))
                    : pass("not installed with " + v.detail);
    } catch (const Error& e) {
      v = pass(std::string("witness rejected: ") + e.what());
    }
    r.lines.emplace_back("unexpanded", v);
  }
  auto lines = preinstall_lines(m, pc.ccn, pc.code, eas, pc.expansion, pc.install_witness,
                                pc.corpus, pc.action_fuel, 3);
  auto overall = combine(lines);
  r.lines.insert(r.lines.end(), lines.begin(), lines.end());
  r.lines.emplace_back("pre-installed", overall);
  return r;
}

PortReport run_portability_case(const PortabilityCase& pc) {
  PortReport r;
  try {
    r.lines = check_portable(pc);
  } catch (const Error& e) {
    r.lines.emplace_back("portable", fail(e.what()));
  }
  return r;
}

namespace {

std::string code_file_name(const ControlCodeNotation& ccn) {
  return ccn.carrier_is_bitseq ? "code.exe.txt" : "code." + ccn.name;
}

void write_code(const std::filesystem::path& p, const Code& c) {
  if (const auto* b = std::get_if<BitSeq>(&c)) {
    write_file(p, format_exe_txt(*b));
  } else {
    write_file(p, std::get<std::string>(c));
  }
}

void write_corpus(const std::filesystem::path& p, const Corpus& c) {
  std::string text;
  for (const auto& v : c.inputs) text += format_input_vector(v) + "\n";
  write_file(p, text);
}

std::string names_text(const std::vector<std::string>& names) {
  std::string s;
  for (const auto& n : names) s += (s.empty() ? "" : " ") + n;
  return s;
}

}  // namespace

void write_port_fixture(const std::filesystem::path& dir, const PreinstallCase& pc) {
  std::filesystem::create_directories(dir);
  const auto code = code_file_name(pc.ccn);
  write_code(dir / code, pc.code);
  write_file(dir / "start.snap", format_snapshot(pc.start));
  write_file(dir / "expansion.thread", render(pc.expansion.thread) + "\n");
  write_file(dir / "target.snap", format_snapshot(pc.expansion.target));
  write_corpus(dir / "corpus.inputs", pc.corpus);
  std::ostringstream m;
  m << "kind = preinstalled\n"
    << "fuel = " << pc.machine->mf.fuel_budget() << "\n"
    << "notation = " << pc.ccn.name << "\n"
    << "code = " << code << "\n"
    << "start = start.snap\n"
    << "expansion = expansion.thread\n"
    << "target = target.snap\n"
    << "install = " << names_text(pc.install_witness) << "\n";
  if (!pc.unexpanded_witness.empty()) m << "unexpanded = " << names_text(pc.unexpanded_witness) << "\n";
  m << "corpus = corpus.inputs\n"
    << "n_max = " << pc.corpus.n_max << "\n"
    << "action_fuel = " << pc.action_fuel << "\n";
  write_file(dir / "manifest", m.str());
}

void write_port_fixture(const std::filesystem::path& dir, const PortabilityCase& pc) {
  std::filesystem::create_directories(dir);
  if (pc.ccn_src.name != pc.ccn_dst.name) throw Error("fixtures need one notation on both sides");
  const auto code = code_file_name(pc.ccn_src);
  write_code(dir / code, pc.code);
  write_file(dir / "src_start.snap", format_snapshot(pc.src_start));
  write_file(dir / "src_expansion.thread", render(pc.src_expansion.thread) + "\n");
  write_file(dir / "src_target.snap", format_snapshot(pc.src_expansion.target));
  write_file(dir / "dst_start.snap", format_snapshot(pc.dst_start));
  write_file(dir / "dst_expansion.thread", render(pc.dst_expansion.thread) + "\n");
  write_file(dir / "dst_target.snap", format_snapshot(pc.dst_expansion.target));
  write_corpus(dir / "corpus.inputs", pc.corpus);
  std::ostringstream m;
  m << "kind = portable\n"
    << "fuel = " << pc.src_machine->mf.fuel_budget() << "\n"
    << "dst_fuel = " << pc.dst_machine->mf.fuel_budget() << "\n"
    << "notation = " << pc.ccn_src.name << "\n"
    << "code = " << code << "\n"
    << "start = src_start.snap\n"
    << "expansion = src_expansion.thread\n"
    << "target = src_target.snap\n"
    << "dst_start = dst_start.snap\n"
    << "plan = " << names_text(pc.plan) << "\n"
    << "dst_expansion = dst_expansion.thread\n"
    << "dst_target = dst_target.snap\n"
    << "install = " << names_text(pc.install_witness) << "\n"
    << "corpus = corpus.inputs\n"
    << "n_max = " << pc.corpus.n_max << "\n"
    << "action_fuel = " << pc.action_fuel << "\n";
  write_file(dir / "manifest", m.str());
}

namespace {

class Manifest {
 public:
  Manifest(const std::filesystem::path& path, const NotationRegistry* registry)
      : dir_(path.parent_path()), registry_(registry) {
    std::size_t line = 0;
    const auto content = read_file(path);
    for (auto l : split_lines(content)) {
      ++line;
      auto start = l.find_first_not_of(" \t");
      if (start == std::string_view::npos || l[start] == '#') continue;
      auto eq = l.find('=');
      if (eq == std::string_view::npos) throw ParseError(line, "expected key = value");
      auto trim = [](std::string_view s) {
        auto a = s.find_first_not_of(" \t");
        if (a == std::string_view::npos) return std::string();
        auto b = s.find_last_not_of(" \t");
        return std::string(s.substr(a, b - a + 1));
      };
      auto key = trim(l.substr(0, eq));
      if (!values_.emplace(key, trim(l.substr(eq + 1))).second) {
        throw ParseError(line, "key " + key + " given twice");
      }
    }
  }

  const std::string& get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw Error("manifest lacks key '" + key + "'");
    return it->second;
  }
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::uint64_t number(const std::string& key) const {
    try {
      return std::stoull(get(key));
    } catch (const std::logic_error&) {
      throw Error("manifest key '" + key + "' is not a number");
    }
  }
  std::string text(const std::string& key) const { return read_file(dir_ / get(key)); }
  EAState snapshot(const std::string& key) const { return parse_snapshot(text(key)); }
  TermPtr thread(const std::string& key) const { return parse_thread(text(key)); }
  std::vector<std::string> names(const std::string& key) const {
    std::istringstream is(get(key));
    std::vector<std::string> out;
    for (std::string n; is >> n;) out.push_back(n);
    return out;
  }
  ControlCodeNotation notation() const {
    if (registry_) {
      if (const auto* n = registry_->find(get("notation"))) return *n;
      throw Error("notation '" + get("notation") + "' is not registered");
    }
    auto n = notation_for_decoder(get("notation"));
    if (!n) throw Error("unknown notation '" + get("notation") + "'");
    return *n;
  }
  Code code(const ControlCodeNotation& ccn) const {
    auto t = text("code");
    if (ccn.carrier_is_bitseq) return parse_exe_txt(t);
    return t;
  }
  Corpus corpus() const {
    return Corpus{parse_input_vectors(text("corpus")), static_cast<std::size_t>(number("n_max"))};
  }

 private:
  std::filesystem::path dir_;
  const NotationRegistry* registry_;
  std::map<std::string, std::string> values_;
};

}  // namespace

PortReport run_port_manifest(const std::filesystem::path& manifest,
                             const NotationRegistry* registry) {
  Manifest mf(manifest, registry);
  const auto kind = mf.get("kind");
  if (kind == "preinstalled") {
    PreinstallCase pc;
    pc.machine = std::make_shared<const MachineStructure>(as_machine_structure(mf.number("fuel")));
    pc.ccn = mf.notation();
    pc.code = mf.code(pc.ccn);
    pc.start = mf.snapshot("start");
    pc.expansion = {mf.thread("expansion"), mf.snapshot("target")};
    pc.install_witness = mf.names("install");
    if (mf.has("unexpanded")) pc.unexpanded_witness = mf.names("unexpanded");
    pc.corpus = mf.corpus();
    if (mf.has("action_fuel")) pc.action_fuel = mf.number("action_fuel");
    return run_preinstall_case(pc);
  }
  if (kind == "portable") {
    PortabilityCase pc;
    pc.src_machine =
        std::make_shared<const MachineStructure>(as_machine_structure(mf.number("fuel")));
    pc.dst_machine =
        std::make_shared<const MachineStructure>(as_machine_structure(mf.number("dst_fuel")));
    pc.ccn_src = mf.notation();
    pc.ccn_dst = mf.notation();
    pc.code = mf.code(pc.ccn_src);
    pc.src_start = mf.snapshot("start");
    pc.src_expansion = {mf.thread("expansion"), mf.snapshot("target")};
    pc.dst_start = mf.snapshot("dst_start");
    pc.plan = mf.names("plan");
    pc.dst_expansion = {mf.thread("dst_expansion"), mf.snapshot("dst_target")};
    pc.install_witness = mf.names("install");
    pc.corpus = mf.corpus();
    if (mf.has("action_fuel")) pc.action_fuel = mf.number("action_fuel");
    return run_portability_case(pc);
  }
  throw Error("unknown fixture kind '" + kind + "'");
}

}  // namespace ctlcode
