#include "ctlcode/machine.hpp"

#include <sstream>
#include <stdexcept>

#include "ctlcode/error.hpp"

namespace ctlcode {

std::string OutVal::to_string() const {
  switch (kind_) {
    case Kind::Mea:
      return "Mea";
    case Kind::Div:
      return "Div";
    case Kind::Bits:
      break;
  }
  return "Bits(" + payload_.abbrev() + ")";
}

MachineFunction::MachineFunction(Eval eval, std::uint64_t fuel_budget, EvalUpto upto)
    : eval_(std::move(eval)), upto_(std::move(upto)), fuel_budget_(fuel_budget) {
  if (!eval_) throw std::invalid_argument("machine function needs an evaluator");
  if (fuel_budget_ == 0) throw std::invalid_argument("fuel budget must be positive");
}

OutVal MachineFunction::eval(std::size_t n, const BitSeqs& args) const {
  if (n == 0) throw std::invalid_argument("output index must be >= 1");
  return eval_(n, args);
}

std::vector<OutVal> MachineFunction::eval_upto(std::size_t n_max, const BitSeqs& args) const {
  if (upto_) return upto_(n_max, args);
  std::vector<OutVal> out;
  out.reserve(n_max);
  for (std::size_t n = 1; n <= n_max; ++n) out.push_back(eval_(n, args));
  return out;
}

void Corpus::validate() const {
  if (inputs.empty()) throw std::invalid_argument("corpus must be non-empty");
  if (n_max == 0) throw std::invalid_argument("corpus n_max must be positive");
}

std::string render_args(const BitSeqs& args) {
  std::string s = "<";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i > 0) s += ", ";
    s += args[i].abbrev();
  }
  return s + ">";
}

MachineFunction meaning(const MachineStructure& m, const BitSeq& x) {
  if (m.kind != StructureKind::CodeControlled || !m.exec_member(x)) {
    throw NotExecutable("not an executable code of " + m.name + ": " + x.abbrev());
  }
  auto prepend = [x](const BitSeqs& ys) {
    BitSeqs args;
    args.reserve(ys.size() + 1);
    args.push_back(x);
    args.insert(args.end(), ys.begin(), ys.end());
    return args;
  };
  MachineFunction base = m.mf;
  return MachineFunction(
      [base, prepend](std::size_t n, const BitSeqs& ys) { return base.eval(n, prepend(ys)); },
      base.fuel_budget(),
      [base, prepend](std::size_t n_max, const BitSeqs& ys) {
        return base.eval_upto(n_max, prepend(ys));
      });
}

std::string Counterexample::describe() const {
  std::ostringstream os;
  os << "input " << render_args(input) << ", n=" << n << ": " << lhs.to_string()
     << " vs " << rhs.to_string();
  return os.str();
}

EquivalenceResult functions_agree(const MachineFunction& f, const MachineFunction& g,
                                  const Corpus& c) {
  c.validate();
  for (const auto& chi : c.inputs) {
    auto a = f.eval_upto(c.n_max, chi);
    auto b = g.eval_upto(c.n_max, chi);
    for (std::size_t i = 0; i < c.n_max; ++i) {
      if (a[i] != b[i]) return {false, Counterexample{chi, i + 1, a[i], b[i]}};
    }
  }
  return {};
}

EquivalenceResult behaviourally_equivalent(const MachineStructure& m, const BitSeq& x1,
                                           const BitSeq& x2, const Corpus& c) {
  return functions_agree(meaning(m, x1), meaning(m, x2), c);
}

const char* to_string(RuleStatus s) {
  switch (s) {
    case RuleStatus::Pass:
      return "PASS";
    case RuleStatus::Fail:
      return "FAIL";
    case RuleStatus::Inconclusive:
      return "INCONCLUSIVE";
  }
  return "?";
}

std::size_t RuleReport::hard_failures() const {
  std::size_t k = 0;
  for (const auto& r : rules) k += r.status == RuleStatus::Fail ? 1 : 0;
  return k;
}

namespace {

BitSeqs joined(const BitSeqs& a, const BitSeqs& b) {
  BitSeqs out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

void fail(RuleResult& r, std::string why) {
  if (r.status != RuleStatus::Fail) {
    r.status = RuleStatus::Fail;
    r.witness = std::move(why);
  }
}

}  // namespace

RuleReport check_mf_rules(const MachineFunction& mf, const Corpus& c,
                          const std::vector<BitSeqs>& extensions) {
  c.validate();
  RuleReport report;
  for (int k = 1; k <= 5; ++k) {
    RuleResult r;
    r.rule = "R" + std::to_string(k);
    report.rules.push_back(std::move(r));
  }
  auto& r1 = report.rules[0];
  auto& r2 = report.rules[1];
  auto& r3 = report.rules[2];
  auto& r4 = report.rules[3];
  auto& r5 = report.rules[4];
  const std::size_t nmax = c.n_max;

  for (const auto& chi : c.inputs) {
    const auto v = mf.eval_upto(nmax, chi);
    for (std::size_t n = 1; n <= nmax; ++n) {
      const OutVal& vn = v[n - 1];
      for (std::size_t m = 1; m <= nmax; ++m) {
        ++r1.checked;
        if (vn.is_div() && !v[m - 1].is_div()) {
          fail(r1, "chi=" + render_args(chi) + ": mf_" + std::to_string(n) + "=Div but mf_" +
                       std::to_string(m) + "=" + v[m - 1].to_string());
        }
        if (m > n) {
          ++r3.checked;
          if (vn.is_mea() && !v[m - 1].is_mea()) {
            fail(r3, "chi=" + render_args(chi) + ": mf_" + std::to_string(n) + "=Mea but mf_" +
                         std::to_string(m) + "=" + v[m - 1].to_string());
          }
        }
      }
      ++r2.checked;
      if (!vn.is_div()) {
        bool found = false;
        for (std::size_t m = n + 1; m <= nmax && !found; ++m) found = v[m - 1].is_mea();
        if (!found) ++r2.inconclusive;
      }
    }
    for (const auto& ext : extensions) {
      const auto w = mf.eval_upto(nmax, joined(chi, ext));
      for (std::size_t n = 1; n <= nmax; ++n) {
        ++r4.checked;
        if (v[n - 1].is_div() && !w[n - 1].is_div()) {
          fail(r4, "chi=" + render_args(chi) + ", ext=" + render_args(ext) + ": mf_" +
                       std::to_string(n) + " Div becomes " + w[n - 1].to_string());
        }
        ++r5.checked;
        if (w[n - 1].is_mea() && !v[n - 1].is_mea()) {
          fail(r5, "chi=" + render_args(chi) + ", ext=" + render_args(ext) + ": mf_" +
                       std::to_string(n) + " extended Mea but base " + v[n - 1].to_string());
        }
      }
    }
  }
  if (r2.status != RuleStatus::Fail && r2.inconclusive > 0) r2.status = RuleStatus::Inconclusive;
  return report;
}

AsymmetryResult is_asymmetric(const MachineFunction& mf, const std::vector<PairWitness>& pairs) {
  for (const auto& p : pairs) {
    if (mf.eval(1, {p.first, p.second}) != mf.eval(1, {p.second, p.first})) return {true, p};
  }
  return {};
}

namespace {

// For each candidate, the constant Bits output over all probes, if any.
// `candidate_first` selects which argument position the candidate occupies.
OverruleResult find_overrule(const MachineFunction& mf, const std::vector<BitSeq>& candidates,
                             const std::vector<BitSeq>& probes, bool candidate_first) {
  if (probes.empty()) return {};
  std::vector<std::optional<BitSeq>> constant(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    std::optional<BitSeq> z;
    bool ok = true;
    for (const auto& y : probes) {
      BitSeqs args = candidate_first ? BitSeqs{candidates[i], y} : BitSeqs{y, candidates[i]};
      OutVal r = mf.eval(1, args);
      if (!r.is_bits() || (z && *z != r.payload())) {
        ok = false;
        break;
      }
      if (!z) z = r.payload();
    }
    if (ok) constant[i] = z;
  }
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!constant[i]) continue;
    for (std::size_t j = 0; j < candidates.size(); ++j) {
      if (constant[j] && *constant[i] != *constant[j]) {
        return {true, OverruleWitness{candidates[i], candidates[j], *constant[i], *constant[j]}};
      }
    }
  }
  return {};
}

}  // namespace

OverruleResult overrules(const MachineStructure& m, const std::vector<BitSeq>& controllers,
                         const std::vector<BitSeq>& probes) {
  for (const auto& x : controllers) {
    if (!m.exec_member(x)) throw NotExecutable("controller is not executable: " + x.abbrev());
  }
  return find_overrule(m.mf, controllers, probes, true);
}

OverruleResult second_overrules_first(const MachineFunction& mf,
                                      const std::vector<BitSeq>& candidates,
                                      const std::vector<BitSeq>& first_probes) {
  return find_overrule(mf, candidates, first_probes, false);
}

}  // namespace ctlcode
