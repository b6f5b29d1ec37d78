#include "ctlcode/random_cases.hpp"

namespace ctlcode {

namespace {

std::uint64_t uniform(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
  return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
}

}  // namespace

ToyProgram random_program(std::mt19937_64& rng, std::size_t max_length) {
  ToyProgram p;
  const std::size_t length = uniform(rng, 1, max_length);
  for (std::size_t k = 0; k < length; ++k) {
    auto op = static_cast<Opcode>(uniform(rng, 0, kOpcodeCount - 1));
    std::uint64_t operand = 0;
    switch (op) {
      case Opcode::HALT:
      case Opcode::NEXTBIT:
      case Opcode::NEXTARG:
        break;
      case Opcode::JMP:
      case Opcode::JZ:
      case Opcode::JNZ:
        operand = uniform(rng, 0, length);
        break;
      case Opcode::OUTBIT:
        operand = uniform(rng, 0, 4);
        break;
      case Opcode::LDI:
        operand = uniform(rng, 0, 3);
        break;
      default:
        operand = uniform(rng, 0, 7);
        break;
    }
    p.instructions.push_back({op, operand});
  }
  return p;
}

BitSeqs random_inputs(std::mt19937_64& rng, std::size_t max_args, std::size_t max_bits) {
  BitSeqs out(uniform(rng, 0, max_args));
  for (auto& b : out) {
    const std::size_t n = uniform(rng, 0, max_bits);
    for (std::size_t k = 0; k < n; ++k) b.push_back(uniform(rng, 0, 1) == 1);
  }
  return out;
}

std::vector<RuleCase> random_rule_cases(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  std::vector<RuleCase> cases;
  cases.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    RuleCase c;
    if (uniform(rng, 0, 9) == 0) {
      const std::size_t n = uniform(rng, 1, 79);
      for (std::size_t j = 0; j < n; ++j) c.code.push_back(uniform(rng, 0, 1) == 1);
    } else {
      c.code = encode(random_program(rng));
    }
    c.inputs = random_inputs(rng);
    c.extension = random_inputs(rng, 2);
    if (c.extension.empty()) c.extension.emplace_back();
    cases.push_back(std::move(c));
  }
  return cases;
}

RuleSweep rule_sweep(const MachineStructure& m, const std::vector<RuleCase>& cases,
                     std::size_t n_max) {
  RuleSweep sweep;
  for (const auto& c : cases) {
    BitSeqs chi{c.code};
    chi.insert(chi.end(), c.inputs.begin(), c.inputs.end());
    auto report = check_mf_rules(m.mf, Corpus{{chi}, n_max}, {c.extension});
    if (sweep.totals.rules.empty()) {
      sweep.totals = report;
    } else {
      for (std::size_t k = 0; k < report.rules.size(); ++k) {
        auto& t = sweep.totals.rules[k];
        const auto& r = report.rules[k];
        t.checked += r.checked;
        t.inconclusive += r.inconclusive;
        if (r.status == RuleStatus::Fail && t.status != RuleStatus::Fail) {
          t.status = RuleStatus::Fail;
          t.witness = r.witness;
        } else if (r.status == RuleStatus::Inconclusive && t.status == RuleStatus::Pass) {
          t.status = RuleStatus::Inconclusive;
        }
      }
    }
    ++sweep.cases;
  }
  return sweep;
}

}  // namespace ctlcode
