#pragma once

// Seeded random TM programs and inputs for property sweeps.

#include <cstdint>
#include <random>
#include <vector>

#include "ctlcode/bitseq.hpp"
#include "ctlcode/machine.hpp"
#include "ctlcode/toy_machine.hpp"

namespace ctlcode {

/// Short programs over all 17 opcodes with operands drawn from small ranges,
/// so jumps stay near the program and loops are common.
ToyProgram random_program(std::mt19937_64& rng, std::size_t max_length = 12);

/// Up to `max_args` arguments of up to `max_bits` bits each.
BitSeqs random_inputs(std::mt19937_64& rng, std::size_t max_args = 3, std::size_t max_bits = 6);

struct RuleCase {
  BitSeq code;  // occasionally not executable
  BitSeqs inputs;
  BitSeqs extension;
};

std::vector<RuleCase> random_rule_cases(std::uint64_t seed, std::size_t count);

struct RuleSweep {
  std::size_t cases = 0;
  RuleReport totals;  // per-rule counts summed over cases; first witness kept
};

/// check_mf_rules on every case, with corpus {<code> ++ inputs} and the
/// case's extension.
RuleSweep rule_sweep(const MachineStructure& m, const std::vector<RuleCase>& cases,
                     std::size_t n_max);

}  // namespace ctlcode
