#include "ctlcode/toy_machine.hpp"

#include <array>
#include <stdexcept>

#include "ctlcode/error.hpp"

namespace ctlcode {

namespace {

constexpr std::array<std::string_view, kOpcodeCount> kMnemonics = {
    "HALT", "LDI", "LDM", "LDX", "STM", "STX",     "ADD",     "SUB",   "MUL",
    "DIV",  "MOD", "JMP", "JZ",  "JNZ", "NEXTBIT", "NEXTARG", "OUTBIT"};

constexpr std::uint64_t kDenseLimit = std::uint64_t{1} << 22;

const Nat kZero;

}  // namespace

std::string_view mnemonic(Opcode op) { return kMnemonics.at(static_cast<std::size_t>(op)); }

std::optional<Opcode> opcode_from_mnemonic(std::string_view text) {
  for (std::size_t i = 0; i < kMnemonics.size(); ++i) {
    if (kMnemonics[i] == text) return static_cast<Opcode>(i);
  }
  return std::nullopt;
}

bool takes_operand(Opcode op) {
  return op != Opcode::HALT && op != Opcode::NEXTBIT && op != Opcode::NEXTARG;
}

std::optional<ToyProgram> decode(const BitSeq& bits) {
  if (bits.size() % kInstructionBits != 0) return std::nullopt;
  ToyProgram p;
  p.instructions.reserve(bits.size() / kInstructionBits);
  for (std::size_t off = 0; off < bits.size(); off += kInstructionBits) {
    auto code = bits.read_uint(off, 8);
    if (code >= kOpcodeCount) return std::nullopt;
    auto op = static_cast<Opcode>(code);
    auto operand = bits.read_uint(off + 8, 32);
    if (!takes_operand(op) && operand != 0) return std::nullopt;
    p.instructions.push_back({op, operand});
  }
  return p;
}

BitSeq encode(const ToyProgram& program) {
  BitSeq out;
  for (std::size_t i = 0; i < program.instructions.size(); ++i) {
    const auto& ins = program.instructions[i];
    if (ins.operand >= kOperandLimit) {
      throw std::invalid_argument("instruction " + std::to_string(i) + ": operand exceeds 32 bits");
    }
    if (!takes_operand(ins.op) && ins.operand != 0) {
      throw std::invalid_argument("instruction " + std::to_string(i) + ": " +
                                  std::string(mnemonic(ins.op)) + " takes no operand");
    }
    out.append_uint(static_cast<std::uint64_t>(ins.op), 8);
    out.append_uint(ins.operand, 32);
  }
  return out;
}

OutVal Halted::output(std::uint64_t n) const {
  if (n == 0 || n > count) return OutVal::mea();
  auto it = buffers.find(n);
  return OutVal::bits(it == buffers.end() ? BitSeq{} : it->second);
}

const Nat& ToyExecState::load(const Nat& addr) const {
  if (addr.is_small() && addr.small() < kDenseLimit) {
    return addr.small() < low_mem.size() ? low_mem[addr.small()] : kZero;
  }
  auto it = high_mem.find(addr);
  return it == high_mem.end() ? kZero : it->second;
}

void ToyExecState::store(const Nat& addr, Nat value) {
  if (addr.is_small() && addr.small() < kDenseLimit) {
    if (addr.small() >= low_mem.size()) low_mem.resize(addr.small() + 1);
    low_mem[addr.small()] = std::move(value);
    return;
  }
  high_mem[addr] = std::move(value);
}

RunResult run(const ToyProgram& program, const BitSeqs& inputs, std::uint64_t fuel) {
  const auto& code = program.instructions;
  const std::uint64_t size = code.size();
  ToyExecState s;
  s.fuel_left = fuel;

  while (s.pc < size) {
    if (s.fuel_left == 0) return FuelExhausted{};
    --s.fuel_left;
    ++s.out.steps;
    const ToyInstruction& ins = code[s.pc];
    const Nat operand(ins.operand);
    ++s.pc;
    switch (ins.op) {
      case Opcode::HALT:
        return std::move(s.out);
      case Opcode::LDI:
        s.acc = operand;
        break;
      case Opcode::LDM:
        s.acc = s.load(operand);
        break;
      case Opcode::LDX:
        s.acc = s.load(s.load(operand));
        break;
      case Opcode::STM:
        s.store(operand, s.acc);
        break;
      case Opcode::STX: {
        Nat target = s.load(operand);
        s.store(target, s.acc);
        break;
      }
      case Opcode::ADD:
        s.acc = s.acc + s.load(operand);
        break;
      case Opcode::SUB:
        s.acc = monus(s.acc, s.load(operand));
        break;
      case Opcode::MUL:
        s.acc = s.acc * s.load(operand);
        break;
      case Opcode::DIV:
        s.acc = total_div(s.acc, s.load(operand));
        break;
      case Opcode::MOD:
        s.acc = total_mod(s.acc, s.load(operand));
        break;
      case Opcode::JMP:
        s.pc = ins.operand;
        break;
      case Opcode::JZ:
        if (s.acc.is_zero()) s.pc = ins.operand;
        break;
      case Opcode::JNZ:
        if (!s.acc.is_zero()) s.pc = ins.operand;
        break;
      case Opcode::NEXTBIT: {
        if (s.arg_index > inputs.size()) return std::move(s.out);
        const BitSeq& arg = inputs[s.arg_index - 1];
        if (s.bit_offset < arg.size()) {
          s.acc = arg[s.bit_offset++] ? 1U : 0U;
        } else {
          s.acc = 2U;
        }
        break;
      }
      case Opcode::NEXTARG:
        if (s.arg_index + 1 > inputs.size()) return std::move(s.out);
        ++s.arg_index;
        s.bit_offset = 0;
        break;
      case Opcode::OUTBIT:
        // Buffer 0 is not an output position; the bit is discarded.
        if (ins.operand != 0) {
          s.out.buffers[ins.operand].push_back(s.acc.odd());
          if (ins.operand > s.out.count) s.out.count = ins.operand;
        }
        break;
    }
  }
  return std::move(s.out);
}

RunResult run(const BitSeq& exe, const BitSeqs& inputs, std::uint64_t fuel) {
  auto program = decode(exe);
  if (!program) throw NotExecutable("not a TM executable: " + exe.abbrev());
  return run(*program, inputs, fuel);
}

MachineStructure as_machine_structure(std::uint64_t fuel) {
  if (fuel == 0) throw std::invalid_argument("fuel must be positive");
  auto upto = [fuel](std::size_t n_max, const BitSeqs& args) {
    std::vector<OutVal> out;
    out.reserve(n_max);
    auto fill = [&](auto&& at) {
      for (std::size_t n = 1; n <= n_max; ++n) out.push_back(at(n));
    };
    std::optional<ToyProgram> program;
    if (!args.empty()) program = decode(args.front());
    if (!program) {
      fill([](std::size_t) { return OutVal::mea(); });
      return out;
    }
    BitSeqs rest(args.begin() + 1, args.end());
    auto result = run(*program, rest, fuel);
    if (std::holds_alternative<FuelExhausted>(result)) {
      fill([](std::size_t) { return OutVal::div(); });
    } else {
      const auto& h = std::get<Halted>(result);
      fill([&](std::size_t n) { return h.output(n); });
    }
    return out;
  };
  MachineFunction mf(
      [upto](std::size_t n, const BitSeqs& args) { return upto(n, args).back(); }, fuel, upto);
  return MachineStructure{
      "TM[fuel=" + std::to_string(fuel) + "]",
      [](const BitSeq&) { return true; },
      std::move(mf),
      [](const BitSeq& x) { return decode(x).has_value(); },
      StructureKind::CodeControlled,
  };
}

}  // namespace ctlcode
