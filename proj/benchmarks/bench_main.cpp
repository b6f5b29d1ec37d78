#include <benchmark/benchmark.h>

#include "ctlcode/assets.hpp"
#include "ctlcode/exec_arch.hpp"
#include "ctlcode/experiments.hpp"
#include "ctlcode/thread.hpp"
#include "ctlcode/toy_machine.hpp"
#include "ctlcode/translators.hpp"

using namespace ctlcode;

namespace {

const AssetSet& assets() {
  static const AssetSet a = load_assets(std::filesystem::path(CTLCODE_SOURCE_DIR) / "assets");
  return a;
}

// Counts the accumulator down to zero; three instructions per iteration.
void BM_ToyMachineLoop(benchmark::State& state) {
  const auto prog = *decode(host_assemble(host_compile(
      "LDI 1\nSTM 1\nLDI " + std::to_string(state.range(0)) +
      "\n@l:\nJZ @e\nSUB 1\nJMP @l\n@e:\nHALT")));
  for (auto _ : state) benchmark::DoNotOptimize(run(prog, {}, 100'000'000));
  state.SetItemsProcessed(state.iterations() * 3 * state.range(0));
}
BENCHMARK(BM_ToyMachineLoop)->Arg(1'000)->Arg(100'000);

void BM_SelfAssembly(benchmark::State& state) {
  const auto asm0 = bootstrap_assembler(assets());
  const auto text = BitSeq::from_ascii(assets().asm_prime);
  for (auto _ : state) benchmark::DoNotOptimize(apply_code(asm0, {text}, 64'000'000));
}
BENCHMARK(BM_SelfAssembly)->Unit(benchmark::kMillisecond);

void BM_HostCompile(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(host_compile(assets().compil_prime));
}
BENCHMARK(BM_HostCompile);

void BM_ExecArchScript(benchmark::State& state) {
  const auto m = as_machine_structure(64'000'000);
  const auto thread = parse_thread("ea.load:fn1 ; ea.exe:fn2/fn3 ; S");
  const auto start = EAState::live(
      {{"fn1", bootstrap_assembler(assets())}, {"fn2", BitSeq::from_ascii("LDI 1\nOUTBIT 1")}});
  for (auto _ : state) benchmark::DoNotOptimize(apply(thread, "ea", service_of(start, m), 8));
}
BENCHMARK(BM_ExecArchScript);

}  // namespace

BENCHMARK_MAIN();
