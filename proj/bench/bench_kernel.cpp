// Serial reference vs OpenMP kernel on the decay inputs and a purified
// density matrix. Arguments: n, tau exponent (tau = 10^-arg, 0 means tau = 0).
#include <benchmark/benchmark.h>

#include <cmath>
#include <map>
#include <utility>

#include "spamm/decay.hpp"
#include "spamm/kernel.hpp"
#include "spamm/purification.hpp"

using namespace spamm;

namespace {

const QuadTreeMatrix& exp_input(std::size_t n) {
  static std::map<std::size_t, QuadTreeMatrix> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, decay::gen_exponential(n, 1.0)).first;
  return it->second;
}

const QuadTreeMatrix& density(std::size_t n) {
  static std::map<std::size_t, QuadTreeMatrix> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    const auto spec = decay::gapped_chain(n, 1.0, 1.0);
    auto r = purify::purify(decay::gen_model_hamiltonian(spec), spec.n_occ,
                            purify::AlgebraMode::spamm(1e-10));
    it = cache.emplace(n, std::move(r.density)).first;
  }
  return it->second;
}

void run(benchmark::State& state, const QuadTreeMatrix& m, Execution exec) {
  SpammConfig cfg;
  cfg.tau = state.range(1) == 0 ? 0.0 : std::pow(10.0, -double(state.range(1)));
  cfg.execution = exec;
  std::uint64_t leaves = 0;
  for (auto _ : state) {
    auto r = spamm::spamm(m, m, cfg);
    leaves = r.stats.leaf_matmuls;
    benchmark::DoNotOptimize(r.product.root());
  }
  state.counters["leaf_matmuls"] = double(leaves);
  state.counters["leaf_rate"] =
      benchmark::Counter(double(leaves) * state.iterations(), benchmark::Counter::kIsRate);
}

void BM_exp_serial(benchmark::State& s) { run(s, exp_input(s.range(0)), Execution::serial); }
void BM_exp_parallel(benchmark::State& s) { run(s, exp_input(s.range(0)), Execution::parallel); }
void BM_density_serial(benchmark::State& s) { run(s, density(s.range(0)), Execution::serial); }
void BM_density_parallel(benchmark::State& s) { run(s, density(s.range(0)), Execution::parallel); }

void sizes(benchmark::internal::Benchmark* b) {
  for (int n : {256, 512, 1024}) {
    for (int t : {0, 8, 4}) b->Args({n, t});
  }
  b->Unit(benchmark::kMillisecond);
}

}  // namespace

BENCHMARK(BM_exp_serial)->Apply(sizes);
BENCHMARK(BM_exp_parallel)->Apply(sizes);
BENCHMARK(BM_density_serial)->Apply(sizes);
BENCHMARK(BM_density_parallel)->Apply(sizes);

BENCHMARK_MAIN();
