#include <benchmark/benchmark.h>

#include "fqt/harness.hpp"
#include "fqt/validate.hpp"

namespace {

using namespace fqt;

void BM_HaarSample(benchmark::State& state) {
  const NoiseFamily family = NoiseFamily::haar(1);
  std::uint64_t trial = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample(family, trial++));
}
BENCHMARK(BM_HaarSample);

void BM_RunPipeline(benchmark::State& state) {
  const InputQubit input{Complex{0.6, 0.0}, Complex{0.0, 0.8}};
  const NoiseUnitary u = sample(NoiseFamily::haar(1), 0);
  const DecoderConfig cfg;
  for (auto _ : state)
    benchmark::DoNotOptimize(run_pipeline(input, u, cfg).final_state);
}
BENCHMARK(BM_RunPipeline);

void BM_PostSelectAndScore(benchmark::State& state) {
  const InputQubit input{Complex{0.6, 0.0}, Complex{0.0, 0.8}};
  const NoiseUnitary u = sample(NoiseFamily::haar(1), 0);
  const TwoPhotonState final_state =
      run_pipeline(input, u, DecoderConfig{}).final_state;
  for (auto _ : state) {
    const PostSelection selection = post_select(final_state);
    double total = 0.0;
    for (const Branch& branch : selection.branches) {
      if (branch.probability <= 0.0) continue;
      const auto [plus, minus] = correct_and_score(branch, input);
      total += plus.joint_probability * plus.fidelity +
               minus.joint_probability * minus.fidelity;
    }
    benchmark::DoNotOptimize(total);
  }
}
BENCHMARK(BM_PostSelectAndScore);

void BM_FullTrial(benchmark::State& state) {
  ExperimentSpec spec;
  spec.input = {{1.0, InputQubit{Complex{0.6, 0.0}, Complex{0.0, 0.8}}}};
  spec.noise = NoiseFamily::haar(1);
  spec.trials = 1;
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment(spec));
}
BENCHMARK(BM_FullTrial);

void BM_OracleEvolve(benchmark::State& state) {
  const InputQubit input{Complex{0.6, 0.0}, Complex{0.0, 0.8}};
  const NoiseUnitary u = sample(NoiseFamily::haar(1), 0);
  const DecoderConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(oracle_evolve(input, u, cfg));
}
BENCHMARK(BM_OracleEvolve);

}  // namespace

BENCHMARK_MAIN();
