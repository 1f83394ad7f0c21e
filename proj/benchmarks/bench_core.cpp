#include <benchmark/benchmark.h>

#include "pathqv/fbm.hpp"
#include "pathqv/follmer.hpp"
#include "pathqv/models.hpp"
#include "pathqv/partition.hpp"
#include "pathqv/qv.hpp"
#include "pathqv/rng.hpp"

using namespace pathqv;

namespace {

ProcessModel jump_diffusion() {
  ProcessModel m;
  m.sigma = 1.0;
  m.compound_poisson.push_back({3.0, JumpLaw::uniform(-1.0, 1.0)});
  return m;
}

}  // namespace

static void BM_SamplePath(benchmark::State& state) {
  const int level = static_cast<int>(state.range(0));
  const auto model = jump_diffusion();
  std::uint32_t rep = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_path(model, StreamKey{1, rep++}, level));
  }
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << level));
}
BENCHMARK(BM_SamplePath)->Arg(10)->Arg(14)->Arg(18);

static void BM_PartialQv(benchmark::State& state) {
  const int level = static_cast<int>(state.range(0));
  const auto x = sample_path(jump_diffusion(), StreamKey{1, 0}, level).path;
  const auto seq = RefiningSequence::dyadic(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(partial_qv(x, seq, level));
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << level));
}
BENCHMARK(BM_PartialQv)->Arg(10)->Arg(14)->Arg(18);

static void BM_FoellmerIntegral(benchmark::State& state) {
  const int level = static_cast<int>(state.range(0));
  const auto x = sample_path(jump_diffusion(), StreamKey{1, 0}, level).path;
  const auto y = sample_path(jump_diffusion(), StreamKey{2, 0}, level).path;
  const auto seq = RefiningSequence::dyadic(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(foellmer_integral(y, x, seq, level));
}
BENCHMARK(BM_FoellmerIntegral)->Arg(12)->Arg(16);

static void BM_Fbm(benchmark::State& state) {
  const auto steps = static_cast<std::size_t>(state.range(0));
  std::uint32_t rep = 0;
  for (auto _ : state) {
    RngStream rng(StreamKey{1, rep++}, StreamId::Fbm);
    benchmark::DoNotOptimize(sample_fbm(0.75, steps, 1.0, rng));
  }
}
BENCHMARK(BM_Fbm)->Arg(1 << 10)->Arg(1 << 14)->Arg(1 << 18);

BENCHMARK_MAIN();
