#include <benchmark/benchmark.h>

#include "ekrlab/containers.hpp"
#include "ekrlab/ekr.hpp"
#include "ekrlab/experiments.hpp"
#include "ekrlab/layer_graph.hpp"
#include "ekrlab/rng.hpp"
#include "ekrlab/sperner.hpp"

using namespace ekrlab;

static void BM_Closure(benchmark::State& state) {
  LayerGraph lg(2 * state.range(0), state.range(0));
  SplitRng rng(1, 0);
  Bitset a = rng.bernoulli_mask(lg.lower_count(), 0.2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lg.closure(a));
  }
}
BENCHMARK(BM_Closure)->Arg(3)->Arg(4)->Arg(5);

static void BM_ClosedEnumeration(benchmark::State& state) {
  LayerGraph lg(6, 3);
  for (auto _ : state) {
    uint64_t count = 0;
    lg.for_each_closed(1, [&](const Bitset&) { ++count; });
    benchmark::DoNotOptimize(count);
  }
}
BENCHMARK(BM_ClosedEnumeration);

static void BM_UpperShadow(benchmark::State& state) {
  LayerGraph lg(2 * state.range(0), state.range(0));
  SplitRng rng(2, 0);
  Bitset a = rng.bernoulli_mask(lg.lower_count(), 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(lg.upper_shadow(a));
}
BENCHMARK(BM_UpperShadow)->Arg(3)->Arg(4)->Arg(5);

static void BM_Verdict(benchmark::State& state) {
  static EkrAnalyzer an(5, 2);
  uint64_t t = 0;
  for (auto _ : state) {
    SampleX x = SampleX::draw(an.universe(), 0.9, 7, t++);
    benchmark::DoNotOptimize(an.verdict(x));
  }
}
BENCHMARK(BM_Verdict);

static void BM_ContainerRecord(benchmark::State& state) {
  LayerGraph lg(6, 3);
  ContainerBuilder builder(lg);
  SplitRng rng(3, 0);
  Bitset a = sample_closed_two_linked(lg, rng);
  uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(builder.build(a, seed++));
}
BENCHMARK(BM_ContainerRecord);

static void BM_Width(benchmark::State& state) {
  CubeSample x = CubeSample::draw(static_cast<int>(state.range(0)), 0.8, 5);
  for (auto _ : state) benchmark::DoNotOptimize(width(x));
}
BENCHMARK(BM_Width)->Arg(6)->Arg(8);

BENCHMARK_MAIN();
