#include <benchmark/benchmark.h>

#include <map>

#include "fixtures.hpp"
#include "socnet/measures.hpp"

using namespace socnet;

static void BM_Degree(benchmark::State& state) {
    const auto& g = bench::window_snapshot(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(degree_in(g));
}
BENCHMARK(BM_Degree)->Arg(1000)->Arg(7000);

static void BM_BetweennessExact(benchmark::State& state) {
    const auto& g = bench::window_snapshot(static_cast<std::size_t>(state.range(0)));
    BetweennessOptions o;
    o.exact = true;
    for (auto _ : state) benchmark::DoNotOptimize(betweenness(g, o));
}
BENCHMARK(BM_BetweennessExact)->Arg(1000)->Arg(7000)->Unit(benchmark::kMillisecond);

static void BM_BetweennessSampled(benchmark::State& state) {
    const auto& g = bench::window_snapshot(7000);
    BetweennessOptions o;
    o.exact_limit = 0;
    o.pivots = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(betweenness(g, o));
}
BENCHMARK(BM_BetweennessSampled)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

static void BM_Barycenter(benchmark::State& state) {
    const auto& g = bench::window_snapshot(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(barycenter(g));
}
BENCHMARK(BM_Barycenter)->Arg(1000)->Arg(7000)->Unit(benchmark::kMillisecond);

static void BM_Hits(benchmark::State& state) {
    const auto& g = bench::window_snapshot(7000);
    for (auto _ : state) benchmark::DoNotOptimize(hits(g));
}
BENCHMARK(BM_Hits)->Unit(benchmark::kMillisecond);

static void BM_PageRank(benchmark::State& state) {
    const auto& g = bench::window_snapshot(7000);
    for (auto _ : state) benchmark::DoNotOptimize(pagerank(g));
}
BENCHMARK(BM_PageRank)->Unit(benchmark::kMillisecond);

static void BM_Markov(benchmark::State& state) {
    const auto& g = bench::window_snapshot(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(markov_centrality(g));
}
BENCHMARK(BM_Markov)->Arg(1000)->Arg(7000)->Unit(benchmark::kMillisecond);

static void BM_ScaleToBands(benchmark::State& state) {
    const auto& g = bench::window_snapshot(7000);
    const auto raw = degree_in(g);
    for (auto _ : state) benchmark::DoNotOptimize(scale_to_bands(raw));
}
BENCHMARK(BM_ScaleToBands);
