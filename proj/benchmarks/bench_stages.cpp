#include <benchmark/benchmark.h>

#include <map>

#include "fixtures.hpp"
#include "socnet/dynamics.hpp"
#include "socnet/groups.hpp"
#include "socnet/roles.hpp"

using namespace socnet;

static void BM_Snapshot(benchmark::State& state) {
    SyntheticCdrParams p;
    p.seed = 42;
    InteractionStore store;
    store.add_interactions(to_interactions(generate_cdr(p).records));
    const Timestamp width = (*store.max_timestamp() - *store.min_timestamp()) / 10 + 1;
    const auto windows = store.windows(width, width);
    for (auto _ : state) benchmark::DoNotOptimize(store.snapshot(windows.front()));
}
BENCHMARK(BM_Snapshot)->Unit(benchmark::kMillisecond);

static void BM_AssignRoles(benchmark::State& state) {
    const auto& g = bench::window_snapshot(7000);
    const auto m = measure_matrix(g, kAllMeasures);
    const auto roles = RoleSet::table1();
    for (auto _ : state) benchmark::DoNotOptimize(assign_roles(m, roles));
}
BENCHMARK(BM_AssignRoles)->Unit(benchmark::kMillisecond);

static void BM_ExtractGroups(benchmark::State& state) {
    const auto& g = bench::window_snapshot(7000);
    ExtractionParams p;
    p.weight_threshold = static_cast<std::uint32_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(extract_groups(g, p));
}
BENCHMARK(BM_ExtractGroups)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_Cusum(benchmark::State& state) {
    std::vector<double> v(static_cast<std::size_t>(state.range(0)));
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i % 7) - 3.0;
    const auto series = make_series("x", "m", v, 10);
    const CusumParams p;
    for (auto _ : state) benchmark::DoNotOptimize(cusum_detect(series, p));
}
BENCHMARK(BM_Cusum)->Arg(60)->Arg(10'000);
