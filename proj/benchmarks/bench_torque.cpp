#include <benchmark/benchmark.h>

#include "torque/bench.hpp"
#include "torque/torque_op.hpp"

namespace {

const torque::OrientedEdgeMap& shared_edges()
{
    static const torque::OrientedEdgeMap edges = torque::random_edge_map(512, 512, 0.1, 1);
    return edges;
}

const torque::TorquePrecompute& shared_precompute()
{
    static const torque::TorquePrecompute pre(shared_edges());
    return pre;
}

void BM_PrecomputeBuild(benchmark::State& state)
{
    const torque::OrientedEdgeMap& edges = shared_edges();
    for (auto _ : state) {
        torque::TorquePrecompute pre(edges);
        benchmark::DoNotOptimize(pre.count_table(0).total());
    }
    state.SetItemsProcessed(state.iterations() * 512 * 512);
}
BENCHMARK(BM_PrecomputeBuild)->Unit(benchmark::kMillisecond);

// Per-pixel cost of the fast path should be flat across patch sides.
void BM_FastMap(benchmark::State& state)
{
    const torque::TorquePrecompute& pre = shared_precompute();
    const int side = static_cast<int>(state.range(0));
    for (auto _ : state) {
        const std::vector<double> values = torque::torque_map_fast_values(pre, side, 2.0);
        benchmark::DoNotOptimize(values[values.size() / 2]);
    }
    state.SetItemsProcessed(state.iterations() * 512 * 512);
}
BENCHMARK(BM_FastMap)->Arg(5)->Arg(21)->Arg(45)->Arg(81)->Unit(benchmark::kMillisecond);

void BM_TorqueAt(benchmark::State& state)
{
    const torque::TorquePrecompute& pre = shared_precompute();
    const int side = static_cast<int>(state.range(0));
    int x = 100;
    for (auto _ : state) {
        benchmark::DoNotOptimize(torque::torque_at(pre, x, 256, side, 2.0));
        x = 100 + (x + 7) % 300;
    }
}
BENCHMARK(BM_TorqueAt)->Arg(5)->Arg(81);

// Naive contrast: quadratic in the patch side.
void BM_NaivePatch(benchmark::State& state)
{
    const torque::OrientedEdgeMap& edges = shared_edges();
    const int side = static_cast<int>(state.range(0));
    int x = 100;
    for (auto _ : state) {
        benchmark::DoNotOptimize(torque::patch_torque_naive(edges, {x, 256, side}, 2.0));
        x = 100 + (x + 7) % 300;
    }
}
BENCHMARK(BM_NaivePatch)->Arg(5)->Arg(21)->Arg(45)->Arg(81);

} // namespace

BENCHMARK_MAIN();
