#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "srcp/hierarchy.hpp"
#include "srcp/srcp_policy.hpp"
#include "srcp/trace.hpp"

namespace {

const std::vector<srcp::MemRef>& workload() {
    static const auto refs = [] {
        srcp::WorkloadSpec w;
        w.pattern = srcp::Pattern::Mixed;
        w.refs = 200000;
        w.footprint_blocks = 16384;
        w.seed = 11;
        return srcp::gen_synthetic(w);
    }();
    return refs;
}

void BM_Simulate(benchmark::State& state) {
    srcp::SimConfig cfg;
    cfg.llc = {1024, 16, 64};
    cfg.policy = static_cast<srcp::Policy>(state.range(0));
    const auto& refs = workload();
    for (auto _ : state) {
        srcp::Simulator sim(cfg);
        for (const auto& r : refs) benchmark::DoNotOptimize(sim.access(r));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * refs.size()));
    state.SetLabel(std::string(srcp::to_string(cfg.policy)));
}
BENCHMARK(BM_Simulate)
    ->Arg(static_cast<int>(srcp::Policy::Lru))
    ->Arg(static_cast<int>(srcp::Policy::Srcp))
    ->Arg(static_cast<int>(srcp::Policy::TaDrrip))
    ->Unit(benchmark::kMillisecond);

void BM_SelectVictim(benchmark::State& state) {
    const auto ways = static_cast<std::uint32_t>(state.range(0));
    std::vector<srcp::LineState> set(ways);
    srcp::Rng rng(5);
    for (auto& l : set) {
        l.valid = true;
        l.afc = static_cast<std::uint32_t>(rng.next_below(256));
        l.gcount = static_cast<std::uint32_t>(rng.next_below(4));
        l.last_local_touch = 1 + rng.next_below(1000);
    }
    for (auto _ : state) benchmark::DoNotOptimize(srcp::select_victim(set, {0, ways}));
}
BENCHMARK(BM_SelectVictim)->Arg(4)->Arg(16)->Arg(64);

void BM_GenerateTrace(benchmark::State& state) {
    srcp::WorkloadSpec w;
    w.pattern = srcp::Pattern::SharedZipf;
    w.refs = 100000;
    for (auto _ : state) benchmark::DoNotOptimize(srcp::gen_synthetic(w));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * w.refs));
}
BENCHMARK(BM_GenerateTrace)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
