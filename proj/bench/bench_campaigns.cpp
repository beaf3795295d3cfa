// Serial reference against the OpenMP kernels on the same campaigns.

#include <benchmark/benchmark.h>

#include "wak/twisted.hpp"

using namespace wak;

namespace {

ExecPolicy policy_of(const benchmark::State& s) { return s.range(0) ? ExecPolicy::Parallel : ExecPolicy::Serial; }

void BM_Affine(benchmark::State& state) {
    Wakimoto wak(Level::symbolic());
    CampaignOptions o;
    o.max_mode = 2;
    o.max_weight = 4;
    o.policy = policy_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(verify_affine_relations(wak, o));
}

void BM_Heisenberg(benchmark::State& state) {
    FockSpace fock(Level::symbolic());
    CampaignOptions o;
    o.max_mode = 3;
    o.max_weight = 4;
    o.policy = policy_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(verify_heisenberg(fock, o));
}

void BM_UntwistedHierarchy(benchmark::State& state) {
    Wakimoto wak(Level::symbolic());
    Casimir cas(wak);
    for (auto _ : state)
        benchmark::DoNotOptimize(verify_untwisted_hierarchy(cas, 3, LevelScalar::rational(1, 2), policy_of(state)));
}

void BM_TwistedAffine(benchmark::State& state) {
    TwistedWakimoto wak(Level::symbolic());
    TwistedOptions o;
    o.max_doubled_mode = 3;
    o.max_weight = 3;
    o.policy = policy_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(verify_twisted_affine(wak, o));
}

}  // namespace

// Arg 0: serial, 1: OpenMP.
BENCHMARK(BM_Affine)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Heisenberg)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_UntwistedHierarchy)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TwistedAffine)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
