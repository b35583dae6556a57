#include <benchmark/benchmark.h>

#include "qkdlab/entropy.hpp"
#include "qkdlab/hashing.hpp"
#include "qkdlab/ldpc.hpp"
#include "qkdlab/postprocess.hpp"
#include "qkdlab/protocols.hpp"
#include "qkdlab/quantum.hpp"

using namespace qkdlab;

static void BM_GfMul64(benchmark::State& state) {
    Gf2nField field(64);
    CounterRng rng(1);
    std::uint64_t a = rng.next_u64(), b = rng.next_u64();
    for (auto _ : state) {
        a = field.mul(a, b);
        benchmark::DoNotOptimize(a);
    }
}
BENCHMARK(BM_GfMul64);

static void BM_ApplyChannelKraus(benchmark::State& state) {
    CounterRng rng(2);
    auto ch = random_channel(rng, 2, 2, 4);
    auto rho = random_density(rng, 2);
    for (auto _ : state) {
        auto out = apply_channel(ch, rho);
        benchmark::DoNotOptimize(out.matrix);
    }
}
BENCHMARK(BM_ApplyChannelKraus);

static void BM_ApplyChannelCj(benchmark::State& state) {
    CounterRng rng(3);
    auto cj = kraus_to_cj(random_channel(rng, 2, 2, 4));
    auto rho = random_density(rng, 2);
    for (auto _ : state) {
        auto out = apply_channel(cj, rho);
        benchmark::DoNotOptimize(out.matrix);
    }
}
BENCHMARK(BM_ApplyChannelCj);

static void BM_HminQuantum(benchmark::State& state) {
    CounterRng rng(4);
    auto rho = random_density(rng, {2, static_cast<int>(state.range(0))});
    for (auto _ : state) {
        auto res = hmin_quantum(rho);
        benchmark::DoNotOptimize(res.value);
    }
}
BENCHMARK(BM_HminQuantum)->Arg(2)->Arg(4);

static void BM_Bb84Round(benchmark::State& state) {
    ProtocolConfig cfg;
    cfg.protocol = ProtocolId::Bb84;
    cfg.rounds = static_cast<std::uint64_t>(state.range(0));
    cfg.channel = ChannelModel::depolarizing(0.95);
    cfg.seed = 5;
    for (auto _ : state) {
        auto res = run_bb84(cfg);
        benchmark::DoNotOptimize(res.bb84.qber);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Bb84Round)->Arg(10000);

static void BM_LdpcDecode(benchmark::State& state) {
    const int n = 4096;
    CounterRng rng(6);
    BitString a = random_bits(rng, n);
    BitString e(n, 0);
    for (int i = 0; i < n; ++i) e[i] = rng.bernoulli(0.05);
    BitString b = xor_bits(a, e);
    IrParams params;
    params.crossover_estimate = 0.05;
    params.seed = 7;
    for (auto _ : state) {
        auto res = reconcile(a, b, params);
        benchmark::DoNotOptimize(res.verified);
    }
}
BENCHMARK(BM_LdpcDecode);

static void BM_PaLinearHash(benchmark::State& state) {
    CounterRng rng(8);
    BitString key = random_bits(rng, 10000);
    for (auto _ : state) {
        auto out = pa_linear_hash(key, 6000, 99);
        benchmark::DoNotOptimize(out.size());
    }
}
BENCHMARK(BM_PaLinearHash);

BENCHMARK_MAIN();
