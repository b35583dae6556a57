#include <doctest.h>

#include <cmath>

#include "qkdlab/entropy.hpp"
#include "qkdlab/ldpc.hpp"
#include "qkdlab/postprocess.hpp"

using namespace qkdlab;

TEST_CASE("serfling tail golden values and domain") {
    CHECK(serfling_tail(2000, 1000, 1000, 0.0) == doctest::Approx(1.0));
    // exp(-2 * 0.0025 * 1000 * 2000 / 1001) = exp(-9.990) ~ 4.58e-5
    CHECK(serfling_tail(2000, 1000, 1000, 0.05) == doctest::Approx(4.58e-5).epsilon(1e-3));
    CHECK_THROWS_AS(serfling_tail(2000, 1000, 1000, -0.1), std::domain_error);
    CHECK_THROWS_AS(serfling_tail(2000, 900, 1000, 0.1), std::invalid_argument);
}

TEST_CASE("serfling bound holds under hypergeometric resampling") {
    const std::uint64_t N = 2000, n = 1000, k = N - n;
    const int trials = 20000;
    std::vector<int> population(N, 0);
    for (std::uint64_t i = 0; i < N / 10; ++i) population[i] = 1; // 10% ones
    double pop_mean = 0.1;

    CounterRng rng(51);
    for (double beta : {0.02, 0.05}) {
        int exceed = 0;
        for (int t = 0; t < trials; ++t) {
            CounterRng tr = rng.substream(t + static_cast<int>(beta * 1000) * 100000);
            // partial Fisher-Yates for a without-replacement sample
            std::vector<int> idx(N);
            for (std::uint64_t i = 0; i < N; ++i) idx[i] = static_cast<int>(i);
            int ones = 0;
            for (std::uint64_t i = 0; i < n; ++i) {
                std::uint64_t j = i + tr.next_below(N - i);
                std::swap(idx[i], idx[j]);
                ones += population[idx[i]];
            }
            double sample_mean = static_cast<double>(ones) / static_cast<double>(n);
            if (sample_mean >= pop_mean + beta) ++exceed;
        }
        double empirical = static_cast<double>(exceed) / trials;
        CHECK(empirical <= serfling_tail(N, k, n, beta));
    }
}

TEST_CASE("parameter estimation bounds and aborts") {
    PeParams p;
    p.total_bits = 11000;
    p.sample_bits = 1000;
    p.lambda_max = 0.05;
    p.gamma = 0.01;

    BitString zero_a(1000, 0), zero_b(1000, 0);
    auto out = estimate(zero_a, zero_b, p);
    CHECK_FALSE(out.abort);
    CHECK(out.kept_bits == 10000);
    CHECK(out.hmax_bound == doctest::Approx(10000.0 * binary_entropy(0.06)).epsilon(1e-12));
    CHECK(out.hmax_bound == doctest::Approx(3274.4).epsilon(1e-3));

    // 6% observed errors against a 5% threshold
    BitString err_b = zero_b;
    for (int i = 0; i < 60; ++i) err_b[i] = 1;
    auto bad = estimate(zero_a, err_b, p);
    CHECK(bad.lambda_k == doctest::Approx(0.06));
    CHECK(bad.abort);

    // gamma -> 0: bound tends to n h(lambda_max) and epsilon to 1
    PeParams flat = p;
    flat.gamma = 0.0;
    auto vac = estimate(zero_a, zero_b, flat);
    CHECK(vac.hmax_bound == doctest::Approx(10000.0 * binary_entropy(0.05)).epsilon(1e-12));
    CHECK(vac.eps_pe == doctest::Approx(1.0));
}

TEST_CASE("asymptotic entropy bound") {
    CHECK(asymptotic_hbound(0.0) == doctest::Approx(0.0));
    CHECK(asymptotic_hbound(0.5) == doctest::Approx(1.0));
    CHECK(asymptotic_hbound(0.11) == doctest::Approx(0.49992).epsilon(2e-4));
}

TEST_CASE("reconciliation of identical keys leaks only verification bits") {
    CounterRng rng(52);
    BitString key = random_bits(rng, 2048);
    IrParams p;
    p.crossover_estimate = 0.0;
    p.eps_cor = 0x1p-10;
    p.seed = 99;
    auto res = reconcile(key, key, p);
    CHECK(res.verified);
    CHECK(res.syndrome_bits == 0);
    CHECK(res.verify_bits == 10);
    CHECK(res.leak_bits == 20); // hash description + value
    CHECK(res.corrected == key);
}

TEST_CASE("reconciliation corrects 5% BSC noise at the policy rate") {
    const int n = 4096;
    const double q = 0.05;
    int ok = 0;
    const int trials = 30;
    for (int t = 0; t < trials; ++t) {
        CounterRng rng(6000 + t);
        BitString a = random_bits(rng, n);
        BitString e(n, 0);
        for (int i = 0; i < n; ++i) e[i] = rng.bernoulli(q);
        BitString b = xor_bits(a, e);
        IrParams p;
        p.crossover_estimate = q;
        p.seed = 777 + t;
        auto res = reconcile(a, b, p);
        if (res.verified) {
            CHECK(res.corrected == a); // verified implies equality here
            ++ok;
        }
    }
    CHECK(ok >= static_cast<int>(0.95 * trials));
}

TEST_CASE("tiny error estimates do not produce degenerate codes") {
    CounterRng rng(59);
    BitString a = random_bits(rng, 1000);
    BitString b = a;
    b[123] ^= 1; // single residual error
    IrParams p;
    p.crossover_estimate = 1e-5; // would ask for a 1-bit syndrome unfloored
    p.seed = 5;
    auto res = reconcile(a, b, p);
    CHECK(res.syndrome_bits >= 32);
    if (res.verified) CHECK(res.corrected == a);

    // explicit tiny syndrome override also survives
    IrParams q;
    q.crossover_estimate = 1e-5;
    q.syndrome_bits = 2;
    q.seed = 6;
    auto res2 = reconcile(a, a, q);
    CHECK(res2.verified);
}

TEST_CASE("decoder overload aborts instead of passing bad keys") {
    CounterRng rng(53);
    BitString a = random_bits(rng, 1024);
    BitString e(1024, 0);
    for (int i = 0; i < 1024; ++i) e[i] = rng.bernoulli(0.25); // far beyond capability
    BitString b = xor_bits(a, e);
    IrParams p;
    p.crossover_estimate = 0.05; // badly underestimated
    p.seed = 4;
    auto res = reconcile(a, b, p);
    CHECK_FALSE(res.verified);
    CHECK(res.corrected.empty());
}

TEST_CASE("verification hash misses mismatches at most eps_cor of the time") {
    // 1e5 random residual-error trials at eps_cor = 2^-10; expected
    // collisions ~97.7, allow +4 sigma
    const int trials = 100000;
    CounterRng rng(54);
    int collisions = 0;
    for (int t = 0; t < trials; ++t) {
        BitString a = random_bits(rng, 256);
        BitString b = a;
        std::uint64_t flips = 1 + rng.next_below(8);
        for (std::uint64_t i = 0; i < flips; ++i) b[rng.next_below(256)] ^= 1;
        if (b == a) continue;
        std::uint64_t s1 = rng.next_u64(), s2 = rng.next_u64();
        if (key_verification_hash(a, s1, s2, 10) == key_verification_hash(b, s1, s2, 10))
            ++collisions;
    }
    double expected = trials * 0x1p-10;
    CHECK(collisions <= static_cast<int>(expected + 4 * std::sqrt(expected)));
}

TEST_CASE("noiseless pipeline delivers the calculator-predicted length") {
    CounterRng rng(55);
    BitString key = random_bits(rng, 4000);
    PipelineConfig cfg;
    cfg.seed = 11;
    cfg.sample_fraction = 0.25;
    auto res = run_pipeline(key, key, cfg);
    REQUIRE_FALSE(res.report.aborted);

    std::uint64_t n = 3000;
    PaBudget budget;
    budget.hmin_bound = n * 1.0 - n * binary_entropy(cfg.lambda_max + cfg.gamma);
    budget.leak_ir = 20;
    budget.eps_pa = cfg.eps_pa;
    int predicted = max_key_length(budget);
    CHECK(res.report.length == predicted);
    CHECK(res.final_key.size() == static_cast<std::size_t>(predicted));
    CHECK(res.report.eps_total ==
          doctest::Approx(res.report.eps_pe + res.report.eps_cor + res.report.eps_pa));
    // PE consumed ceil(log2 C(4000,1000)) random bits
    CHECK(res.transcript.pe_random_bits == std::ceil(log2_binomial(4000, 1000)));
}

TEST_CASE("pipeline aborts above the error threshold without a partial key") {
    CounterRng rng(56);
    BitString a = random_bits(rng, 2000);
    BitString b = a;
    for (int i = 0; i < 2000; ++i)
        if (rng.bernoulli(0.10)) b[i] ^= 1;
    PipelineConfig cfg;
    cfg.seed = 12;
    cfg.lambda_max = 0.05;
    auto res = run_pipeline(a, b, cfg);
    CHECK(res.report.aborted);
    CHECK(res.report.abort_stage == "parameter-estimation");
    CHECK(res.final_key.empty());
}

TEST_CASE("pipeline runs are seed-deterministic end to end") {
    CounterRng rng(57);
    BitString a = random_bits(rng, 3000);
    BitString b = a;
    for (int i = 0; i < 3000; ++i)
        if (rng.bernoulli(0.03)) b[i] ^= 1;

    PipelineConfig cfg;
    cfg.seed = 13;
    cfg.lambda_max = 0.06;
    auto r1 = run_pipeline(a, b, cfg);
    auto r2 = run_pipeline(a, b, cfg);
    CHECK(r1.final_key == r2.final_key);
    CHECK(r1.report.length == r2.report.length);
    CHECK(r1.transcript.sampled_indices == r2.transcript.sampled_indices);
    CHECK(r1.transcript.pa_seed == r2.transcript.pa_seed);
    if (!r1.report.aborted) CHECK_FALSE(r1.final_key.empty());
}

TEST_CASE("pa_linear_hash is two-universal on a small exhaustive check") {
    // all 256 inputs, 200 seeds, l = 4: collision fraction per pair <= 2^-4
    // within sampling tolerance of the seeded family
    const int n = 8, l = 4, seeds = 200;
    CounterRng rng(58);
    for (int pair = 0; pair < 40; ++pair) {
        std::uint64_t xa = rng.next_below(256), xb = rng.next_below(256);
        if (xa == xb) continue;
        BitString a = u64_to_bits(xa, n), b = u64_to_bits(xb, n);
        int coll = 0;
        for (int s = 0; s < seeds; ++s)
            if (pa_linear_hash(a, l, 1000 + s) == pa_linear_hash(b, l, 1000 + s)) ++coll;
        double frac = static_cast<double>(coll) / seeds;
        double sigma = std::sqrt(0.0625 * (1 - 0.0625) / seeds);
        CHECK(frac <= 0.0625 + 4 * sigma);
    }
}
