#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qkdlab/bits.hpp"
#include "qkdlab/hashing.hpp"
#include "qkdlab/report.hpp"

namespace qkdlab {

// ---------------------------------------------------------------------------
// parameter estimation
// ---------------------------------------------------------------------------

struct PeParams {
    std::uint64_t total_bits = 0; // N
    std::uint64_t sample_bits = 0; // k
    double lambda_max = 0.0;
    double gamma = 0.0;
    /// Pr[Lambda_k <= lambda_max]; 1 is the conservative default, a channel
    /// model may supply a tighter value.
    double pr_lambda_ok = 1.0;

    std::uint64_t kept_bits() const { return total_bits - sample_bits; } // n
    void validate() const;
};

struct PeOutcome {
    double lambda_k = 0.0; // sampled error ratio
    bool abort = false;
    double hmax_bound = 0.0; // bits, n h(lambda_max + gamma)
    double eps_pe = 1.0;
    std::uint64_t kept_bits = 0;
};

/// Tail of Serfling's inequality for sampling without replacement:
/// Pr[sample mean >= population mean + beta] <= exp(-2 beta^2 n N / (k+1))
/// with sample size n out of N and k = N - n remaining.
double serfling_tail(std::uint64_t total, std::uint64_t remaining, std::uint64_t sample,
                     double beta);

PeOutcome estimate(const BitString& key_a_sample, const BitString& key_b_sample,
                   const PeParams& params);

/// Infinite-key bound h(q) >= H(K_A | K_B).
double asymptotic_hbound(double error_rate);

// ---------------------------------------------------------------------------
// information reconciliation
// ---------------------------------------------------------------------------

struct IrParams {
    double crossover_estimate = 0.0; // expected residual error rate
    /// Syndrome length policy: ceil(n h(q) (1 + margin)) unless overridden.
    /// The default margin is what the column-weight-3 decoder needs for a
    /// >= 95% correction rate at desk-scale block lengths.
    double rate_margin = 0.45;
    std::optional<int> syndrome_bits;
    int max_iterations = 200;
    double eps_cor = 0x1p-10;
    std::uint64_t seed = 0;
};

struct IrResult {
    BitString corrected; // Bob's key after correction (empty if not verified)
    std::uint64_t leak_bits = 0;
    bool verified = false;
    double eps_cor = 0.0;
    int syndrome_bits = 0;
    int verify_bits = 0;
    std::uint64_t verify_seed_poly = 0;
    std::uint64_t verify_seed_final = 0;
    std::uint64_t verify_value = 0;
};

/// Direct reconciliation: Alice's syndrome corrects Bob's key, then a
/// two-universal hash check certifies equality except with eps_cor.
IrResult reconcile(const BitString& key_a, const BitString& key_b, const IrParams& params);

/// Verification hash: polynomial family over GF(2^64) compressing 64-bit
/// blocks, finished by the GF-multiply family down to out_bits.
std::uint64_t key_verification_hash(const BitString& key, std::uint64_t seed_poly,
                                    std::uint64_t seed_final, int out_bits);

// ---------------------------------------------------------------------------
// full pipeline
// ---------------------------------------------------------------------------

struct PipelineConfig {
    double sample_fraction = 0.5; // k = round(fraction N) unless sample_bits set
    std::optional<std::uint64_t> sample_bits;
    double lambda_max = 0.05;
    double gamma = 0.01;
    double overlap_c = 0.5; // measurement overlap for the min-entropy bound
    double eps_pe = 0.0;    // 0: derive from gamma via the Serfling bound
    double eps_cor = 0x1p-10;
    double eps_pa = 0x1p-21;
    IrParams ir;
    std::uint64_t seed = 0;
};

struct PipelineTranscript {
    std::vector<std::uint64_t> sampled_indices;
    double pe_random_bits = 0.0; // ceil(log2 C(N,k))
    int syndrome_bits = 0;
    std::uint64_t verify_seed_poly = 0;
    std::uint64_t verify_seed_final = 0;
    std::uint64_t verify_value = 0;
    std::uint64_t pa_seed = 0;
};

struct PipelineResult {
    BitString final_key;
    RateReport report;
    PipelineTranscript transcript;
};

/// Parameter estimation, reconciliation and privacy amplification on a raw
/// key pair. Any stage abort produces an abort report, never a partial key.
PipelineResult run_pipeline(const BitString& key_a, const BitString& key_b,
                            const PipelineConfig& config);

/// Privacy-amplification application: seeded random binary linear map
/// {0,1}^n -> {0,1}^l (the family of all linear maps is two-universal).
BitString pa_linear_hash(const BitString& key, int out_bits, std::uint64_t seed);

double log2_binomial(std::uint64_t n, std::uint64_t k);

} // namespace qkdlab
