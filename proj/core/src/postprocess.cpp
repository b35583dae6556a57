#include "qkdlab/postprocess.hpp"

#include <algorithm>
#include <cmath>

#include "qkdlab/entropy.hpp"
#include "qkdlab/ldpc.hpp"
#include "qkdlab/rng.hpp"

namespace qkdlab {

// ---------------------------------------------------------------------------
// parameter estimation
// ---------------------------------------------------------------------------

void PeParams::validate() const {
    if (sample_bits == 0 || sample_bits >= total_bits)
        throw std::invalid_argument("need 0 < k < N");
    if (lambda_max < 0 || lambda_max > 1 || gamma < 0 || gamma > 1 ||
        lambda_max + gamma > 1)
        throw std::invalid_argument("lambda_max, gamma must satisfy lambda_max + gamma <= 1");
    if (pr_lambda_ok <= 0 || pr_lambda_ok > 1)
        throw std::invalid_argument("Pr[Lambda_k <= lambda_max] must lie in (0, 1]");
}

double serfling_tail(std::uint64_t total, std::uint64_t remaining, std::uint64_t sample,
                     double beta) {
    if (beta < 0) throw std::domain_error("serfling_tail: beta must be non-negative");
    if (sample == 0 || sample + remaining != total)
        throw std::invalid_argument("serfling_tail: need sample + remaining = total");
    double n = static_cast<double>(sample);
    double big_n = static_cast<double>(total);
    double k = static_cast<double>(remaining);
    return std::exp(-2.0 * beta * beta * n * big_n / (k + 1.0));
}

PeOutcome estimate(const BitString& key_a_sample, const BitString& key_b_sample,
                   const PeParams& params) {
    params.validate();
    if (key_a_sample.size() != key_b_sample.size() ||
        key_a_sample.size() != params.sample_bits)
        throw std::invalid_argument("estimate: sample length mismatch");

    PeOutcome out;
    out.kept_bits = params.kept_bits();
    out.lambda_k = static_cast<double>(hamming_distance(key_a_sample, key_b_sample)) /
                   static_cast<double>(params.sample_bits);
    out.abort = out.lambda_k > params.lambda_max;
    if (!out.abort) out.hmax_bound = static_cast<double>(out.kept_bits) *
                                     binary_entropy(params.lambda_max + params.gamma);

    double k = static_cast<double>(params.sample_bits);
    double n = static_cast<double>(params.kept_bits());
    double big_n = static_cast<double>(params.total_bits);
    out.eps_pe = std::exp(-(k * k * n * params.gamma * params.gamma) / ((k + 1.0) * big_n)) /
                 std::sqrt(params.pr_lambda_ok);
    out.eps_pe = std::min(out.eps_pe, 1.0);
    return out;
}

double asymptotic_hbound(double error_rate) { return binary_entropy(error_rate); }

// ---------------------------------------------------------------------------
// reconciliation
// ---------------------------------------------------------------------------

std::uint64_t key_verification_hash(const BitString& key, std::uint64_t seed_poly,
                                    std::uint64_t seed_final, int out_bits) {
    if (out_bits < 1 || out_bits > 64)
        throw std::invalid_argument("verification hash output must be 1..64 bits");
    // pack big-endian 64-bit blocks, zero padded
    std::size_t blocks = (key.size() + 63) / 64;
    Gf2nField f64(64);
    std::uint64_t acc = 0;
    for (std::size_t b = 0; b < blocks; ++b) {
        std::uint64_t word = 0;
        for (std::size_t i = 0; i < 64; ++i) {
            std::size_t idx = b * 64 + i;
            word = (word << 1) | (idx < key.size() ? key[idx] : 0);
        }
        acc = f64.add(f64.mul(acc, seed_poly), word);
    }
    std::uint64_t mixed = f64.mul(acc, seed_final);
    return out_bits == 64 ? mixed : (mixed & ((1ull << out_bits) - 1));
}

IrResult reconcile(const BitString& key_a, const BitString& key_b, const IrParams& params) {
    if (key_a.size() != key_b.size())
        throw std::invalid_argument("reconcile: key length mismatch");
    int n = static_cast<int>(key_a.size());

    IrResult out;
    out.eps_cor = params.eps_cor;
    out.verify_bits = static_cast<int>(std::ceil(std::log2(1.0 / params.eps_cor)));

    int m;
    if (params.syndrome_bits) {
        m = *params.syndrome_bits;
    } else {
        double target = std::ceil(static_cast<double>(n) *
                                  binary_entropy(params.crossover_estimate) *
                                  (1.0 + params.rate_margin));
        m = static_cast<int>(target);
        if (m > 0) m = std::max(m, std::min(32, n - 1)); // avoid degenerate codes
    }
    m = std::min(m, n - 1);
    out.syndrome_bits = std::max(m, 0);

    BitString corrected = key_b;
    if (out.syndrome_bits > 0) {
        LdpcCode code(n, out.syndrome_bits, params.seed);
        auto syn_a = code.syndrome(key_a);
        auto syn_b = code.syndrome(key_b);
        std::vector<std::uint8_t> rel(syn_a.size());
        for (std::size_t i = 0; i < rel.size(); ++i) rel[i] = syn_a[i] ^ syn_b[i];
        double q = std::max(params.crossover_estimate, 1e-4);
        auto pattern = code.decode_error_pattern(rel, q, params.max_iterations);
        if (!pattern) {
            out.verified = false;
            out.leak_bits = static_cast<std::uint64_t>(out.syndrome_bits) +
                            2ull * static_cast<std::uint64_t>(out.verify_bits);
            return out;
        }
        corrected = xor_bits(key_b, *pattern);
    }

    // verification hash, seeds derived from the session seed and published
    CounterRng rng(params.seed, 0x7a11);
    out.verify_seed_poly = rng.next_u64();
    out.verify_seed_final = rng.next_u64();
    out.verify_value =
        key_verification_hash(key_a, out.verify_seed_poly, out.verify_seed_final, out.verify_bits);
    std::uint64_t check =
        key_verification_hash(corrected, out.verify_seed_poly, out.verify_seed_final, out.verify_bits);

    out.verified = check == out.verify_value;
    if (out.verified) out.corrected = std::move(corrected);
    // hash description + value conservatively counted as leak
    out.leak_bits = static_cast<std::uint64_t>(out.syndrome_bits) +
                    2ull * static_cast<std::uint64_t>(out.verify_bits);
    return out;
}

// ---------------------------------------------------------------------------
// privacy amplification and the pipeline
// ---------------------------------------------------------------------------

BitString pa_linear_hash(const BitString& key, int out_bits, std::uint64_t seed) {
    if (out_bits < 0) throw std::invalid_argument("negative output length");
    BitString out(out_bits, 0);
    CounterRng rng(seed, 0x9a5c);
    std::size_t words = (key.size() + 63) / 64;
    // pack the key once
    std::vector<std::uint64_t> packed(words, 0);
    for (std::size_t i = 0; i < key.size(); ++i)
        if (key[i]) packed[i / 64] |= 1ull << (i % 64);
    for (int row = 0; row < out_bits; ++row) {
        std::uint64_t acc = 0;
        for (std::size_t w = 0; w < words; ++w) acc ^= packed[w] & rng.next_u64();
        out[row] = static_cast<std::uint8_t>(__builtin_parityll(acc));
    }
    return out;
}

double log2_binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0.0;
    double l = std::lgamma(static_cast<double>(n) + 1) -
               std::lgamma(static_cast<double>(k) + 1) -
               std::lgamma(static_cast<double>(n - k) + 1);
    return l / std::log(2.0);
}

PipelineResult run_pipeline(const BitString& key_a, const BitString& key_b,
                            const PipelineConfig& config) {
    if (key_a.size() != key_b.size())
        throw std::invalid_argument("run_pipeline: key length mismatch");

    PipelineResult res;
    RateReport& rep = res.report;
    rep.protocol = "pipeline";
    rep.eps_cor = config.eps_cor;
    rep.eps_pa = config.eps_pa;

    std::uint64_t total = key_a.size();
    std::uint64_t k = config.sample_bits
                          ? *config.sample_bits
                          : static_cast<std::uint64_t>(
                                std::llround(config.sample_fraction * static_cast<double>(total)));
    if (k == 0 || k >= total) throw std::invalid_argument("run_pipeline: bad sample size");

    // --- parameter estimation on a uniform random subset ---
    CounterRng rng(config.seed, 0xbead);
    std::vector<std::uint64_t> index(total);
    for (std::uint64_t i = 0; i < total; ++i) index[i] = i;
    for (std::uint64_t i = 0; i < k; ++i) {
        std::uint64_t j = i + rng.next_below(total - i);
        std::swap(index[i], index[j]);
    }
    res.transcript.sampled_indices.assign(index.begin(), index.begin() + k);
    std::sort(res.transcript.sampled_indices.begin(), res.transcript.sampled_indices.end());
    res.transcript.pe_random_bits = std::ceil(log2_binomial(total, k));

    BitString sample_a, sample_b, kept_a, kept_b;
    {
        std::vector<bool> sampled(total, false);
        for (auto i : res.transcript.sampled_indices) sampled[i] = true;
        for (std::uint64_t i = 0; i < total; ++i) {
            if (sampled[i]) {
                sample_a.push_back(key_a[i]);
                sample_b.push_back(key_b[i]);
            } else {
                kept_a.push_back(key_a[i]);
                kept_b.push_back(key_b[i]);
            }
        }
    }

    PeParams pe;
    pe.total_bits = total;
    pe.sample_bits = k;
    pe.lambda_max = config.lambda_max;
    pe.gamma = config.gamma;
    PeOutcome outcome = estimate(sample_a, sample_b, pe);
    rep.eps_pe = config.eps_pe > 0 ? config.eps_pe : outcome.eps_pe;
    rep.inputs["rounds"] = static_cast<double>(total);
    rep.inputs["sampled"] = static_cast<double>(k);
    rep.inputs["lambda_k"] = outcome.lambda_k;
    rep.inputs["lambda_max"] = config.lambda_max;
    rep.inputs["gamma"] = config.gamma;
    rep.inputs["overlap_c"] = config.overlap_c;

    if (outcome.abort) {
        rep.aborted = true;
        rep.abort_stage = "parameter-estimation";
        rep.eps_total = rep.eps_pe + rep.eps_cor + rep.eps_pa;
        return res;
    }

    // --- information reconciliation ---
    IrParams ir = config.ir;
    ir.eps_cor = config.eps_cor;
    if (ir.seed == 0) ir.seed = rng.next_u64();
    if (ir.crossover_estimate == 0.0) ir.crossover_estimate = outcome.lambda_k;
    IrResult irres = reconcile(kept_a, kept_b, ir);
    res.transcript.syndrome_bits = irres.syndrome_bits;
    res.transcript.verify_seed_poly = irres.verify_seed_poly;
    res.transcript.verify_seed_final = irres.verify_seed_final;
    res.transcript.verify_value = irres.verify_value;
    rep.leak = static_cast<double>(irres.leak_bits);
    rep.hmax = outcome.hmax_bound;

    if (!irres.verified) {
        rep.aborted = true;
        rep.abort_stage = "reconciliation";
        rep.eps_total = rep.eps_pe + rep.eps_cor + rep.eps_pa;
        return res;
    }

    // --- privacy amplification ---
    double n = static_cast<double>(outcome.kept_bits);
    rep.hmin = n * std::log2(1.0 / config.overlap_c) - outcome.hmax_bound;

    PaBudget budget;
    budget.hmin_bound = rep.hmin;
    budget.leak_ir = rep.leak;
    budget.eps_pa = config.eps_pa;
    budget.eps_cor = config.eps_cor;
    int len = max_key_length(budget);

    rep.has_length = true;
    rep.length = len;
    rep.no_positive_rate = len == 0;
    rep.eps_total = rep.eps_pe + rep.eps_cor + rep.eps_pa;

    res.transcript.pa_seed = rng.next_u64();
    res.final_key = pa_linear_hash(kept_a, len, res.transcript.pa_seed);

    rep.metadata["pa_seed"] = std::to_string(res.transcript.pa_seed);
    rep.metadata["verify_seed_poly"] = std::to_string(irres.verify_seed_poly);
    rep.metadata["verify_seed_final"] = std::to_string(irres.verify_seed_final);
    rep.metadata["verify_value"] = std::to_string(irres.verify_value);
    rep.metadata["verify_field_poly_taps"] = std::to_string(Gf2nField(64).reduction_taps());
    rep.metadata["ldpc_seed"] = std::to_string(ir.seed);
    rep.metadata["syndrome_bits"] = std::to_string(irres.syndrome_bits);
    return res;
}

} // namespace qkdlab
