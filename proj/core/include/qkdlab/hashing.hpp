#pragma once

#include <cstdint>
#include <vector>

#include "qkdlab/bits.hpp"

namespace qkdlab {

/// Binary extension field GF(2^n), n in 1..64. Elements are the low n bits
/// of a uint64. Reduction polynomials come from a published low-weight
/// table; for n <= 16 irreducibility is re-verified at construction by an
/// exhaustive factor check.
class Gf2nField {
public:
    explicit Gf2nField(int n);
    Gf2nField(int n, std::uint64_t reduction_taps);

    int bit_width() const { return n_; }
    /// Taps of the reduction polynomial below x^n (x^n itself is implicit).
    std::uint64_t reduction_taps() const { return taps_; }

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return (a ^ b) & mask_; }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const;
    /// Multiplicative inverse; a = 0 is a domain error.
    std::uint64_t inv(std::uint64_t a) const;
    std::uint64_t pow(std::uint64_t a, std::uint64_t e) const;

private:
    int n_;
    std::uint64_t taps_;
    std::uint64_t mask_;
};

std::uint64_t gf_mul(const Gf2nField& field, std::uint64_t a, std::uint64_t b);
std::uint64_t gf_inv(const Gf2nField& field, std::uint64_t a);

/// Hash family descriptor: either the two-universal GF-multiply family
/// f_a(x) = (x * a in GF(2^n)) mod 2^l, or the delta-almost polynomial
/// family f_a(x_1..x_r) = sum_i x_i a^(r-i) over a field.
struct HashFamily {
    enum class Kind { GfMultiply, PolynomialAlmost };

    Kind kind;
    Gf2nField field;
    int input_bits = 0;  // n, GfMultiply
    int output_bits = 0; // l, GfMultiply
    int block_count = 0; // r, PolynomialAlmost

    static HashFamily gf_multiply(int input_bits, int output_bits);
    static HashFamily polynomial(const Gf2nField& field, int block_count);

    /// 2^-l for the two-universal family, (r-1)/|F| for the polynomial one.
    double collision_bound() const;
};

/// GF-multiply hash: key and seed are n-bit strings; keeps the low l bits.
BitString hash_gf(const HashFamily& family, const BitString& key, const BitString& seed);

/// Polynomial hash over the family's field, Horner evaluated.
std::uint64_t hash_poly(const HashFamily& family, const std::vector<std::uint64_t>& blocks,
                        std::uint64_t seed);

/// Privacy-amplification budget. eps_smooth and eps_pa are kept separate
/// and enter the leftover-hash bound as a sum.
struct PaBudget {
    double hmin_bound = 0;  // bits
    double leak_ir = 0;     // bits
    double eps_pa = 0;
    double eps_cor = 0;
    double eps_smooth = 0;
    int output_len = 0;     // bits, filled in by max_key_length
};

/// eps + 2^(-(hmin - l)/2 - 1).
double leftover_hash_distance(double hmin_bits, double out_bits, double eps_smooth);

/// Largest integer l >= 0 with
/// leftover_hash_distance(hmin_bound - leak_ir, l, eps_smooth) <= eps_pa;
/// 0 when no positive length survives.
int max_key_length(const PaBudget& budget);

} // namespace qkdlab
