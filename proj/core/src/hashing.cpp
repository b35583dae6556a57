#include "qkdlab/hashing.hpp"

#include <cmath>
#include <stdexcept>

namespace qkdlab {

namespace {

// Low-weight irreducible polynomials over GF(2), middle taps of
// x^n + x^a + x^b + x^c + 1 encoded as a bitmask below x^n.
// Entries follow the published low-weight tables; the n <= 16 rows are
// re-verified exhaustively at construction.
std::uint64_t standard_taps(int n) {
    auto t = [](std::initializer_list<int> exps) {
        std::uint64_t m = 1; // the +1 term
        for (int e : exps) m |= 1ull << e;
        return m;
    };
    switch (n) {
    case 1: return t({});
    case 2: return t({1});
    case 3: return t({1});
    case 4: return t({1});
    case 5: return t({2});
    case 6: return t({1});
    case 7: return t({1});
    case 8: return t({4, 3, 1});
    case 9: return t({1});
    case 10: return t({3});
    case 11: return t({2});
    case 12: return t({3});
    case 13: return t({4, 3, 1});
    case 14: return t({5});
    case 15: return t({1});
    case 16: return t({5, 3, 1});
    case 17: return t({3});
    case 18: return t({3});
    case 19: return t({5, 2, 1});
    case 20: return t({3});
    case 21: return t({2});
    case 22: return t({1});
    case 23: return t({5});
    case 24: return t({4, 3, 1});
    case 25: return t({3});
    case 26: return t({4, 3, 1});
    case 27: return t({5, 2, 1});
    case 28: return t({1});
    case 29: return t({2});
    case 30: return t({1});
    case 31: return t({3});
    case 32: return t({7, 3, 2});
    case 33: return t({10});
    case 34: return t({7});
    case 35: return t({2});
    case 36: return t({9});
    case 37: return t({6, 4, 1});
    case 38: return t({6, 5, 1});
    case 39: return t({4});
    case 40: return t({5, 4, 3});
    case 41: return t({3});
    case 42: return t({7});
    case 43: return t({6, 4, 3});
    case 44: return t({5});
    case 45: return t({4, 3, 1});
    case 46: return t({1});
    case 47: return t({5});
    case 48: return t({5, 3, 2});
    case 49: return t({9});
    case 50: return t({4, 3, 2});
    case 51: return t({6, 3, 1});
    case 52: return t({3});
    case 53: return t({6, 2, 1});
    case 54: return t({9});
    case 55: return t({7});
    case 56: return t({7, 4, 2});
    case 57: return t({4});
    case 58: return t({19});
    case 59: return t({7, 4, 2});
    case 60: return t({1});
    case 61: return t({5, 2, 1});
    case 62: return t({29});
    case 63: return t({1});
    case 64: return t({4, 3, 1});
    default: throw std::invalid_argument("field width outside 1..64");
    }
}

// degree of a nonzero polynomial given as a bitmask
int poly_degree(std::uint64_t p) {
    int d = -1;
    while (p) {
        ++d;
        p >>= 1;
    }
    return d;
}

// remainder of a mod b over GF(2); b != 0, both of degree <= 32 here
std::uint64_t poly_mod(std::uint64_t a, std::uint64_t b) {
    int db = poly_degree(b);
    while (poly_degree(a) >= db) a ^= b << (poly_degree(a) - db);
    return a;
}

// exhaustive trial division for n <= 16: the full polynomial, including the
// x^n term, must have no factor of degree 1..n/2
bool irreducible_exhaustive(int n, std::uint64_t taps) {
    std::uint64_t full = taps | (1ull << n);
    for (int d = 1; d <= n / 2; ++d)
        for (std::uint64_t f = (1ull << d); f < (1ull << (d + 1)); ++f)
            if (poly_mod(full, f) == 0) return false;
    return true;
}

} // namespace

Gf2nField::Gf2nField(int n) : Gf2nField(n, standard_taps(n)) {}

Gf2nField::Gf2nField(int n, std::uint64_t reduction_taps) : n_(n), taps_(reduction_taps) {
    if (n < 1 || n > 64) throw std::invalid_argument("field width outside 1..64");
    mask_ = n == 64 ? ~0ull : (1ull << n) - 1;
    if (taps_ & ~mask_) throw std::invalid_argument("reduction taps exceed field width");
    if (n <= 16 && !irreducible_exhaustive(n, taps_))
        throw std::invalid_argument("reduction polynomial is reducible");
}

std::uint64_t Gf2nField::mul(std::uint64_t a, std::uint64_t b) const {
    a &= mask_;
    b &= mask_;
    // carry-less multiply into a 128-bit accumulator, then reduce
    std::uint64_t lo = 0, hi = 0;
    while (b) {
        int i = poly_degree(b & (~b + 1)); // lowest set bit
        lo ^= a << i;
        if (i) hi ^= a >> (64 - i);
        b &= b - 1;
    }
    // fold bits n..127 down using x^n = taps
    for (int bit = 127; bit >= n_; --bit) {
        bool set = bit >= 64 ? ((hi >> (bit - 64)) & 1) : ((lo >> bit) & 1);
        if (!set) continue;
        if (bit >= 64)
            hi ^= 1ull << (bit - 64);
        else
            lo ^= 1ull << bit;
        int shift = bit - n_;
        lo ^= taps_ << shift;
        if (shift) hi ^= taps_ >> (64 - shift);
    }
    return lo & mask_;
}

std::uint64_t Gf2nField::pow(std::uint64_t a, std::uint64_t e) const {
    std::uint64_t acc = 1, base = a & mask_;
    while (e) {
        if (e & 1) acc = mul(acc, base);
        base = mul(base, base);
        e >>= 1;
    }
    return acc;
}

std::uint64_t Gf2nField::inv(std::uint64_t a) const {
    a &= mask_;
    if (a == 0) throw std::domain_error("gf_inv(0) is undefined");
    // a^(2^n - 2): square-and-multiply with n-1 leading one bits
    std::uint64_t acc = 1, sq = a;
    for (int i = 1; i < n_; ++i) {
        sq = mul(sq, sq);
        acc = mul(acc, sq);
    }
    return acc;
}

std::uint64_t gf_mul(const Gf2nField& field, std::uint64_t a, std::uint64_t b) {
    return field.mul(a, b);
}

std::uint64_t gf_inv(const Gf2nField& field, std::uint64_t a) { return field.inv(a); }

HashFamily HashFamily::gf_multiply(int input_bits, int output_bits) {
    if (output_bits < 1 || output_bits > input_bits)
        throw std::invalid_argument("output length must be in 1..input length");
    HashFamily f{Kind::GfMultiply, Gf2nField(input_bits), input_bits, output_bits, 0};
    return f;
}

HashFamily HashFamily::polynomial(const Gf2nField& field, int block_count) {
    if (block_count < 1) throw std::invalid_argument("block count must be positive");
    HashFamily f{Kind::PolynomialAlmost, field, field.bit_width(), field.bit_width(),
                 block_count};
    return f;
}

double HashFamily::collision_bound() const {
    if (kind == Kind::GfMultiply) return std::exp2(-static_cast<double>(output_bits));
    return static_cast<double>(block_count - 1) /
           std::exp2(static_cast<double>(field.bit_width()));
}

BitString hash_gf(const HashFamily& family, const BitString& key, const BitString& seed) {
    if (family.kind != HashFamily::Kind::GfMultiply)
        throw std::invalid_argument("hash_gf needs a GF-multiply family");
    if (static_cast<int>(key.size()) != family.input_bits ||
        static_cast<int>(seed.size()) != family.input_bits)
        throw std::invalid_argument("hash_gf: key/seed length mismatch");
    std::uint64_t prod = family.field.mul(bits_to_u64(key), bits_to_u64(seed));
    // "mod 2^l": keep the least significant l bits
    return u64_to_bits(prod & ((family.output_bits == 64 ? ~0ull : (1ull << family.output_bits) - 1)),
                       family.output_bits);
}

std::uint64_t hash_poly(const HashFamily& family, const std::vector<std::uint64_t>& blocks,
                        std::uint64_t seed) {
    if (family.kind != HashFamily::Kind::PolynomialAlmost)
        throw std::invalid_argument("hash_poly needs a polynomial family");
    if (static_cast<int>(blocks.size()) != family.block_count)
        throw std::invalid_argument("hash_poly: block count mismatch");
    std::uint64_t acc = 0;
    for (std::uint64_t x : blocks) acc = family.field.add(family.field.mul(acc, seed), x);
    return acc;
}

double leftover_hash_distance(double hmin_bits, double out_bits, double eps_smooth) {
    return eps_smooth + std::exp2(-0.5 * (hmin_bits - out_bits) - 1.0);
}

int max_key_length(const PaBudget& budget) {
    double h = budget.hmin_bound - budget.leak_ir;
    if (h <= 0) return 0;
    double slack = budget.eps_pa - budget.eps_smooth;
    if (slack <= 0) return 0;
    // analytic guess, then verify integers around it against the bound itself
    double guess = h + 2.0 * std::log2(slack) + 2.0;
    int l = static_cast<int>(std::floor(guess));
    l = std::min(l + 2, static_cast<int>(std::floor(h)));
    while (l > 0 &&
           leftover_hash_distance(h, static_cast<double>(l), budget.eps_smooth) > budget.eps_pa)
        --l;
    return std::max(l, 0);
}

} // namespace qkdlab
