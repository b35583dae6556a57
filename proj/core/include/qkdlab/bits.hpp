#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qkdlab/rng.hpp"

namespace qkdlab {

/// Bit string stored one bit per byte, big-endian when viewed as an integer
/// (bit 0 is the most significant).
using BitString = std::vector<std::uint8_t>;

inline BitString random_bits(CounterRng& rng, std::size_t n) {
    BitString b(n);
    for (auto& x : b) x = static_cast<std::uint8_t>(rng.next_bit());
    return b;
}

inline BitString xor_bits(const BitString& a, const BitString& b) {
    if (a.size() != b.size()) throw std::invalid_argument("bit strings differ in length");
    BitString out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] ^ b[i];
    return out;
}

inline std::size_t hamming_weight(const BitString& a) {
    std::size_t w = 0;
    for (auto x : a) w += x;
    return w;
}

inline std::size_t hamming_distance(const BitString& a, const BitString& b) {
    return hamming_weight(xor_bits(a, b));
}

/// Big-endian integer value of the first min(n,64) bits.
inline std::uint64_t bits_to_u64(const BitString& a) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < a.size() && i < 64; ++i) v = (v << 1) | (a[i] & 1);
    return v;
}

inline BitString u64_to_bits(std::uint64_t v, std::size_t n) {
    BitString b(n);
    for (std::size_t i = 0; i < n; ++i) b[n - 1 - i] = static_cast<std::uint8_t>((v >> i) & 1);
    return b;
}

inline std::string bits_to_hex(const BitString& a) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve((a.size() + 3) / 4);
    std::size_t pad = (4 - a.size() % 4) % 4;
    unsigned nib = 0, filled = pad;
    for (auto bit : a) {
        nib = (nib << 1) | (bit & 1);
        if (++filled == 4) {
            out.push_back(digits[nib]);
            nib = 0;
            filled = 0;
        }
    }
    return out;
}

} // namespace qkdlab
