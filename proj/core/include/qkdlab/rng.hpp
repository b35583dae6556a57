#pragma once

#include <cstdint>
#include <limits>

namespace qkdlab {

/// Counter-based deterministic generator. Every draw is a pure function of
/// (seed, stream, counter), so independent substreams can be split off for
/// parallel work and still reproduce bit-for-bit regardless of schedule.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream) {}

    /// Substream generator for e.g. one protocol round; draws are
    /// independent of any other substream derived from the same seed.
    CounterRng substream(std::uint64_t index) const {
        return CounterRng(seed_, mix(stream_ + 0x9e3779b97f4a7c15ull, index));
    }

    std::uint64_t next_u64() { return mix(mix(seed_, stream_), counter_++); }

    /// Uniform in [0,1) with 53 bits of precision.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return next_double() < p; }

    /// Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) {
        // multiply-shift reduction; bias is < 2^-64 and irrelevant here
        unsigned __int128 wide = static_cast<unsigned __int128>(next_u64()) * n;
        return static_cast<std::uint64_t>(wide >> 64);
    }

    int next_bit() { return static_cast<int>(next_u64() >> 63); }

    std::uint64_t seed() const { return seed_; }

private:
    static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
        // splitmix64 finalizer over a simple combine
        std::uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
};

} // namespace qkdlab
