#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qkdlab/bits.hpp"

namespace qkdlab {

/// Regular column-weight-3 LDPC code with belief-propagation syndrome
/// decoding, used for direct reconciliation.
class LdpcCode {
public:
    /// Deterministic pseudo-random construction: every column carries 3
    /// check bits, row loads kept balanced.
    LdpcCode(int n_bits, int n_checks, std::uint64_t seed);

    int n() const { return n_; }
    int checks() const { return m_; }

    std::vector<std::uint8_t> syndrome(const BitString& key) const;

    /// Sum-product decoding of the error pattern e with H e = target
    /// relative syndrome; returns the pattern on convergence.
    std::optional<BitString> decode_error_pattern(const std::vector<std::uint8_t>& rel_syndrome,
                                                  double crossover, int max_iterations) const;

private:
    int n_ = 0;
    int m_ = 0;
    std::vector<std::vector<int>> check_vars_;  // per check: variable indices
    std::vector<std::vector<int>> var_checks_;  // per variable: check indices
};

} // namespace qkdlab
