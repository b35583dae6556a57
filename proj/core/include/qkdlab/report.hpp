#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace qkdlab {

/// Security-analysis output: inputs, entropy bounds, leak terms, epsilon
/// budget and the final key length or rate. Rates and lengths are clamped
/// at zero with no_positive_rate set instead of going negative.
struct RateReport {
    std::string protocol;
    std::map<std::string, double> inputs;

    double hmin = 0.0;
    double hmax = 0.0;
    double leak = 0.0;

    double eps_pe = 0.0;
    double eps_cor = 0.0;
    double eps_pa = 0.0;
    double eps_total = 0.0;

    bool has_rate = false;
    double rate = 0.0;
    bool has_length = false;
    std::int64_t length = 0;
    bool no_positive_rate = false;

    bool aborted = false;
    std::string abort_stage;

    /// Reproducibility trail: hash seeds, reduction polynomials, code seeds.
    std::map<std::string, std::string> metadata;
};

} // namespace qkdlab
