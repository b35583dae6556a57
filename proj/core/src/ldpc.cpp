#include "qkdlab/ldpc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qkdlab/rng.hpp"

namespace qkdlab {

LdpcCode::LdpcCode(int n_bits, int n_checks, std::uint64_t seed) : n_(n_bits), m_(n_checks) {
    if (n_ < 4 || m_ < 1 || m_ >= n_)
        throw std::invalid_argument("LDPC needs 1 <= checks < bits");
    check_vars_.resize(m_);
    var_checks_.resize(n_);
    CounterRng rng(seed, 0x1d9c);

    std::vector<int> load(m_, 0);
    // introduces_4cycle: candidate check shares a second variable with one
    // of v's existing checks
    auto introduces_4cycle = [&](int v, int cand) {
        for (int w : check_vars_[cand]) {
            for (int c2 : var_checks_[v])
                if (std::find(check_vars_[c2].begin(), check_vars_[c2].end(), w) !=
                    check_vars_[c2].end())
                    return true;
        }
        return false;
    };
    int column_weight = std::min(3, m_);
    for (int v = 0; v < n_; ++v) {
        for (int edge = 0; edge < column_weight; ++edge) {
            int best = -1;
            for (int attempt = 0; attempt < 24 && best < 0; ++attempt) {
                int cand = static_cast<int>(rng.next_below(m_));
                if (std::find(var_checks_[v].begin(), var_checks_[v].end(), cand) !=
                    var_checks_[v].end())
                    continue;
                if (attempt < 16 && introduces_4cycle(v, cand)) continue;
                if (attempt < 8 && load[cand] > 3 * n_ / m_ + 1) continue;
                best = cand;
            }
            if (best < 0) { // fall back: least-loaded fresh check
                for (int cand = 0; cand < m_; ++cand)
                    if (std::find(var_checks_[v].begin(), var_checks_[v].end(), cand) ==
                        var_checks_[v].end() &&
                        (best < 0 || load[cand] < load[best]))
                        best = cand;
            }
            var_checks_[v].push_back(best);
            check_vars_[best].push_back(v);
            ++load[best];
        }
    }
}

std::vector<std::uint8_t> LdpcCode::syndrome(const BitString& key) const {
    if (static_cast<int>(key.size()) != n_)
        throw std::invalid_argument("syndrome: key length mismatch");
    std::vector<std::uint8_t> s(m_, 0);
    for (int c = 0; c < m_; ++c) {
        std::uint8_t acc = 0;
        for (int v : check_vars_[c]) acc ^= key[v];
        s[c] = acc;
    }
    return s;
}

std::optional<BitString> LdpcCode::decode_error_pattern(
    const std::vector<std::uint8_t>& rel_syndrome, double crossover, int max_iterations) const {
    if (static_cast<int>(rel_syndrome.size()) != m_)
        throw std::invalid_argument("decode: syndrome length mismatch");
    crossover = std::clamp(crossover, 1e-6, 0.5 - 1e-6);
    const double prior = std::log((1.0 - crossover) / crossover);
    const double clamp_llr = 30.0;

    // messages indexed by (check, position within check)
    std::vector<std::vector<double>> var_to_check(m_), check_to_var(m_);
    for (int c = 0; c < m_; ++c) {
        var_to_check[c].assign(check_vars_[c].size(), prior);
        check_to_var[c].assign(check_vars_[c].size(), 0.0);
    }
    // per-variable location of its edges in the check-major arrays
    std::vector<std::vector<std::pair<int, int>>> var_edges(n_);
    for (int c = 0; c < m_; ++c)
        for (std::size_t j = 0; j < check_vars_[c].size(); ++j)
            var_edges[check_vars_[c][j]].push_back({c, static_cast<int>(j)});

    BitString estimate(n_, 0);
    std::vector<double> posterior(n_, 0.0);

    for (int iter = 0; iter < max_iterations; ++iter) {
        // check update with forward/backward tanh products
        for (int c = 0; c < m_; ++c) {
            std::size_t deg = check_vars_[c].size();
            if (deg == 0) continue;
            std::vector<double> fwd(deg), bwd(deg);
            auto t = [&](double x) { return std::tanh(0.5 * std::clamp(x, -clamp_llr, clamp_llr)); };
            fwd[0] = t(var_to_check[c][0]);
            for (std::size_t j = 1; j < deg; ++j) fwd[j] = fwd[j - 1] * t(var_to_check[c][j]);
            bwd[deg - 1] = t(var_to_check[c][deg - 1]);
            for (std::size_t j = deg - 1; j-- > 0;) bwd[j] = bwd[j + 1] * t(var_to_check[c][j]);
            double sign = rel_syndrome[c] ? -1.0 : 1.0;
            for (std::size_t j = 0; j < deg; ++j) {
                double prod = 1.0;
                if (j > 0) prod *= fwd[j - 1];
                if (j + 1 < deg) prod *= bwd[j + 1];
                prod = std::clamp(prod, -0.999999999999, 0.999999999999);
                check_to_var[c][j] = sign * 2.0 * std::atanh(prod);
            }
        }
        // variable update and hard decision
        for (int v = 0; v < n_; ++v) {
            double total = prior;
            for (auto [c, j] : var_edges[v]) total += check_to_var[c][j];
            posterior[v] = total;
            estimate[v] = total < 0.0 ? 1 : 0;
            for (auto [c, j] : var_edges[v])
                var_to_check[c][j] =
                    std::clamp(total - check_to_var[c][j], -clamp_llr, clamp_llr);
        }
        // early exit when the syndrome matches
        bool ok = true;
        for (int c = 0; c < m_ && ok; ++c) {
            std::uint8_t acc = 0;
            for (int v : check_vars_[c]) acc ^= estimate[v];
            ok = acc == rel_syndrome[c];
        }
        if (ok) return estimate;
    }
    return std::nullopt;
}

} // namespace qkdlab
