#include "qkdlab/optics.hpp"

#include <cmath>

namespace qkdlab {

namespace {

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

double binomial(int n, int k) {
    return std::exp(log_factorial(n) - log_factorial(k) - log_factorial(n - k));
}

} // namespace

CVec coherent_amplitudes(Cplx alpha, int cutoff) {
    if (cutoff < 0) throw std::invalid_argument("cutoff must be non-negative");
    CVec c(cutoff + 1);
    double damp = std::exp(-0.5 * std::norm(alpha));
    Cplx power = 1.0;
    for (int n = 0; n <= cutoff; ++n) {
        c[n] = damp * power / std::sqrt(std::exp(log_factorial(n)));
        power *= alpha;
    }
    return c;
}

Distribution photon_number_dist(Cplx alpha, int cutoff) {
    CVec c = coherent_amplitudes(alpha, cutoff);
    std::vector<double> p(cutoff + 1);
    for (int n = 0; n <= cutoff; ++n) p[n] = std::norm(c[n]);
    return Distribution(p);
}

TwoModeState::TwoModeState(int cut, CVec a) : cutoff(cut), amps(std::move(a)) {
    if (amps.size() != (cutoff + 1) * (cutoff + 1))
        throw std::invalid_argument("two-mode amplitude vector has wrong size");
}

TwoModeState TwoModeState::product(const CVec& mode1, const CVec& mode2) {
    if (mode1.size() != mode2.size())
        throw std::invalid_argument("modes must share a cutoff");
    int cut = static_cast<int>(mode1.size()) - 1;
    CVec a((cut + 1) * (cut + 1));
    for (int n = 0; n <= cut; ++n)
        for (int m = 0; m <= cut; ++m) a[n * (cut + 1) + m] = mode1[n] * mode2[m];
    return TwoModeState(cut, std::move(a));
}

TwoModeState beamsplitter_transform(Cplx t, Cplx r, const TwoModeState& in) {
    if (std::abs(std::norm(t) + std::norm(r) - 1.0) > 1e-10)
        throw std::invalid_argument("beamsplitter needs |R|^2 + |T|^2 = 1");
    if (std::abs(r * std::conj(t) + t * std::conj(r)) > 1e-10)
        throw std::invalid_argument("beamsplitter needs RT* + TR* = 0");

    int cut = in.cutoff;
    CVec out = CVec::Zero(in.amps.size());
    for (int n = 0; n <= cut; ++n)
        for (int m = 0; m <= cut; ++m) {
            Cplx amp = in.amps[in.index(n, m)];
            if (amp == Cplx(0, 0)) continue;
            // (T a3 + R a4)^n (R a3 + T a4)^m expanded over output occupations
            for (int k = 0; k <= n; ++k)
                for (int j = 0; j <= m; ++j) {
                    int n_out = k + j;
                    int m_out = n + m - k - j;
                    if (n_out > cut || m_out > cut) continue;
                    Cplx coeff = binomial(n, k) * std::pow(t, k) * std::pow(r, n - k) *
                                 binomial(m, j) * std::pow(r, j) * std::pow(t, m - j);
                    double weight = std::exp(
                        0.5 * (log_factorial(n_out) + log_factorial(m_out) -
                               log_factorial(n) - log_factorial(m)));
                    out[in.index(n_out, m_out)] += amp * coeff * weight;
                }
        }
    return TwoModeState(cut, std::move(out));
}

Povm mz_interferometer_povm() {
    CVec plus(2), minus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    minus << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
    Mat d0 = 0.5 * (plus * plus.adjoint());
    Mat d1 = 0.5 * (minus * minus.adjoint());
    Mat outer = Mat::Identity(2, 2) - d0 - d1;
    return Povm(2, {d0, d1, outer});
}

} // namespace qkdlab
