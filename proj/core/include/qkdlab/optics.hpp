#pragma once

#include <complex>

#include "qkdlab/entropy.hpp"
#include "qkdlab/quantum.hpp"

namespace qkdlab {

/// Fock amplitudes of |alpha> up to the cutoff (inclusive):
/// c_n = e^(-|alpha|^2/2) alpha^n / sqrt(n!).
CVec coherent_amplitudes(Cplx alpha, int cutoff);

/// Truncated Poisson photon-number distribution of a coherent state;
/// subnormalized by the truncated tail mass.
Distribution photon_number_dist(Cplx alpha, int cutoff);

/// Pure state of two bosonic modes truncated at `cutoff` photons per mode.
struct TwoModeState {
    int cutoff = 0;
    CVec amps; // index(n, m) = n * (cutoff+1) + m

    TwoModeState() = default;
    TwoModeState(int cut, CVec a);
    static TwoModeState product(const CVec& mode1, const CVec& mode2);

    int index(int n, int m) const { return n * (cutoff + 1) + m; }
    double norm_squared() const { return amps.squaredNorm(); }
    /// Probability mass lost to the per-mode truncation so far.
    double truncation_error() const { return 1.0 - norm_squared(); }
};

/// Beamsplitter a1 -> T a3 + R a4, a2 -> R a3 + T a4 on the truncated Fock
/// space; components pushed past the cutoff are dropped (and show up as
/// truncation error). Requires |R|^2+|T|^2 = 1 and RT* + TR* = 0.
TwoModeState beamsplitter_transform(Cplx t, Cplx r, const TwoModeState& in);

/// Unbalanced Mach-Zehnder measurement on the two-time-slot single-photon
/// space {|t>, |t+1>}: outcomes (D0 at slot t, D1 at slot t, outer slot).
Povm mz_interferometer_povm();

} // namespace qkdlab
