#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qkdlab/postprocess.hpp"
#include "qkdlab/quantum.hpp"
#include "qkdlab/report.hpp"

namespace qkdlab {

/// Measurement overlap c = max_{x,z} ||sqrt(F_x) sqrt(G_z)||_inf^2.
struct OverlapC {
    double c = 1.0;

    OverlapC() = default;
    explicit OverlapC(double value);
    static OverlapC from_povms(const Povm& f, const Povm& g);
};

/// Devetak-Winter rate r >= H(K_A|E) - H(K_A|K_B); raw value, may be
/// negative (reports clamp it with a flag).
double dw_rate(double h_key_given_eve, double h_key_given_bob);

/// BB84 specialization r = 1 - h(q_x) - h(q_z) (uncertainty relation with
/// c = 1/2 in the asymptotic limit).
double bb84_asymptotic_rate(double q_x, double q_z);

/// Finite-key min-entropy bound n log2(1/c) - hmax_bound.
double uncertainty_hmin_bound(double n, const OverlapC& c, double hmax_bound);

/// r >= 1 - min_i h(q_Gi) - h(q_F).
double lm05_rate(double q_g0, double q_g1, double q_f);

/// r >= 2 - h4(q_G) - h4(q_F).
double sdc_rate(const std::array<double, 4>& q_g, const std::array<double, 4>& q_f);

struct EpsBudget {
    double eps_pa = 0x1p-21;
    double eps_smooth = 0.0;
};

/// Key length from the uncertainty bound, the leak chain rule and leftover
/// hashing; clamped at zero (with the report flag) and zero on PE abort.
RateReport finite_key_length(const PeOutcome& pe, const OverlapC& c, double leak_ir,
                             const EpsBudget& eps);

/// Post-selection correction: eps' = eps (n+1)^(d^2-1), and
/// 2 (d^2 - 1) log2(n+1) bits removed in privacy amplification.
std::pair<double, double> post_selection_adjust(double eps, std::uint64_t n, int d_q);

/// q*(a,b|x,y) <= 3/2 - I/4 for non-signalling boxes at CHSH value I,
/// clamped into [0, 1]; requires I in [-4, 4].
double chsh_guess_bound(double chsh_value);

// ---------------------------------------------------------------------------
// decoy-state bounds
// ---------------------------------------------------------------------------

struct DecoyData {
    std::vector<double> intensities;        // mu_i, distinct, >= 0
    std::vector<double> gains;              // Q_i in [0, 1]
    std::vector<double> error_gains;        // optional: E_i * Q_i in [0, 1]
    int cutoff = 8;                         // photon-number truncation

    void validate() const;
};

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
    double width() const { return hi - lo; }
};

struct DecoyResult {
    bool feasible = false;
    std::string diagnosis;
    std::vector<Interval> yields;           // Y_0 .. Y_cutoff
    Interval y1;                            // single-photon yield
    std::optional<Interval> e1;             // single-photon error rate
};

/// Linear-programming bounds on the single-photon yield (and error rate)
/// consistent with all observed intensities; solved by exhaustive vertex
/// enumeration, certificates re-checked against every constraint.
DecoyResult decoy_bounds(const DecoyData& data);

} // namespace qkdlab
