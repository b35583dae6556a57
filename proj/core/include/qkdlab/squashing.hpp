#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qkdlab/quantum.hpp"

namespace qkdlab {

/// Ask whether a full-space measurement (after classical post-processing)
/// is equivalent to a target measurement on a smaller space: does a CPTP
/// map exist whose adjoint carries every target element to its full-space
/// counterpart?
struct SquashProblem {
    Povm target; // {F_i^Q} on dim d_Q
    Povm full;   // {F_i} on dim d_F, same outcome indexing

    SquashProblem(Povm target_povm, Povm full_povm);
    int target_dim() const { return target.dim; }
    int full_dim() const { return full.dim; }
};

/// Affine description of all Hermitian T satisfying the linear constraints
/// T^R |F_i^Q>> = |F_i>>.
struct SquashSlice {
    bool consistent = false;
    double residual = 0.0;       // of the particular solution
    Mat particular;              // T0
    std::vector<Mat> basis;      // Hermitian nullspace directions
};

enum class SquashVerdict { Feasible, Infeasible, Undetermined };

struct SquashCertificate {
    SquashVerdict verdict = SquashVerdict::Undetermined;
    Mat witness;                  // best T found
    double min_eigenvalue = 0.0;  // of the witness, freshly recomputed
    double constraint_residual = 0.0;
    double slice_max_min_eigenvalue = 0.0; // best over restarts
    std::string note;
};

SquashSlice build_constraints(const SquashProblem& problem);

/// Maximize the least eigenvalue of T over the affine slice (barrier Newton
/// ascent, 20 random restarts) and certify the verdict by independent
/// eigenvalue and residual re-checks. Never returns a false feasible.
SquashCertificate check_feasibility(const SquashProblem& problem);

/// Mix both POVMs with outcome-weighted white noise of weight lambda.
SquashProblem add_depolarizing_noise(const SquashProblem& problem, double lambda);

struct NoiseSearchResult {
    double lambda_low = 0.0;   // certified infeasible (or 0 if feasible at 0)
    double lambda_high = 1.0;  // certified feasible
    SquashCertificate cert_low;
    SquashCertificate cert_high;
    bool feasible_without_noise = false;
};

/// Bisection for the least noise weight that restores feasibility;
/// bracket width 1e-3 with certified endpoints.
NoiseSearchResult noise_to_feasibility(const SquashProblem& problem, double tolerance = 1e-3);

/// Polarization measurement with threshold detectors on the direct sum of
/// 1..cutoff photon subspaces; double clicks get a uniformly random bit.
enum class MultiPhotonMeasurement { Bb84Active, SixStateActive };

Povm build_multiphoton_povm(MultiPhotonMeasurement kind, int cutoff);
Povm target_qubit_povm(MultiPhotonMeasurement kind);
SquashProblem make_squash_preset(MultiPhotonMeasurement kind, int cutoff);
std::optional<SquashProblem> squash_preset_by_name(const std::string& name);

/// State map of the squashing channel described by a slice matrix T:
/// Lambda : S(full) -> S(target) with Lambda^dagger(F_i^Q) = F_i.
ChannelRep squash_channel_from_witness(const Mat& t, int target_dim, int full_dim);

} // namespace qkdlab
