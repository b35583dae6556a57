#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qkdlab/quantum.hpp"

namespace qkdlab {

/// Classical probability vector, possibly subnormalized.
struct Distribution {
    std::vector<double> probs;

    Distribution() = default;
    explicit Distribution(std::vector<double> p);
    void validate() const;
    double total() const;
};

/// Classical-quantum ensemble {(p_i, rho_i)}.
struct CqEnsemble {
    std::vector<std::pair<double, DensityOperator>> entries;

    CqEnsemble() = default;
    explicit CqEnsemble(std::vector<std::pair<double, DensityOperator>> e);
    void validate() const;
    int state_dim() const;

    /// sum_i p_i |i><i| (x) rho_i on dim(X) * dim(B).
    DensityOperator to_cq_state() const;
};

/// Entropy value in bits plus an optional re-checkable witness.
struct EntropyResult {
    double value = 0.0;
    std::optional<Mat> sigma_witness;      // conditioning operator for Hmin/Hmax
    std::optional<Povm> measurement;       // optimal guessing measurement
    double witness_min_eigenvalue = 0.0;   // of 1 (x) sigma - rho, re-checked
};

// all entropies in bits (log base 2)

double shannon(const Distribution& d);
double binary_entropy(double p);

double von_neumann(const DensityOperator& rho);
/// H(A|B) = H(AB) - H(B); conditioning system is the given factor index.
double conditional_vn(const DensityOperator& rho_ab, int condition_on = 1);
double mutual_information(const DensityOperator& rho_ab);
double holevo(const CqEnsemble& ens);

double hmin_classical(const Distribution& d);
double hmax_classical_support(const Distribution& d);

/// Binary-hypothesis min-entropy via the closed-form optimal guessing
/// probability p_guess = 1/2 + 1/2 ||p0 rho0 - p1 rho1||_1.
EntropyResult hmin_cq_binary(const CqEnsemble& ens);

/// Conditional min-entropy H_min(A|B) of a bipartite state by a certified
/// numerical search: minimize Tr(sigma) subject to 1_A (x) sigma >= rho_AB.
/// The returned witness sigma is re-verified feasible. Desk-scale search:
/// intended for conditioning dimensions up to ~4 (8 through purifications).
EntropyResult hmin_quantum(const DensityOperator& rho_ab);

/// Conditional max-entropy via duality: purify and evaluate -H_min(A|C).
EntropyResult hmax_quantum(const DensityOperator& rho_ab);

} // namespace qkdlab
