#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qkdlab/rng.hpp"

namespace qkdlab {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

namespace tol {
constexpr double hermitian = 1e-10;
constexpr double psd = 1e-10;
constexpr double trace_one = 1e-10;
constexpr double povm_complete = 1e-9;
constexpr double kraus_complete = 1e-9;
constexpr double norm_one = 1e-12;
constexpr double kraus_keep = 1e-12;
constexpr double pinv_cut = 1e-12;
} // namespace tol

/// Raised when a matrix fails to describe a valid quantum channel.
struct InvalidChannelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when a numerical search exhausts its iteration budget. Carries the
/// best certified bound found so far.
struct SolverError : std::runtime_error {
    SolverError(const std::string& what, double bound)
        : std::runtime_error(what), best_bound(bound) {}
    double best_bound;
};

// ---------------------------------------------------------------------------
// basic linear algebra helpers
// ---------------------------------------------------------------------------

inline Mat hermitize(const Mat& m) { return 0.5 * (m + m.adjoint()); }

double max_abs(const Mat& m);
double min_eigenvalue(const Mat& hermitian_m);

/// Orthonormal basis of d x d Hermitian matrices under <A,B> = Tr(AB).
std::vector<Mat> hermitian_basis(int dim);

/// Spectral square root of a PSD matrix; eigenvalues in [-1e-10, 0) are
/// clipped to zero, anything more negative is an error.
Mat sqrt_psd(const Mat& m);

/// Moore-Penrose pseudo-inverse with singular values below 1e-12 zeroed.
Mat pseudo_inverse(const Mat& m);

double trace_norm(const Mat& m);
double operator_norm(const Mat& m);

// ---------------------------------------------------------------------------
// domain types
// ---------------------------------------------------------------------------

/// Possibly subnormalized quantum state: Hermitian, PSD, 0 < trace <= 1.
struct DensityOperator {
    Mat matrix;
    std::vector<int> subsystem_dims;

    DensityOperator() = default;
    DensityOperator(Mat m, std::vector<int> dims);
    explicit DensityOperator(Mat m);

    int dim() const { return static_cast<int>(matrix.rows()); }
    double trace() const { return matrix.trace().real(); }

    /// Throws std::invalid_argument on any violated invariant.
    void validate() const;
};

/// Normalized state vector.
struct PureState {
    CVec vector;
    std::vector<int> subsystem_dims;

    PureState() = default;
    PureState(CVec v, std::vector<int> dims);
    explicit PureState(CVec v);

    int dim() const { return static_cast<int>(vector.size()); }
    DensityOperator to_density() const;
    void validate() const;
};

/// General quantum measurement: PSD elements summing to the identity.
struct Povm {
    int dim = 0;
    std::vector<Mat> elements;

    Povm() = default;
    Povm(int d, std::vector<Mat> els);

    std::size_t outcomes() const { return elements.size(); }
    void validate() const;
};

/// CPTP map in one of three interconvertible representations.
///
/// Conventions: operators vectorize row-major, vec(L)[j*d_in+i] = L(j,i),
/// i.e. |L>> = (L (x) 1)|Omega> with |Omega> = sum_i |ii> unnormalized. The
/// CJ matrix is Xi = sum_i |A_i>><<A_i| acting on out (x) in, so
/// Tr_out(Xi) = 1_in holds exactly for trace-preserving maps.
struct ChannelRep {
    enum class Kind { Kraus, CJ, Normal };

    Kind kind = Kind::Kraus;
    int in_dim = 0;
    int out_dim = 0;
    std::vector<Mat> kraus; // Kind::Kraus
    Mat matrix;             // Kind::CJ (d_out*d_in square) or Kind::Normal (d_out^2 x d_in^2)

    static ChannelRep from_kraus(std::vector<Mat> ops);
    static ChannelRep from_cj(Mat xi, int in_dim, int out_dim);
    static ChannelRep from_normal(Mat xi_r, int in_dim, int out_dim);

    void validate() const;
};

// ---------------------------------------------------------------------------
// operations
// ---------------------------------------------------------------------------

DensityOperator tensor_product(const DensityOperator& a, const DensityOperator& b);
Mat kron(const Mat& a, const Mat& b);

/// Trace out every subsystem not listed in `keep`; the kept factors stay in
/// their original order.
DensityOperator partial_trace(const DensityOperator& rho, const std::vector<int>& keep);

/// Partial trace of a bare matrix over the factors not in `keep`.
Mat partial_trace(const Mat& m, const std::vector<int>& dims, const std::vector<int>& keep);

/// Reorder tensor factors: new factor k is old factor perm[k].
DensityOperator permute_subsystems(const DensityOperator& rho, const std::vector<int>& perm);

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma);

/// Generalized fidelity ||sqrt(rho) sqrt(sigma)||_1 + sqrt((1-Tr rho)(1-Tr sigma)).
double fidelity(const DensityOperator& rho, const DensityOperator& sigma);

double purified_distance(const DensityOperator& rho, const DensityOperator& sigma);

/// Purification sum_i sqrt(lambda_i) |v_i>|e_i> on dim^2 with factors [d, d].
PureState purify(const DensityOperator& rho);

CVec vec_operator(const Mat& l);
Mat unvec_operator(const CVec& v, int out_dim, int in_dim);

ChannelRep kraus_to_cj(const ChannelRep& ch);
ChannelRep cj_to_kraus(const ChannelRep& ch);
ChannelRep to_normal(const ChannelRep& ch);
ChannelRep normal_to_cj(const ChannelRep& ch);

DensityOperator apply_channel(const ChannelRep& ch, const DensityOperator& rho);

/// Outcome probabilities Tr(F_i rho).
std::vector<double> measure(const Povm& povm, const DensityOperator& rho);

// ---------------------------------------------------------------------------
// stock states, measurements and channels
// ---------------------------------------------------------------------------

Mat pauli_x();
Mat pauli_y();
Mat pauli_z();

PureState basis_state(int dim, int index);
DensityOperator maximally_mixed(int dim);

ChannelRep identity_channel(int dim);
ChannelRep unitary_channel(const Mat& u);
/// rho -> p rho + (1-p) 1/d.
ChannelRep depolarizing_channel(double p, int dim);

Povm basis_povm(const std::vector<CVec>& basis);

// ---------------------------------------------------------------------------
// random objects for property tests and restarts (all CounterRng-driven)
// ---------------------------------------------------------------------------

double gaussian(CounterRng& rng);
CVec random_pure_vector(CounterRng& rng, int dim);
DensityOperator random_density(CounterRng& rng, int dim, int rank = 0);
DensityOperator random_density(CounterRng& rng, const std::vector<int>& dims);
Mat random_unitary(CounterRng& rng, int dim);
ChannelRep random_channel(CounterRng& rng, int in_dim, int out_dim, int n_kraus);

} // namespace qkdlab
