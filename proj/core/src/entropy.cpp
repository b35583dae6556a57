#include "qkdlab/entropy.hpp"

#include <algorithm>
#include <cmath>

namespace qkdlab {

namespace {

constexpr double kEigenvalueFloor = 1e-14; // dropped from log sums
constexpr double kLog2 = 0.6931471805599453;

double xlog2x(double x) { return x > kEigenvalueFloor ? x * std::log2(x) : 0.0; }

} // namespace

// ---------------------------------------------------------------------------
// types
// ---------------------------------------------------------------------------

Distribution::Distribution(std::vector<double> p) : probs(std::move(p)) { validate(); }

void Distribution::validate() const {
    double sum = 0.0;
    for (double p : probs) {
        if (p < 0.0) throw std::invalid_argument("negative probability");
        sum += p;
    }
    if (sum <= 0.0 || sum > 1.0 + 1e-12)
        throw std::invalid_argument("probabilities must sum into (0, 1]");
}

double Distribution::total() const {
    double sum = 0.0;
    for (double p : probs) sum += p;
    return sum;
}

CqEnsemble::CqEnsemble(std::vector<std::pair<double, DensityOperator>> e)
    : entries(std::move(e)) {
    validate();
}

void CqEnsemble::validate() const {
    if (entries.empty()) throw std::invalid_argument("empty ensemble");
    std::vector<double> probs;
    int d = entries.front().second.dim();
    for (const auto& [p, rho] : entries) {
        probs.push_back(p);
        if (rho.dim() != d) throw std::invalid_argument("ensemble states differ in dimension");
    }
    Distribution check(std::move(probs));
    (void)check;
}

int CqEnsemble::state_dim() const { return entries.front().second.dim(); }

DensityOperator CqEnsemble::to_cq_state() const {
    int dx = static_cast<int>(entries.size());
    int db = state_dim();
    Mat out = Mat::Zero(dx * db, dx * db);
    for (int i = 0; i < dx; ++i)
        out.block(i * db, i * db, db, db) = entries[i].first * entries[i].second.matrix;
    return DensityOperator(out, {dx, db});
}

// ---------------------------------------------------------------------------
// classical and von Neumann entropies
// ---------------------------------------------------------------------------

double shannon(const Distribution& d) {
    if (std::abs(d.total() - 1.0) > 1e-9)
        throw std::invalid_argument("shannon: distribution must be normalized within 1e-9");
    double h = 0.0;
    for (double p : d.probs) h -= xlog2x(p);
    return h;
}

double binary_entropy(double p) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("binary_entropy: p outside [0,1]");
    return -xlog2x(p) - xlog2x(1.0 - p);
}

double von_neumann(const DensityOperator& rho) {
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(rho.matrix), Eigen::EigenvaluesOnly);
    double h = 0.0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) h -= xlog2x(es.eigenvalues()[i]);
    return h;
}

double conditional_vn(const DensityOperator& rho_ab, int condition_on) {
    auto rho_b = partial_trace(rho_ab, {condition_on});
    return von_neumann(rho_ab) - von_neumann(rho_b);
}

double mutual_information(const DensityOperator& rho_ab) {
    if (rho_ab.subsystem_dims.size() != 2)
        throw std::invalid_argument("mutual_information expects a bipartite state");
    auto rho_a = partial_trace(rho_ab, {0});
    auto rho_b = partial_trace(rho_ab, {1});
    return von_neumann(rho_a) + von_neumann(rho_b) - von_neumann(rho_ab);
}

double holevo(const CqEnsemble& ens) {
    Mat avg = Mat::Zero(ens.state_dim(), ens.state_dim());
    double cond = 0.0;
    for (const auto& [p, rho] : ens.entries) {
        avg += p * rho.matrix;
        cond += p * von_neumann(rho);
    }
    return von_neumann(DensityOperator(hermitize(avg))) - cond;
}

double hmin_classical(const Distribution& d) {
    double pmax = *std::max_element(d.probs.begin(), d.probs.end());
    return -std::log2(pmax);
}

double hmax_classical_support(const Distribution& d) {
    int support = 0;
    for (double p : d.probs)
        if (p > 0.0) ++support;
    return std::log2(static_cast<double>(support));
}

// ---------------------------------------------------------------------------
// one-shot entropies
// ---------------------------------------------------------------------------

EntropyResult hmin_cq_binary(const CqEnsemble& ens) {
    if (ens.entries.size() != 2)
        throw std::invalid_argument("hmin_cq_binary expects exactly two hypotheses");
    const auto& [p0, rho0] = ens.entries[0];
    const auto& [p1, rho1] = ens.entries[1];
    Mat delta = p0 * rho0.matrix - p1 * rho1.matrix;
    double p_guess = 0.5 + 0.5 * trace_norm(delta);

    // optimal measurement projects on the positive/negative parts of delta
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(delta));
    int d = rho0.dim();
    Mat pos = Mat::Zero(d, d);
    for (int i = 0; i < d; ++i)
        if (es.eigenvalues()[i] > 0.0)
            pos += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();

    EntropyResult out;
    out.value = -std::log2(p_guess);
    out.measurement = Povm(d, {pos, Mat::Identity(d, d) - pos});
    return out;
}

namespace {

Mat lift_to_ab(const Mat& sigma_b, int da) { return kron(Mat::Identity(da, da), sigma_b); }

// Primal barrier method for: minimize Tr(sigma) s.t. 1_A (x) sigma >= rho.
// Newton iterations on the log-det barrier; the central-path duality gap is
// mu * d_A * d_B, which certifies the optimum.
struct HminSolver {
    const Mat& rho;
    int da, db;
    std::vector<Mat> basis;

    HminSolver(const Mat& rho_ab, int d_a, int d_b)
        : rho(rho_ab), da(d_a), db(d_b), basis(hermitian_basis(d_b)) {}

    Mat slack(const Mat& sigma) const { return lift_to_ab(sigma, da) - rho; }

    // One centering stage at fixed mu. Returns false if Newton failed to
    // reduce the residual within its budget.
    bool center(Mat& sigma, double mu) const {
        int m = static_cast<int>(basis.size());
        for (int iter = 0; iter < 60; ++iter) {
            Mat s = slack(sigma);
            Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(s));
            if (es.eigenvalues().minCoeff() <= 0.0) return false;
            Mat sinv = es.eigenvectors() *
                       es.eigenvalues().cwiseInverse().asDiagonal().toDenseMatrix().cast<Cplx>() *
                       es.eigenvectors().adjoint();
            Mat sinv_b = partial_trace(sinv, {da, db}, {1});

            Eigen::VectorXd grad(m);
            for (int k = 0; k < m; ++k)
                grad[k] = basis[k].trace().real() - mu * (sinv_b * basis[k]).trace().real();

            Eigen::MatrixXd hess(m, m);
            std::vector<Mat> sinv_ek(m);
            for (int k = 0; k < m; ++k) sinv_ek[k] = sinv * lift_to_ab(basis[k], da);
            for (int k = 0; k < m; ++k)
                for (int l = k; l < m; ++l) {
                    double v = mu * (sinv_ek[k] * sinv_ek[l]).trace().real();
                    hess(k, l) = v;
                    hess(l, k) = v;
                }

            Eigen::VectorXd step = hess.ldlt().solve(-grad);
            double lambda2 = -grad.dot(step); // Newton decrement squared
            if (!(lambda2 > 0) || !step.allFinite()) return false;
            if (lambda2 < 1e-18) return true;

            Mat dir = Mat::Zero(db, db);
            for (int k = 0; k < m; ++k) dir += step[k] * basis[k];

            // backtracking line search keeping the slack positive definite
            double t = 1.0;
            double f0 = objective(sigma, mu);
            for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
                Mat cand = sigma + t * dir;
                Mat sc = slack(cand);
                if (min_eigenvalue(sc) <= 0.0) continue;
                if (objective(cand, mu) < f0 - 1e-15) {
                    sigma = cand;
                    break;
                }
                if (ls == 59) return lambda2 < 1e-10;
            }
            if (lambda2 < 1e-14) return true;
        }
        return true; // residual small enough in practice; caller re-checks
    }

    double objective(const Mat& sigma, double mu) const {
        Mat s = slack(sigma);
        Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(s), Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() <= 0.0) return std::numeric_limits<double>::infinity();
        double logdet = 0.0;
        for (int i = 0; i < es.eigenvalues().size(); ++i) logdet += std::log(es.eigenvalues()[i]);
        return sigma.trace().real() - mu * logdet;
    }
};

} // namespace

EntropyResult hmin_quantum(const DensityOperator& rho_ab) {
    if (rho_ab.subsystem_dims.size() != 2)
        throw std::invalid_argument("hmin_quantum expects a bipartite state (set subsystem_dims)");
    int da = rho_ab.subsystem_dims[0];
    int db = rho_ab.subsystem_dims[1];

    HminSolver solver(rho_ab.matrix, da, db);

    // strictly feasible start
    double top = min_eigenvalue(-rho_ab.matrix); // -lambda_max
    Mat sigma = (std::abs(top) + 1.0) * Mat::Identity(db, db);
    double mu = std::max(1.0, sigma.trace().real());

    double best_trace = std::numeric_limits<double>::infinity();
    Mat best_sigma = sigma;
    const int max_stages = 200;
    int stage = 0;
    for (; stage < max_stages; ++stage) {
        if (!solver.center(sigma, mu)) break;
        double tr = sigma.trace().real();
        if (tr < best_trace && min_eigenvalue(solver.slack(sigma)) > -1e-12) {
            best_trace = tr;
            best_sigma = sigma;
        }
        double gap = mu * da * db; // exact on the central path
        if (gap <= 1e-10 * std::max(tr, 1e-6)) break;
        mu *= 0.2;
    }

    if (!std::isfinite(best_trace))
        throw SolverError("hmin_quantum: no feasible point found", 0.0);
    if (stage == max_stages)
        throw SolverError("hmin_quantum: iteration budget exhausted", -std::log2(best_trace));

    double residual = min_eigenvalue(solver.slack(best_sigma));
    if (residual < -1e-8)
        throw SolverError("hmin_quantum: certificate failed feasibility re-check",
                          -std::log2(best_trace));

    EntropyResult out;
    out.value = -std::log2(best_trace);
    out.sigma_witness = best_sigma;
    out.witness_min_eigenvalue = residual;
    return out;
}

EntropyResult hmax_quantum(const DensityOperator& rho_ab) {
    if (rho_ab.subsystem_dims.size() != 2)
        throw std::invalid_argument("hmax_quantum expects a bipartite state");
    int da = rho_ab.subsystem_dims[0];
    int db = rho_ab.subsystem_dims[1];
    int d = da * db;

    // compact purification: keep only eigenvectors with non-negligible weight
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(rho_ab.matrix));
    std::vector<int> kept;
    for (int i = 0; i < d; ++i)
        if (es.eigenvalues()[i] > kEigenvalueFloor) kept.push_back(i);
    int dc = static_cast<int>(kept.size());

    CVec psi = CVec::Zero(d * dc);
    for (int c = 0; c < dc; ++c) {
        double lam = es.eigenvalues()[kept[c]];
        for (int j = 0; j < d; ++j)
            psi[j * dc + c] += std::sqrt(lam) * es.eigenvectors()(j, kept[c]);
    }
    psi /= psi.norm();

    // group (A, B, C) and trace out B to get rho_AC
    DensityOperator pure(psi * psi.adjoint(), {da, db, dc});
    auto rho_ac_raw = partial_trace(pure, {0, 2});
    DensityOperator rho_ac(rho_ac_raw.matrix, {da, dc});

    EntropyResult inner = hmin_quantum(rho_ac);
    EntropyResult out;
    out.value = -inner.value;
    out.sigma_witness = inner.sigma_witness;
    out.witness_min_eigenvalue = inner.witness_min_eigenvalue;
    return out;
}

} // namespace qkdlab
