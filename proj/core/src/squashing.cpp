#include "qkdlab/squashing.hpp"

#include <algorithm>
#include <cmath>

namespace qkdlab {

SquashProblem::SquashProblem(Povm target_povm, Povm full_povm)
    : target(std::move(target_povm)), full(std::move(full_povm)) {
    if (target.outcomes() != full.outcomes())
        throw std::invalid_argument("squash problem needs matching outcome counts");
}

// ---------------------------------------------------------------------------
// constraint slice
// ---------------------------------------------------------------------------

namespace {

// action of the reshuffled T on a target element:
// (T^R vec(FQ))(j,k) = sum_{il} T[(j,i),(k,l)] FQ(i,l)
Mat apply_reshuffled(const Mat& t, const Mat& fq, int dq, int df) {
    Mat out(df, df);
    for (int j = 0; j < df; ++j)
        for (int k = 0; k < df; ++k) {
            Cplx acc = 0;
            for (int i = 0; i < dq; ++i)
                for (int l = 0; l < dq; ++l) acc += t(j * dq + i, k * dq + l) * fq(i, l);
            out(j, k) = acc;
        }
    return out;
}

double constraint_residual_of(const SquashProblem& p, const Mat& t) {
    double worst = 0.0;
    for (std::size_t i = 0; i < p.target.outcomes(); ++i) {
        Mat lhs = apply_reshuffled(t, p.target.elements[i], p.target_dim(), p.full_dim());
        worst = std::max(worst, max_abs(lhs - p.full.elements[i]));
    }
    return worst;
}

} // namespace

SquashSlice build_constraints(const SquashProblem& problem) {
    int dq = problem.target_dim();
    int df = problem.full_dim();
    int dim_t = dq * df;
    auto basis = hermitian_basis(dim_t);
    int params = static_cast<int>(basis.size());
    int rows_per_outcome = 2 * df * df;
    int rows = rows_per_outcome * static_cast<int>(problem.target.outcomes());

    Eigen::MatrixXd a(rows, params);
    Eigen::VectorXd b(rows);
    for (std::size_t out = 0; out < problem.target.outcomes(); ++out) {
        for (int p = 0; p < params; ++p) {
            Mat img = apply_reshuffled(basis[p], problem.target.elements[out], dq, df);
            for (int j = 0; j < df; ++j)
                for (int k = 0; k < df; ++k) {
                    int row = static_cast<int>(out) * rows_per_outcome + 2 * (j * df + k);
                    a(row, p) = img(j, k).real();
                    a(row + 1, p) = img(j, k).imag();
                }
        }
        const Mat& f = problem.full.elements[out];
        for (int j = 0; j < df; ++j)
            for (int k = 0; k < df; ++k) {
                int row = static_cast<int>(out) * rows_per_outcome + 2 * (j * df + k);
                b[row] = f(j, k).real();
                b[row + 1] = f(j, k).imag();
            }
    }

    // JacobiSVD: BDCSVD mis-solves some of these systems (residual ~1e-3 on
    // an exactly consistent BB84 cutoff-3 instance)
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::VectorXd x0 = svd.solve(b);

    SquashSlice slice;
    slice.particular = Mat::Zero(dim_t, dim_t);
    for (int p = 0; p < params; ++p) slice.particular += x0[p] * basis[p];
    slice.residual = constraint_residual_of(problem, slice.particular);
    slice.consistent = slice.residual <= 1e-10;

    double cutoff = 1e-10 * svd.singularValues().maxCoeff();
    for (int p = 0; p < params; ++p) {
        if (p < svd.singularValues().size() && svd.singularValues()[p] > cutoff) continue;
        Mat dir = Mat::Zero(dim_t, dim_t);
        for (int q = 0; q < params; ++q) dir += svd.matrixV()(q, p) * basis[q];
        slice.basis.push_back(dir);
    }
    return slice;
}

// ---------------------------------------------------------------------------
// feasibility by barrier Newton ascent of the least eigenvalue
// ---------------------------------------------------------------------------

namespace {

// maximize t s.t. T0 + sum x_j B_j - t I >= 0 via the log-det barrier
struct EigenvalueAscent {
    const Mat& t0;
    const std::vector<Mat>& dirs;
    int dim;

    Mat slice_point(const Eigen::VectorXd& x) const {
        Mat m = t0;
        for (int j = 0; j < x.size(); ++j) m += x[j] * dirs[j];
        return m;
    }

    // returns achieved lambda_min and the maximizing point
    std::pair<double, Eigen::VectorXd> run(const Eigen::VectorXd& x_init) const {
        int nd = static_cast<int>(dirs.size());
        Eigen::VectorXd x = x_init;
        double t = min_eigenvalue(slice_point(x)) - 1.0;

        for (double mu = 1.0; mu > 1e-11; mu *= 0.25) {
            for (int iter = 0; iter < 40; ++iter) {
                Mat s = slice_point(x) - t * Mat::Identity(dim, dim);
                Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(s));
                if (es.eigenvalues().minCoeff() <= 0) break;
                Mat sinv = es.eigenvectors() *
                           es.eigenvalues().cwiseInverse().asDiagonal().toDenseMatrix().cast<Cplx>() *
                           es.eigenvectors().adjoint();
                Mat sinv2 = sinv * sinv;

                Eigen::VectorXd grad(nd + 1);
                grad[0] = 1.0 - mu * sinv.trace().real();
                for (int j = 0; j < nd; ++j) grad[j + 1] = mu * (sinv * dirs[j]).trace().real();

                Eigen::MatrixXd hess(nd + 1, nd + 1);
                hess(0, 0) = -mu * sinv2.trace().real();
                std::vector<Mat> sinv_b(nd);
                for (int j = 0; j < nd; ++j) sinv_b[j] = sinv * dirs[j];
                for (int j = 0; j < nd; ++j) {
                    hess(0, j + 1) = hess(j + 1, 0) = mu * (sinv2 * dirs[j]).trace().real();
                    for (int k = j; k < nd; ++k) {
                        double v = -mu * (sinv_b[j] * sinv_b[k]).trace().real();
                        hess(j + 1, k + 1) = v;
                        hess(k + 1, j + 1) = v;
                    }
                }

                Eigen::VectorXd step = (-hess).ldlt().solve(grad);
                double decrement = grad.dot(step);
                if (!step.allFinite() || decrement < 0) break;

                // backtrack into the domain
                double scale = 1.0;
                for (int ls = 0; ls < 50; ++ls, scale *= 0.5) {
                    double t_new = t + scale * step[0];
                    Eigen::VectorXd x_new = x + scale * step.tail(nd);
                    Mat s_new = slice_point(x_new) - t_new * Mat::Identity(dim, dim);
                    if (min_eigenvalue(s_new) > 0) {
                        t = t_new;
                        x = x_new;
                        break;
                    }
                }
                if (decrement < 1e-16) break;
            }
        }
        double achieved = min_eigenvalue(slice_point(x));
        return {achieved, x};
    }
};

} // namespace

SquashCertificate check_feasibility(const SquashProblem& problem) {
    SquashSlice slice = build_constraints(problem);
    SquashCertificate cert;
    if (!slice.consistent) {
        cert.verdict = SquashVerdict::Infeasible;
        cert.witness = slice.particular;
        cert.constraint_residual = slice.residual;
        cert.min_eigenvalue = min_eigenvalue(slice.particular);
        cert.slice_max_min_eigenvalue = cert.min_eigenvalue;
        cert.note = "constraint system inconsistent";
        return cert;
    }

    int dim_t = problem.target_dim() * problem.full_dim();
    EigenvalueAscent ascent{slice.particular, slice.basis, dim_t};
    int nd = static_cast<int>(slice.basis.size());

    double best = -std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_x = Eigen::VectorXd::Zero(nd);
    CounterRng rng(0x50a5, 17);
    const int restarts = 20;
    for (int r = 0; r < restarts; ++r) {
        Eigen::VectorXd x0 = Eigen::VectorXd::Zero(nd);
        if (r > 0)
            for (int j = 0; j < nd; ++j) x0[j] = 0.5 * gaussian(rng);
        auto [val, x] = ascent.run(x0);
        if (val > best) {
            best = val;
            best_x = x;
        }
        if (best >= 1e-6) break; // comfortably feasible already
    }

    cert.witness = ascent.slice_point(best_x);
    cert.min_eigenvalue = min_eigenvalue(cert.witness); // fresh evaluation
    cert.constraint_residual = constraint_residual_of(problem, cert.witness);
    cert.slice_max_min_eigenvalue = best;

    if (cert.min_eigenvalue >= -1e-8 && cert.constraint_residual <= 1e-8)
        cert.verdict = SquashVerdict::Feasible;
    else if (best < -1e-6)
        cert.verdict = SquashVerdict::Infeasible;
    else
        cert.verdict = SquashVerdict::Undetermined;
    return cert;
}

// ---------------------------------------------------------------------------
// noise search
// ---------------------------------------------------------------------------

SquashProblem add_depolarizing_noise(const SquashProblem& problem, double lambda) {
    if (lambda < 0.0 || lambda > 1.0) throw std::invalid_argument("noise weight outside [0,1]");
    // Classical noise on the full measurement's outcome data. Mixing both
    // POVMs with the same stochastic map would leave any already-determined
    // squash unchanged, so only the full side is depolarized; the target
    // stays the ideal measurement.
    std::vector<Mat> tf;
    int dq = problem.target_dim(), df = problem.full_dim();
    for (std::size_t i = 0; i < problem.target.outcomes(); ++i) {
        double w = problem.target.elements[i].trace().real() / dq;
        tf.push_back((1.0 - lambda) * problem.full.elements[i] +
                     lambda * w * Mat::Identity(df, df));
    }
    return SquashProblem(problem.target, Povm(df, std::move(tf)));
}

NoiseSearchResult noise_to_feasibility(const SquashProblem& problem, double tolerance) {
    NoiseSearchResult res;
    auto at = [&](double lambda) { return check_feasibility(add_depolarizing_noise(problem, lambda)); };

    SquashCertificate base = at(0.0);
    if (base.verdict == SquashVerdict::Feasible) {
        res.feasible_without_noise = true;
        res.lambda_low = res.lambda_high = 0.0;
        res.cert_low = res.cert_high = base;
        return res;
    }
    SquashCertificate anchor = at(1.0);
    if (anchor.verdict != SquashVerdict::Feasible)
        throw SolverError("noise search: full mixing anchor failed to certify", 1.0);

    double lo = 0.0, hi = 1.0;
    SquashCertificate cert_lo = base, cert_hi = anchor;
    while (hi - lo > tolerance) {
        double mid = 0.5 * (lo + hi);
        SquashCertificate c = at(mid);
        if (c.verdict == SquashVerdict::Feasible) {
            hi = mid;
            cert_hi = c;
        } else {
            lo = mid;
            cert_lo = c;
        }
    }
    res.lambda_low = lo;
    res.lambda_high = hi;
    res.cert_low = cert_lo;
    res.cert_high = cert_hi;
    return res;
}

// ---------------------------------------------------------------------------
// multiphoton measurement construction
// ---------------------------------------------------------------------------

namespace {

// n photons, all in the single-photon mode alpha|H> + beta|V>; entry k of
// the result is the amplitude on |n-k photons in H, k in V>, so the n = 1
// block reproduces the (H, V) qubit ordering exactly
CVec all_photons_in_mode(int n, Cplx alpha, Cplx beta) {
    CVec v(n + 1);
    for (int k = 0; k <= n; ++k) {
        double binom = std::exp(0.5 * (std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                                       std::lgamma(n - k + 1.0)));
        v[k] = binom * std::pow(alpha, n - k) * std::pow(beta, k);
    }
    return v;
}

struct BasisSpec {
    Cplx alpha0, beta0; // bit-0 mode
    Cplx alpha1, beta1; // bit-1 mode
};

std::vector<BasisSpec> bases_for(MultiPhotonMeasurement kind) {
    const double s = 1.0 / std::sqrt(2.0);
    std::vector<BasisSpec> out = {
        {1, 0, 0, 1},        // Z
        {s, s, s, -s},       // X
    };
    if (kind == MultiPhotonMeasurement::SixStateActive)
        out.push_back({s, Cplx(0, s), s, Cplx(0, -s)}); // Y
    return out;
}

} // namespace

Povm target_qubit_povm(MultiPhotonMeasurement kind) {
    auto bases = bases_for(kind);
    double p_basis = 1.0 / static_cast<double>(bases.size());
    std::vector<Mat> els;
    for (const auto& b : bases) {
        CVec v0(2), v1(2);
        v0 << b.alpha0, b.beta0;
        v1 << b.alpha1, b.beta1;
        els.push_back(p_basis * (v0 * v0.adjoint()));
        els.push_back(p_basis * (v1 * v1.adjoint()));
    }
    return Povm(2, std::move(els));
}

Povm build_multiphoton_povm(MultiPhotonMeasurement kind, int cutoff) {
    if (cutoff < 1) throw std::invalid_argument("cutoff must be at least 1");
    auto bases = bases_for(kind);
    double p_basis = 1.0 / static_cast<double>(bases.size());

    int dim = 0;
    for (int n = 1; n <= cutoff; ++n) dim += n + 1;

    std::vector<Mat> els(2 * bases.size(), Mat::Zero(dim, dim));
    int offset = 0;
    for (int n = 1; n <= cutoff; ++n) {
        int sub = n + 1;
        for (std::size_t bi = 0; bi < bases.size(); ++bi) {
            CVec v0 = all_photons_in_mode(n, bases[bi].alpha0, bases[bi].beta0);
            CVec v1 = all_photons_in_mode(n, bases[bi].alpha1, bases[bi].beta1);
            Mat p0 = v0 * v0.adjoint();
            Mat p1 = v1 * v1.adjoint();
            Mat dbl = Mat::Identity(sub, sub) - p0 - p1; // both detectors click
            els[2 * bi].block(offset, offset, sub, sub) = p_basis * (p0 + 0.5 * dbl);
            els[2 * bi + 1].block(offset, offset, sub, sub) = p_basis * (p1 + 0.5 * dbl);
        }
        offset += sub;
    }
    return Povm(dim, std::move(els));
}

SquashProblem make_squash_preset(MultiPhotonMeasurement kind, int cutoff) {
    return SquashProblem(target_qubit_povm(kind), build_multiphoton_povm(kind, cutoff));
}

std::optional<SquashProblem> squash_preset_by_name(const std::string& name) {
    for (int cutoff = 1; cutoff <= 6; ++cutoff) {
        if (name == "bb84-active-cutoff" + std::to_string(cutoff))
            return make_squash_preset(MultiPhotonMeasurement::Bb84Active, cutoff);
        if (name == "sixstate-active-cutoff" + std::to_string(cutoff))
            return make_squash_preset(MultiPhotonMeasurement::SixStateActive, cutoff);
    }
    return std::nullopt;
}

ChannelRep squash_channel_from_witness(const Mat& t, int target_dim, int full_dim) {
    // T is the CJ matrix of the adjoint map (observables on Q -> observables
    // on F); the state map Lambda has CJ entries
    // Xi[(i,j),(l,k)] = T[(k,l),(j,i)] on (Q (x) F).
    int dq = target_dim, df = full_dim;
    Mat xi(dq * df, dq * df);
    for (int i = 0; i < dq; ++i)
        for (int j = 0; j < df; ++j)
            for (int l = 0; l < dq; ++l)
                for (int k = 0; k < df; ++k)
                    xi(i * df + j, l * df + k) = t(k * dq + l, j * dq + i);
    xi = hermitize(xi);
    // witnesses sit on the PSD boundary up to the certificate tolerance;
    // clip and restore trace preservation exactly before validation
    Eigen::SelfAdjointEigenSolver<Mat> es(xi);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    xi = es.eigenvectors() * ev.asDiagonal().toDenseMatrix().cast<Cplx>() *
         es.eigenvectors().adjoint();
    Mat r = partial_trace(xi, {dq, df}, {1});
    Eigen::SelfAdjointEigenSolver<Mat> res(hermitize(r));
    Eigen::VectorXd rev = res.eigenvalues();
    for (int i = 0; i < rev.size(); ++i) rev[i] = rev[i] > 1e-12 ? 1.0 / std::sqrt(rev[i]) : 0.0;
    Mat r_inv_sqrt =
        res.eigenvectors() * rev.asDiagonal().toDenseMatrix().cast<Cplx>() * res.eigenvectors().adjoint();
    Mat sandwich = kron(Mat::Identity(dq, dq), r_inv_sqrt);
    xi = hermitize(sandwich * xi * sandwich);
    return ChannelRep::from_cj(xi, df, dq);
}

} // namespace qkdlab
