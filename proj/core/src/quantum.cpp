#include "qkdlab/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qkdlab {

// ---------------------------------------------------------------------------
// helpers
// ---------------------------------------------------------------------------

double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

double min_eigenvalue(const Mat& hermitian_m) {
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(hermitian_m));
    return es.eigenvalues().minCoeff();
}

std::vector<Mat> hermitian_basis(int dim) {
    std::vector<Mat> basis;
    for (int i = 0; i < dim; ++i) {
        Mat e = Mat::Zero(dim, dim);
        e(i, i) = 1.0;
        basis.push_back(e);
    }
    double s = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) {
            Mat re = Mat::Zero(dim, dim), im = Mat::Zero(dim, dim);
            re(i, j) = re(j, i) = s;
            im(i, j) = Cplx(0, -s);
            im(j, i) = Cplx(0, s);
            basis.push_back(re);
            basis.push_back(im);
        }
    return basis;
}

Mat sqrt_psd(const Mat& m) {
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(m));
    Eigen::VectorXd ev = es.eigenvalues();
    for (int i = 0; i < ev.size(); ++i) {
        if (ev[i] < -tol::psd)
            throw std::invalid_argument("sqrt_psd: matrix not PSD (min eigenvalue " +
                                        std::to_string(ev[i]) + ")");
        ev[i] = std::sqrt(std::max(0.0, ev[i]));
    }
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

Mat pseudo_inverse(const Mat& m) {
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::VectorXd sv = svd.singularValues();
    Eigen::VectorXd inv = sv;
    for (int i = 0; i < sv.size(); ++i)
        inv[i] = sv[i] > tol::pinv_cut ? 1.0 / sv[i] : 0.0;
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

double trace_norm(const Mat& m) {
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues().sum();
}

double operator_norm(const Mat& m) {
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues().maxCoeff();
}

static int product(const std::vector<int>& dims) {
    return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<int>());
}

// ---------------------------------------------------------------------------
// DensityOperator / PureState / Povm / ChannelRep
// ---------------------------------------------------------------------------

DensityOperator::DensityOperator(Mat m, std::vector<int> dims)
    : matrix(std::move(m)), subsystem_dims(std::move(dims)) {
    validate();
}

DensityOperator::DensityOperator(Mat m) : matrix(std::move(m)) {
    subsystem_dims = {static_cast<int>(matrix.rows())};
    validate();
}

void DensityOperator::validate() const {
    if (matrix.rows() != matrix.cols() || matrix.rows() == 0)
        throw std::invalid_argument("density operator must be square and non-empty");
    if (product(subsystem_dims) != dim())
        throw std::invalid_argument("subsystem_dims do not multiply to the matrix dimension");
    if (max_abs(matrix - matrix.adjoint()) > tol::hermitian)
        throw std::invalid_argument("density operator not Hermitian within 1e-10");
    if (min_eigenvalue(matrix) < -tol::psd)
        throw std::invalid_argument("density operator not PSD within 1e-10");
    double tr = trace();
    if (tr <= 0.0 || tr > 1.0 + tol::trace_one)
        throw std::invalid_argument("density operator trace outside (0, 1]");
}

PureState::PureState(CVec v, std::vector<int> dims)
    : vector(std::move(v)), subsystem_dims(std::move(dims)) {
    validate();
}

PureState::PureState(CVec v) : vector(std::move(v)) {
    subsystem_dims = {static_cast<int>(vector.size())};
    validate();
}

void PureState::validate() const {
    if (vector.size() == 0) throw std::invalid_argument("empty state vector");
    if (product(subsystem_dims) != dim())
        throw std::invalid_argument("subsystem_dims do not multiply to the vector dimension");
    if (std::abs(vector.norm() - 1.0) > tol::norm_one)
        throw std::invalid_argument("state vector not normalized within 1e-12");
}

DensityOperator PureState::to_density() const {
    return DensityOperator(vector * vector.adjoint(), subsystem_dims);
}

Povm::Povm(int d, std::vector<Mat> els) : dim(d), elements(std::move(els)) { validate(); }

void Povm::validate() const {
    if (elements.empty()) throw std::invalid_argument("POVM needs at least one element");
    Mat sum = Mat::Zero(dim, dim);
    for (const auto& f : elements) {
        if (f.rows() != dim || f.cols() != dim)
            throw std::invalid_argument("POVM element has wrong dimension");
        if (max_abs(f - f.adjoint()) > tol::hermitian)
            throw std::invalid_argument("POVM element not Hermitian");
        if (min_eigenvalue(f) < -tol::psd)
            throw std::invalid_argument("POVM element not PSD within tolerance");
        sum += f;
    }
    if (max_abs(sum - Mat::Identity(dim, dim)) > tol::povm_complete)
        throw std::invalid_argument("POVM elements do not sum to the identity within 1e-9");
}

ChannelRep ChannelRep::from_kraus(std::vector<Mat> ops) {
    ChannelRep ch;
    ch.kind = Kind::Kraus;
    if (ops.empty()) throw std::invalid_argument("channel needs at least one Kraus operator");
    ch.out_dim = static_cast<int>(ops.front().rows());
    ch.in_dim = static_cast<int>(ops.front().cols());
    ch.kraus = std::move(ops);
    ch.validate();
    return ch;
}

ChannelRep ChannelRep::from_cj(Mat xi, int in_dim, int out_dim) {
    ChannelRep ch;
    ch.kind = Kind::CJ;
    ch.in_dim = in_dim;
    ch.out_dim = out_dim;
    ch.matrix = std::move(xi);
    ch.validate();
    return ch;
}

ChannelRep ChannelRep::from_normal(Mat xi_r, int in_dim, int out_dim) {
    ChannelRep ch;
    ch.kind = Kind::Normal;
    ch.in_dim = in_dim;
    ch.out_dim = out_dim;
    ch.matrix = std::move(xi_r);
    ch.validate();
    return ch;
}

void ChannelRep::validate() const {
    if (in_dim <= 0 || out_dim <= 0) throw std::invalid_argument("channel dims must be positive");
    switch (kind) {
    case Kind::Kraus: {
        Mat sum = Mat::Zero(in_dim, in_dim);
        for (const auto& a : kraus) {
            if (a.rows() != out_dim || a.cols() != in_dim)
                throw std::invalid_argument("Kraus operator has inconsistent dimensions");
            sum += a.adjoint() * a;
        }
        if (max_abs(sum - Mat::Identity(in_dim, in_dim)) > tol::kraus_complete)
            throw InvalidChannelError("Kraus operators do not satisfy sum A^dag A = 1 within 1e-9");
        break;
    }
    case Kind::CJ: {
        int d = in_dim * out_dim;
        if (matrix.rows() != d || matrix.cols() != d)
            throw std::invalid_argument("CJ matrix has wrong dimension");
        if (min_eigenvalue(matrix) < -tol::psd)
            throw InvalidChannelError("CJ matrix not PSD within 1e-10");
        std::vector<int> dims = {out_dim, in_dim};
        Mat tr_out = partial_trace(matrix, dims, {1});
        if (max_abs(tr_out - Mat::Identity(in_dim, in_dim)) > tol::kraus_complete)
            throw InvalidChannelError("CJ matrix violates Tr_out(Xi) = 1_in within 1e-9");
        break;
    }
    case Kind::Normal: {
        if (matrix.rows() != out_dim * out_dim || matrix.cols() != in_dim * in_dim)
            throw std::invalid_argument("Normal matrix has wrong dimension");
        // the reshuffled matrix must be a valid CJ matrix
        Mat xi(out_dim * in_dim, out_dim * in_dim);
        for (int j = 0; j < out_dim; ++j)
            for (int k = 0; k < out_dim; ++k)
                for (int i = 0; i < in_dim; ++i)
                    for (int l = 0; l < in_dim; ++l)
                        xi(j * in_dim + i, k * in_dim + l) =
                            matrix(j * out_dim + k, i * in_dim + l);
        if (min_eigenvalue(xi) < -tol::psd)
            throw InvalidChannelError("Normal matrix reshuffles to a non-PSD CJ matrix");
        Mat tr_out = partial_trace(hermitize(xi), {out_dim, in_dim}, {1});
        if (max_abs(tr_out - Mat::Identity(in_dim, in_dim)) > tol::kraus_complete)
            throw InvalidChannelError("Normal matrix violates trace preservation");
        break;
    }
    }
}

// ---------------------------------------------------------------------------
// operations
// ---------------------------------------------------------------------------

Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

DensityOperator tensor_product(const DensityOperator& a, const DensityOperator& b) {
    std::vector<int> dims = a.subsystem_dims;
    dims.insert(dims.end(), b.subsystem_dims.begin(), b.subsystem_dims.end());
    return DensityOperator(kron(a.matrix, b.matrix), std::move(dims));
}

// Row/column multi-index helpers for tensor factors.
namespace {

std::vector<int> strides_of(const std::vector<int>& dims) {
    std::vector<int> s(dims.size());
    int acc = 1;
    for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
        s[k] = acc;
        acc *= dims[k];
    }
    return s;
}

} // namespace

Mat partial_trace(const Mat& m, const std::vector<int>& dims, const std::vector<int>& keep) {
    int n = static_cast<int>(dims.size());
    for (int k : keep)
        if (k < 0 || k >= n) throw std::invalid_argument("partial_trace: invalid subsystem index");
    for (std::size_t i = 1; i < keep.size(); ++i)
        if (keep[i] <= keep[i - 1])
            throw std::invalid_argument("partial_trace: keep set must be strictly increasing");

    std::vector<int> traced;
    for (int k = 0; k < n; ++k)
        if (std::find(keep.begin(), keep.end(), k) == keep.end()) traced.push_back(k);

    int d_keep = 1;
    for (int k : keep) d_keep *= dims[k];
    int d_traced = 1;
    for (int k : traced) d_traced *= dims[k];

    auto strides = strides_of(dims);
    auto expand = [&](int kept, int tr) {
        int full = 0;
        for (int k = static_cast<int>(keep.size()) - 1; k >= 0; --k) {
            full += (kept % dims[keep[k]]) * strides[keep[k]];
            kept /= dims[keep[k]];
        }
        for (int k = static_cast<int>(traced.size()) - 1; k >= 0; --k) {
            full += (tr % dims[traced[k]]) * strides[traced[k]];
            tr /= dims[traced[k]];
        }
        return full;
    };

    Mat out = Mat::Zero(d_keep, d_keep);
    for (int i = 0; i < d_keep; ++i)
        for (int j = 0; j < d_keep; ++j) {
            Cplx acc = 0;
            for (int t = 0; t < d_traced; ++t) acc += m(expand(i, t), expand(j, t));
            out(i, j) = acc;
        }
    return out;
}

DensityOperator partial_trace(const DensityOperator& rho, const std::vector<int>& keep) {
    if (rho.subsystem_dims.size() < 2)
        throw std::invalid_argument("partial_trace: state has no tensor factors to trace");
    Mat out = partial_trace(rho.matrix, rho.subsystem_dims, keep);
    std::vector<int> dims;
    for (int k : keep) dims.push_back(rho.subsystem_dims[k]);
    return DensityOperator(hermitize(out), std::move(dims));
}

DensityOperator permute_subsystems(const DensityOperator& rho, const std::vector<int>& perm) {
    const auto& dims = rho.subsystem_dims;
    int n = static_cast<int>(dims.size());
    if (static_cast<int>(perm.size()) != n)
        throw std::invalid_argument("permute_subsystems: permutation size mismatch");
    auto strides = strides_of(dims);
    std::vector<int> new_dims(n);
    for (int k = 0; k < n; ++k) new_dims[k] = dims[perm[k]];
    auto new_strides = strides_of(new_dims);

    int d = rho.dim();
    std::vector<int> map(d);
    for (int idx = 0; idx < d; ++idx) {
        // digits of idx in the new factor layout -> position in the old layout
        int old_idx = 0;
        for (int k = 0; k < n; ++k) {
            int digit = (idx / new_strides[k]) % new_dims[k];
            old_idx += digit * strides[perm[k]];
        }
        map[idx] = old_idx;
    }
    Mat out(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) out(i, j) = rho.matrix(map[i], map[j]);
    return DensityOperator(out, new_dims);
}

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
    return 0.5 * trace_norm(rho.matrix - sigma.matrix);
}

double fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
    double root = trace_norm(sqrt_psd(rho.matrix) * sqrt_psd(sigma.matrix));
    double a = std::max(0.0, 1.0 - rho.trace());
    double b = std::max(0.0, 1.0 - sigma.trace());
    return root + std::sqrt(a * b);
}

double purified_distance(const DensityOperator& rho, const DensityOperator& sigma) {
    double f = std::min(1.0, fidelity(rho, sigma));
    return std::sqrt(std::max(0.0, 1.0 - f * f));
}

PureState purify(const DensityOperator& rho) {
    int d = rho.dim();
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(rho.matrix));
    CVec psi = CVec::Zero(d * d);
    for (int i = 0; i < d; ++i) {
        double lam = std::max(0.0, es.eigenvalues()[i]);
        if (lam <= 0.0) continue;
        // sqrt(lam) |v_i> (x) |e_i>
        for (int j = 0; j < d; ++j) psi[j * d + i] += std::sqrt(lam) * es.eigenvectors()(j, i);
    }
    psi /= psi.norm();
    return PureState(psi, {d, d});
}

CVec vec_operator(const Mat& l) {
    CVec v(l.rows() * l.cols());
    for (int j = 0; j < l.rows(); ++j)
        for (int i = 0; i < l.cols(); ++i) v[j * l.cols() + i] = l(j, i);
    return v;
}

Mat unvec_operator(const CVec& v, int out_dim, int in_dim) {
    if (v.size() != out_dim * in_dim) throw std::invalid_argument("unvec: size mismatch");
    Mat l(out_dim, in_dim);
    for (int j = 0; j < out_dim; ++j)
        for (int i = 0; i < in_dim; ++i) l(j, i) = v[j * in_dim + i];
    return l;
}

ChannelRep kraus_to_cj(const ChannelRep& ch) {
    if (ch.kind != ChannelRep::Kind::Kraus)
        throw std::invalid_argument("kraus_to_cj expects a Kraus-form channel");
    int d = ch.in_dim * ch.out_dim;
    Mat xi = Mat::Zero(d, d);
    for (const auto& a : ch.kraus) {
        CVec v = vec_operator(a);
        xi += v * v.adjoint();
    }
    return ChannelRep::from_cj(hermitize(xi), ch.in_dim, ch.out_dim);
}

ChannelRep cj_to_kraus(const ChannelRep& ch) {
    if (ch.kind != ChannelRep::Kind::CJ)
        throw std::invalid_argument("cj_to_kraus expects a CJ-form channel");
    Mat xi = hermitize(ch.matrix);
    Eigen::SelfAdjointEigenSolver<Mat> es(xi);
    if (es.eigenvalues().minCoeff() < -tol::psd)
        throw InvalidChannelError("cj_to_kraus: CJ matrix not PSD beyond tolerance");
    std::vector<Mat> ops;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        double lam = es.eigenvalues()[i];
        if (lam <= tol::kraus_keep) continue;
        CVec v = std::sqrt(lam) * es.eigenvectors().col(i);
        ops.push_back(unvec_operator(v, ch.out_dim, ch.in_dim));
    }
    return ChannelRep::from_kraus(std::move(ops));
}

// Reshuffle between CJ (out (x) in square) and Normal (out^2 x in^2):
// Xi^R[(j,k),(i,l)] = Xi[(j,i),(k,l)].
static Mat reshuffle_cj_to_normal(const Mat& xi, int din, int dout) {
    Mat r(dout * dout, din * din);
    for (int j = 0; j < dout; ++j)
        for (int k = 0; k < dout; ++k)
            for (int i = 0; i < din; ++i)
                for (int l = 0; l < din; ++l)
                    r(j * dout + k, i * din + l) = xi(j * din + i, k * din + l);
    return r;
}

static Mat reshuffle_normal_to_cj(const Mat& r, int din, int dout) {
    Mat xi(dout * din, dout * din);
    for (int j = 0; j < dout; ++j)
        for (int k = 0; k < dout; ++k)
            for (int i = 0; i < din; ++i)
                for (int l = 0; l < din; ++l)
                    xi(j * din + i, k * din + l) = r(j * dout + k, i * din + l);
    return xi;
}

ChannelRep to_normal(const ChannelRep& ch) {
    switch (ch.kind) {
    case ChannelRep::Kind::Normal:
        return ch;
    case ChannelRep::Kind::CJ:
        return ChannelRep::from_normal(reshuffle_cj_to_normal(ch.matrix, ch.in_dim, ch.out_dim),
                                       ch.in_dim, ch.out_dim);
    case ChannelRep::Kind::Kraus:
        return to_normal(kraus_to_cj(ch));
    }
    throw std::logic_error("unreachable");
}

ChannelRep normal_to_cj(const ChannelRep& ch) {
    if (ch.kind != ChannelRep::Kind::Normal)
        throw std::invalid_argument("normal_to_cj expects a Normal-form channel");
    return ChannelRep::from_cj(
        hermitize(reshuffle_normal_to_cj(ch.matrix, ch.in_dim, ch.out_dim)), ch.in_dim,
        ch.out_dim);
}

DensityOperator apply_channel(const ChannelRep& ch, const DensityOperator& rho) {
    if (rho.dim() != ch.in_dim)
        throw std::invalid_argument("apply_channel: state dimension mismatch");
    Mat out;
    switch (ch.kind) {
    case ChannelRep::Kind::Kraus: {
        out = Mat::Zero(ch.out_dim, ch.out_dim);
        for (const auto& a : ch.kraus) out += a * rho.matrix * a.adjoint();
        break;
    }
    case ChannelRep::Kind::CJ: {
        // E(rho)(j,l) = sum_{ik} Xi[(j,i),(l,k)] rho(i,k)
        out = Mat::Zero(ch.out_dim, ch.out_dim);
        for (int j = 0; j < ch.out_dim; ++j)
            for (int l = 0; l < ch.out_dim; ++l) {
                Cplx acc = 0;
                for (int i = 0; i < ch.in_dim; ++i)
                    for (int k = 0; k < ch.in_dim; ++k)
                        acc += ch.matrix(j * ch.in_dim + i, l * ch.in_dim + k) * rho.matrix(i, k);
                out(j, l) = acc;
            }
        break;
    }
    case ChannelRep::Kind::Normal: {
        CVec v = ch.matrix * vec_operator(rho.matrix);
        out = unvec_operator(v, ch.out_dim, ch.out_dim);
        break;
    }
    }
    return DensityOperator(hermitize(out));
}

std::vector<double> measure(const Povm& povm, const DensityOperator& rho) {
    if (rho.dim() != povm.dim) throw std::invalid_argument("measure: dimension mismatch");
    std::vector<double> p(povm.outcomes());
    for (std::size_t i = 0; i < povm.outcomes(); ++i)
        p[i] = (povm.elements[i] * rho.matrix).trace().real();
    return p;
}

// ---------------------------------------------------------------------------
// stock objects
// ---------------------------------------------------------------------------

Mat pauli_x() {
    Mat m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Mat pauli_y() {
    Mat m(2, 2);
    m << 0, Cplx(0, -1), Cplx(0, 1), 0;
    return m;
}

Mat pauli_z() {
    Mat m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

PureState basis_state(int dim, int index) {
    CVec v = CVec::Zero(dim);
    v[index] = 1.0;
    return PureState(v);
}

DensityOperator maximally_mixed(int dim) {
    return DensityOperator(Mat::Identity(dim, dim) / static_cast<double>(dim));
}

ChannelRep identity_channel(int dim) {
    return ChannelRep::from_kraus({Mat::Identity(dim, dim)});
}

ChannelRep unitary_channel(const Mat& u) { return ChannelRep::from_kraus({u}); }

ChannelRep depolarizing_channel(double p, int dim) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("depolarizing probability outside [0,1]");
    if (dim == 2) {
        double keep = std::sqrt((1.0 + 3.0 * p) / 4.0);
        double flip = std::sqrt((1.0 - p) / 4.0);
        Mat id = Mat::Identity(2, 2);
        return ChannelRep::from_kraus(
            {keep * id, flip * pauli_x(), flip * pauli_y(), flip * pauli_z()});
    }
    // generic construction via Heisenberg-Weyl operators
    std::vector<Mat> ops;
    Cplx w = std::exp(Cplx(0, 2.0 * M_PI / dim));
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) {
            Mat m = Mat::Zero(dim, dim);
            for (int k = 0; k < dim; ++k) m((k + a) % dim, k) = std::pow(w, b * k);
            double weight = (a == 0 && b == 0) ? (p + (1.0 - p) / (dim * dim))
                                               : (1.0 - p) / (dim * dim);
            ops.push_back(std::sqrt(weight) * m);
        }
    return ChannelRep::from_kraus(std::move(ops));
}

Povm basis_povm(const std::vector<CVec>& basis) {
    std::vector<Mat> els;
    int d = static_cast<int>(basis.front().size());
    for (const auto& v : basis) els.push_back(v * v.adjoint());
    return Povm(d, std::move(els));
}

// ---------------------------------------------------------------------------
// random objects
// ---------------------------------------------------------------------------

double gaussian(CounterRng& rng) {
    double u1 = rng.next_double();
    double u2 = rng.next_double();
    u1 = std::max(u1, 1e-300);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

static Mat ginibre(CounterRng& rng, int rows, int cols) {
    Mat g(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) g(i, j) = Cplx(gaussian(rng), gaussian(rng));
    return g;
}

CVec random_pure_vector(CounterRng& rng, int dim) {
    CVec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = Cplx(gaussian(rng), gaussian(rng));
    return v / v.norm();
}

DensityOperator random_density(CounterRng& rng, int dim, int rank) {
    if (rank <= 0) rank = dim;
    Mat g = ginibre(rng, dim, rank);
    Mat rho = g * g.adjoint();
    rho /= rho.trace();
    return DensityOperator(hermitize(rho));
}

DensityOperator random_density(CounterRng& rng, const std::vector<int>& dims) {
    DensityOperator rho = random_density(rng, product(dims));
    rho.subsystem_dims = dims;
    return rho;
}

Mat random_unitary(CounterRng& rng, int dim) {
    Mat g = ginibre(rng, dim, dim);
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ();
    Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    // fix phases so the distribution is Haar
    for (int i = 0; i < dim; ++i) {
        Cplx d = r(i, i);
        q.col(i) *= d / std::abs(d);
    }
    return q;
}

ChannelRep random_channel(CounterRng& rng, int in_dim, int out_dim, int n_kraus) {
    Mat g = ginibre(rng, out_dim * n_kraus, in_dim);
    // QR gives an isometry; its row blocks are valid Kraus operators
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = Mat(qr.householderQ()).leftCols(in_dim);
    std::vector<Mat> ops;
    for (int k = 0; k < n_kraus; ++k) ops.push_back(q.middleRows(k * out_dim, out_dim));
    return ChannelRep::from_kraus(std::move(ops));
}

} // namespace qkdlab
