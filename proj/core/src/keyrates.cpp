#include "qkdlab/keyrates.hpp"

#include <algorithm>
#include <cmath>

#include "qkdlab/entropy.hpp"

namespace qkdlab {

OverlapC::OverlapC(double value) : c(value) {
    if (c <= 0.0 || c > 1.0) throw std::invalid_argument("overlap must lie in (0, 1]");
}

OverlapC OverlapC::from_povms(const Povm& f, const Povm& g) {
    if (f.dim != g.dim) throw std::invalid_argument("overlap: POVMs on different spaces");
    double best = 0.0;
    for (const auto& fx : f.elements)
        for (const auto& gz : g.elements) {
            double s = operator_norm(sqrt_psd(fx) * sqrt_psd(gz));
            best = std::max(best, s * s);
        }
    return OverlapC(best);
}

double dw_rate(double h_key_given_eve, double h_key_given_bob) {
    return h_key_given_eve - h_key_given_bob;
}

double bb84_asymptotic_rate(double q_x, double q_z) {
    return 1.0 - binary_entropy(q_x) - binary_entropy(q_z);
}

double uncertainty_hmin_bound(double n, const OverlapC& c, double hmax_bound) {
    return n * std::log2(1.0 / c.c) - hmax_bound;
}

double lm05_rate(double q_g0, double q_g1, double q_f) {
    return 1.0 - std::min(binary_entropy(q_g0), binary_entropy(q_g1)) - binary_entropy(q_f);
}

namespace {

double h4(const std::array<double, 4>& q) {
    double sum = 0.0;
    for (double x : q) {
        if (x < 0.0) throw std::invalid_argument("h4: negative probability");
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("h4: distribution must be normalized");
    double h = 0.0;
    for (double x : q)
        if (x > 1e-14) h -= x * std::log2(x);
    return h;
}

} // namespace

double sdc_rate(const std::array<double, 4>& q_g, const std::array<double, 4>& q_f) {
    return 2.0 - h4(q_g) - h4(q_f);
}

RateReport finite_key_length(const PeOutcome& pe, const OverlapC& c, double leak_ir,
                             const EpsBudget& eps) {
    RateReport rep;
    rep.protocol = "finite-key";
    rep.eps_pe = pe.eps_pe;
    rep.eps_pa = eps.eps_pa;
    rep.leak = leak_ir;
    rep.has_length = true;
    if (pe.abort) {
        rep.aborted = true;
        rep.abort_stage = "parameter-estimation";
        rep.length = 0;
        return rep;
    }
    rep.hmax = pe.hmax_bound;
    rep.hmin = uncertainty_hmin_bound(static_cast<double>(pe.kept_bits), c, pe.hmax_bound);
    PaBudget budget;
    budget.hmin_bound = rep.hmin;
    budget.leak_ir = leak_ir;
    budget.eps_pa = eps.eps_pa;
    budget.eps_smooth = eps.eps_smooth;
    rep.length = max_key_length(budget);
    rep.no_positive_rate = rep.length == 0;
    rep.eps_total = rep.eps_pe + rep.eps_cor + rep.eps_pa;
    return rep;
}

std::pair<double, double> post_selection_adjust(double eps, std::uint64_t n, int d_q) {
    if (d_q < 1) throw std::invalid_argument("dimension must be positive");
    double exponent = static_cast<double>(d_q) * d_q - 1.0;
    double eps_prime = eps * std::pow(static_cast<double>(n) + 1.0, exponent);
    double reduction = 2.0 * exponent * std::log2(static_cast<double>(n) + 1.0);
    return {eps_prime, reduction};
}

double chsh_guess_bound(double chsh_value) {
    if (chsh_value < -4.0 || chsh_value > 4.0)
        throw std::invalid_argument("CHSH value outside [-4, 4]");
    return std::clamp(1.5 - chsh_value / 4.0, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// decoy-state linear program
// ---------------------------------------------------------------------------

void DecoyData::validate() const {
    if (intensities.empty() || intensities.size() != gains.size())
        throw std::invalid_argument("decoy: need one gain per intensity");
    if (!error_gains.empty() && error_gains.size() != intensities.size())
        throw std::invalid_argument("decoy: need one error gain per intensity");
    for (std::size_t i = 0; i < intensities.size(); ++i) {
        if (intensities[i] < 0.0) throw std::invalid_argument("decoy: negative intensity");
        for (std::size_t j = i + 1; j < intensities.size(); ++j)
            if (intensities[i] == intensities[j])
                throw std::invalid_argument("decoy: intensities must be distinct");
        if (gains[i] < 0.0 || gains[i] > 1.0)
            throw std::invalid_argument("decoy: gains must lie in [0, 1]");
    }
    for (double e : error_gains)
        if (e < 0.0 || e > 1.0) throw std::invalid_argument("decoy: error gains in [0, 1]");
    if (cutoff < 1 || cutoff > 10)
        throw std::invalid_argument("decoy: cutoff must be in 1..10 for vertex enumeration");
}

namespace {

double poisson_weight(double mu, int j) {
    return std::exp(-mu + j * std::log(std::max(mu, 1e-300)) - std::lgamma(j + 1.0));
}

struct BoxLp {
    // equality system A x = b with box bounds lo <= x <= hi
    Eigen::MatrixXd a;
    Eigen::VectorXd b, lo, hi;

    // Enumerate polytope vertices: pick m basic columns, pin the rest at a
    // bound, solve, keep solutions inside the box.
    std::vector<Eigen::VectorXd> vertices() const {
        int m = static_cast<int>(a.rows());
        int d = static_cast<int>(a.cols());
        std::vector<Eigen::VectorXd> out;
        std::vector<int> comb(m);
        for (int i = 0; i < m; ++i) comb[i] = i;
        auto advance = [&]() {
            int i = m - 1;
            while (i >= 0 && comb[i] == d - m + i) --i;
            if (i < 0) return false;
            ++comb[i];
            for (int j = i + 1; j < m; ++j) comb[j] = comb[j - 1] + 1;
            return true;
        };
        do {
            Eigen::MatrixXd basis(m, m);
            for (int i = 0; i < m; ++i) basis.col(i) = a.col(comb[i]);
            Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis);
            if (std::abs(lu.determinant()) < 1e-12) continue;

            std::vector<int> nonbasic;
            for (int i = 0; i < d; ++i)
                if (std::find(comb.begin(), comb.end(), i) == comb.end())
                    nonbasic.push_back(i);
            int nn = static_cast<int>(nonbasic.size());
            for (std::uint64_t mask = 0; mask < (1ull << nn); ++mask) {
                Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
                Eigen::VectorXd rhs = b;
                bool degenerate_bound = false;
                for (int i = 0; i < nn; ++i) {
                    int col = nonbasic[i];
                    double v = (mask >> i) & 1 ? hi[col] : lo[col];
                    if (((mask >> i) & 1) && hi[col] == lo[col]) {
                        degenerate_bound = true; // avoid double counting
                        break;
                    }
                    x[col] = v;
                    rhs -= v * a.col(col);
                }
                if (degenerate_bound) continue;
                Eigen::VectorXd sol = lu.solve(rhs);
                bool ok = true;
                for (int i = 0; i < m && ok; ++i) {
                    x[comb[i]] = sol[i];
                    ok = sol[i] >= lo[comb[i]] - 1e-9 && sol[i] <= hi[comb[i]] + 1e-9;
                }
                if (!ok) continue;
                // certificate: every constraint re-checked
                if ((a * x - b).cwiseAbs().maxCoeff() > 1e-9) continue;
                out.push_back(x);
            }
        } while (advance());
        return out;
    }
};

} // namespace

DecoyResult decoy_bounds(const DecoyData& data) {
    data.validate();
    int m = static_cast<int>(data.intensities.size());
    int ny = data.cutoff + 1;
    int d = ny + m; // yields plus per-intensity tail slack

    BoxLp lp;
    lp.a = Eigen::MatrixXd::Zero(m, d);
    lp.b = Eigen::VectorXd::Zero(m);
    lp.lo = Eigen::VectorXd::Zero(d);
    lp.hi = Eigen::VectorXd::Ones(d);
    for (int i = 0; i < m; ++i) {
        double tail = 1.0;
        for (int j = 0; j < ny; ++j) {
            double w = poisson_weight(data.intensities[i], j);
            lp.a(i, j) = w;
            tail -= w;
        }
        lp.a(i, ny + i) = 1.0;
        lp.hi[ny + i] = std::max(tail, 0.0); // slack covers the truncated tail
        lp.b[i] = data.gains[i];
    }

    DecoyResult res;
    auto verts = lp.vertices();
    if (verts.empty()) {
        res.feasible = false;
        res.diagnosis = "observed gains are inconsistent with any yield vector in [0,1]";
        return res;
    }
    res.feasible = true;
    res.yields.assign(ny, Interval{1.0, 0.0});
    for (const auto& v : verts)
        for (int j = 0; j < ny; ++j) {
            res.yields[j].lo = std::min(res.yields[j].lo, std::clamp(v[j], 0.0, 1.0));
            res.yields[j].hi = std::max(res.yields[j].hi, std::clamp(v[j], 0.0, 1.0));
        }
    res.y1 = res.yields.size() > 1 ? res.yields[1] : Interval{0.0, 1.0};

    if (!data.error_gains.empty()) {
        // second program on w_j = e_j Y_j, bounded by the yield upper bounds
        BoxLp elp = lp;
        for (int i = 0; i < m; ++i) elp.b[i] = data.error_gains[i];
        for (int j = 0; j < ny; ++j) elp.hi[j] = res.yields[j].hi;
        for (int i = 0; i < m; ++i) elp.hi[ny + i] = lp.hi[ny + i];
        auto everts = elp.vertices();
        if (everts.empty()) {
            res.feasible = false;
            res.diagnosis = "error gains are inconsistent with the yield bounds";
            return res;
        }
        Interval w1{1.0, 0.0};
        for (const auto& v : everts) {
            w1.lo = std::min(w1.lo, std::clamp(v[1], 0.0, 1.0));
            w1.hi = std::max(w1.hi, std::clamp(v[1], 0.0, 1.0));
        }
        Interval e1;
        e1.lo = res.y1.hi > 0 ? w1.lo / res.y1.hi : 0.0;
        e1.hi = res.y1.lo > 1e-12 ? std::min(1.0, w1.hi / res.y1.lo) : 1.0;
        res.e1 = e1;
    }
    return res;
}

} // namespace qkdlab
