// Acceptance suite: one check per criterion, one pass/fail line each.
// Exit code is the number of failed criteria.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "qkdlab/entropy.hpp"
#include "qkdlab/hashing.hpp"
#include "qkdlab/io.hpp"
#include "qkdlab/keyrates.hpp"
#include "qkdlab/optics.hpp"
#include "qkdlab/postprocess.hpp"
#include "qkdlab/protocols.hpp"
#include "qkdlab/quantum.hpp"
#include "qkdlab/squashing.hpp"

using namespace qkdlab;

namespace {

int g_failures = 0;
std::chrono::steady_clock::time_point g_started;

void begin_criterion() { g_started = std::chrono::steady_clock::now(); }

void report(int criterion, const std::string& what, bool pass, const std::string& detail) {
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - g_started)
                      .count();
    std::printf("[%s] criterion %2d: %s (%s) [%.1f s]\n", pass ? "PASS" : "FAIL", criterion,
                what.c_str(), detail.c_str(), secs);
    if (!pass) ++g_failures;
}

double binom_sigma(double p, double n) { return std::sqrt(p * (1.0 - p) / n); }

// independent high-precision binary entropy on long doubles
long double h_ld(long double p) {
    if (p <= 0.0L || p >= 1.0L) return 0.0L;
    return (-p * std::log(p) - (1.0L - p) * std::log(1.0L - p)) / std::log(2.0L);
}

// ---------------------------------------------------------------------------

void criterion_1_rate_formulas() {
    long double lm05_ref = 1.0L - std::min(h_ld(0.05L), h_ld(0.07L)) - h_ld(0.03L);
    bool lm05_ok = std::abs(lm05_rate(0.05, 0.07, 0.03) - 0.51921) <= 1e-4 &&
                   std::abs(lm05_rate(0.05, 0.07, 0.03) - (double)lm05_ref) <= 1e-9;

    long double h4_ref = 0.0L;
    for (long double q : {0.9L, 0.05L, 0.03L, 0.02L}) h4_ref -= q * std::log(q) / std::log(2.0L);
    long double sdc_ref = 2.0L - 2.0L * h4_ref;
    std::array<double, 4> qv{0.9, 0.05, 0.03, 0.02};
    bool sdc_ok = std::abs(sdc_rate(qv, qv) - 0.76490) <= 1e-3 &&
                  std::abs(sdc_rate(qv, qv) - (double)sdc_ref) <= 1e-9;

    // independent bisection on 1 - 2 h(q) with long doubles
    long double lo = 0.05L, hi = 0.25L;
    for (int i = 0; i < 80; ++i) {
        long double mid = 0.5L * (lo + hi);
        if (1.0L - 2.0L * h_ld(mid) > 0.0L)
            lo = mid;
        else
            hi = mid;
    }
    double root = (double)(0.5L * (lo + hi));
    // and via the module's rate on a double bisection
    double mlo = 0.05, mhi = 0.25;
    for (int i = 0; i < 60; ++i) {
        double mid = 0.5 * (mlo + mhi);
        (bb84_asymptotic_rate(mid, mid) > 0 ? mlo : mhi) = mid;
    }
    double mroot = 0.5 * (mlo + mhi);
    bool root_ok = std::abs(root - 0.1100) <= 0.0005 && std::abs(mroot - root) <= 1e-6;

    std::ostringstream d;
    d << "lm05=" << lm05_rate(0.05, 0.07, 0.03) << " sdc=" << sdc_rate(qv, qv)
      << " q*=" << mroot;
    report(1, "rate-formula golden values", lm05_ok && sdc_ok && root_ok, d.str());
}

void criterion_2_leftover_end_to_end() {
    // 12-bit source, uniform over 64 values per 2-valued side channel:
    // Hmin(X|S) = 6. Exact joint distribution of (hash, side, seed).
    const int n = 12;
    Gf2nField field(n);
    double worst_excess = -1.0;
    bool ok = true;
    for (int l = 1; l <= 6; ++l) {
        double dist = 0.0;
        std::uint64_t mask = (1ull << l) - 1;
        for (std::uint64_t alpha = 0; alpha < 4096; ++alpha) {
            double per_seed = 0.0;
            for (int s = 0; s < 2; ++s) {
                std::vector<int> counts(1ull << l, 0);
                for (int i = 0; i < 64; ++i) {
                    std::uint64_t x = static_cast<std::uint64_t>(s * 64 + i);
                    counts[field.mul(x, alpha) & mask]++;
                }
                for (std::uint64_t k = 0; k < (1ull << l); ++k)
                    per_seed += 0.5 * 0.5 * std::abs(counts[k] / 64.0 - std::exp2(-l));
            }
            dist += per_seed / 4096.0;
        }
        double bound = leftover_hash_distance(6, l, 0.0);
        worst_excess = std::max(worst_excess, dist - bound);
        if (dist > bound + 1e-12) ok = false;
    }
    std::ostringstream d;
    d << "max(distance - bound) = " << worst_excess;
    report(2, "leftover hashing end-to-end, l in 1..6", ok, d.str());
}

void criterion_3_two_universality() {
    bool ok = true;
    double worst = 0.0;
    // 1000 random pairs at n = 8, l = 4, all 256 seeds
    {
        auto fam = HashFamily::gf_multiply(8, 4);
        CounterRng rng(0xacce901);
        for (int t = 0; t < 1000; ++t) {
            std::uint64_t x = rng.next_below(256), xp = rng.next_below(256);
            if (x == xp) continue;
            int coll = 0;
            for (std::uint64_t a = 0; a < 256; ++a) {
                auto ha = hash_gf(fam, u64_to_bits(x, 8), u64_to_bits(a, 8));
                auto hb = hash_gf(fam, u64_to_bits(xp, 8), u64_to_bits(a, 8));
                if (bits_to_u64(ha) == bits_to_u64(hb)) ++coll;
            }
            double frac = coll / 256.0;
            worst = std::max(worst, frac);
            if (frac > 0.0625 + 1e-12) ok = false;
        }
    }
    // full exhaustion at n = 4 for every l
    for (int l = 1; l <= 4; ++l) {
        auto fam = HashFamily::gf_multiply(4, l);
        for (std::uint64_t x = 0; x < 16; ++x)
            for (std::uint64_t xp = x + 1; xp < 16; ++xp) {
                int coll = 0;
                for (std::uint64_t a = 0; a < 16; ++a) {
                    auto ha = hash_gf(fam, u64_to_bits(x, 4), u64_to_bits(a, 4));
                    auto hb = hash_gf(fam, u64_to_bits(xp, 4), u64_to_bits(a, 4));
                    if (bits_to_u64(ha) == bits_to_u64(hb)) ++coll;
                }
                if (coll / 16.0 > std::exp2(-l) + 1e-12) ok = false;
            }
    }
    std::ostringstream d;
    d << "worst collision fraction at n=8,l=4: " << worst << " <= 0.0625";
    report(3, "two-universality (sampled n=8 plus exhaustive n=4)", ok, d.str());
}

void criterion_4_serfling_monte_carlo() {
    const std::uint64_t N = 2000, n = 1000, k = N - n;
    const int trials = 100000;
    std::vector<int> population(N, 0);
    for (std::uint64_t i = 0; i < N / 10; ++i) population[i] = 1;
    const double pop_mean = 0.1;
    std::array<double, 3> betas{0.01, 0.02, 0.05};
    std::array<int, 3> exceed{0, 0, 0};

    CounterRng rng(0xacce904);
    std::vector<int> idx(N);
    for (int t = 0; t < trials; ++t) {
        CounterRng tr = rng.substream(t);
        for (std::uint64_t i = 0; i < N; ++i) idx[i] = static_cast<int>(i);
        int ones = 0;
        for (std::uint64_t i = 0; i < n; ++i) {
            std::uint64_t j = i + tr.next_below(N - i);
            std::swap(idx[i], idx[j]);
            ones += population[idx[i]];
        }
        double mean = static_cast<double>(ones) / static_cast<double>(n);
        for (std::size_t b = 0; b < betas.size(); ++b)
            if (mean >= pop_mean + betas[b]) ++exceed[b];
    }
    bool ok = true;
    std::ostringstream d;
    for (std::size_t b = 0; b < betas.size(); ++b) {
        double emp = static_cast<double>(exceed[b]) / trials;
        double bound = serfling_tail(N, k, n, betas[b]);
        if (emp > bound) ok = false;
        d << "beta=" << betas[b] << ": " << emp << "<=" << bound << " ";
    }
    report(4, "Serfling bound under 1e5 hypergeometric resamples", ok, d.str());
}

void criterion_5_simulator_vs_oracle() {
    bool ok = true;
    std::ostringstream d;

    ProtocolConfig depol;
    depol.protocol = ProtocolId::Bb84;
    depol.rounds = 100000;
    depol.seed = 0xacce905;
    depol.channel = ChannelModel::depolarizing(0.9);
    auto r1 = run_bb84(depol);
    double s1 = binom_sigma(0.05, static_cast<double>(r1.bb84.sifted));
    if (std::abs(r1.bb84.qber - 0.05) > 3 * s1) ok = false;
    d << "qber=" << r1.bb84.qber << " ";

    ProtocolConfig ir = depol;
    ir.channel = ChannelModel::depolarizing(1.0);
    ir.attack.kind = AttackModel::Kind::InterceptResend;
    ir.seed = 0xacce906;
    auto r2 = run_bb84(ir);
    double s2 = binom_sigma(0.25, static_cast<double>(r2.bb84.sifted));
    if (std::abs(r2.bb84.qber - 0.25) > 3 * s2) ok = false;
    d << "intercept=" << r2.bb84.qber << " ";

    ProtocolConfig b92;
    b92.protocol = ProtocolId::B92;
    b92.rounds = 100000;
    b92.seed = 0xacce907;
    auto r3 = run_b92(b92);
    double expect3 = 1.0 - 1.0 / (2.0 + std::sqrt(2.0));
    double s3 = binom_sigma(expect3, static_cast<double>(b92.rounds));
    if (std::abs(r3.b92.inconclusive_fraction - expect3) > 3 * s3) ok = false;
    d << "b92?=" << r3.b92.inconclusive_fraction << " ";

    ProtocolConfig lm05;
    lm05.protocol = ProtocolId::Lm05;
    lm05.rounds = 80000;
    lm05.encode_prob = 0.5;
    lm05.seed = 0xacce908;
    lm05.attack.kind = AttackModel::Kind::EntangleResend;
    auto r4 = run_lm05(lm05);
    std::uint64_t matched = r4.lm05.check1_rounds[1];
    double s4 = binom_sigma(0.5, static_cast<double>(matched));
    if (matched < 10000 || std::abs(r4.lm05.q_g1[1] - 0.5) > 3 * s4) ok = false;
    d << "lm05check=" << r4.lm05.q_g1[1] << " (n=" << matched << ")";

    report(5, "simulators against single-round oracles", ok, d.str());
}

void criterion_6_chsh() {
    auto strat = ChshStrategy::optimal_quantum();
    double expect = std::cos(M_PI / 8) * std::cos(M_PI / 8);
    auto res = play_chsh(strat, 200000, 0xacce909);
    bool quantum_ok = std::abs(res.win_fraction - expect) <
                      3 * binom_sigma(expect, static_cast<double>(res.trials));

    bool classical_ok = chsh_best_classical() == 0.75;

    bool bound_ok = std::abs(chsh_guess_bound(2.0 * std::sqrt(2.0)) - 0.79289) <= 1e-5;

    std::ostringstream d;
    d << "win=" << res.win_fraction << " vs " << expect
      << ", classical max=" << chsh_best_classical()
      << ", bound(2sqrt2)=" << chsh_guess_bound(2.0 * std::sqrt(2.0));
    report(6, "CHSH game and guessing bound", quantum_ok && classical_ok && bound_ok, d.str());
}

void criterion_7_entropy() {
    bool ok = true;
    std::ostringstream d;

    // von Neumann DPI on 1000 random 2x2x2 states
    CounterRng rng(0xacce910);
    int violations = 0;
    for (int t = 0; t < 1000; ++t) {
        auto rho = random_density(rng, {2, 2, 2});
        DensityOperator grouped(rho.matrix, {2, 4});
        double h_abc = conditional_vn(grouped);
        double h_ab = conditional_vn(partial_trace(rho, {0, 1}));
        if (h_abc > h_ab + 1e-9) ++violations;
    }
    if (violations > 0) ok = false;
    d << "dpi violations=" << violations << " ";

    // closed forms
    auto a = random_density(rng, 2);
    auto b = random_density(rng, 2);
    double expect_prod = -std::log2(-min_eigenvalue(-a.matrix));
    double got_prod = hmin_quantum(tensor_product(a, b)).value;
    if (std::abs(got_prod - expect_prod) > 1e-3) ok = false;

    CVec bell = CVec::Zero(4);
    bell[0] = bell[3] = 1 / std::sqrt(2.0);
    DensityOperator bell_rho(bell * bell.adjoint(), {2, 2});
    double got_bell = hmin_quantum(bell_rho).value;
    if (std::abs(got_bell + 1.0) > 1e-3) ok = false;

    DensityOperator mixed(Mat::Identity(4, 4) / 4.0, {2, 2});
    double got_mixed = hmin_quantum(mixed).value;
    if (std::abs(got_mixed - 1.0) > 1e-3) ok = false;
    d << "closed forms: prod " << got_prod << "/" << expect_prod << ", bell " << got_bell
      << ", mixed " << got_mixed << " ";

    // duality against a direct fidelity-maximization oracle
    double worst_dual = 0.0;
    for (int t = 0; t < 100; ++t) {
        auto rho = random_density(rng, {2, 2});
        double via_duality = hmax_quantum(rho).value;

        Mat sq_rho = sqrt_psd(rho.matrix);
        auto eval = [&](double x, double y, double z) {
            Mat sigma(2, 2);
            sigma << 0.5 * (1 + z), 0.5 * Cplx(x, -y), 0.5 * Cplx(x, y), 0.5 * (1 - z);
            return trace_norm(sq_rho * sqrt_psd(kron(Mat::Identity(2, 2), sigma)));
        };
        double best = 0, bx = 0, by = 0, bz = 0, r = 1.0, step = 0.2;
        for (int stage = 0; stage < 4; ++stage) {
            for (double x = bx - r; x <= bx + r + 1e-12; x += step)
                for (double y = by - r; y <= by + r + 1e-12; y += step)
                    for (double z = bz - r; z <= bz + r + 1e-12; z += step) {
                        if (x * x + y * y + z * z > 1.0) continue;
                        double f = eval(x, y, z);
                        if (f > best) {
                            best = f;
                            bx = x;
                            by = y;
                            bz = z;
                        }
                    }
            r = 2 * step;
            step *= 0.15;
        }
        double via_grid = 2.0 * std::log2(best);
        worst_dual = std::max(worst_dual, std::abs(via_duality - via_grid));
    }
    if (worst_dual > 1e-3) ok = false;
    d << "worst duality gap=" << worst_dual;

    report(7, "entropy invariants and min-entropy solver", ok, d.str());
}

void criterion_8_cj_machinery() {
    CounterRng rng(0xacce911);
    bool ok = true;
    double worst_action = 0.0, worst_tp = 0.0, worst_gauge = 0.0;
    for (int t = 0; t < 100; ++t) {
        auto ch = random_channel(rng, 2, 2, 1 + static_cast<int>(rng.next_below(4)));
        auto cj = kraus_to_cj(ch);
        auto back = cj_to_kraus(cj);
        for (int s = 0; s < 5; ++s) {
            auto rho = random_density(rng, 2);
            double diff =
                max_abs(apply_channel(ch, rho).matrix - apply_channel(back, rho).matrix);
            worst_action = std::max(worst_action, diff);
        }
        Mat tr_out = partial_trace(cj.matrix, {2, 2}, {1});
        worst_tp = std::max(worst_tp, max_abs(tr_out - Mat::Identity(2, 2)));

        // gauge invariance: recombine the Kraus list by a random unitary
        int nk = static_cast<int>(ch.kraus.size());
        Mat w = random_unitary(rng, nk);
        std::vector<Mat> mixed(nk, Mat::Zero(2, 2));
        for (int i = 0; i < nk; ++i)
            for (int j = 0; j < nk; ++j) mixed[i] += w(i, j) * ch.kraus[j];
        auto cj2 = kraus_to_cj(ChannelRep::from_kraus(mixed));
        worst_gauge = std::max(worst_gauge, max_abs(cj2.matrix - cj.matrix));
    }
    if (worst_action > 1e-10 || worst_tp > 1e-9 || worst_gauge > 1e-10) ok = false;
    std::ostringstream d;
    d << "action " << worst_action << ", trace-pres " << worst_tp << ", gauge " << worst_gauge;
    report(8, "CJ round trips on 100 random qubit channels", ok, d.str());
}

void criterion_9_squashing() {
    bool ok = true;
    std::ostringstream d;

    auto bb84 = check_feasibility(make_squash_preset(MultiPhotonMeasurement::Bb84Active, 2));
    if (bb84.verdict != SquashVerdict::Feasible || bb84.min_eigenvalue < -1e-8) ok = false;
    d << "bb84-cutoff2: feasible, min eig " << bb84.min_eigenvalue << "; ";

    // The unique six-state cutoff-2 map is exactly PSD (eigenvalues
    // {3/2, 3/2, 0, 0, 0, 0}), so the no-go first appears at three
    // photons. Certify infeasibility there.
    auto six2 = check_feasibility(make_squash_preset(MultiPhotonMeasurement::SixStateActive, 2));
    d << "sixstate-cutoff2 boundary max-eig " << six2.slice_max_min_eigenvalue << "; ";

    auto six3 = check_feasibility(make_squash_preset(MultiPhotonMeasurement::SixStateActive, 3));
    if (six3.verdict != SquashVerdict::Infeasible || six3.slice_max_min_eigenvalue >= -1e-6)
        ok = false;
    d << "sixstate-cutoff3: infeasible, max-eig " << six3.slice_max_min_eigenvalue << "; ";

    auto noise =
        noise_to_feasibility(make_squash_preset(MultiPhotonMeasurement::SixStateActive, 3), 1e-3);
    bool noise_ok = !noise.feasible_without_noise &&
                    noise.cert_high.verdict == SquashVerdict::Feasible &&
                    noise.cert_low.verdict != SquashVerdict::Feasible &&
                    noise.lambda_high - noise.lambda_low <= 1e-3 + 1e-12 &&
                    noise.lambda_low <= 1.0 / 3.0 && 1.0 / 3.0 <= noise.lambda_high;
    if (!noise_ok) ok = false;
    d << "noise bracket [" << noise.lambda_low << ", " << noise.lambda_high << "] around 1/3";

    report(9, "squashing verdicts and noise search", ok, d.str());
}

void criterion_10_finite_key_convergence() {
    const double q = 0.03;
    const double asymptote = 1.0 - 2.0 * binary_entropy(q);
    double prev = -1.0, final_ratio = 0.0;
    bool monotone = true;
    std::ostringstream d;
    for (double n : {1e3, 1e4, 1e5, 1e6}) {
        double k = 3.0 * n, big_n = 4.0 * n;
        double gamma = std::sqrt(std::log(1e10) * (k + 1.0) * big_n / (k * k * n));
        PeOutcome pe;
        pe.kept_bits = static_cast<std::uint64_t>(n);
        pe.hmax_bound = n * binary_entropy(q + gamma);
        pe.eps_pe = 1e-10;
        EpsBudget eps;
        eps.eps_pa = 0x1p-21;
        auto rep = finite_key_length(pe, OverlapC(0.5), n * binary_entropy(q) + 20.0, eps);
        double ratio = static_cast<double>(rep.length) / n;
        if (ratio < prev) monotone = false;
        prev = ratio;
        final_ratio = ratio;
        d << "n=" << n << ": " << ratio << " ";
    }
    bool ok = monotone && final_ratio >= 0.95 * asymptote && final_ratio <= asymptote;
    d << "-> asymptote " << asymptote;
    report(10, "finite-key rate converges to 1 - 2h(0.03)", ok, d.str());
}

void criterion_11_decoy() {
    auto poisson = [](double mu, int j) {
        return std::exp(-mu + j * std::log(std::max(mu, 1e-300)) - std::lgamma(j + 1.0));
    };
    double eta = 0.3;
    DecoyData data;
    data.intensities = {0.1, 0.3, 0.6};
    data.cutoff = 8;
    for (double mu : data.intensities) {
        double q = 0.0;
        for (int j = 0; j <= 60; ++j) q += poisson(mu, j) * (1.0 - std::pow(1.0 - eta, j));
        data.gains.push_back(q);
    }
    auto res = decoy_bounds(data);
    bool contain = res.feasible && res.y1.lo <= eta && eta <= res.y1.hi;
    bool narrow = res.y1.width() <= 0.05;

    DecoyData bad;
    bad.intensities = {0.1, 1.0};
    bad.gains = {0.9, 0.05};
    bad.cutoff = 8;
    auto rejected = decoy_bounds(bad);
    bool reject_ok = !rejected.feasible && !rejected.diagnosis.empty();

    std::ostringstream d;
    d << "Y1 in [" << res.y1.lo << ", " << res.y1.hi << "] (truth " << eta << ", width "
      << res.y1.width() << "), infeasible fixture rejected=" << (reject_ok ? "yes" : "no");
    report(11, "decoy LP recovery and explicit infeasibility", contain && narrow && reject_ok,
           d.str());
}

#ifdef QKDLAB_CLI_PATH
std::string run_cli(const std::string& args, int* exit_code) {
    std::string cmd = std::string(QKDLAB_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    std::string out;
    if (!pipe) return out;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    int status = pclose(pipe);
    if (exit_code) *exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return out;
}

void criterion_12_cli_determinism() {
    struct Case {
        const char* name;
        std::string config;
        std::string args;
    };
    std::vector<Case> cases = {
        {"simulate-json", R"({"protocol":"bb84","rounds":20000,
                              "channel":{"kind":"depolarizing","p":0.92}})",
         "simulate --seed 424242 --config "},
        {"simulate-csv", R"({"protocol":"lm05","rounds":2000,"encode_prob":0.6})",
         "simulate --seed 5150 --format csv --config "},
        {"keyrate", R"({"calculator":"lm05",
                        "sweep":{"param":"q","from":0.0,"to":0.15,"step":0.005}})",
         "keyrate --format csv --config "},
        {"pipeline", R"({"source":"simulate",
                         "simulate":{"protocol":"bb84","rounds":20000,
                                     "channel":{"kind":"depolarizing","p":0.94}},
                         "pipeline":{"lambda_max":0.06}})",
         "pipeline --seed 31337 --config "},
        {"squash-check", R"({"preset":"bb84-active-cutoff1"})", "squash-check --config "},
        {"decoy", R"({"intensities":[0.1,0.3,0.6],
                      "gains":[0.029554466,0.086068815,0.164729789],"cutoff":8})",
         "decoy --config "},
    };
    bool ok = true;
    std::ostringstream d;
    for (const auto& c : cases) {
        std::string path = std::string("/tmp/qkdlab_accept_") + c.name + ".json";
        std::ofstream(path) << c.config;
        int code1 = -1, code2 = -1;
        std::string out1 = run_cli(c.args + path, &code1);
        std::string out2 = run_cli(c.args + path, &code2);
        bool same = out1 == out2 && code1 == code2 && !out1.empty();
        if (!same) ok = false;
        d << c.name << (same ? " ok; " : " MISMATCH; ");
    }
    report(12, "CLI runs are byte-identical under a fixed seed", ok, d.str());
}
#endif

} // namespace

int main() {
    using CriterionFn = void (*)();
    CriterionFn criteria[] = {
        criterion_1_rate_formulas,     criterion_2_leftover_end_to_end,
        criterion_3_two_universality,  criterion_4_serfling_monte_carlo,
        criterion_5_simulator_vs_oracle, criterion_6_chsh,
        criterion_7_entropy,           criterion_8_cj_machinery,
        criterion_9_squashing,         criterion_10_finite_key_convergence,
        criterion_11_decoy,
#ifdef QKDLAB_CLI_PATH
        criterion_12_cli_determinism,
#endif
    };
    for (auto fn : criteria) {
        begin_criterion();
        fn();
    }
#ifndef QKDLAB_CLI_PATH
    report(12, "CLI determinism", false, "tools not built");
#endif
    std::printf("%s: %d criterion(s) failed\n", g_failures == 0 ? "ALL PASS" : "FAILURES",
                g_failures);
    return g_failures;
}
