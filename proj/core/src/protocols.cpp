#include "qkdlab/protocols.hpp"

#include <cmath>

namespace qkdlab {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

// basis 0 = Z, 1 = X, 2 = Y
CVec ket(int basis, int bit) {
    CVec v(2);
    switch (basis) {
    case 0: v << (bit ? 0 : 1), (bit ? 1 : 0); break;
    case 1: v << kInvSqrt2, (bit ? -kInvSqrt2 : kInvSqrt2); break;
    case 2: v << kInvSqrt2, Cplx(0, bit ? -kInvSqrt2 : kInvSqrt2); break;
    default: throw std::invalid_argument("unknown basis");
    }
    return v;
}

Mat projector(int basis, int bit) {
    CVec v = ket(basis, bit);
    return v * v.adjoint();
}

int sample_from(CounterRng& rng, const std::vector<double>& probs) {
    double total = 0.0;
    for (double p : probs) total += p;
    double u = rng.next_double() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
        acc += probs[i];
        if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(probs.size()) - 1;
}

Mat pauli_by_index(int i) {
    switch (i) {
    case 0: return Mat::Identity(2, 2);
    case 1: return pauli_x();
    case 2: return pauli_y();
    case 3: return pauli_z();
    default: throw std::invalid_argument("bad Pauli index");
    }
}

CVec bell_vector(int pauli_on_second) {
    CVec psi = CVec::Zero(4);
    psi[0] = kInvSqrt2;
    psi[3] = kInvSqrt2;
    Mat op = kron(Mat::Identity(2, 2), pauli_by_index(pauli_on_second));
    CVec v = op * psi;
    return v / v.norm();
}

} // namespace

// ---------------------------------------------------------------------------
// models
// ---------------------------------------------------------------------------

ChannelModel ChannelModel::depolarizing(double p) {
    ChannelModel m;
    m.kind = Kind::Depolarizing;
    m.p = p;
    m.validate();
    return m;
}

ChannelModel ChannelModel::lossy(double eta) {
    ChannelModel m;
    m.kind = Kind::Lossy;
    m.eta = eta;
    m.validate();
    return m;
}

ChannelModel ChannelModel::composed(std::vector<ChannelModel> stages) {
    ChannelModel m;
    m.kind = Kind::Composed;
    m.stages = std::move(stages);
    m.validate();
    return m;
}

void ChannelModel::validate() const {
    if (p < 0.0 || p > 1.0 || eta < 0.0 || eta > 1.0)
        throw std::invalid_argument("channel parameters must be probabilities");
    for (const auto& s : stages) s.validate();
}

bool ChannelModel::is_lossless() const {
    switch (kind) {
    case Kind::Depolarizing: return true;
    case Kind::Lossy: return eta >= 1.0;
    case Kind::Composed:
        for (const auto& s : stages)
            if (!s.is_lossless()) return false;
        return true;
    }
    return true;
}

bool ChannelModel::apply(CounterRng& rng, Mat& rho) const {
    switch (kind) {
    case Kind::Depolarizing: {
        int d = static_cast<int>(rho.rows());
        rho = p * rho + (1.0 - p) * rho.trace() * Mat::Identity(d, d) / static_cast<double>(d);
        return true;
    }
    case Kind::Lossy:
        return rng.bernoulli(eta);
    case Kind::Composed: {
        bool ok = true;
        for (const auto& s : stages) ok = s.apply(rng, rho) && ok;
        return ok;
    }
    }
    return true;
}

void DetectorModel::validate() const {
    if (efficiency < 0.0 || efficiency > 1.0 || dark_count < 0.0 || dark_count > 1.0)
        throw std::invalid_argument("detector parameters must be probabilities");
}

void ProtocolConfig::validate() const {
    if (rounds < 1) throw std::invalid_argument("rounds must be >= 1");
    if (basis_bias_x < 0.0 || basis_bias_x > 1.0 || encode_prob < 0.0 || encode_prob > 1.0)
        throw std::invalid_argument("probabilities must lie in [0,1]");
    if (lm05_version != 1 && lm05_version != 2)
        throw std::invalid_argument("lm05_version must be 1 or 2");
    channel.validate();
    if (channel_back) channel_back->validate();
    detector.validate();
}

// ---------------------------------------------------------------------------
// shared detection step
// ---------------------------------------------------------------------------

namespace {

struct Click {
    bool detected = false;
    bool double_click = false;
    int bit = -1;
};

// Threshold-detector pair behind a basis measurement: efficiency thinning,
// independent dark counts, double clicks resolved per policy.
Click detect_in_basis(CounterRng& rng, const Mat& rho, bool survived, int basis,
                      const DetectorModel& det) {
    bool clicks[2] = {false, false};
    if (survived && rng.bernoulli(det.efficiency)) {
        double p0 = (projector(basis, 0) * rho).trace().real();
        double p1 = (projector(basis, 1) * rho).trace().real();
        int bit = sample_from(rng, {std::max(p0, 0.0), std::max(p1, 0.0)});
        clicks[bit] = true;
    }
    if (det.dark_count > 0.0) {
        if (rng.bernoulli(det.dark_count)) clicks[0] = true;
        if (rng.bernoulli(det.dark_count)) clicks[1] = true;
    }
    Click out;
    if (clicks[0] && clicks[1]) {
        out.double_click = true;
        if (det.double_click_policy == DetectorModel::DoubleClickPolicy::RandomBit) {
            out.detected = true;
            out.bit = rng.next_bit();
        }
    } else if (clicks[0] || clicks[1]) {
        out.detected = true;
        out.bit = clicks[1] ? 1 : 0;
    }
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// BB84 / six-state
// ---------------------------------------------------------------------------

static SimResult run_bb84_family(const ProtocolConfig& config, int n_bases) {
    config.validate();
    CounterRng master(config.seed);
    SimResult result;
    result.protocol = n_bases == 2 ? ProtocolId::Bb84 : ProtocolId::SixState;
    auto& s = result.bb84;
    s.rounds = config.rounds;

    auto pick_basis = [&](CounterRng& rng) {
        if (n_bases == 2) return rng.bernoulli(config.basis_bias_x) ? 1 : 0;
        return static_cast<int>(rng.next_below(3));
    };

    for (std::uint64_t i = 0; i < config.rounds; ++i) {
        CounterRng rng = master.substream(i);
        int a_basis = pick_basis(rng);
        int a_bit = rng.next_bit();
        Mat rho = projector(a_basis, a_bit);

        if (config.attack.kind == AttackModel::Kind::InterceptResend) {
            int e_basis = pick_basis(rng);
            double p0 = (projector(e_basis, 0) * rho).trace().real();
            int e_bit = sample_from(rng, {std::max(p0, 0.0), std::max(1.0 - p0, 0.0)});
            rho = projector(e_basis, e_bit);
        }

        bool survived = config.channel.apply(rng, rho);
        int b_basis = pick_basis(rng);
        Click click = detect_in_basis(rng, rho, survived, b_basis, config.detector);

        RoundRecord rec;
        rec.round = i;
        rec.alice_bit = a_bit;
        rec.alice_basis = a_basis;
        rec.bob_basis = b_basis;
        rec.detected = click.detected;
        if (click.double_click) ++s.double_clicks;
        if (click.detected) {
            ++s.detected;
            rec.bob_bit = click.bit;
            if (a_basis == b_basis) {
                rec.sifted = true;
                ++s.sifted;
                ++s.sifted_per_basis[a_basis];
                bool err = click.bit != a_bit;
                if (err) ++s.errors_per_basis[a_basis];
                result.key_alice.push_back(static_cast<std::uint8_t>(a_bit));
                result.key_bob.push_back(static_cast<std::uint8_t>(click.bit));
            }
        }
        if (config.keep_records) result.records.push_back(rec);
    }

    s.detection_rate = static_cast<double>(s.detected) / static_cast<double>(s.rounds);
    std::uint64_t total_err = 0;
    for (int b = 0; b < 3; ++b) {
        total_err += s.errors_per_basis[b];
        s.qber_per_basis[b] = s.sifted_per_basis[b]
                                  ? static_cast<double>(s.errors_per_basis[b]) /
                                        static_cast<double>(s.sifted_per_basis[b])
                                  : 0.0;
    }
    s.qber_defined = s.sifted > 0;
    s.qber = s.qber_defined ? static_cast<double>(total_err) / static_cast<double>(s.sifted) : 0.0;
    return result;
}

SimResult run_bb84(const ProtocolConfig& config) { return run_bb84_family(config, 2); }
SimResult run_sixstate(const ProtocolConfig& config) { return run_bb84_family(config, 3); }

// ---------------------------------------------------------------------------
// B92
// ---------------------------------------------------------------------------

Povm b92_usd_povm() {
    double k = std::sqrt(2.0) / (1.0 + std::sqrt(2.0));
    Mat f0 = k * projector(1, 1); // |-><-| : conclusive "was |0>"
    Mat f1 = k * projector(0, 1); // |1><1| : conclusive "was |+>"
    Mat fq = Mat::Identity(2, 2) - f0 - f1;
    return Povm(2, {f0, f1, fq});
}

SimResult run_b92(const ProtocolConfig& config) {
    config.validate();
    CounterRng master(config.seed);
    SimResult result;
    result.protocol = ProtocolId::B92;
    auto& s = result.b92;
    s.rounds = config.rounds;

    Povm usd = b92_usd_povm();
    bool attack = config.attack.kind == AttackModel::Kind::UsdReplace;

    for (std::uint64_t i = 0; i < config.rounds; ++i) {
        CounterRng rng = master.substream(i);
        int a_bit = rng.next_bit();
        // 0 -> |0>, 1 -> |+>
        Mat rho = a_bit ? projector(1, 0) : projector(0, 0);
        bool survived = true;

        if (attack) {
            // Eve runs the same USD and replaces the lossy channel by a
            // lossless one; conclusive outcomes are re-prepared exactly,
            // inconclusive ones forward the post-measurement state.
            auto probs = measure(usd, DensityOperator(rho));
            int outcome = sample_from(rng, probs);
            if (outcome == 0) {
                rho = projector(0, 0);
            } else if (outcome == 1) {
                rho = projector(1, 0);
            } else {
                Mat sq = sqrt_psd(usd.elements[2]);
                Mat post = sq * rho * sq;
                rho = post / post.trace().real();
            }
        } else {
            survived = config.channel.apply(rng, rho);
        }

        RoundRecord rec;
        rec.round = i;
        rec.alice_bit = a_bit;
        rec.alice_basis = a_bit; // preparation doubles as its basis tag

        int outcome = 2;
        if (survived && rng.bernoulli(config.detector.efficiency)) {
            auto probs = measure(usd, DensityOperator(rho));
            outcome = sample_from(rng, probs);
        }
        if (outcome == 2) {
            ++s.inconclusive;
            rec.detected = false;
        } else {
            ++s.conclusive;
            rec.detected = true;
            rec.sifted = true;
            rec.bob_bit = outcome;
            if (outcome != a_bit) ++s.errors;
            result.key_alice.push_back(static_cast<std::uint8_t>(a_bit));
            result.key_bob.push_back(static_cast<std::uint8_t>(outcome));
        }
        if (config.keep_records) result.records.push_back(rec);
    }

    s.inconclusive_fraction =
        static_cast<double>(s.inconclusive) / static_cast<double>(s.rounds);
    s.error_rate_defined = s.conclusive > 0;
    s.conclusive_error_rate =
        s.error_rate_defined ? static_cast<double>(s.errors) / static_cast<double>(s.conclusive)
                             : 0.0;
    return result;
}

// ---------------------------------------------------------------------------
// LM05
// ---------------------------------------------------------------------------

namespace {

// LM05 encoding bit convention: 1, sx, sy, sz <-> 00, 10, 11, 01
int lm05_first_bit(int pauli) { return pauli == 1 || pauli == 2; }
int lm05_second_bit(int pauli) { return pauli == 2 || pauli == 3; }

} // namespace

SimResult run_lm05(const ProtocolConfig& config) {
    config.validate();
    CounterRng master(config.seed);
    SimResult result;
    result.protocol = ProtocolId::Lm05;
    auto& s = result.lm05;
    s.rounds = config.rounds;

    const ChannelModel& hop1 = config.channel;
    const ChannelModel& hop2 = config.channel_back ? *config.channel_back : config.channel;
    bool attack = config.attack.kind == AttackModel::Kind::EntangleResend;
    Povm bell = basis_povm({bell_vector(0), bell_vector(1), bell_vector(2), bell_vector(3)});

    for (std::uint64_t i = 0; i < config.rounds; ++i) {
        CounterRng rng = master.substream(i);
        int a_basis = rng.bernoulli(config.basis_bias_x) ? 1 : 0;
        int a_bit = rng.next_bit();
        Mat prepared = projector(a_basis, a_bit);

        bool encode_branch = rng.bernoulli(config.encode_prob);
        int pauli = -1, check_basis = -1, check_outcome = -1;
        bool survived = true;
        Mat to_alice; // the qubit Alice finally measures

        if (!attack) {
            Mat rho = prepared;
            survived = hop1.apply(rng, rho);
            if (encode_branch) {
                pauli = static_cast<int>(rng.next_below(4));
                if (survived) {
                    Mat op = pauli_by_index(pauli);
                    rho = op * rho * op.adjoint();
                }
            } else {
                check_basis = config.lm05_version == 1 ? 1 : rng.next_bit();
                // Bob's detector has to click before he can re-prepare
                survived = survived && rng.bernoulli(config.detector.efficiency);
                if (survived) {
                    double p0 = (projector(check_basis, 0) * rho).trace().real();
                    check_outcome =
                        sample_from(rng, {std::max(p0, 0.0), std::max(1.0 - p0, 0.0)});
                    rho = projector(check_basis, check_outcome);
                }
            }
            if (survived) survived = hop2.apply(rng, rho);
            to_alice = rho;
        } else {
            // Eve stores Alice's qubit and feeds Bob half of a Bell pair;
            // simulate the (Eve, Bob) pair exactly.
            Mat pair = bell_vector(0) * bell_vector(0).adjoint();
            if (encode_branch) {
                pauli = static_cast<int>(rng.next_below(4));
                Mat op = kron(Mat::Identity(2, 2), pauli_by_index(pauli));
                pair = op * pair * op.adjoint();
            } else {
                check_basis = config.lm05_version == 1 ? 1 : rng.next_bit();
                survived = rng.bernoulli(config.detector.efficiency);
                if (survived) {
                    Mat proj0 = kron(Mat::Identity(2, 2), projector(check_basis, 0));
                    double p0 = (proj0 * pair).trace().real();
                    check_outcome =
                        sample_from(rng, {std::max(p0, 0.0), std::max(1.0 - p0, 0.0)});
                    Mat proj = kron(Mat::Identity(2, 2), projector(check_basis, check_outcome));
                    pair = proj * pair * proj;
                    pair /= pair.trace().real();
                    // Bob re-prepares his outcome state and returns it
                    Mat eve_half = partial_trace(pair, {2, 2}, {0});
                    pair = kron(eve_half, projector(check_basis, check_outcome));
                }
            }
            if (survived) {
                auto probs = measure(bell, DensityOperator(hermitize(pair), {2, 2}));
                int guess = sample_from(rng, probs);
                Mat op = pauli_by_index(guess);
                to_alice = op * prepared * op.adjoint();
            }
        }

        RoundRecord rec;
        rec.round = i;
        rec.alice_bit = a_bit;
        rec.alice_basis = a_basis;
        rec.bob_basis = encode_branch ? -1 : check_basis;
        rec.detected = survived;

        if (survived && rng.bernoulli(config.detector.efficiency)) {
            double p0 = (projector(a_basis, 0) * to_alice).trace().real() /
                        std::max(to_alice.trace().real(), 1e-300);
            int m = sample_from(rng, {std::max(p0, 0.0), std::max(1.0 - p0, 0.0)});
            if (encode_branch) {
                int alice_key = a_bit ^ m;
                int bob_key = a_basis == 0 ? lm05_first_bit(pauli) : lm05_second_bit(pauli);
                ++s.key_rounds;
                if (alice_key != bob_key) ++s.key_errors;
                rec.sifted = true;
                rec.bob_bit = bob_key;
                result.key_alice.push_back(static_cast<std::uint8_t>(alice_key));
                result.key_bob.push_back(static_cast<std::uint8_t>(bob_key));
            } else if (check_outcome >= 0) {
                // first channel: Bob's check outcome against Alice's preparation
                if (check_basis == a_basis) {
                    ++s.check1_rounds[check_basis];
                    if (check_outcome != a_bit) ++s.check1_errors[check_basis];
                    // second channel: Alice's measurement against the re-preparation
                    ++s.check2_rounds[check_basis];
                    if (m != check_outcome) ++s.check2_errors[check_basis];
                }
                rec.bob_bit = check_outcome;
            }
        } else {
            rec.detected = false;
        }
        if (config.keep_records) result.records.push_back(rec);
    }

    s.qf_defined = s.key_rounds > 0;
    s.q_f = s.qf_defined
                ? static_cast<double>(s.key_errors) / static_cast<double>(s.key_rounds)
                : 0.0;
    for (int b = 0; b < 2; ++b) {
        s.q_g1[b] = s.check1_rounds[b] ? static_cast<double>(s.check1_errors[b]) /
                                             static_cast<double>(s.check1_rounds[b])
                                       : 0.0;
        s.q_g2[b] = s.check2_rounds[b] ? static_cast<double>(s.check2_errors[b]) /
                                             static_cast<double>(s.check2_rounds[b])
                                       : 0.0;
    }
    return result;
}

// ---------------------------------------------------------------------------
// SDC
// ---------------------------------------------------------------------------

namespace {

// SDC bit convention: 00, 01, 10, 11 <-> 1, sx, sz, sy
int sdc_pauli_for_bits(int bits) {
    switch (bits) {
    case 0: return 0;
    case 1: return 1;
    case 2: return 3;
    case 3: return 2;
    default: throw std::invalid_argument("bad bit pair");
    }
}

int sdc_bits_for_pauli(int pauli) {
    switch (pauli) {
    case 0: return 0;
    case 1: return 1;
    case 3: return 2;
    case 2: return 3;
    default: throw std::invalid_argument("bad Pauli index");
    }
}

// depolarize only the second qubit of a 2-qubit state
void depolarize_factor(Mat& rho4, double p) {
    Mat reduced = partial_trace(rho4, {2, 2}, {0});
    rho4 = p * rho4 + (1.0 - p) * 0.5 * kron(reduced, Mat::Identity(2, 2));
}

bool apply_on_travel_qubit(const ChannelModel& ch, CounterRng& rng, Mat& rho4) {
    switch (ch.kind) {
    case ChannelModel::Kind::Depolarizing:
        depolarize_factor(rho4, ch.p);
        return true;
    case ChannelModel::Kind::Lossy:
        return rng.bernoulli(ch.eta);
    case ChannelModel::Kind::Composed: {
        bool ok = true;
        for (const auto& s : ch.stages) ok = apply_on_travel_qubit(s, rng, rho4) && ok;
        return ok;
    }
    }
    return true;
}

} // namespace

SimResult run_sdc(const ProtocolConfig& config) {
    config.validate();
    CounterRng master(config.seed);
    SimResult result;
    result.protocol = ProtocolId::Sdc;
    auto& s = result.sdc;
    s.rounds = config.rounds;

    const ChannelModel& hop1 = config.channel;
    const ChannelModel& hop2 = config.channel_back ? *config.channel_back : config.channel;
    Povm bell = basis_povm({bell_vector(0), bell_vector(1), bell_vector(2), bell_vector(3)});

    for (std::uint64_t i = 0; i < config.rounds; ++i) {
        CounterRng rng = master.substream(i);
        Mat rho = bell_vector(0) * bell_vector(0).adjoint(); // (memory, travel)

        bool survived = apply_on_travel_qubit(hop1, rng, rho);

        bool bob_key_branch = rng.bernoulli(config.encode_prob);
        bool alice_key_branch = rng.bernoulli(config.encode_prob);

        int bob_bits = -1, bob_z = -1, bob_x = -1;
        if (bob_key_branch) {
            bob_bits = static_cast<int>(rng.next_below(4));
            if (survived) {
                Mat op =
                    kron(Mat::Identity(2, 2), pauli_by_index(sdc_pauli_for_bits(bob_bits)));
                rho = op * rho * op.adjoint();
            }
        } else {
            survived = survived && rng.bernoulli(config.detector.efficiency);
            if (survived) {
                Mat proj0 = kron(Mat::Identity(2, 2), projector(0, 0));
                double p0 = (proj0 * rho).trace().real();
                bob_z = sample_from(rng, {std::max(p0, 0.0), std::max(1.0 - p0, 0.0)});
                Mat proj = kron(Mat::Identity(2, 2), projector(0, bob_z));
                rho = proj * rho * proj;
                rho /= rho.trace().real();
                bob_x = rng.next_bit();
                Mat memory = partial_trace(rho, {2, 2}, {0});
                rho = kron(memory, projector(1, bob_x));
            }
        }

        if (survived) survived = apply_on_travel_qubit(hop2, rng, rho);
        survived = survived && rng.bernoulli(config.detector.efficiency);

        RoundRecord rec;
        rec.round = i;
        rec.detected = survived;
        bool branches_match = bob_key_branch == alice_key_branch;

        if (survived && branches_match) {
            if (alice_key_branch) {
                auto probs = measure(bell, DensityOperator(hermitize(rho), {2, 2}));
                int outcome = sample_from(rng, probs);
                int alice_bits = sdc_bits_for_pauli(outcome);
                ++s.key_rounds;
                int e1 = ((alice_bits >> 1) ^ (bob_bits >> 1)) & 1;
                int e2 = (alice_bits ^ bob_bits) & 1;
                ++s.key_pattern[2 * e1 + e2];
                rec.sifted = true;
                rec.alice_bit = alice_bits;
                rec.bob_bit = bob_bits;
                result.key_alice.push_back(static_cast<std::uint8_t>((alice_bits >> 1) & 1));
                result.key_alice.push_back(static_cast<std::uint8_t>(alice_bits & 1));
                result.key_bob.push_back(static_cast<std::uint8_t>((bob_bits >> 1) & 1));
                result.key_bob.push_back(static_cast<std::uint8_t>(bob_bits & 1));
            } else if (bob_z >= 0) {
                // Alice: Z on the memory qubit, X on the returned qubit
                std::vector<double> joint(4);
                for (int za = 0; za < 2; ++za)
                    for (int xa = 0; xa < 2; ++xa) {
                        Mat proj = kron(projector(0, za), projector(1, xa));
                        joint[2 * za + xa] = std::max((proj * rho).trace().real(), 0.0);
                    }
                int outcome = sample_from(rng, joint);
                int za = outcome >> 1, xa = outcome & 1;
                ++s.check_rounds;
                int ez = za != bob_z, ex = xa != bob_x;
                ++s.check_pattern[2 * ez + ex];
                rec.sifted = true;
                rec.alice_bit = za;
                rec.bob_bit = bob_z;
                rec.alice_basis = 0;
                rec.bob_basis = 0;
            }
        }
        if (config.keep_records) result.records.push_back(rec);
    }

    for (int k = 0; k < 4; ++k) {
        s.q_f[k] = s.key_rounds ? static_cast<double>(s.key_pattern[k]) /
                                      static_cast<double>(s.key_rounds)
                                : 0.0;
        s.q_g[k] = s.check_rounds ? static_cast<double>(s.check_pattern[k]) /
                                        static_cast<double>(s.check_rounds)
                                  : 0.0;
    }
    return result;
}

SimResult run_protocol(const ProtocolConfig& config) {
    switch (config.protocol) {
    case ProtocolId::Bb84: return run_bb84(config);
    case ProtocolId::SixState: return run_sixstate(config);
    case ProtocolId::B92: return run_b92(config);
    case ProtocolId::Lm05: return run_lm05(config);
    case ProtocolId::Sdc: return run_sdc(config);
    }
    throw std::invalid_argument("unknown protocol");
}

// ---------------------------------------------------------------------------
// CHSH
// ---------------------------------------------------------------------------

ChshStrategy ChshStrategy::classical(int a0, int a1, int b0, int b1) {
    ChshStrategy s;
    s.kind = Kind::ClassicalDeterministic;
    s.alice_table = {a0, a1};
    s.bob_table = {b0, b1};
    return s;
}

ChshStrategy ChshStrategy::quantum(const Mat& two_qubit_state, std::array<double, 2> alice,
                                   std::array<double, 2> bob) {
    ChshStrategy s;
    s.kind = Kind::Quantum;
    s.state = two_qubit_state;
    s.alice_angles = alice;
    s.bob_angles = bob;
    DensityOperator check(two_qubit_state, {2, 2});
    (void)check;
    return s;
}

ChshStrategy ChshStrategy::optimal_quantum() {
    CVec psi = bell_vector(0);
    return quantum(psi * psi.adjoint(), {0.0, M_PI / 2.0},
                   {M_PI / 4.0, -M_PI / 4.0});
}

namespace {

// projector onto outcome a of the X-Z plane observable cos(t) Z + sin(t) X
Mat angle_projector(double theta, int outcome) {
    Mat obs = std::cos(theta) * pauli_z() + std::sin(theta) * pauli_x();
    Mat id = Mat::Identity(2, 2);
    return 0.5 * (id + (outcome == 0 ? 1.0 : -1.0) * obs);
}

} // namespace

std::array<std::array<double, 4>, 4> ChshStrategy::outcome_distribution() const {
    std::array<std::array<double, 4>, 4> dist{};
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            int setting = 2 * x + y;
            if (kind == Kind::ClassicalDeterministic) {
                int a = alice_table[x], b = bob_table[y];
                dist[setting][2 * a + b] = 1.0;
            } else {
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b) {
                        Mat proj = kron(angle_projector(alice_angles[x], a),
                                        angle_projector(bob_angles[y], b));
                        dist[setting][2 * a + b] =
                            std::max((proj * state).trace().real(), 0.0);
                    }
            }
        }
    return dist;
}

double ChshStrategy::win_probability() const {
    auto dist = outcome_distribution();
    double win = 0.0;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    if ((a ^ b) == (x & y)) win += 0.25 * dist[2 * x + y][2 * a + b];
    return win;
}

ChshResult play_chsh(const ChshStrategy& strategy, std::uint64_t trials, std::uint64_t seed) {
    auto dist = strategy.outcome_distribution();
    CounterRng master(seed);
    ChshResult res;
    res.trials = trials;

    std::array<std::array<std::uint64_t, 4>, 4> counts{};
    std::array<std::uint64_t, 4> setting_counts{};
    for (std::uint64_t i = 0; i < trials; ++i) {
        CounterRng rng = master.substream(i);
        int x = rng.next_bit(), y = rng.next_bit();
        int setting = 2 * x + y;
        std::vector<double> p(dist[setting].begin(), dist[setting].end());
        int joint = sample_from(rng, p);
        int a = joint >> 1, b = joint & 1;
        ++counts[setting][joint];
        ++setting_counts[setting];
        if ((a ^ b) == (x & y)) ++res.wins;
    }
    res.win_fraction = static_cast<double>(res.wins) / static_cast<double>(trials);

    double chsh = 0.0;
    res.max_conditional_prob = 0.0;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            int setting = 2 * x + y;
            if (!setting_counts[setting]) continue;
            double c_xy = (x == 1 && y == 1) ? -1.0 : 1.0;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    double pab = static_cast<double>(counts[setting][2 * a + b]) /
                                 static_cast<double>(setting_counts[setting]);
                    double d_ab = (a == b) ? 1.0 : -1.0;
                    chsh += c_xy * d_ab * pab;
                    res.max_conditional_prob = std::max(res.max_conditional_prob, pab);
                }
        }
    res.empirical_chsh_value = chsh;
    return res;
}

double chsh_best_classical() {
    double best = 0.0;
    for (int a0 = 0; a0 < 2; ++a0)
        for (int a1 = 0; a1 < 2; ++a1)
            for (int b0 = 0; b0 < 2; ++b0)
                for (int b1 = 0; b1 < 2; ++b1)
                    best = std::max(best,
                                    ChshStrategy::classical(a0, a1, b0, b1).win_probability());
    return best;
}

const char* protocol_name(ProtocolId id) {
    switch (id) {
    case ProtocolId::Bb84: return "bb84";
    case ProtocolId::SixState: return "six-state";
    case ProtocolId::B92: return "b92";
    case ProtocolId::Lm05: return "lm05";
    case ProtocolId::Sdc: return "sdc";
    }
    return "unknown";
}

} // namespace qkdlab
