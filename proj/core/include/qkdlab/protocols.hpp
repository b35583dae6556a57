#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qkdlab/quantum.hpp"
#include "qkdlab/rng.hpp"

namespace qkdlab {

// ---------------------------------------------------------------------------
// configuration
// ---------------------------------------------------------------------------

enum class ProtocolId { Bb84, SixState, B92, Lm05, Sdc };

struct ChannelModel {
    enum class Kind { Depolarizing, Lossy, Composed };

    Kind kind = Kind::Depolarizing;
    double p = 1.0;   // depolarizing: rho -> p rho + (1-p) 1/d
    double eta = 1.0; // lossy: survival probability
    std::vector<ChannelModel> stages;

    static ChannelModel depolarizing(double p);
    static ChannelModel lossy(double eta);
    static ChannelModel composed(std::vector<ChannelModel> stages);

    void validate() const;
    bool is_lossless() const;

    /// Mixes the state in place (exactly); returns false if the photon was
    /// lost on a lossy stage.
    bool apply(CounterRng& rng, Mat& rho) const;
};

struct DetectorModel {
    double efficiency = 1.0;
    double dark_count = 0.0; // per detector and gate
    enum class DoubleClickPolicy { RandomBit, Discard } double_click_policy =
        DoubleClickPolicy::RandomBit;

    void validate() const;
};

struct AttackModel {
    enum class Kind { None, InterceptResend, UsdReplace, EntangleResend } kind = Kind::None;
};

struct ProtocolConfig {
    ProtocolId protocol = ProtocolId::Bb84;
    std::uint64_t rounds = 1;
    double basis_bias_x = 0.5;  // probability of choosing the X basis
    double encode_prob = 0.8;   // r for LM05/SDC
    int lm05_version = 1;       // 1: X-basis checks, 2: random X/Z checks
    ChannelModel channel;       // Alice -> Bob
    std::optional<ChannelModel> channel_back; // Bob -> Alice; defaults to `channel`
    DetectorModel detector;
    AttackModel attack;
    std::uint64_t seed = 0;
    bool keep_records = false;

    void validate() const;
};

// ---------------------------------------------------------------------------
// results
// ---------------------------------------------------------------------------

/// One protocol round. Fields not meaningful for a protocol stay at their
/// defaults (-1 for unknown bits/bases).
struct RoundRecord {
    std::uint64_t round = 0;
    int alice_bit = -1;
    int alice_basis = -1;
    int bob_bit = -1;
    int bob_basis = -1;
    bool detected = false;
    bool sifted = false;
};

struct Bb84Summary {
    std::uint64_t rounds = 0;
    std::uint64_t detected = 0;
    std::uint64_t sifted = 0;
    std::uint64_t double_clicks = 0;
    std::array<std::uint64_t, 3> sifted_per_basis{};
    std::array<std::uint64_t, 3> errors_per_basis{};
    bool qber_defined = false;
    double qber = 0.0;
    std::array<double, 3> qber_per_basis{};
    double detection_rate = 0.0;
};

struct B92Summary {
    std::uint64_t rounds = 0;
    std::uint64_t conclusive = 0;
    std::uint64_t inconclusive = 0;
    std::uint64_t errors = 0;
    double inconclusive_fraction = 0.0;
    bool error_rate_defined = false;
    double conclusive_error_rate = 0.0;
};

struct Lm05Summary {
    std::uint64_t rounds = 0;
    std::uint64_t key_rounds = 0;
    std::uint64_t key_errors = 0;
    bool qf_defined = false;
    double q_f = 0.0; // key-round error rate
    // check rounds, basis-matched, per basis (0 = Z, 1 = X)
    std::array<std::uint64_t, 2> check1_rounds{};
    std::array<std::uint64_t, 2> check1_errors{};
    std::array<std::uint64_t, 2> check2_rounds{};
    std::array<std::uint64_t, 2> check2_errors{};
    std::array<double, 2> q_g1{}; // first channel (Bob vs Alice preparation)
    std::array<double, 2> q_g2{}; // second channel (Alice vs Bob re-preparation)
};

struct SdcSummary {
    std::uint64_t rounds = 0;
    std::uint64_t key_rounds = 0;
    std::uint64_t check_rounds = 0;
    // joint error pattern counts: index = 2*(first-bit error) + (second-bit error)
    std::array<std::uint64_t, 4> key_pattern{};
    std::array<std::uint64_t, 4> check_pattern{};
    std::array<double, 4> q_f{}; // Bell-vs-encoding error distribution
    std::array<double, 4> q_g{}; // Z/X check error distribution
};

struct SimResult {
    std::vector<RoundRecord> records;
    Bb84Summary bb84;
    B92Summary b92;
    Lm05Summary lm05;
    SdcSummary sdc;
    ProtocolId protocol = ProtocolId::Bb84;
    /// Sifted key material (both sides) for pipeline feeding.
    std::vector<std::uint8_t> key_alice;
    std::vector<std::uint8_t> key_bob;
};

SimResult run_bb84(const ProtocolConfig& config);
SimResult run_sixstate(const ProtocolConfig& config);
SimResult run_b92(const ProtocolConfig& config);
SimResult run_lm05(const ProtocolConfig& config);
SimResult run_sdc(const ProtocolConfig& config);

/// Dispatch on config.protocol.
SimResult run_protocol(const ProtocolConfig& config);

// ---------------------------------------------------------------------------
// CHSH game
// ---------------------------------------------------------------------------

struct ChshStrategy {
    enum class Kind { ClassicalDeterministic, Quantum } kind = Kind::ClassicalDeterministic;
    // classical: outputs per input bit
    std::array<int, 2> alice_table{0, 0};
    std::array<int, 2> bob_table{0, 0};
    // quantum: shared two-qubit state, X-Z plane measurement angles per input
    Mat state;
    std::array<double, 2> alice_angles{0.0, 0.0};
    std::array<double, 2> bob_angles{0.0, 0.0};

    static ChshStrategy classical(int a0, int a1, int b0, int b1);
    static ChshStrategy quantum(const Mat& two_qubit_state, std::array<double, 2> alice,
                                std::array<double, 2> bob);
    /// Bell state with the standard angle set; wins with cos^2(pi/8).
    static ChshStrategy optimal_quantum();

    /// Exact conditional outcome distribution P(a,b|x,y).
    std::array<std::array<double, 4>, 4> outcome_distribution() const;
    /// Exact winning probability under uniformly random inputs.
    double win_probability() const;
};

struct ChshResult {
    std::uint64_t trials = 0;
    std::uint64_t wins = 0;
    double win_fraction = 0.0;
    double empirical_chsh_value = 0.0; // I from the empirical correlators
    double max_conditional_prob = 0.0; // max over (a,b,x,y) of P(a,b|x,y)
};

ChshResult play_chsh(const ChshStrategy& strategy, std::uint64_t trials, std::uint64_t seed);

/// Exhaustive scan of local deterministic strategies; returns the best
/// exact winning probability (3/4).
double chsh_best_classical();

/// Three-outcome unambiguous discrimination POVM for {|0>, |+>}.
Povm b92_usd_povm();

const char* protocol_name(ProtocolId id);

} // namespace qkdlab
