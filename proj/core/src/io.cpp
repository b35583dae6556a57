#include "qkdlab/io.hpp"

#include <ostream>

namespace qkdlab {

Json matrix_to_json(const Mat& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.cols(); ++j)
            row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

Mat matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix JSON must be an array");
    int rows = static_cast<int>(j.size());
    int cols = static_cast<int>(j.at(0).size());
    Mat m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            const Json& cell = j.at(r).at(c);
            m(r, c) = Cplx(cell.at(0).get<double>(), cell.at(1).get<double>());
        }
    return m;
}

Json povm_to_json(const Povm& p) {
    Json out;
    out["dim"] = p.dim;
    Json els = Json::array();
    for (const auto& e : p.elements) els.push_back(matrix_to_json(e));
    out["elements"] = std::move(els);
    return out;
}

Povm povm_from_json(const Json& j) {
    std::vector<Mat> els;
    for (const auto& e : j.at("elements")) els.push_back(matrix_from_json(e));
    int dim = j.contains("dim") ? j.at("dim").get<int>() : static_cast<int>(els.front().rows());
    return Povm(dim, std::move(els));
}

namespace {

ProtocolId protocol_id_from_string(const std::string& s) {
    if (s == "bb84") return ProtocolId::Bb84;
    if (s == "six-state" || s == "sixstate") return ProtocolId::SixState;
    if (s == "b92") return ProtocolId::B92;
    if (s == "lm05") return ProtocolId::Lm05;
    if (s == "sdc") return ProtocolId::Sdc;
    throw std::invalid_argument("unknown protocol: " + s);
}

ChannelModel channel_from_json(const Json& j) {
    std::string kind = j.value("kind", "depolarizing");
    if (kind == "depolarizing") return ChannelModel::depolarizing(j.value("p", 1.0));
    if (kind == "lossy") return ChannelModel::lossy(j.value("eta", 1.0));
    if (kind == "composed") {
        std::vector<ChannelModel> stages;
        for (const auto& s : j.at("stages")) stages.push_back(channel_from_json(s));
        return ChannelModel::composed(std::move(stages));
    }
    throw std::invalid_argument("unknown channel kind: " + kind);
}

Json channel_to_json(const ChannelModel& c) {
    Json j;
    switch (c.kind) {
    case ChannelModel::Kind::Depolarizing:
        j["kind"] = "depolarizing";
        j["p"] = c.p;
        break;
    case ChannelModel::Kind::Lossy:
        j["kind"] = "lossy";
        j["eta"] = c.eta;
        break;
    case ChannelModel::Kind::Composed: {
        j["kind"] = "composed";
        Json stages = Json::array();
        for (const auto& s : c.stages) stages.push_back(channel_to_json(s));
        j["stages"] = std::move(stages);
        break;
    }
    }
    return j;
}

} // namespace

ProtocolConfig protocol_config_from_json(const Json& j) {
    ProtocolConfig c;
    c.protocol = protocol_id_from_string(j.at("protocol").get<std::string>());
    c.rounds = j.at("rounds").get<std::uint64_t>();
    c.basis_bias_x = j.value("basis_bias_x", 0.5);
    c.encode_prob = j.value("encode_prob", 0.8);
    c.lm05_version = j.value("lm05_version", 1);
    if (j.contains("channel")) c.channel = channel_from_json(j.at("channel"));
    if (j.contains("channel_back")) c.channel_back = channel_from_json(j.at("channel_back"));
    if (j.contains("detector")) {
        const Json& d = j.at("detector");
        c.detector.efficiency = d.value("efficiency", 1.0);
        c.detector.dark_count = d.value("dark_count", 0.0);
        std::string policy = d.value("double_click_policy", "random-bit");
        if (policy == "random-bit")
            c.detector.double_click_policy = DetectorModel::DoubleClickPolicy::RandomBit;
        else if (policy == "discard")
            c.detector.double_click_policy = DetectorModel::DoubleClickPolicy::Discard;
        else
            throw std::invalid_argument("unknown double-click policy: " + policy);
    }
    if (j.contains("attack")) {
        std::string kind = j.at("attack").value("kind", "none");
        if (kind == "none")
            c.attack.kind = AttackModel::Kind::None;
        else if (kind == "intercept-resend")
            c.attack.kind = AttackModel::Kind::InterceptResend;
        else if (kind == "usd-replace")
            c.attack.kind = AttackModel::Kind::UsdReplace;
        else if (kind == "entangle-resend")
            c.attack.kind = AttackModel::Kind::EntangleResend;
        else
            throw std::invalid_argument("unknown attack kind: " + kind);
    }
    c.seed = j.value("seed", 0ull);
    c.keep_records = j.value("records", false);
    c.validate();
    return c;
}

Json protocol_config_to_json(const ProtocolConfig& c) {
    Json j;
    j["protocol"] = protocol_name(c.protocol);
    j["rounds"] = c.rounds;
    j["basis_bias_x"] = c.basis_bias_x;
    j["encode_prob"] = c.encode_prob;
    j["lm05_version"] = c.lm05_version;
    j["channel"] = channel_to_json(c.channel);
    if (c.channel_back) j["channel_back"] = channel_to_json(*c.channel_back);
    j["detector"] = {{"efficiency", c.detector.efficiency},
                     {"dark_count", c.detector.dark_count},
                     {"double_click_policy",
                      c.detector.double_click_policy ==
                              DetectorModel::DoubleClickPolicy::RandomBit
                          ? "random-bit"
                          : "discard"}};
    const char* attack = "none";
    switch (c.attack.kind) {
    case AttackModel::Kind::None: attack = "none"; break;
    case AttackModel::Kind::InterceptResend: attack = "intercept-resend"; break;
    case AttackModel::Kind::UsdReplace: attack = "usd-replace"; break;
    case AttackModel::Kind::EntangleResend: attack = "entangle-resend"; break;
    }
    j["attack"] = {{"kind", attack}};
    j["seed"] = c.seed;
    j["records"] = c.keep_records;
    return j;
}

Json summary_to_json(const SimResult& result, const ProtocolConfig& config) {
    Json j;
    j["protocol"] = protocol_name(result.protocol);
    j["seed"] = config.seed;
    j["config"] = protocol_config_to_json(config);
    switch (result.protocol) {
    case ProtocolId::Bb84:
    case ProtocolId::SixState: {
        const auto& s = result.bb84;
        j["rounds"] = s.rounds;
        j["detected"] = s.detected;
        j["sifted"] = s.sifted;
        j["double_clicks"] = s.double_clicks;
        j["detection_rate"] = s.detection_rate;
        j["qber_defined"] = s.qber_defined;
        if (s.qber_defined) {
            j["qber"] = s.qber;
            j["qber_per_basis"] = {s.qber_per_basis[0], s.qber_per_basis[1],
                                   s.qber_per_basis[2]};
        }
        break;
    }
    case ProtocolId::B92: {
        const auto& s = result.b92;
        j["rounds"] = s.rounds;
        j["conclusive"] = s.conclusive;
        j["inconclusive_fraction"] = s.inconclusive_fraction;
        j["error_rate_defined"] = s.error_rate_defined;
        if (s.error_rate_defined) j["conclusive_error_rate"] = s.conclusive_error_rate;
        break;
    }
    case ProtocolId::Lm05: {
        const auto& s = result.lm05;
        j["rounds"] = s.rounds;
        j["key_rounds"] = s.key_rounds;
        j["qf_defined"] = s.qf_defined;
        if (s.qf_defined) j["q_f"] = s.q_f;
        j["q_g1"] = {s.q_g1[0], s.q_g1[1]};
        j["q_g2"] = {s.q_g2[0], s.q_g2[1]};
        j["check1_rounds"] = {s.check1_rounds[0], s.check1_rounds[1]};
        j["check2_rounds"] = {s.check2_rounds[0], s.check2_rounds[1]};
        break;
    }
    case ProtocolId::Sdc: {
        const auto& s = result.sdc;
        j["rounds"] = s.rounds;
        j["key_rounds"] = s.key_rounds;
        j["check_rounds"] = s.check_rounds;
        j["q_f"] = {s.q_f[0], s.q_f[1], s.q_f[2], s.q_f[3]};
        j["q_g"] = {s.q_g[0], s.q_g[1], s.q_g[2], s.q_g[3]};
        break;
    }
    }
    return j;
}

void write_records_csv(std::ostream& os, const std::vector<RoundRecord>& records) {
    os << "round,alice_bit,alice_basis,bob_bit,bob_basis,detected,sifted\r\n";
    for (const auto& r : records)
        os << r.round << ',' << r.alice_bit << ',' << r.alice_basis << ',' << r.bob_bit << ','
           << r.bob_basis << ',' << (r.detected ? 1 : 0) << ',' << (r.sifted ? 1 : 0)
           << "\r\n";
}

Json rate_report_to_json(const RateReport& report) {
    Json j;
    j["protocol"] = report.protocol;
    j["inputs"] = report.inputs;
    j["bounds"] = {{"hmin", report.hmin}, {"hmax", report.hmax}, {"leak", report.leak}};
    j["eps"] = {{"pe", report.eps_pe},
                {"cor", report.eps_cor},
                {"pa", report.eps_pa},
                {"total", report.eps_total}};
    Json result;
    result["abort"] = report.aborted;
    if (!report.abort_stage.empty()) result["abort_stage"] = report.abort_stage;
    if (report.has_length) result["length"] = report.length;
    if (report.has_rate) result["rate"] = report.rate;
    result["no_positive_rate"] = report.no_positive_rate;
    j["result"] = std::move(result);
    if (!report.metadata.empty()) j["metadata"] = report.metadata;
    return j;
}

Json decoy_data_to_json(const DecoyData& d) {
    return Json{{"intensities", d.intensities},
                {"gains", d.gains},
                {"error_gains", d.error_gains},
                {"cutoff", d.cutoff}};
}

DecoyData decoy_data_from_json(const Json& j) {
    DecoyData d;
    d.intensities = j.at("intensities").get<std::vector<double>>();
    d.gains = j.at("gains").get<std::vector<double>>();
    if (j.contains("error_gains")) d.error_gains = j.at("error_gains").get<std::vector<double>>();
    d.cutoff = j.value("cutoff", 8);
    d.validate();
    return d;
}

Json decoy_result_to_json(const DecoyResult& r) {
    Json j;
    j["feasible"] = r.feasible;
    if (!r.feasible) {
        j["diagnosis"] = r.diagnosis;
        return j;
    }
    j["y1"] = {{"lo", r.y1.lo}, {"hi", r.y1.hi}};
    Json yields = Json::array();
    for (const auto& iv : r.yields) yields.push_back({{"lo", iv.lo}, {"hi", iv.hi}});
    j["yields"] = std::move(yields);
    if (r.e1) j["e1"] = {{"lo", r.e1->lo}, {"hi", r.e1->hi}};
    return j;
}

Json squash_certificate_to_json(const SquashCertificate& cert) {
    Json j;
    switch (cert.verdict) {
    case SquashVerdict::Feasible: j["verdict"] = "feasible"; break;
    case SquashVerdict::Infeasible: j["verdict"] = "infeasible"; break;
    case SquashVerdict::Undetermined: j["verdict"] = "undetermined"; break;
    }
    j["min_eigenvalue"] = cert.min_eigenvalue;
    j["constraint_residual"] = cert.constraint_residual;
    j["slice_max_min_eigenvalue"] = cert.slice_max_min_eigenvalue;
    if (!cert.note.empty()) j["note"] = cert.note;
    j["witness"] = matrix_to_json(cert.witness);
    return j;
}

PipelineConfig pipeline_config_from_json(const Json& j) {
    PipelineConfig c;
    c.sample_fraction = j.value("sample_fraction", 0.5);
    if (j.contains("sample_bits")) c.sample_bits = j.at("sample_bits").get<std::uint64_t>();
    c.lambda_max = j.value("lambda_max", 0.05);
    c.gamma = j.value("gamma", 0.01);
    c.overlap_c = j.value("overlap_c", 0.5);
    c.eps_pe = j.value("eps_pe", 0.0);
    c.eps_cor = j.value("eps_cor", 0x1p-10);
    c.eps_pa = j.value("eps_pa", 0x1p-21);
    if (j.contains("ir")) {
        const Json& ir = j.at("ir");
        c.ir.rate_margin = ir.value("rate_margin", c.ir.rate_margin);
        if (ir.contains("syndrome_bits")) c.ir.syndrome_bits = ir.at("syndrome_bits").get<int>();
        c.ir.max_iterations = ir.value("max_iterations", c.ir.max_iterations);
    }
    c.seed = j.value("seed", 0ull);
    return c;
}

Json pipeline_result_to_json(const PipelineResult& r) {
    Json j;
    j["report"] = rate_report_to_json(r.report);
    j["final_key_hex"] = bits_to_hex(r.final_key);
    j["final_key_bits"] = r.final_key.size();
    Json t;
    t["sampled_indices"] = r.transcript.sampled_indices;
    t["pe_random_bits"] = r.transcript.pe_random_bits;
    t["syndrome_bits"] = r.transcript.syndrome_bits;
    t["verify_seed_poly"] = r.transcript.verify_seed_poly;
    t["verify_seed_final"] = r.transcript.verify_seed_final;
    t["verify_value"] = r.transcript.verify_value;
    t["pa_seed"] = r.transcript.pa_seed;
    j["transcript"] = std::move(t);
    return j;
}

} // namespace qkdlab
