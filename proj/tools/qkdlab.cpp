// Command-line front end: protocol simulation, key-rate calculators, the
// classical post-processing pipeline, squashing checks and decoy bounds.
//
// Exit codes: 0 success, 1 usage/config error, 2 protocol abort,
// 3 numerical non-convergence.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qkdlab/entropy.hpp"
#include "qkdlab/io.hpp"

namespace {

using namespace qkdlab;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitAbort = 2;
constexpr int kExitNumerical = 3;

Json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    Json j;
    in >> j;
    return j;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        if (!content.empty() && content.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file: " + path);
    out << content;
}

std::uint64_t require_seed(const std::optional<std::uint64_t>& cli_seed, const Json& config) {
    if (cli_seed) return *cli_seed;
    if (config.contains("seed")) return config.at("seed").get<std::uint64_t>();
    throw std::invalid_argument("a seed is required (--seed or config \"seed\")");
}

// --- simulate ---------------------------------------------------------------

int cmd_simulate(const std::string& config_path, std::optional<std::uint64_t> seed,
                 const std::string& out, const std::string& format,
                 const std::string& records_out) {
    Json cfg_json = load_config(config_path);
    cfg_json["seed"] = require_seed(seed, cfg_json);
    if (format == "csv" || !records_out.empty()) cfg_json["records"] = true;
    ProtocolConfig config = protocol_config_from_json(cfg_json);

    SimResult result = run_protocol(config);
    if (!records_out.empty()) {
        std::ostringstream os;
        write_records_csv(os, result.records);
        write_output(records_out, os.str());
    }
    if (format == "csv") {
        std::ostringstream os;
        write_records_csv(os, result.records);
        write_output(out, os.str());
    } else {
        write_output(out, summary_to_json(result, config).dump(2));
    }
    return kExitOk;
}

// --- keyrate ----------------------------------------------------------------

RateReport point_rate(const std::string& calculator, const Json& inputs) {
    RateReport rep;
    rep.protocol = calculator;
    double rate = 0.0;
    if (calculator == "lm05") {
        double qg0 = inputs.at("q_g0").get<double>();
        double qg1 = inputs.at("q_g1").get<double>();
        double qf = inputs.at("q_f").get<double>();
        rate = lm05_rate(qg0, qg1, qf);
        rep.inputs = {{"q_g0", qg0}, {"q_g1", qg1}, {"q_f", qf}};
    } else if (calculator == "sdc") {
        auto qg = inputs.at("q_g").get<std::vector<double>>();
        auto qf = inputs.at("q_f").get<std::vector<double>>();
        if (qg.size() != 4 || qf.size() != 4)
            throw std::invalid_argument("sdc expects 4-entry q_g and q_f");
        rate = sdc_rate({qg[0], qg[1], qg[2], qg[3]}, {qf[0], qf[1], qf[2], qf[3]});
    } else if (calculator == "bb84") {
        double qx = inputs.at("q_x").get<double>();
        double qz = inputs.at("q_z").get<double>();
        rate = bb84_asymptotic_rate(qx, qz);
        rep.inputs = {{"q_x", qx}, {"q_z", qz}};
    } else if (calculator == "dw") {
        rate = dw_rate(inputs.at("h_key_eve").get<double>(), inputs.at("h_key_bob").get<double>());
    } else if (calculator == "finite-key") {
        // uncertainty bound -> leak chain rule -> leftover hashing; leak
        // defaults to the Shannon limit n h(q) plus 20 verification bits
        double n = inputs.at("n").get<double>();
        double q = inputs.at("qber").get<double>();
        double gamma = inputs.value("gamma", 0.01);
        double c = inputs.value("overlap_c", 0.5);
        double eps_pa = inputs.value("eps_pa", 0x1p-21);
        double leak = inputs.value("leak_bits", n * qkdlab::binary_entropy(q) + 20.0);
        PeOutcome pe;
        pe.kept_bits = static_cast<std::uint64_t>(n);
        pe.lambda_k = q;
        pe.hmax_bound = n * qkdlab::binary_entropy(std::min(q + gamma, 1.0));
        pe.eps_pe = inputs.value("eps_pe", 1e-10);
        EpsBudget eps;
        eps.eps_pa = eps_pa;
        RateReport fk = finite_key_length(pe, OverlapC(c), leak, eps);
        fk.inputs = {{"n", n}, {"qber", q}, {"gamma", gamma}, {"overlap_c", c}};
        return fk;
    } else {
        throw std::invalid_argument("unknown calculator: " + calculator);
    }
    rep.has_rate = true;
    rep.rate = std::max(rate, 0.0);
    rep.no_positive_rate = rate <= 0.0;
    return rep;
}

int cmd_keyrate(const std::string& config_path, const std::string& out,
                const std::string& format) {
    Json cfg = load_config(config_path);
    std::string calculator = cfg.at("calculator").get<std::string>();

    if (cfg.contains("sweep")) {
        const Json& sweep = cfg.at("sweep");
        std::string param = sweep.at("param").get<std::string>();
        double from = sweep.at("from").get<double>();
        double to = sweep.at("to").get<double>();
        double step = sweep.at("step").get<double>();
        if (step <= 0) throw std::invalid_argument("sweep step must be positive");

        bool length_sweep = calculator == "finite-key";
        std::ostringstream csv;
        Json rows = Json::array();
        csv << param << ',' << (length_sweep ? "length" : "rate") << "\r\n";
        int n_steps = static_cast<int>(std::floor((to - from) / step + 1e-9));
        for (int i = 0; i <= n_steps; ++i) {
            double q = from + i * step;
            Json inputs = cfg.value("inputs", Json::object());
            inputs[param] = q;
            // symmetric single-parameter sweeps fill the standard arguments
            if (calculator == "lm05" && param == "q") {
                inputs["q_g0"] = q;
                inputs["q_g1"] = q;
                inputs["q_f"] = q;
            }
            if (calculator == "bb84" && param == "q") {
                inputs["q_x"] = q;
                inputs["q_z"] = q;
            }
            RateReport rep = point_rate(calculator, inputs);
            if (length_sweep) {
                csv << q << ',' << rep.length << "\r\n";
                rows.push_back({{param, q}, {"length", rep.length}});
            } else {
                csv << q << ',' << rep.rate << "\r\n";
                rows.push_back({{param, q}, {"rate", rep.rate}});
            }
        }
        if (format == "csv")
            write_output(out, csv.str());
        else
            write_output(out, rows.dump(2));
        return kExitOk;
    }

    RateReport rep = point_rate(calculator, cfg.value("inputs", Json::object()));
    write_output(out, rate_report_to_json(rep).dump(2));
    return kExitOk;
}

// --- pipeline ----------------------------------------------------------------

int cmd_pipeline(const std::string& config_path, std::optional<std::uint64_t> seed,
                 const std::string& out) {
    Json cfg = load_config(config_path);
    std::uint64_t run_seed = require_seed(seed, cfg);

    BitString key_a, key_b;
    std::string source = cfg.value("source", "simulate");
    if (source == "simulate") {
        Json sim_cfg = cfg.at("simulate");
        sim_cfg["seed"] = run_seed;
        ProtocolConfig pc = protocol_config_from_json(sim_cfg);
        SimResult sim = run_protocol(pc);
        key_a = sim.key_alice;
        key_b = sim.key_bob;
    } else if (source == "bits") {
        for (char ch : cfg.at("key_a").get<std::string>())
            key_a.push_back(ch == '1' ? 1 : 0);
        for (char ch : cfg.at("key_b").get<std::string>())
            key_b.push_back(ch == '1' ? 1 : 0);
    } else {
        throw std::invalid_argument("unknown pipeline source: " + source);
    }

    PipelineConfig pl = pipeline_config_from_json(cfg.value("pipeline", Json::object()));
    pl.seed = run_seed;
    PipelineResult result = run_pipeline(key_a, key_b, pl);
    result.report.inputs["seed"] = static_cast<double>(run_seed);
    Json j = pipeline_result_to_json(result);
    // echo the full config so the output replays from itself
    cfg["seed"] = run_seed;
    j["config"] = cfg;
    write_output(out, j.dump(2));
    return result.report.aborted ? kExitAbort : kExitOk;
}

// --- squash-check -------------------------------------------------------------

int cmd_squash_check(const std::string& config_path, const std::string& out) {
    Json cfg = load_config(config_path);
    std::optional<SquashProblem> problem;
    if (cfg.contains("preset")) {
        problem = squash_preset_by_name(cfg.at("preset").get<std::string>());
        if (!problem)
            throw std::invalid_argument("unknown preset: " +
                                        cfg.at("preset").get<std::string>());
    } else {
        problem.emplace(povm_from_json(cfg.at("target")), povm_from_json(cfg.at("full")));
    }

    Json result;
    SquashCertificate cert = check_feasibility(*problem);
    result["certificate"] = squash_certificate_to_json(cert);
    if (cfg.value("noise_search", false)) {
        auto res = noise_to_feasibility(*problem, cfg.value("noise_tolerance", 1e-3));
        result["noise_search"] = {
            {"feasible_without_noise", res.feasible_without_noise},
            {"lambda_low", res.lambda_low},
            {"lambda_high", res.lambda_high},
        };
    }
    write_output(out, result.dump(2));
    return kExitOk;
}

// --- decoy --------------------------------------------------------------------

int cmd_decoy(const std::string& config_path, const std::string& out) {
    Json cfg = load_config(config_path);
    DecoyData data = decoy_data_from_json(cfg);
    DecoyResult result = decoy_bounds(data);
    Json j = decoy_result_to_json(result);
    j["data"] = decoy_data_to_json(data);
    write_output(out, j.dump(2));
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"desk-scale QKD laboratory"};
    app.require_subcommand(1);

    std::string config_path, out_path = "-", format = "json", records_out;
    std::optional<std::uint64_t> seed;

    auto add_common = [&](CLI::App* sub, bool with_format) {
        sub->add_option("--config", config_path, "JSON config file")->required();
        sub->add_option("--seed", seed, "64-bit RNG seed");
        sub->add_option("--out", out_path, "output path (default stdout)");
        if (with_format)
            sub->add_option("--format", format, "output format")
                ->check(CLI::IsMember({"json", "csv"}));
    };

    auto* simulate = app.add_subcommand("simulate", "run a protocol simulation");
    add_common(simulate, true);
    simulate->add_option("--records-out", records_out,
                         "also write the round-record CSV to this path");
    auto* keyrate = app.add_subcommand("keyrate", "evaluate key-rate calculators");
    add_common(keyrate, true);
    auto* pipeline = app.add_subcommand("pipeline", "run the post-processing pipeline");
    add_common(pipeline, false);
    auto* squash = app.add_subcommand("squash-check", "decide squashing-model feasibility");
    add_common(squash, false);
    auto* decoy = app.add_subcommand("decoy", "decoy-state yield bounds");
    add_common(decoy, false);

    try {
        app.parse(argc, argv);
        if (simulate->parsed())
            return cmd_simulate(config_path, seed, out_path, format, records_out);
        if (keyrate->parsed()) return cmd_keyrate(config_path, out_path, format);
        if (pipeline->parsed()) return cmd_pipeline(config_path, seed, out_path);
        if (squash->parsed()) return cmd_squash_check(config_path, out_path);
        if (decoy->parsed()) return cmd_decoy(config_path, out_path);
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const SolverError& e) {
        std::cerr << "error: " << e.what() << " (best bound " << e.best_bound << ")\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}
