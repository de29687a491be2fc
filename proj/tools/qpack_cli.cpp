// Command-line experiment runner. Links only the qpack C API; every run goes
// through qpack_run_json so CLI results match library results byte for byte.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qpack.h"

namespace {

using nlohmann::json;

int run(const json& config, const std::string& output, const std::string& format) {
    char* report_text = nullptr;
    const qpack_status st = qpack_run_json(config.dump().c_str(), &report_text);
    if (st != QPACK_OK) {
        std::cerr << "error: " << qpack_last_error() << "\n";
        return 2;
    }
    json report = json::parse(report_text);
    qpack_string_free(report_text);

    std::string text;
    if (format == "csv") {
        // per-outcome probability table, when the report carries one
        std::ostringstream os;
        const json& agg = report["aggregates"];
        const char* key = agg.contains("distribution")  ? "distribution"
                          : agg.contains("per_iteration") ? "per_iteration"
                                                          : nullptr;
        if (!key) {
            std::cerr << "error: this subcommand has no CSV table; use --format json\n";
            return 2;
        }
        os << "outcome,probability\n";
        int i = 0;
        for (const auto& v : agg[key]) os << i++ << "," << v.get<double>() << "\n";
        text = os.str();
    } else {
        text = report.dump(2) + "\n";
    }

    if (output.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(output, std::ios::binary);
        if (!f) {
            std::cerr << "error: cannot write " << output << "\n";
            return 2;
        }
        f << text;
    }
    for (const auto& c : report["checks"])
        if (!c["pass"].get<bool>())
            std::cerr << "check failed: " << c["name"].get<std::string>()
                      << " (value " << c["value"].get<double>() << ", expected "
                      << c["expected"].get<double>() << ")\n";
    return report["all_passed"].get<bool>() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qpack: gauge-invariant hybrid-qudit simulation workbench"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    json config = json::object();
    std::string config_path, output, format = "json";

    app.add_option("--config", config_path, "JSON config file (flags override it)");
    app.add_option("--output", output, "write the report here instead of stdout");
    app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    json flags = json::object();
    auto opt_int = [&](CLI::App* cmd, const std::string& name, const std::string& key,
                       const std::string& help) {
        cmd->add_option_function<long>(
            name, [&flags, key](long v) { flags[key] = v; }, help);
    };
    auto opt_double = [&](CLI::App* cmd, const std::string& name, const std::string& key,
                          const std::string& help) {
        cmd->add_option_function<double>(
            name, [&flags, key](double v) { flags[key] = v; }, help);
    };
    auto opt_str = [&](CLI::App* cmd, const std::string& name, const std::string& key,
                       const std::string& help) {
        cmd->add_option_function<std::string>(
            name, [&flags, key](const std::string& v) { flags[key] = v; }, help);
    };
    auto common = [&](CLI::App* cmd) {
        opt_int(cmd, "--d", "d", "internal dimension");
        opt_int(cmd, "--D", "D", "external dimension");
        opt_int(cmd, "--seed", "seed", "random seed");
        opt_int(cmd, "--trials", "trials", "trial count");
    };

    auto* gates = app.add_subcommand("gates-verify", "gate identity suite");
    common(gates);

    auto* bases = app.add_subcommand("bases-verify", "Bell/MUB construction suite");
    common(bases);

    auto* qec = app.add_subcommand("qec", "error-correcting code verification");
    common(qec);
    std::string qec_variant = "shor";
    qec->add_option("variant", qec_variant, "shor | steane | surface | inject")
        ->check(CLI::IsMember({"shor", "steane", "surface", "inject"}));
    opt_int(qec, "--local-dim", "local_dim", "qudit dimension N (sets d=N, D=1)");
    opt_int(qec, "--L", "L", "surface-code distance");
    opt_int(qec, "--r", "r", "theta parameter for injection");
    opt_double(qec, "--p", "p", "physical error rate for Monte Carlo");
    qec->add_flag("--exhaustive", "kept for config symmetry; exhaustive is the default");

    auto* compile = app.add_subcommand("compile", "Solovay-Kitaev synthesis");
    common(compile);
    opt_int(compile, "--t0", "t0", "base net depth");
    opt_int(compile, "--levels", "levels", "recursion levels");
    opt_int(compile, "--targets", "targets", "random targets");
    opt_double(compile, "--dedup-radius", "dedup_radius", "net deduplication radius");

    auto* protocol = app.add_subcommand("protocol", "communication protocols");
    common(protocol);
    std::string protocol_variant = "six-state";
    protocol->add_option("variant", protocol_variant,
                         "teleport | superdense | six-state | bb84 | b92 | cglmp | "
                         "secret-share | randomness | qsdc")
        ->required();
    opt_str(protocol, "--eve", "eve", "none | intercept");
    opt_double(protocol, "--p-dec", "p_dec", "decoy probability");
    opt_int(protocol, "--m-bases", "m_bases", "MUB count");
    opt_int(protocol, "--parties", "parties", "secret-sharing parties");
    opt_double(protocol, "--bias", "bias", "randomness source bias");

    auto* algorithm = app.add_subcommand("algorithm", "algorithm kernels");
    common(algorithm);
    std::string algorithm_variant = "grover";
    algorithm->add_option("variant", algorithm_variant,
                          "grover | qft | qpe | shor-factor | hhl | dtqw | ctqw")
        ->required();
    opt_int(algorithm, "--marked", "marked", "Grover marked label");
    opt_int(algorithm, "--steps", "steps", "walk steps");
    opt_int(algorithm, "--M", "M", "modulus to factor");
    opt_int(algorithm, "--n-c", "n_c", "control register width");
    opt_int(algorithm, "--m", "m", "HHL phase-register width");
    opt_int(algorithm, "--sites", "sites", "register width");
    opt_double(algorithm, "--t", "t", "evolution time");

    auto* metrology = app.add_subcommand("metrology", "quantum Fisher information");
    common(metrology);
    std::string metrology_variant = "qfi";
    metrology->add_option("variant", metrology_variant, "qfi | qfim | dephased");
    opt_int(metrology, "--sites", "sites", "probe sites");
    opt_double(metrology, "--gamma", "gamma", "dephasing rate");
    opt_double(metrology, "--t", "t", "evolution time");

    auto* noise = app.add_subcommand("noise", "noise-budget arithmetic");
    common(noise);
    std::string noise_variant = "budget";
    noise->add_option("variant", noise_variant, "budget | threshold | leak-mc");
    opt_double(noise, "--p-gc", "noise.p_gc", "GC Pauli rate");
    opt_double(noise, "--p-gv0", "noise.p_gv0", "GV prefactor");
    opt_double(noise, "--gap", "noise.gap_over_kT", "energy gap over kT");
    opt_double(noise, "--p-leak", "noise.p_leak", "leakage rate");
    opt_int(noise, "--t-l", "t_L", "LRU interval");
    opt_double(noise, "--p-th", "p_th", "threshold");

    for (CLI::App* s : app.get_subcommands([](const CLI::App*) { return true; }))
        s->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // usage error
    }

    if (!config_path.empty()) {
        std::ifstream f(config_path);
        if (!f) {
            std::cerr << "error: cannot read config " << config_path << "\n";
            return 2;
        }
        json file_config = json::parse(f, nullptr, false);
        if (file_config.is_discarded()) {
            std::cerr << "error: malformed config JSON\n";
            return 2;
        }
        config.update(file_config);
    }

    CLI::App* sub = app.get_subcommands().front();
    config["subcommand"] = sub->get_name();
    if (output.empty())
        if (const char* dir = std::getenv("QPACK_OUTPUT_DIR"); dir && *dir)
            output = std::string(dir) + "/" + sub->get_name() + ".json";
    if (sub == qec) config["variant"] = qec_variant;
    if (sub == protocol) config["variant"] = protocol_variant;
    if (sub == algorithm) config["variant"] = algorithm_variant;
    if (sub == metrology) config["variant"] = metrology_variant;
    if (sub == noise) config["variant"] = noise_variant;

    // flags win over the config file; dotted keys go into the noise block
    for (auto& [key, value] : flags.items()) {
        if (key.rfind("noise.", 0) == 0)
            config["noise"][key.substr(6)] = value;
        else
            config[key] = value;
    }
    return run(config, output, format);
}
