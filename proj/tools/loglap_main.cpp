// loglap: evaluate logarithmic lattice and Schrodinger operators, run
// extension traces and convergence studies, and verify the library's
// identities end to end.

#include "loglap/quadrature.hpp"
#include "loglap/report.hpp"
#include "loglap/study.hpp"
#include "loglap/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <string>

namespace {

int fail_with_record(const char* type, const std::string& message, int code)
{
    nlohmann::json record = {{"error", {{"type", type}, {"message", message}}}};
    std::cerr << record.dump() << "\n";
    return code;
}

void deliver(const loglap::StudyOutput& result, const loglap::StudyConfig& config)
{
    const std::string& primary = config.format == "json" ? result.json : result.csv;
    if (config.out.empty()) {
        std::cout << primary;
        return;
    }
    std::ofstream out(config.out);
    if (!out) throw std::invalid_argument("cannot open output file '" + config.out + "'");
    out << primary;
    // a file sink keeps stdout free for the JSON summary
    if (config.format != "json") std::cout << result.json << "\n";
}

std::string parse_sites(const std::string& text, loglap::StudyConfig& config)
{
    auto dots = text.find("..");
    if (dots == std::string::npos) return "sites: expected LO..HI";
    try {
        config.sites_lo = std::stoi(text.substr(0, dots));
        config.sites_hi = std::stoi(text.substr(dots + 2));
    } catch (const std::exception&) {
        return "sites: expected integers LO..HI";
    }
    if (config.sites_lo > config.sites_hi) return "sites: LO exceeds HI";
    return "";
}

} // namespace

int main(int argc, char** argv)
{
    loglap::StudyConfig config;

    // the config file seeds defaults; explicit flags override it
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            try {
                loglap::apply_config_file(config, argv[i + 1]);
            } catch (const std::exception& e) {
                return fail_with_record("config", e.what(), 3);
            }
        }
    }

    CLI::App app{"logarithmic lattice and Schrodinger operator studies"};
    app.require_subcommand(0, 1);
    std::string config_path, sites_text;

    app.add_option("--config", config_path, "key=value config file (flags win)");

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--tol", config.abs_tol, "absolute quadrature tolerance");
        cmd->add_option("--rel-tol", config.rel_tol, "relative quadrature tolerance");
        cmd->add_option("--max-subdivisions", config.max_subdivisions,
                        "adaptive subdivision budget");
        cmd->add_option("--out", config.out, "output file (default stdout)");
        cmd->add_option("--format", config.format, "csv or json");
        cmd->add_option("--threads", config.threads,
                        "worker cap (LOGLAP_THREADS also applies)");
    };

    CLI::App* dapply = app.add_subcommand("discrete-apply",
                                          "log-Laplacian values over a site range");
    dapply->add_option("--input", config.input, "delta:SITE or coeffs:OFFSET:v1,v2,...");
    dapply->add_option("--sites", sites_text, "site range LO..HI");
    dapply->add_option("--max-lag", config.max_lag, "kernel table reach");
    add_common(dapply);

    CLI::App* dext = app.add_subcommand("discrete-extension",
                                        "extension trace and boundary recovery at a site");
    dext->add_option("--input", config.input, "delta:SITE or coeffs:OFFSET:v1,v2,...");
    dext->add_option("--site", config.site, "evaluation site");
    dext->add_option("--t-grid", config.t_grid, "geo:t0,n or list:v1;v2;...");
    add_common(dext);

    CLI::App* dker = app.add_subcommand("discrete-kernels", "short/long-time kernel table");
    dker->add_option("--max-lag", config.max_lag, "largest tabulated lag");
    add_common(dker);

    CLI::App* sapply = app.add_subcommand("schrodinger-apply",
                                          "pointwise, extension and spectral values");
    sapply->add_option("--potential", config.potential, "free, constant:m=M or harmonic");
    sapply->add_option("--dim", config.dim, "space dimension (>= 3)");
    sapply->add_option("--input", config.input_profile, "gaussian:A,a");
    sapply->add_option("--x", config.x_norm, "evaluation point norm (along e1)");
    sapply->add_option("--t-grid", config.t_grid, "geo:t0,n or list:v1;v2;...");
    add_common(sapply);

    CLI::App* scorr = app.add_subcommand("schrodinger-correctors",
                                         "critical radius and corrector table");
    scorr->add_option("--potential", config.potential, "constant:m=M or harmonic");
    scorr->add_option("--dim", config.dim, "space dimension (>= 3)");
    scorr->add_option("--x-values", config.x_values, "list:x1;x2;... of point norms");
    add_common(scorr);

    CLI::App* verify = app.add_subcommand("verify", "run the full verification suite");
    std::string verify_out;
    verify->add_option("--out", verify_out, "write the pass/fail table as CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 3;
    }

    if (verify->parsed()) {
        auto results = loglap::run_verification_suite(&std::cout);
        if (!verify_out.empty()) {
            std::ofstream out(verify_out);
            if (!out) return fail_with_record("config", "cannot open '" + verify_out + "'", 3);
            out << loglap::verification_csv(results);
        }
        return loglap::all_passed(results) ? 0 : 1;
    }

    for (CLI::App* cmd : {dapply, dext, dker, sapply, scorr}) {
        if (cmd->parsed()) config.command = cmd->get_name();
    }
    if (config.command.empty())
        return fail_with_record("config", "no subcommand given (see --help)", 3);

    if (!sites_text.empty()) {
        std::string err = parse_sites(sites_text, config);
        if (!err.empty()) return fail_with_record("config", err, 3);
    }

    try {
        loglap::StudyOutput result = loglap::run_study(config);
        deliver(result, config);
    } catch (const loglap::NonConvergenceError& e) {
        return fail_with_record("non_convergence", e.what(), 2);
    } catch (const std::invalid_argument& e) {
        return fail_with_record("config", e.what(), 3);
    } catch (const std::exception& e) {
        return fail_with_record("internal", e.what(), 3);
    }
    return 0;
}
