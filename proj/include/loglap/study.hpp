#pragma once

// Configuration and execution of the CLI studies: operator evaluations,
// extension traces, kernel tables, corrector tables.  Configs come from a
// flat key=value file with command-line overrides; outputs are
// deterministic CSV/JSON.

#include "loglap/lattice.hpp"
#include "loglap/quadrature.hpp"
#include "loglap/schrodinger.hpp"

#include <functional>
#include <string>
#include <vector>

namespace loglap {

struct StudyConfig {
    std::string command; // discrete-apply | discrete-extension | discrete-kernels |
                         // schrodinger-apply | schrodinger-correctors

    // quadrature and output
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    double split_point = 1.0;
    int max_subdivisions = 4000;
    std::string out;              // output path; empty = stdout
    std::string format = "csv";   // csv | json
    int threads = 0;              // 0 = decide from LOGLAP_THREADS / hardware

    // discrete setting
    std::string input = "delta:0";            // delta:SITE | coeffs:OFFSET:v1,v2,...
    int site = 0;
    int sites_lo = -5;
    int sites_hi = 5;
    int max_lag = 32;
    std::string t_grid = "geo:0.25,11";       // geo:t0,n (ratio 1/2) | list:v1;v2;...
    std::string s_grid = "list:0.2;0.1;0.05;0.025";

    // schrodinger setting
    std::string potential = "constant:m=1";   // free | constant:m=M | harmonic
    int dim = 3;
    std::string input_profile = "gaussian:1,1"; // gaussian:A,a
    double x_norm = 0.0;
    std::string x_values = "list:0;0.5;1;2";

    QuadratureSpec quadrature() const;
};

struct StudyOutput {
    std::string csv;    // primary tabular output
    std::string json;   // summary with error estimates and provenance
};

/// Parse "geo:t0,n" (ratio 1/2) or "list:v1;v2;...".
std::vector<double> parse_grid(const std::string& descriptor);

/// Parse "delta:SITE" or "coeffs:OFFSET:v1,v2,...".
LatticeFunction parse_lattice_input(const std::string& descriptor);

/// Parse "free" | "constant:m=M" | "harmonic".
PotentialModel parse_potential(const std::string& descriptor, int dim);

/// Parse "gaussian:A,a".
RadialProfile parse_profile(const std::string& descriptor);

/// Apply key=value lines from a config file; parse errors name the
/// offending key and line number.
void apply_config_file(StudyConfig& config, const std::string& path);

/// Apply a single key=value assignment (the config-file grammar).
void apply_config_entry(StudyConfig& config, const std::string& key,
                        const std::string& value, int line_no = 0);

/// Run the configured study.  Deterministic for a fixed config; throws
/// std::invalid_argument on config errors and NonConvergenceError on
/// numerical failure.
StudyOutput run_study(const StudyConfig& config);

/// Ordered parallel map: results[i] = fn(i), computed by up to
/// `threads` workers (capped by LOGLAP_THREADS), assembled in index order.
std::vector<double> parallel_map(int count, int threads,
                                 const std::function<double(int)>& fn);

/// Worker count from the config and the LOGLAP_THREADS environment cap.
int effective_threads(int requested);

} // namespace loglap
