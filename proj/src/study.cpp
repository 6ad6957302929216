#include "loglap/study.hpp"

#include "loglap/discrete_extension.hpp"
#include "loglap/discrete_log.hpp"
#include "loglap/report.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace loglap {

QuadratureSpec StudyConfig::quadrature() const
{
    QuadratureSpec spec;
    spec.abs_tol = abs_tol;
    spec.rel_tol = rel_tol;
    spec.split_point = split_point;
    spec.max_subdivisions = max_subdivisions;
    spec.validate();
    return spec;
}

std::vector<double> parse_grid(const std::string& descriptor)
{
    if (descriptor.rfind("geo:", 0) == 0) {
        std::string body = descriptor.substr(4);
        auto comma = body.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("grid descriptor '" + descriptor +
                                        "': expected geo:t0,count");
        double t0 = std::stod(body.substr(0, comma));
        int count = std::stoi(body.substr(comma + 1));
        if (!(t0 > 0.0) || count < 1 || count > 10000)
            throw std::invalid_argument("grid descriptor '" + descriptor +
                                        "': needs t0 > 0 and 1 <= count <= 10000");
        std::vector<double> grid(static_cast<size_t>(count));
        for (int k = 0; k < count; ++k) grid[static_cast<size_t>(k)] = t0 * std::pow(0.5, k);
        return grid;
    }
    if (descriptor.rfind("list:", 0) == 0) {
        std::vector<double> grid;
        std::stringstream body(descriptor.substr(5));
        std::string item;
        while (std::getline(body, item, ';'))
            if (!item.empty()) grid.push_back(std::stod(item));
        if (grid.empty())
            throw std::invalid_argument("grid descriptor '" + descriptor + "': empty list");
        return grid;
    }
    throw std::invalid_argument("grid descriptor '" + descriptor +
                                "': expected geo:... or list:...");
}

LatticeFunction parse_lattice_input(const std::string& descriptor)
{
    if (descriptor.rfind("delta:", 0) == 0)
        return LatticeFunction::delta(std::stoi(descriptor.substr(6)));
    if (descriptor.rfind("csv:", 0) == 0) {
        std::ifstream in(descriptor.substr(4));
        if (!in)
            throw std::invalid_argument("input '" + descriptor + "': cannot open file");
        return LatticeFunction::from_csv(in);
    }
    if (descriptor.rfind("coeffs:", 0) == 0) {
        std::string body = descriptor.substr(7);
        auto colon = body.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("input '" + descriptor +
                                        "': expected coeffs:OFFSET:v1,v2,...");
        int offset = std::stoi(body.substr(0, colon));
        std::vector<double> vals;
        std::stringstream items(body.substr(colon + 1));
        std::string item;
        while (std::getline(items, item, ','))
            if (!item.empty()) vals.push_back(std::stod(item));
        if (vals.empty())
            throw std::invalid_argument("input '" + descriptor + "': no coefficients");
        return LatticeFunction(offset, std::move(vals));
    }
    throw std::invalid_argument("input '" + descriptor +
                                "': expected delta:SITE, coeffs:OFFSET:v1,... or csv:PATH");
}

PotentialModel parse_potential(const std::string& descriptor, int dim)
{
    if (descriptor == "free") return PotentialModel::free_laplacian(dim);
    if (descriptor == "harmonic") return PotentialModel::harmonic(dim);
    if (descriptor.rfind("constant:m=", 0) == 0)
        return PotentialModel::constant(std::stod(descriptor.substr(11)), dim);
    throw std::invalid_argument("potential '" + descriptor +
                                "': expected free, harmonic or constant:m=M");
}

RadialProfile parse_profile(const std::string& descriptor)
{
    if (descriptor.rfind("gaussian:", 0) == 0) {
        std::string body = descriptor.substr(9);
        auto comma = body.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("profile '" + descriptor + "': expected gaussian:A,a");
        return RadialProfile::gaussian(std::stod(body.substr(0, comma)),
                                       std::stod(body.substr(comma + 1)));
    }
    throw std::invalid_argument("profile '" + descriptor + "': expected gaussian:A,a");
}

void apply_config_entry(StudyConfig& c, const std::string& key, const std::string& value,
                        int line_no)
{
    auto context = [&](const std::string& what) {
        std::string where = line_no > 0 ? " (line " + std::to_string(line_no) + ")" : "";
        return std::invalid_argument("config key '" + key + "'" + where + ": " + what);
    };
    auto as_double = [&](const std::string& v) {
        try {
            size_t pos = 0;
            double d = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument("trailing characters");
            return d;
        } catch (const std::exception&) {
            throw context("expected a number, got '" + v + "'");
        }
    };
    auto as_int = [&](const std::string& v) {
        try {
            size_t pos = 0;
            int i = std::stoi(v, &pos);
            if (pos != v.size()) throw std::invalid_argument("trailing characters");
            return i;
        } catch (const std::exception&) {
            throw context("expected an integer, got '" + v + "'");
        }
    };
    if (key == "command") c.command = value;
    else if (key == "abs_tol") c.abs_tol = as_double(value);
    else if (key == "rel_tol") c.rel_tol = as_double(value);
    else if (key == "split_point") c.split_point = as_double(value);
    else if (key == "max_subdivisions") c.max_subdivisions = as_int(value);
    else if (key == "out") c.out = value;
    else if (key == "format") c.format = value;
    else if (key == "threads") c.threads = as_int(value);
    else if (key == "input") c.input = value;
    else if (key == "site") c.site = as_int(value);
    else if (key == "sites_lo") c.sites_lo = as_int(value);
    else if (key == "sites_hi") c.sites_hi = as_int(value);
    else if (key == "max_lag") c.max_lag = as_int(value);
    else if (key == "t_grid") c.t_grid = value;
    else if (key == "s_grid") c.s_grid = value;
    else if (key == "potential") c.potential = value;
    else if (key == "dim") c.dim = as_int(value);
    else if (key == "input_profile") c.input_profile = value;
    else if (key == "x_norm") c.x_norm = as_double(value);
    else if (key == "x_values") c.x_values = value;
    else throw context("unknown key");
}

void apply_config_file(StudyConfig& config, const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config file '" + path + "': cannot open");
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config file '" + path + "' line " +
                                        std::to_string(line_no) + ": expected key=value");
        apply_config_entry(config, line.substr(0, eq), line.substr(eq + 1), line_no);
    }
}

int effective_threads(int requested)
{
    int n = requested > 0 ? requested
                          : static_cast<int>(std::min(8u, std::thread::hardware_concurrency()));
    if (n < 1) n = 1;
    if (const char* cap = std::getenv("LOGLAP_THREADS")) {
        int limit = std::atoi(cap);
        if (limit >= 1) n = std::min(n, limit);
    }
    return n;
}

std::vector<double> parallel_map(int count, int threads, const std::function<double(int)>& fn)
{
    std::vector<double> results(static_cast<size_t>(count));
    int workers = std::min(effective_threads(threads), count);
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) results[static_cast<size_t>(i)] = fn(i);
        return results;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= count) return;
            try {
                results[static_cast<size_t>(i)] = fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
    return results;
}

namespace {

StudyOutput run_discrete_apply(const StudyConfig& c)
{
    QuadratureSpec spec = c.quadrature();
    LatticeFunction f = parse_lattice_input(c.input);
    if (c.sites_lo > c.sites_hi)
        throw std::invalid_argument("config key 'sites_lo': exceeds sites_hi");

    int span_reach = std::max(std::abs(c.sites_lo - f.min_index()),
                              std::abs(c.sites_hi - f.max_index()));
    int lag_needed = std::max(c.max_lag, span_reach + 30);
    LogKernelTable table = build_kernel_table(lag_needed, spec);

    int count = c.sites_hi - c.sites_lo + 1;
    std::vector<double> pointwise = parallel_map(count, c.threads, [&](int i) {
        return log_laplacian_pointwise(f, c.sites_lo + i, table, spec.abs_tol);
    });
    std::vector<double> spectral = parallel_map(count, c.threads, [&](int i) {
        return log_laplacian_spectral(f, c.sites_lo + i, spec);
    });

    ReportTable table_out;
    table_out.columns = {"site", "log_pointwise", "log_spectral", "difference"};
    std::vector<ValueRecord> records;
    for (int i = 0; i < count; ++i) {
        int n = c.sites_lo + i;
        double p = pointwise[static_cast<size_t>(i)];
        double s = spectral[static_cast<size_t>(i)];
        table_out.rows.push_back({std::to_string(n), format_number(p), format_number(s),
                                  format_number(p - s)});
        records.push_back({"site=" + std::to_string(n) + ":log_pointwise", p,
                           10.0 * spec.abs_tol, "kernel sum with gamma renormalization"});
        records.push_back({"site=" + std::to_string(n) + ":log_spectral", s,
                           10.0 * spec.abs_tol, "Fourier multiplier log(4 sin^2(theta/2))"});
    }
    return StudyOutput{table_out.to_csv(), records_to_json(records)};
}

StudyOutput run_discrete_extension(const StudyConfig& c)
{
    QuadratureSpec spec = c.quadrature();
    LatticeFunction f = parse_lattice_input(c.input);
    std::vector<double> grid = parse_grid(c.t_grid);

    ExtensionTrace trace = extension_trace(f, c.site, grid, spec);
    double log_value = log_via_extension(f, c.site, grid, spec);

    std::vector<std::pair<double, double>> samples;
    for (size_t i = 0; i < trace.t.size(); ++i)
        samples.emplace_back(trace.t[i], trace.u[i] + 2.0 * f(c.site) * std::log(trace.t[i]));
    ConvergenceReport rep = richardson_limit(samples, LimitModel::power);

    nlohmann::json summary = {
        {"site", c.site},
        {"log_value", log_value},
        {"error_estimate", rep.error_estimate},
        {"observed_order", rep.observed_order},
        {"samples_used", rep.samples_used},
        {"provenance", "extension boundary limit with explicit constant 2log2 - 2gamma"},
    };
    return StudyOutput{trace.to_csv(), summary.dump(2)};
}

StudyOutput run_discrete_kernels(const StudyConfig& c)
{
    QuadratureSpec spec = c.quadrature();
    LogKernelTable table = build_kernel_table(c.max_lag, spec);
    std::vector<ValueRecord> records;
    records.push_back({"gamma", table.gamma, 0.0, "stored constant"});
    for (int k = 1; k <= table.max_lag; ++k) {
        records.push_back({"w0:" + std::to_string(k), table.w0_at(k), spec.abs_tol,
                           "short-time kernel integral"});
        records.push_back({"w_inf:" + std::to_string(k), table.w_inf_at(k), spec.abs_tol,
                           "long-time kernel integral"});
    }
    return StudyOutput{table.to_csv(), records_to_json(records)};
}

StudyOutput run_schrodinger_apply(const StudyConfig& c)
{
    QuadratureSpec spec = c.quadrature();
    PotentialModel model = parse_potential(c.potential, c.dim);
    RadialProfile f = parse_profile(c.input_profile);
    if (c.x_norm < 0.0)
        throw std::invalid_argument("config key 'x_norm': must be nonnegative");
    std::vector<double> x(static_cast<size_t>(c.dim), 0.0);
    x[0] = c.x_norm;

    double pointwise = log_schrodinger_pointwise(f, x, model, spec);

    bool constant = model.kind == PotentialModel::Kind::constant_mass;
    double extension = std::numeric_limits<double>::quiet_NaN();
    double spectral = std::numeric_limits<double>::quiet_NaN();
    double extension_err = 0.0;
    if (constant && c.dim == 3) {
        std::vector<double> grid = parse_grid(c.t_grid);
        BoundaryRecovery rec = boundary_recovery(f, x, model, grid, spec);
        extension = rec.log_value;
        extension_err = rec.flux.error_estimate;
        spectral = log_schrodinger_spectral(f, x, model.mass, c.dim, spec);
    }

    ReportTable out;
    out.columns = {"x_norm", "log_pointwise", "log_extension", "log_spectral"};
    out.rows.push_back({format_number(c.x_norm), format_number(pointwise),
                        std::isnan(extension) ? "" : format_number(extension),
                        std::isnan(spectral) ? "" : format_number(spectral)});

    std::vector<ValueRecord> records;
    records.push_back({"log_pointwise", pointwise, 10.0 * spec.abs_tol,
                       "kernel integrals with corrector K"});
    if (constant && c.dim == 3) {
        records.push_back({"log_extension", extension, extension_err,
                           "extension boundary limit with corrector h"});
        records.push_back({"log_spectral", spectral, 10.0 * spec.abs_tol,
                           "spectral multiplier log(|xi|^2+m^2)"});
    }
    return StudyOutput{out.to_csv(), records_to_json(records)};
}

StudyOutput run_schrodinger_correctors(const StudyConfig& c)
{
    QuadratureSpec spec = c.quadrature();
    PotentialModel model = parse_potential(c.potential, c.dim);
    std::vector<double> norms = parse_grid(c.x_values);

    int count = static_cast<int>(norms.size());
    auto point_of = [&](int i) {
        std::vector<double> x(static_cast<size_t>(c.dim), 0.0);
        x[0] = norms[static_cast<size_t>(i)];
        return x;
    };
    std::vector<double> rho_v = parallel_map(count, c.threads, [&](int i) {
        auto x = point_of(i);
        return critical_radius(x, model);
    });
    std::vector<double> K_v = parallel_map(count, c.threads, [&](int i) {
        auto x = point_of(i);
        return corrector_K(x, model, spec);
    });
    std::vector<double> h_v = parallel_map(count, c.threads, [&](int i) {
        auto x = point_of(i);
        return corrector_h(x, model, spec);
    });

    AlphaBeta ab = alpha_beta(c.dim, spec);
    ReportTable out;
    out.columns = {"x_norm", "rho", "K", "h"};
    std::vector<ValueRecord> records;
    records.push_back({"alpha_d", ab.alpha_d, spec.abs_tol, "boundary constant"});
    records.push_back({"beta_d", ab.beta_d, spec.abs_tol, "boundary constant"});
    for (int i = 0; i < count; ++i) {
        double xn = norms[static_cast<size_t>(i)];
        out.rows.push_back({format_number(xn), format_number(rho_v[static_cast<size_t>(i)]),
                            format_number(K_v[static_cast<size_t>(i)]),
                            format_number(h_v[static_cast<size_t>(i)])});
        records.push_back({"x=" + format_number(xn) + ":K", K_v[static_cast<size_t>(i)],
                           10.0 * spec.abs_tol, "corrector integrals at critical radius"});
        records.push_back({"x=" + format_number(xn) + ":h", h_v[static_cast<size_t>(i)],
                           10.0 * spec.abs_tol, "corrector with ball integral removed"});
    }
    return StudyOutput{out.to_csv(), records_to_json(records)};
}

} // namespace

StudyOutput run_study(const StudyConfig& config)
{
    if (config.command == "discrete-apply") return run_discrete_apply(config);
    if (config.command == "discrete-extension") return run_discrete_extension(config);
    if (config.command == "discrete-kernels") return run_discrete_kernels(config);
    if (config.command == "schrodinger-apply") return run_schrodinger_apply(config);
    if (config.command == "schrodinger-correctors") return run_schrodinger_correctors(config);
    throw std::invalid_argument("config key 'command': unknown command '" + config.command +
                                "'");
}

} // namespace loglap
