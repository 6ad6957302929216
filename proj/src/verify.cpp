#include "loglap/verify.hpp"

#include "loglap/discrete_extension.hpp"
#include "loglap/discrete_log.hpp"
#include "loglap/lattice.hpp"
#include "loglap/quadrature.hpp"
#include "loglap/report.hpp"
#include "loglap/schrodinger.hpp"
#include "loglap/special_functions.hpp"
#include "loglap/study.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <vector>

namespace loglap {

namespace {

QuadratureSpec default_spec()
{
    QuadratureSpec spec;
    spec.abs_tol = 1e-10;
    spec.rel_tol = 1e-10;
    return spec;
}

std::vector<double> geometric_grid(double t0, int count)
{
    std::vector<double> g(static_cast<size_t>(count));
    for (int k = 0; k < count; ++k) g[static_cast<size_t>(k)] = t0 * std::pow(0.5, k);
    return g;
}

// Observed contraction of successive extrapolated limits over nested
// sample prefixes; the geometric mean of the contraction ratios above the
// noise floor.  Huge when every difference is already at the floor.
double extrapolant_contraction(const std::vector<std::pair<double, double>>& samples,
                               bool linear_model)
{
    std::vector<double> limits;
    for (size_t j = 3; j <= samples.size(); ++j) {
        std::span<const std::pair<double, double>> prefix(samples.data(), j);
        limits.push_back(linear_model
                             ? linear_zero_limit(prefix).extrapolated_limit
                             : richardson_limit(prefix, LimitModel::power).extrapolated_limit);
    }
    std::vector<double> diffs;
    for (size_t i = 0; i + 1 < limits.size(); ++i)
        diffs.push_back(std::abs(limits[i + 1] - limits[i]));
    double log_sum = 0.0;
    int count = 0;
    for (size_t i = 0; i + 1 < diffs.size(); ++i) {
        if (diffs[i + 1] < 1e-12 || diffs[i] < 1e-12) continue;
        log_sum += std::log(diffs[i] / diffs[i + 1]);
        ++count;
    }
    if (count == 0) return 1e9;
    return std::exp(log_sum / count);
}

const LatticeFunction& plus_minus_sequence()
{
    static LatticeFunction f(-5, {1.0, -1.0, 1.0, 1.0, -1.0, 1.0, -1.0, -1.0, 1.0, 1.0, 1.0});
    return f;
}

CheckResult closed_form_operator_values()
{
    CheckResult r;
    r.name = "closed-form operator values";
    r.bound = 1e-7;
    r.time_limit = 10.0;
    QuadratureSpec spec = default_spec();
    LogKernelTable table = build_kernel_table(40, spec);
    LatticeFunction delta = LatticeFunction::delta(0);
    double worst = std::abs(log_laplacian_pointwise(delta, 0, table, spec.abs_tol));
    for (int n = -10; n <= 10; ++n) {
        if (n == 0) continue;
        double got = log_laplacian_pointwise(delta, n, table, spec.abs_tol);
        worst = std::max(worst, std::abs(got - (-1.0 / std::abs(n))));
    }
    r.observed = worst;
    r.passed = worst <= r.bound;
    r.note = "pointwise values vs -1/|n| on |n| <= 10";
    return r;
}

CheckResult pointwise_spectral_agreement()
{
    CheckResult r;
    r.name = "pointwise vs spectral agreement";
    r.bound = 1e-7;
    r.time_limit = 30.0;
    QuadratureSpec spec = default_spec();
    LogKernelTable table = build_kernel_table(45, spec);
    std::vector<LatticeFunction> seqs = {
        LatticeFunction::delta(0),
        scaled_sum(1.0, LatticeFunction::delta(0), 1.0, LatticeFunction::delta(1)),
        plus_minus_sequence()};
    double worst = 0.0;
    for (const auto& f : seqs) {
        for (int n = -10; n <= 10; ++n) {
            double p = log_laplacian_pointwise(f, n, table, spec.abs_tol);
            double s = log_laplacian_spectral(f, n, spec);
            worst = std::max(worst, std::abs(p - s));
        }
    }
    r.observed = worst;
    r.passed = worst <= r.bound;
    r.note = "3 sequences, |n| <= 10";
    return r;
}

CheckResult extension_pde_residual()
{
    CheckResult r;
    r.name = "extension PDE residual";
    r.bound = 1e-6;
    r.time_limit = 60.0;
    QuadratureSpec spec = default_spec();
    LatticeFunction delta = LatticeFunction::delta(0);
    double worst = 0.0;
    for (int n : {0, 1, 3}) {
        for (double t : {0.25, 0.5, 1.0, 2.0}) {
            worst = std::max(worst, std::abs(pde_residual(delta, n, t, spec)));
        }
    }
    r.observed = worst;
    r.passed = worst <= r.bound;
    r.note = "12 (n,t) pairs, f = delta_0";
    return r;
}

CheckResult boundary_limit_values()
{
    CheckResult r;
    r.name = "boundary flux and log-ratio limits";
    r.bound = 1e-5;
    r.time_limit = 60.0;
    QuadratureSpec spec = default_spec();
    LatticeFunction delta = LatticeFunction::delta(0);
    std::vector<double> grid = geometric_grid(0.25, 15);

    double worst = 0.0;
    double min_contraction = 1e9;
    for (int n : {0, 2}) {
        BoundaryLimits bl = boundary_limits(delta, n, grid, spec);
        double target = -2.0 * delta(n);
        worst = std::max(worst, std::abs(bl.flux_limit.extrapolated_limit - target));
        worst = std::max(worst, std::abs(bl.log_ratio_limit.extrapolated_limit - target));

        std::vector<std::pair<double, double>> flux, ratio;
        for (double t : grid) {
            flux.emplace_back(t, t * extension_dt(delta, n, t, spec));
            ratio.emplace_back(-1.0 / std::log(t),
                               extension_u(delta, n, t, spec) / std::log(t));
        }
        min_contraction = std::min(min_contraction, extrapolant_contraction(flux, false));
        min_contraction = std::min(min_contraction, extrapolant_contraction(ratio, true));
    }
    r.observed = worst;
    r.passed = worst <= r.bound && min_contraction >= 1.5;
    char note[128];
    std::snprintf(note, sizeof note, "limits at n in {0,2}; extrapolant contraction %.2f (>= 1.5)",
                  min_contraction);
    r.note = note;
    return r;
}

CheckResult operator_recovery_from_boundary()
{
    CheckResult r;
    r.name = "operator recovery from extension boundary";
    r.bound = 1e-5;
    r.time_limit = 120.0;
    QuadratureSpec spec = default_spec();
    double kdev =
        std::abs(extension_log_constant() - (2.0 * std::log(2.0) - 2.0 * euler_gamma()));
    if (kdev > 1e-12) {
        r.observed = kdev;
        r.passed = false;
        r.note = "constant disagrees with 2log2 - 2gamma";
        return r;
    }
    LatticeFunction delta = LatticeFunction::delta(0);
    std::vector<double> grid = geometric_grid(0.25, 11);
    double worst = 0.0;
    for (int n = -10; n <= 10; ++n) {
        double got = log_via_extension(delta, n, grid, spec);
        double want = n == 0 ? 0.0 : -1.0 / std::abs(n);
        worst = std::max(worst, std::abs(got - want));
    }
    r.observed = worst;
    r.passed = worst <= r.bound;
    char note[128];
    std::snprintf(note, sizeof note,
                  "boundary recovery vs -1/|n| on |n| <= 10; constant check dev %.1e", kdev);
    r.note = note;
    return r;
}

CheckResult small_power_limit_lattice()
{
    CheckResult r;
    r.name = "small-power limit (lattice)";
    r.bound = 0.2; // deviation of the fitted order from 1
    r.time_limit = 60.0;
    QuadratureSpec spec = default_spec();
    LogKernelTable table = build_kernel_table(40, spec);
    LatticeFunction delta = LatticeFunction::delta(0);
    std::vector<double> s_grid = {0.2, 0.1, 0.05, 0.025};

    std::vector<double> errs;
    for (double s : s_grid) {
        double e = 0.0;
        for (int n = -5; n <= 5; ++n) {
            double quotient = (fractional_power_spectral(delta, s, n, spec) - delta(n)) / s;
            double target = log_laplacian_pointwise(delta, n, table, spec.abs_tol);
            e = std::max(e, std::abs(quotient - target));
        }
        errs.push_back(e);
    }
    // least-squares slope of log err against log s
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = static_cast<int>(s_grid.size());
    for (int i = 0; i < n; ++i) {
        double lx = std::log(s_grid[static_cast<size_t>(i)]);
        double ly = std::log(errs[static_cast<size_t>(i)]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    r.observed = std::abs(slope - 1.0);
    r.passed = r.observed <= r.bound;
    char note[96];
    std::snprintf(note, sizeof note, "observed decay order %.3f (want 1.0 +- 0.2)", slope);
    r.note = note;
    return r;
}

CheckResult heat_kernel_properties()
{
    CheckResult r;
    r.name = "heat kernel positivity, mass and envelopes";
    r.bound = 1e-12;
    r.time_limit = 10.0;
    double worst = 0.0;
    bool envelopes = true;

    for (double t : {0.01, 0.1, 1.0, 10.0}) {
        double mass = 0.0;
        int window = 60 + static_cast<int>(12.0 * t);
        for (int m = -window; m <= window; ++m) {
            double p = heat_kernel(t, m);
            if (p < 0.0) envelopes = false;
            if (std::abs(p - heat_kernel(t, -m)) != 0.0) envelopes = false;
            mass += p;
        }
        worst = std::max(worst, std::abs(mass - 1.0));
    }
    for (double u : {0.05, 0.2, 0.5, 1.0}) {
        for (int k = 0; k <= 30; ++k) {
            double bound33 = 2.0 * std::pow(u, k) / std::sqrt(1.0 + k);
            if (heat_kernel(u, k) > bound33 * (1.0 + 1e-12)) envelopes = false;
        }
    }
    for (double u : {1.0, 2.0, 5.0, 10.0, 100.0}) {
        for (int k = 0; k <= 30; ++k) {
            double fitted_c = heat_kernel(u, k) * std::pow(u, 0.25) * std::sqrt(1.0 + k);
            if (fitted_c > 2.0) envelopes = false;
        }
    }
    r.observed = worst;
    r.passed = envelopes && worst <= r.bound;
    r.note = "mass defect over certified windows; short/long-time envelopes";
    return r;
}

CheckResult schrodinger_kernel_checks()
{
    CheckResult r;
    r.name = "schrodinger kernel domination and semigroup";
    r.bound = 1e-6;
    r.time_limit = 60.0;
    QuadratureSpec spec = default_spec();
    PotentialModel constant = PotentialModel::constant(1.0, 3);
    PotentialModel harmonic = PotentialModel::harmonic(3);
    PotentialModel free = PotentialModel::free_laplacian(3);

    bool dominated = true;
    std::vector<std::vector<double>> pts = {
        {0, 0, 0}, {0.5, 0, 0}, {1, -1, 0.5}, {2, 1, 1}, {-0.3, 0.7, -1.2}};
    for (const auto& x : pts) {
        for (const auto& y : pts) {
            for (double t : {0.1, 1.0, 10.0}) {
                double tf = heat_kernel_V(x, y, t, free);
                for (const auto& model : {constant, harmonic}) {
                    double tv = heat_kernel_V(x, y, t, model);
                    if (!(tv >= 0.0) || tv > tf * (1.0 + 1e-13) + 1e-300) dominated = false;
                    double sym = heat_kernel_V(y, x, t, model);
                    if (std::abs(tv - sym) > 1e-14 * std::max(tv, 1e-300)) dominated = false;
                }
            }
        }
    }

    // Chapman-Kolmogorov for the harmonic kernel at x = y = 0
    double worst = 0.0;
    std::vector<double> origin = {0, 0, 0};
    for (auto [s, t] : {std::pair{0.3, 0.7}, std::pair{0.5, 0.5}}) {
        auto integrand = [&](double rr) {
            std::vector<double> z = {rr, 0, 0};
            return 4.0 * 3.14159265358979323846 * rr * rr * heat_kernel_V(origin, z, s, harmonic) *
                   heat_kernel_V(z, origin, t, harmonic);
        };
        double conv = integrate_finite(integrand, 0.0, 20.0, spec).value;
        double direct = heat_kernel_V(origin, origin, s + t, harmonic);
        worst = std::max(worst, std::abs(conv - direct));
    }
    r.observed = worst;
    r.passed = dominated && worst <= r.bound;
    r.note = "Feynman-Kac domination, symmetry, semigroup composition at the origin";
    return r;
}

CheckResult boundary_constants()
{
    CheckResult r;
    r.name = "boundary constants alpha and beta";
    r.bound = 1e-10;
    r.time_limit = 10.0;
    QuadratureSpec spec = default_spec();
    AlphaBeta ab = alpha_beta(3, spec);
    double alpha_closed = 4.0 * (std::log(1.0 + std::sqrt(2.0)) - 1.0 / std::sqrt(2.0));
    double dev = std::abs(ab.alpha_d - alpha_closed);

    bool beta_ok = std::isfinite(ab.beta_d) && ab.beta_d < 0.0;

    // the printed-statement variant (r^2+1)^{-1/2} diverges: partial sums blow up
    QuadratureSpec loose = spec;
    loose.abs_tol = 1e-6;
    loose.rel_tol = 1e-6;
    auto divergent = [](double rr) {
        return (std::pow(rr * rr + 1.0, -0.5) - std::pow(rr, -3.0)) * rr * rr;
    };
    double partial = 2.0 * integrate_finite(divergent, 1.0, 200.0, loose).value;
    bool blows_up = partial > 1e3;

    r.observed = dev;
    r.passed = dev <= r.bound && beta_ok && blows_up;
    char note[160];
    std::snprintf(note, sizeof note,
                  "alpha_3 dev %.1e; beta_3 = %.6f < 0; exponent -1/2 partial sum %.0f > 1e3",
                  dev, ab.beta_d, partial);
    r.note = note;
    return r;
}

CheckResult three_way_agreement_constant_mass()
{
    CheckResult r;
    r.name = "three-way agreement (constant mass)";
    r.bound = 1e-3;
    r.time_limit = 600.0;
    QuadratureSpec spec = default_spec();
    PotentialModel model = PotentialModel::constant(1.0, 3);
    RadialProfile f = RadialProfile::gaussian(1.0, 1.0);
    std::vector<double> origin = {0, 0, 0};
    std::vector<double> grid = geometric_grid(0.25, 11);

    double pointwise = log_schrodinger_pointwise(f, origin, model, spec);
    double spectral = log_schrodinger_spectral(f, origin, 1.0, 3, spec);
    BoundaryRecovery rec = boundary_recovery(f, origin, model, grid, spec);

    double pairwise = std::max({std::abs(pointwise - spectral),
                                std::abs(pointwise - rec.log_value),
                                std::abs(spectral - rec.log_value)});
    double limit_dev = std::max(std::abs(rec.flux.extrapolated_limit - (-1.0)),
                                std::abs(rec.log_ratio.extrapolated_limit - (-1.0)));

    r.observed = pairwise;
    r.passed = pairwise <= r.bound && limit_dev <= 1e-4;
    char note[200];
    std::snprintf(note, sizeof note,
                  "pointwise %.6f, spectral %.6f, boundary %.6f; flux/log-ratio dev %.1e (<= 1e-4)",
                  pointwise, spectral, rec.log_value, limit_dev);
    r.note = note;
    return r;
}

CheckResult small_power_limit_continuous()
{
    CheckResult r;
    r.name = "small-power limit (continuous)";
    r.bound = 1e-5;
    r.time_limit = 120.0;
    QuadratureSpec spec = default_spec();
    RadialProfile f = RadialProfile::gaussian(1.0, 1.0);
    std::vector<double> origin = {0, 0, 0};
    std::vector<double> s_grid = geometric_grid(0.2, 8);
    ConvergenceReport rep = small_s_limit_constant(f, origin, 1.0, s_grid, spec);
    double oracle = log_schrodinger_spectral(f, origin, 1.0, 3, spec);
    r.observed = std::abs(rep.extrapolated_limit - oracle);
    r.passed = rep.converged && r.observed <= r.bound;
    char note[128];
    std::snprintf(note, sizeof note, "extrapolated %.8f vs spectral %.8f", rep.extrapolated_limit,
                  oracle);
    r.note = note;
    return r;
}

CheckResult deterministic_outputs()
{
    CheckResult r;
    r.name = "deterministic outputs";
    r.bound = 0.0;
    r.time_limit = 120.0;

    StudyConfig apply;
    apply.command = "discrete-apply";
    apply.input = "delta:0";
    apply.sites_lo = -5;
    apply.sites_hi = 5;
    StudyOutput a1 = run_study(apply);
    StudyOutput a2 = run_study(apply);

    StudyConfig corr;
    corr.command = "schrodinger-correctors";
    corr.potential = "constant:m=1";
    corr.x_values = "list:0;1";
    StudyOutput c1 = run_study(corr);
    StudyOutput c2 = run_study(corr);

    bool same = a1.csv == a2.csv && a1.json == a2.json && c1.csv == c2.csv && c1.json == c2.json;
    r.observed = same ? 0.0 : 1.0;
    r.passed = same;
    r.note = "repeated study runs byte-identical (threaded dispatch, ordered assembly)";
    return r;
}

} // namespace

std::vector<CheckResult> run_verification_suite(std::ostream* progress)
{
    using Clock = std::chrono::steady_clock;
    struct Entry {
        const char* name;
        CheckResult (*fn)();
    };
    std::vector<Entry> checks = {
        {"closed-form operator values", closed_form_operator_values},
        {"pointwise vs spectral agreement", pointwise_spectral_agreement},
        {"extension PDE residual", extension_pde_residual},
        {"boundary flux and log-ratio limits", boundary_limit_values},
        {"operator recovery from extension boundary", operator_recovery_from_boundary},
        {"small-power limit (lattice)", small_power_limit_lattice},
        {"heat kernel positivity, mass and envelopes", heat_kernel_properties},
        {"schrodinger kernel domination and semigroup", schrodinger_kernel_checks},
        {"boundary constants alpha and beta", boundary_constants},
        {"three-way agreement (constant mass)", three_way_agreement_constant_mass},
        {"small-power limit (continuous)", small_power_limit_continuous},
        {"deterministic outputs", deterministic_outputs},
    };
    std::vector<CheckResult> results;
    for (const auto& check : checks) {
        auto start = Clock::now();
        CheckResult res;
        try {
            res = check.fn();
        } catch (const std::exception& e) {
            res.name = check.name;
            res.passed = false;
            res.note = std::string("exception: ") + e.what();
        }
        res.seconds = std::chrono::duration<double>(Clock::now() - start).count();
        if (res.time_limit > 0.0 && res.seconds > res.time_limit) {
            res.passed = false;
            res.note += " [time limit exceeded]";
        }
        if (progress) {
            char line[512];
            std::snprintf(line, sizeof line, "%-4s %-45s (%6.2fs) observed %.3e vs %.0e; %s\n",
                          res.passed ? "PASS" : "FAIL", res.name.c_str(), res.seconds,
                          res.observed, res.bound, res.note.c_str());
            (*progress) << line << std::flush;
        }
        results.push_back(std::move(res));
    }
    return results;
}

std::string verification_csv(const std::vector<CheckResult>& results)
{
    std::string out = "criterion,status,observed,bound,note\n";
    for (const auto& r : results) {
        out += r.name;
        out += ',';
        out += r.passed ? "pass" : "fail";
        out += ',';
        out += format_number(r.observed);
        out += ',';
        out += format_number(r.bound);
        out += ",\"";
        out += r.note;
        out += "\"\n";
    }
    return out;
}

bool all_passed(const std::vector<CheckResult>& results)
{
    for (const auto& r : results)
        if (!r.passed) return false;
    return true;
}

} // namespace loglap
