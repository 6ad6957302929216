#include "loglap/discrete_log.hpp"

#include "loglap/special_functions.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace loglap {

double LogKernelTable::w0_at(int lag) const
{
    int k = std::abs(lag);
    if (k == 0 || k > max_lag)
        throw std::out_of_range("LogKernelTable: W0 lag " + std::to_string(lag) +
                                " outside table");
    return w0[static_cast<size_t>(k - 1)];
}

double LogKernelTable::w_inf_at(int lag) const
{
    int k = std::abs(lag);
    if (k > max_lag)
        throw std::out_of_range("LogKernelTable: Winf lag " + std::to_string(lag) +
                                " outside table");
    return w_inf[static_cast<size_t>(k)];
}

std::string LogKernelTable::to_csv() const
{
    std::string out = "lag,w0,w_inf\n";
    char line[96];
    std::snprintf(line, sizeof line, "0,,%.17g\n", w_inf[0]);
    out += line;
    for (int k = 1; k <= max_lag; ++k) {
        std::snprintf(line, sizeof line, "%d,%.17g,%.17g\n", k,
                      w0[static_cast<size_t>(k - 1)], w_inf[static_cast<size_t>(k)]);
        out += line;
    }
    return out;
}

LogKernelTable build_kernel_table(int max_lag, const QuadratureSpec& spec)
{
    if (max_lag < 1) throw std::invalid_argument("build_kernel_table: max_lag must be >= 1");
    spec.validate();

    LogKernelTable table;
    table.max_lag = max_lag;
    table.gamma = euler_gamma();
    table.w0.resize(static_cast<size_t>(max_lag));
    table.w_inf.resize(static_cast<size_t>(max_lag) + 1);

    for (int m = 1; m <= max_lag; ++m) {
        try {
            // p_t(m)/t ~ t^{m-1}/m! near 0: regular but nonsmooth endpoint
            auto integrand = [m](double t) { return heat_kernel(t, m) / t; };
            table.w0[static_cast<size_t>(m - 1)] =
                integrate_finite(integrand, 0.0, 1.0, spec).value;
        } catch (const NonConvergenceError& e) {
            throw NonConvergenceError(
                "build_kernel_table: W0 failed at lag " + std::to_string(m) + ": " + e.what(),
                e.achieved_error());
        }
    }
    for (int m = 0; m <= max_lag; ++m) {
        try {
            // shifted to (0,infty); p_t(m)/t <= t^{-3/2}/2 from
            // e^{-x} I_0(x) <= 1/sqrt(2x)
            auto integrand = [m](double u) { return heat_kernel(1.0 + u, m) / (1.0 + u); };
            QuadratureSpec tail_spec = spec;
            tail_spec.split_point = 1.0;
            table.w_inf[static_cast<size_t>(m)] =
                integrate_semi_infinite(integrand, tail_spec, TailBound::power_law(0.5, 1.5))
                    .value;
        } catch (const NonConvergenceError& e) {
            throw NonConvergenceError(
                "build_kernel_table: Winf failed at lag " + std::to_string(m) + ": " + e.what(),
                e.achieved_error());
        }
    }
    return table;
}

namespace {

// smallest radius R with 2 sum_{k>R} 1/(k k!) <= budget, from the kernel
// bound W0(k) <= 1/(k k!); uses sum_{j>k} 1/j! <= 2/(k+1)!
int certified_truncation_radius(double budget)
{
    double term = 1.0; // 1/k!
    for (int k = 1; k <= 200; ++k) {
        term /= k;
        double remaining = 4.0 * term / ((k + 1.0) * (k + 1.0));
        if (remaining <= budget) return k;
    }
    return 200;
}

} // namespace

double log_laplacian_pointwise(const LatticeFunction& f, int n,
                               const LogKernelTable& table, double abs_tol)
{
    if (f.is_zero()) return 0.0;

    double fn = f(n);
    int reach = std::max(std::abs(n - f.min_index()), std::abs(n - f.max_index()));

    int radius = reach;
    if (fn != 0.0) {
        double budget = abs_tol / (10.0 * std::abs(fn));
        radius = std::max(radius, certified_truncation_radius(budget));
    }
    if (!table.covers(radius))
        throw std::invalid_argument(
            "log_laplacian_pointwise: table covers lags up to " +
            std::to_string(table.max_lag) + ", needs " + std::to_string(radius));

    double diff_sum = 0.0;
    for (int k = 1; k <= radius; ++k)
        diff_sum += table.w0_at(k) * (2.0 * fn - f(n - k) - f(n + k));

    double tail_sum = 0.0;
    for (int m = f.min_index(); m <= f.max_index(); ++m) {
        double fm = f(m);
        if (fm != 0.0) tail_sum += table.w_inf_at(n - m) * fm;
    }

    return diff_sum - tail_sum - table.gamma * fn;
}

namespace {

// Fourier coefficient of an even multiplier against the basis sequence,
// memoized over the absolute lag for one evaluation
double multiplier_apply(const LatticeFunction& f, int n,
                        const std::function<double(double)>& symbol,
                        const QuadratureSpec& spec)
{
    std::map<int, double> coeff;
    double result = 0.0;
    for (int m = f.min_index(); m <= f.max_index(); ++m) {
        double fm = f(m);
        if (fm == 0.0) continue;
        int lag = std::abs(n - m);
        auto it = coeff.find(lag);
        if (it == coeff.end())
            it = coeff.emplace(lag, periodic_log_quadrature(symbol, lag, spec)).first;
        result += fm * it->second;
    }
    return result;
}

} // namespace

double log_laplacian_spectral(const LatticeFunction& f, int n, const QuadratureSpec& spec)
{
    auto symbol = [](double theta) {
        double s = std::sin(0.5 * theta);
        return std::log(4.0 * s * s);
    };
    return multiplier_apply(f, n, symbol, spec);
}

double fractional_power_spectral(const LatticeFunction& f, double s, int n,
                                 const QuadratureSpec& spec)
{
    if (!(s > 0.0 && s <= 1.0))
        throw std::domain_error("fractional_power_spectral: s must lie in (0,1]");
    auto symbol = [s](double theta) {
        double si = std::sin(0.5 * theta);
        return std::pow(4.0 * si * si, s);
    };
    return multiplier_apply(f, n, symbol, spec);
}

ConvergenceReport small_s_limit_check(const LatticeFunction& f, int n,
                                      std::span<const double> s_grid,
                                      const QuadratureSpec& spec)
{
    if (s_grid.size() < 3)
        throw std::invalid_argument("small_s_limit_check: needs at least 3 grid points");
    for (double s : s_grid)
        if (!(s > 0.0 && s <= 0.5))
            throw std::invalid_argument("small_s_limit_check: grid must lie in (0, 1/2]");

    if (f.is_zero()) {
        ConvergenceReport r;
        r.extrapolated_limit = 0.0;
        r.observed_order = 0.0;
        r.error_estimate = 0.0;
        r.samples_used = static_cast<int>(s_grid.size());
        r.converged = true;
        return r;
    }

    std::vector<std::pair<double, double>> samples;
    samples.reserve(s_grid.size());
    for (double s : s_grid) {
        double v = (fractional_power_spectral(f, s, n, spec) - f(n)) / s;
        samples.emplace_back(s, v);
    }
    // the difference quotient is analytic in s, so polynomial extrapolation
    // is the exact model class
    return polynomial_zero_limit(samples);
}

} // namespace loglap
