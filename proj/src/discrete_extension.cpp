#include "loglap/discrete_extension.hpp"

#include "loglap/special_functions.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace loglap {

namespace {

// support-weighted kernel sum p_u(f)(n), exact over the finite support
double heat_of(const LatticeFunction& f, int n, double u)
{
    double s = 0.0;
    for (int m = f.min_index(); m <= f.max_index(); ++m) {
        double fm = f(m);
        if (fm != 0.0) s += heat_kernel(u, n - m) * fm;
    }
    return s;
}

// Integral over u in (0,infty) of a subordination-type integrand, without
// boundary layers at any t: the piece u <= a (a = min(t^2, split)) is
// taken in the substituted variable v = t^2/4u, which lives on v >= 1/4
// where the integrand is smooth; the rest is integrated directly with its
// tail bound.  near_* bound the v-form by near_coef e^{-near_rate v}.
double layered_integral(double t, const QuadratureSpec& spec,
                        const std::function<double(double)>& u_form,
                        const std::function<double(double)>& v_form,
                        double near_coef, double near_rate, const TailBound& far_tail)
{
    const double split = spec.split_point;
    const double a = std::min(t * t, split);
    const double v0 = t * t / (4.0 * a);

    QuadratureSpec part = spec;
    part.abs_tol = spec.abs_tol / 3.0;
    part.split_point = 1.0;

    auto shifted = [&](double w) { return v_form(v0 + w); };
    double coef = near_coef * std::exp(-near_rate * v0) + 1e-300;
    double total =
        integrate_semi_infinite(shifted, part, TailBound::exponential(coef, near_rate)).value;

    if (a < split) total += integrate_finite(u_form, a, split, part).value;
    auto beyond = [&](double w) { return u_form(split + w); };
    total += integrate_semi_infinite(beyond, part, far_tail).value;
    return total;
}

double subordination_u(const LatticeFunction& f, int n, double t,
                       const QuadratureSpec& spec)
{
    double mass = f.abs_sum();
    auto u_form = [&](double u) {
        return heat_of(f, n, u) * std::exp(-t * t / (4.0 * u)) / u;
    };
    auto v_form = [&](double v) {
        return heat_of(f, n, t * t / (4.0 * v)) * std::exp(-v) / v;
    };
    // v-form: |p e^{-v}/v| <= 4 mass e^{-v} on v >= 1/4;
    // u-form tail: |p_u(f)| <= mass p_u(0) <= mass/(2 sqrt(u))
    return layered_integral(t, spec, u_form, v_form, 4.0 * mass, 1.0,
                            TailBound::power_law(0.5 * mass + 1e-300, 1.5));
}

double multiplier_u(const LatticeFunction& f, int n, double t,
                    const QuadratureSpec& spec)
{
    auto symbol = [t](double theta) {
        double arg = 2.0 * t * std::sin(0.5 * theta);
        return bessel_k0(arg);
    };
    std::map<int, double> coeff;
    double result = 0.0;
    for (int m = f.min_index(); m <= f.max_index(); ++m) {
        double fm = f(m);
        if (fm == 0.0) continue;
        int lag = std::abs(n - m);
        auto it = coeff.find(lag);
        if (it == coeff.end())
            it = coeff.emplace(lag, 2.0 * periodic_log_quadrature(symbol, lag, spec)).first;
        result += fm * it->second;
    }
    return result;
}

} // namespace

double extension_u(const LatticeFunction& f, int n, double t,
                   const QuadratureSpec& spec, ExtensionMethod method)
{
    if (!(t > 0.0)) throw std::domain_error("extension_u: t must be positive");
    spec.validate();
    if (f.is_zero()) return 0.0;
    return method == ExtensionMethod::subordination ? subordination_u(f, n, t, spec)
                                                    : multiplier_u(f, n, t, spec);
}

double extension_dt(const LatticeFunction& f, int n, double t,
                    const QuadratureSpec& spec)
{
    if (!(t > 0.0)) throw std::domain_error("extension_dt: t must be positive");
    spec.validate();
    if (f.is_zero()) return 0.0;
    // d_t u = -sum_m f(m) \int p_u(n-m) (t/2u^2) e^{-t^2/4u} du, whose
    // substituted form is -(2/t) \int p_{t^2/4v}(f)(n) e^{-v} dv
    double mass = f.abs_sum();
    auto u_form = [&](double u) {
        return heat_of(f, n, u) * (t / (2.0 * u * u)) * std::exp(-t * t / (4.0 * u));
    };
    auto v_form = [&](double v) {
        return heat_of(f, n, t * t / (4.0 * v)) * (2.0 / t) * std::exp(-v);
    };
    double near_coef = 2.0 * mass / t;
    TailBound far = TailBound::power_law(0.25 * t * mass + 1e-300, 2.5);
    return -layered_integral(t, spec, u_form, v_form, near_coef, 1.0, far);
}

double extension_dtt(const LatticeFunction& f, int n, double t,
                     const QuadratureSpec& spec)
{
    if (!(t > 0.0)) throw std::domain_error("extension_dtt: t must be positive");
    spec.validate();
    if (f.is_zero()) return 0.0;
    // d_tt u = sum_m f(m) \int p_u(n-m) (t^2/4u^3 - 1/2u^2) e^{-t^2/4u} du,
    // substituted form (2/t^2) \int p_{t^2/4v}(f)(n) (2v-1) e^{-v} dv
    double mass = f.abs_sum();
    auto u_form = [&](double u) {
        return heat_of(f, n, u) * (t * t / (4.0 * u * u * u) - 0.5 / (u * u)) *
               std::exp(-t * t / (4.0 * u));
    };
    auto v_form = [&](double v) {
        return heat_of(f, n, t * t / (4.0 * v)) * (2.0 / (t * t)) * (2.0 * v - 1.0) *
               std::exp(-v);
    };
    // |(2v-1)e^{-v}| <= 1.5 e^{-v/2}; u-form tail within mass (t^2/8 + 1/4) u^{-5/2}
    double near_coef = 3.0 * mass / (t * t);
    TailBound far = TailBound::power_law(mass * (0.125 * t * t + 0.25) + 1e-300, 2.5);
    return layered_integral(t, spec, u_form, v_form, near_coef, 0.5, far);
}

double pde_residual(const LatticeFunction& f, int n, double t,
                    const QuadratureSpec& spec)
{
    if (f.is_zero()) return 0.0;
    double lap = extension_u(f, n + 1, t, spec) - 2.0 * extension_u(f, n, t, spec) +
                 extension_u(f, n - 1, t, spec);
    return extension_dtt(f, n, t, spec) + extension_dt(f, n, t, spec) / t + lap;
}

BoundaryLimits boundary_limits(const LatticeFunction& f, int n,
                               std::span<const double> t_grid,
                               const QuadratureSpec& spec)
{
    if (t_grid.size() < 4)
        throw std::invalid_argument("boundary_limits: needs at least 4 grid points");
    for (size_t i = 0; i + 1 < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i + 1]) || !(t_grid[i + 1] > 0.0))
            throw std::invalid_argument("boundary_limits: grid must be positive decreasing");
    if (!(t_grid.front() < 1.0))
        throw std::invalid_argument("boundary_limits: grid must lie in (0,1) for the log ratio");

    std::vector<std::pair<double, double>> flux;
    std::vector<std::pair<double, double>> ratio;
    flux.reserve(t_grid.size());
    ratio.reserve(t_grid.size());
    for (double t : t_grid) {
        flux.emplace_back(t, t * extension_dt(f, n, t, spec));
        // u/log t = L + B/log t + o(1/log t): extrapolate linearly in -1/log t
        double u = extension_u(f, n, t, spec);
        ratio.emplace_back(-1.0 / std::log(t), u / std::log(t));
    }
    BoundaryLimits out;
    out.flux_limit = richardson_limit(flux, LimitModel::power);
    out.log_ratio_limit = linear_zero_limit(ratio);
    return out;
}

double extension_log_constant()
{
    return -euler_gamma() + exp_integral_e1(0.25) - exp_integral_ein(0.25);
}

double log_via_extension(const LatticeFunction& f, int n,
                         std::span<const double> t_grid,
                         const QuadratureSpec& spec)
{
    if (t_grid.size() < 4)
        throw std::invalid_argument("log_via_extension: needs at least 4 grid points");
    double fn = f(n);
    std::vector<std::pair<double, double>> samples;
    samples.reserve(t_grid.size());
    for (double t : t_grid)
        samples.emplace_back(t, extension_u(f, n, t, spec) + 2.0 * fn * std::log(t));
    ConvergenceReport rep = richardson_limit(samples, LimitModel::power);
    if (!rep.converged)
        throw NonConvergenceError("log_via_extension: boundary limit did not contract at site " +
                                      std::to_string(n),
                                  rep.error_estimate);
    return -rep.extrapolated_limit + fn * extension_log_constant();
}

std::string ExtensionTrace::to_csv() const
{
    std::string out = "t,u,t_du,residual\n";
    char line[160];
    for (size_t i = 0; i < t.size(); ++i) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", t[i], u[i], t_du[i],
                      residual[i]);
        out += line;
    }
    return out;
}

ExtensionTrace extension_trace(const LatticeFunction& f, int site,
                               std::span<const double> t_grid,
                               const QuadratureSpec& spec)
{
    ExtensionTrace trace;
    trace.site = site;
    for (double t : t_grid) {
        trace.t.push_back(t);
        trace.u.push_back(extension_u(f, site, t, spec));
        trace.t_du.push_back(t * extension_dt(f, site, t, spec));
        trace.residual.push_back(pde_residual(f, site, t, spec));
    }
    return trace;
}

} // namespace loglap
