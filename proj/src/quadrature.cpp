#include "loglap/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <queue>
#include <vector>

namespace loglap {

void QuadratureSpec::validate() const
{
    if (!(abs_tol > 0.0 && abs_tol < 1.0))
        throw std::invalid_argument("QuadratureSpec: abs_tol must be in (0,1)");
    if (!(rel_tol > 0.0 && rel_tol < 1.0))
        throw std::invalid_argument("QuadratureSpec: rel_tol must be in (0,1)");
    if (!(split_point > 0.0))
        throw std::invalid_argument("QuadratureSpec: split_point must be positive");
    if (max_subdivisions < 8)
        throw std::invalid_argument("QuadratureSpec: max_subdivisions must be >= 8");
    if (!(tail_cutoff_factor > 0.0))
        throw std::invalid_argument("QuadratureSpec: tail_cutoff_factor must be positive");
}

TailBound TailBound::exponential(double coefficient, double rate)
{
    if (!(coefficient > 0.0) || !(rate > 0.0))
        throw std::invalid_argument("TailBound::exponential: coefficient and rate must be positive");
    TailBound b{Kind::exponential, coefficient};
    b.rate = rate;
    return b;
}

TailBound TailBound::power_law(double coefficient, double exponent)
{
    if (!(coefficient > 0.0))
        throw std::invalid_argument("TailBound::power_law: coefficient must be positive");
    if (!(exponent > 1.0))
        throw std::invalid_argument("TailBound::power_law: exponent must exceed 1");
    TailBound b{Kind::power_law, coefficient};
    b.exponent = exponent;
    return b;
}

namespace {

// Gauss-Kronrod 7-15 nodes and weights (QUADPACK dqk15).
constexpr double xgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double wgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    double value;
    double error;
};

Panel gk15(const std::function<double(double)>& f, double a, double b)
{
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    // nodes clamped into the open interval so an endpoint singularity is
    // never hit through rounding of center +- half*x
    const double lo = std::nextafter(a, b);
    const double hi = std::nextafter(b, a);
    auto node = [&](double offset) { return std::clamp(center + offset, lo, hi); };

    double fv[15];
    // 0..6: center + half*xgk, 7: center, 8..14: center - half*xgk
    for (int j = 0; j < 7; ++j) {
        fv[j] = f(node(half * xgk[j]));
        fv[8 + j] = f(node(-half * xgk[j]));
    }
    fv[7] = f(center);

    double result_gauss = wg[3] * fv[7];
    for (int j = 0; j < 3; ++j) {
        int k = 2 * j + 1; // odd Kronrod indices carry the Gauss nodes
        result_gauss += wg[j] * (fv[k] + fv[8 + k]);
    }
    double result_kronrod = wgk[7] * fv[7];
    double resabs = wgk[7] * std::abs(fv[7]);
    for (int j = 0; j < 7; ++j) {
        result_kronrod += wgk[j] * (fv[j] + fv[8 + j]);
        resabs += wgk[j] * (std::abs(fv[j]) + std::abs(fv[8 + j]));
    }
    double mean = 0.5 * result_kronrod;
    double resasc = wgk[7] * std::abs(fv[7] - mean);
    for (int j = 0; j < 7; ++j)
        resasc += wgk[j] * (std::abs(fv[j] - mean) + std::abs(fv[8 + j] - mean));

    result_gauss *= half;
    result_kronrod *= half;
    resabs *= half;
    resasc *= half;

    double err = std::abs(result_kronrod - result_gauss);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    err = std::max(err, 50.0 * std::numeric_limits<double>::epsilon() * resabs);

    return Panel{a, b, result_kronrod, err};
}

} // namespace

QuadratureResult integrate_finite(const std::function<double(double)>& integrand,
                                  double a, double b, const QuadratureSpec& spec)
{
    spec.validate();
    if (!(a < b)) throw std::invalid_argument("integrate_finite: requires a < b");

    auto worse = [](const Panel& p, const Panel& q) { return p.error < q.error; };
    std::priority_queue<Panel, std::vector<Panel>, decltype(worse)> queue(worse);
    std::vector<Panel> frozen; // machine-resolution panels kept with their error
    queue.push(gk15(integrand, a, b));

    double total_value = queue.top().value;
    double total_error = queue.top().error;
    int splits = 0;

    while (total_error > std::max(spec.abs_tol, spec.rel_tol * std::abs(total_value))) {
        if (splits >= spec.max_subdivisions || queue.empty()) {
            char msg[160];
            std::snprintf(msg, sizeof msg,
                          "integrate_finite: cannot certify [%g,%g], error estimate %.3e",
                          a, b, total_error);
            throw NonConvergenceError(msg, total_error);
        }
        Panel worst = queue.top();
        queue.pop();
        double mid = 0.5 * (worst.a + worst.b);
        if (!(worst.a < mid && mid < worst.b)) {
            frozen.push_back(worst);
            continue;
        }
        Panel left = gk15(integrand, worst.a, mid);
        Panel right = gk15(integrand, mid, worst.b);
        total_value += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        ++splits;
    }

    // deterministic final summation in interval order
    std::vector<Panel> panels = std::move(frozen);
    panels.reserve(panels.size() + queue.size());
    while (!queue.empty()) {
        panels.push_back(queue.top());
        queue.pop();
    }
    std::sort(panels.begin(), panels.end(),
              [](const Panel& p, const Panel& q) { return p.a < q.a; });
    double value = 0.0, comp = 0.0, error = 0.0;
    for (const Panel& p : panels) {
        double y = p.value - comp;
        double t = value + y;
        comp = (t - value) - y;
        value = t;
        error += p.error;
    }
    return QuadratureResult{value, error};
}

QuadratureResult integrate_semi_infinite(const std::function<double(double)>& integrand,
                                         const QuadratureSpec& spec,
                                         const TailBound& tail)
{
    spec.validate();
    const double split = spec.split_point;

    QuadratureSpec part = spec;
    part.abs_tol = spec.abs_tol / 2.0;

    QuadratureResult head = integrate_finite(integrand, 0.0, split, part);

    QuadratureResult back{0.0, 0.0};
    double neglected = 0.0;
    if (tail.kind == TailBound::Kind::exponential) {
        // truncate where the remaining mass drops below abs_tol / cutoff
        double budget = spec.abs_tol / spec.tail_cutoff_factor;
        double mass_at_split = tail.coefficient / tail.rate * std::exp(-tail.rate * split);
        if (mass_at_split > budget) {
            double upper = std::log(tail.coefficient / (tail.rate * budget)) / tail.rate;
            back = integrate_finite(integrand, split, upper, part);
            neglected = budget;
        } else {
            neglected = mass_at_split;
        }
    } else {
        // graded inverse map u = split / s^4; transformed integrand is
        // O(s^{4p-5}) near s = 0, integrable for every exponent p > 1
        auto mapped = [&](double s) {
            double s4 = s * s * s * s;
            double u = split / s4;
            if (!std::isfinite(u) || u > 1e290) return 0.0; // below any admissible tail bound
            return integrand(u) * 4.0 * split / (s4 * s);
        };
        back = integrate_finite(mapped, 0.0, 1.0, part);
    }

    return QuadratureResult{head.value + back.value,
                            head.error_estimate + back.error_estimate + neglected};
}

double periodic_log_quadrature(const std::function<double(double)>& symbol,
                               int n, const QuadratureSpec& spec)
{
    spec.validate();
    const double pi = 3.14159265358979323846264338327950288;
    // even symbol: (1/2pi) \int_{-pi}^{pi} sym e^{in.} = (1/pi) \int_0^pi sym cos(n.)
    // theta = pi sigma^4 tames the log singularity at theta = 0
    auto mapped = [&](double sigma) {
        double s3 = sigma * sigma * sigma;
        double theta = pi * s3 * sigma;
        return 4.0 * s3 * symbol(theta) * std::cos(n * theta);
    };
    return integrate_finite(mapped, 0.0, 1.0, spec).value;
}

namespace {

// basis value for the error-term shape at abscissa t
double shape_power(double t, double alpha) { return std::pow(t, alpha); }
double shape_power_log(double t, double alpha) { return std::pow(t, alpha) * std::log(t); }

struct WindowFit {
    bool ok = false;
    double limit = 0.0;
    double order = 0.0;
    double rms = 1e300;
};

// least squares of v against {1, shape(t, alpha)} at fixed alpha
WindowFit fit_at_alpha(std::span<const std::pair<double, double>> w, double alpha,
                       LimitModel model)
{
    double s00 = 0.0, s01 = 0.0, s11 = 0.0, b0 = 0.0, b1 = 0.0;
    for (const auto& [t, v] : w) {
        double phi = model == LimitModel::power ? shape_power(t, alpha)
                                                : shape_power_log(t, alpha);
        s00 += 1.0;
        s01 += phi;
        s11 += phi * phi;
        b0 += v;
        b1 += phi * v;
    }
    double det = s00 * s11 - s01 * s01;
    if (!(std::abs(det) > 1e-290)) return {};
    double limit = (s11 * b0 - s01 * b1) / det;
    double slope = (s00 * b1 - s01 * b0) / det;

    double ss = 0.0;
    for (const auto& [t, v] : w) {
        double phi = model == LimitModel::power ? shape_power(t, alpha)
                                                : shape_power_log(t, alpha);
        double r = v - limit - slope * phi;
        ss += r * r;
    }
    WindowFit out;
    out.ok = std::isfinite(limit) && std::isfinite(ss);
    out.limit = limit;
    out.order = alpha;
    out.rms = std::sqrt(ss / static_cast<double>(w.size()));
    return out;
}

// scan + golden-section refinement of the order
WindowFit fit_window(std::span<const std::pair<double, double>> w, LimitModel model)
{
    WindowFit best;
    double best_alpha = 1.0;
    for (double alpha = 0.05; alpha <= 10.0; alpha *= 1.06) {
        WindowFit f = fit_at_alpha(w, alpha, model);
        if (f.ok && f.rms < best.rms) {
            best = f;
            best_alpha = alpha;
        }
    }
    if (!best.ok) return best;
    double lo = best_alpha / 1.07, hi = best_alpha * 1.07;
    const double gr = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    WindowFit f1 = fit_at_alpha(w, x1, model);
    WindowFit f2 = fit_at_alpha(w, x2, model);
    for (int it = 0; it < 90; ++it) {
        if (!f1.ok || !f2.ok) break;
        if (f1.rms < f2.rms) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = fit_at_alpha(w, x1, model);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = fit_at_alpha(w, x2, model);
        }
    }
    WindowFit refined = f1.ok && (!f2.ok || f1.rms < f2.rms) ? f1 : f2;
    return refined.ok && refined.rms <= best.rms ? refined : best;
}

} // namespace

ConvergenceReport richardson_limit(std::span<const std::pair<double, double>> samples,
                                   LimitModel model)
{
    if (samples.size() < 3)
        throw std::invalid_argument("richardson_limit: needs at least 3 samples");
    for (size_t i = 0; i + 1 < samples.size(); ++i) {
        if (!(samples[i].first > samples[i + 1].first) || !(samples[i + 1].first > 0.0))
            throw std::invalid_argument(
                "richardson_limit: t-grid must be positive and strictly decreasing");
    }

    const size_t n = samples.size();
    ConvergenceReport report;
    report.samples_used = static_cast<int>(n);

    double scale = 0.0;
    for (auto& s : samples) scale = std::max(scale, std::abs(s.second));
    double noise_floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(scale, 1e-300);

    // drop a trailing stretch already flat at machine level
    size_t usable = n;
    while (usable >= 2 &&
           std::abs(samples[usable - 1].second - samples[usable - 2].second) <= noise_floor)
        --usable;
    if (usable < 3) {
        report.extrapolated_limit = samples[n - 1].second;
        report.observed_order = 0.0;
        report.error_estimate = noise_floor;
        report.converged = true;
        return report;
    }

    // oscillation guard: two or more sign flips among the differences
    int flips = 0;
    double prev_diff = 0.0;
    for (size_t i = 0; i + 1 < usable; ++i) {
        double d = samples[i + 1].second - samples[i].second;
        if (std::abs(d) <= noise_floor) continue;
        if (prev_diff != 0.0 && d * prev_diff < 0.0) ++flips;
        prev_diff = d;
    }

    // fit over the most asymptotic window
    size_t window = std::min<size_t>(usable, 6);
    std::span<const std::pair<double, double>> tail(samples.data() + (usable - window), window);
    WindowFit fit = fit_window(tail, model);

    if (!fit.ok) {
        report.extrapolated_limit = samples[usable - 1].second;
        report.observed_order = 0.0;
        report.error_estimate =
            std::abs(samples[usable - 1].second - samples[usable - 2].second);
        report.converged = false;
        return report;
    }

    report.extrapolated_limit = fit.limit;
    report.observed_order = fit.order;

    if (window > 3) {
        // drop the least asymptotic point for a drift estimate
        std::span<const std::pair<double, double>> inner(samples.data() + (usable - window) + 1,
                                                         window - 1);
        WindowFit alt = fit_window(inner, model);
        report.error_estimate = std::max(
            alt.ok ? std::abs(fit.limit - alt.limit) : 0.0, noise_floor);
    } else {
        // a three-point fit interpolates; charge a share of the correction
        report.error_estimate =
            std::max(0.25 * std::abs(fit.limit - samples[usable - 1].second), noise_floor);
    }

    double spread = 0.0;
    for (const auto& s : tail) spread = std::max(spread, std::abs(s.second - fit.limit));
    bool residual_small = fit.rms <= std::max(0.05 * spread, 20.0 * noise_floor);
    report.converged = residual_small && flips < 2;
    return report;
}

ConvergenceReport linear_zero_limit(std::span<const std::pair<double, double>> samples)
{
    if (samples.size() < 3)
        throw std::invalid_argument("linear_zero_limit: needs at least 3 samples");
    for (size_t i = 0; i + 1 < samples.size(); ++i) {
        if (!(samples[i].first > samples[i + 1].first) || !(samples[i + 1].first > 0.0))
            throw std::invalid_argument(
                "linear_zero_limit: grid must be positive and strictly decreasing");
    }
    ConvergenceReport report;
    report.samples_used = static_cast<int>(samples.size());
    report.observed_order = 1.0;

    double scale = 0.0;
    for (auto& s : samples) scale = std::max(scale, std::abs(s.second));
    double noise_floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(scale, 1e-300);

    size_t window = std::min<size_t>(samples.size(), 4);
    std::span<const std::pair<double, double>> w(samples.data() + (samples.size() - window),
                                                 window);
    WindowFit fit = fit_at_alpha(w, 1.0, LimitModel::power);
    if (!fit.ok) {
        report.extrapolated_limit = samples.back().second;
        report.error_estimate = std::abs(samples.back().second -
                                         samples[samples.size() - 2].second);
        report.converged = false;
        return report;
    }
    report.extrapolated_limit = fit.limit;

    std::span<const std::pair<double, double>> inner(
        samples.data() + (samples.size() - window) + 1, window - 1);
    WindowFit alt = fit_at_alpha(inner, 1.0, LimitModel::power);
    report.error_estimate =
        std::max(alt.ok ? std::abs(fit.limit - alt.limit) : fit.rms, noise_floor);

    double spread = 0.0;
    for (auto& s : w) spread = std::max(spread, std::abs(s.second - fit.limit));
    report.converged = fit.rms <= std::max(0.02 * spread, 20.0 * noise_floor);
    return report;
}

ConvergenceReport polynomial_zero_limit(std::span<const std::pair<double, double>> samples)
{
    if (samples.size() < 3)
        throw std::invalid_argument("polynomial_zero_limit: needs at least 3 samples");
    for (size_t i = 0; i + 1 < samples.size(); ++i) {
        if (!(samples[i].first > samples[i + 1].first) || !(samples[i + 1].first > 0.0))
            throw std::invalid_argument(
                "polynomial_zero_limit: grid must be positive and strictly decreasing");
    }

    ConvergenceReport report;
    report.samples_used = static_cast<int>(samples.size());

    size_t window = std::min<size_t>(samples.size(), 8);
    std::span<const std::pair<double, double>> w(samples.data() + (samples.size() - window),
                                                 window);
    double scale = 0.0;
    for (auto& s : w) scale = std::max(scale, std::abs(s.second));
    double noise_floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(scale, 1e-300);

    // Neville tableau evaluated at t = 0; successive columns raise the order
    std::vector<double> p(window), x(window);
    for (size_t i = 0; i < window; ++i) {
        x[i] = w[i].first;
        p[i] = w[i].second;
    }
    std::vector<double> column_limits; // top-right entry per column
    column_limits.push_back(p[window - 1]);
    for (size_t j = 1; j < window; ++j) {
        for (size_t i = 0; i + j < window; ++i)
            p[i] = (x[i + j] * p[i] - x[i] * p[i + 1]) / (x[i + j] - x[i]);
        column_limits.push_back(p[0]);
    }

    report.extrapolated_limit = column_limits.back();
    double last_step = std::abs(column_limits[window - 1] - column_limits[window - 2]);
    report.error_estimate = std::max(last_step, noise_floor);

    // observed decay order of the residuals toward the extrapolated limit
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (auto& s : w) {
        double res = std::abs(s.second - report.extrapolated_limit);
        if (res <= 10.0 * noise_floor) continue;
        double lx = std::log(s.first), ly = std::log(res);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++count;
    }
    report.observed_order =
        count >= 2 ? (count * sxy - sx * sy) / (count * sxx - sx * sx) : 0.0;

    bool settled = true;
    for (size_t j = 2; j + 1 < column_limits.size(); ++j) {
        double prev = std::abs(column_limits[j] - column_limits[j - 1]);
        double next = std::abs(column_limits[j + 1] - column_limits[j]);
        if (next > std::max(prev, 20.0 * noise_floor)) settled = false;
    }
    report.converged = settled && std::isfinite(report.extrapolated_limit);
    return report;
}

} // namespace loglap

