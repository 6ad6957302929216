#include "loglap/lattice.hpp"

#include "loglap/special_functions.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace loglap {

LatticeFunction::LatticeFunction(int offset, std::vector<double> values)
    : offset_(offset), values_(std::move(values))
{
}

LatticeFunction LatticeFunction::delta(int site)
{
    return LatticeFunction(site, {1.0});
}

double LatticeFunction::operator()(int n) const
{
    int i = n - offset_;
    if (i < 0 || i >= static_cast<int>(values_.size())) return 0.0;
    return values_[static_cast<size_t>(i)];
}

bool LatticeFunction::is_zero() const
{
    for (double v : values_)
        if (v != 0.0) return false;
    return true;
}

double LatticeFunction::abs_sum() const
{
    double s = 0.0;
    for (double v : values_) s += std::abs(v);
    return s;
}

std::string LatticeFunction::to_csv() const
{
    std::string out;
    char line[64];
    for (size_t i = 0; i < values_.size(); ++i) {
        std::snprintf(line, sizeof line, "%d,%.17g\n",
                      offset_ + static_cast<int>(i), values_[i]);
        out += line;
    }
    return out;
}

LatticeFunction LatticeFunction::from_csv(std::istream& in)
{
    std::vector<std::pair<int, double>> entries;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        int idx;
        double val;
        int consumed = 0;
        if (std::sscanf(line.c_str(), "%d,%lf %n", &idx, &val, &consumed) != 2 ||
            consumed != static_cast<int>(line.size()))
            throw std::invalid_argument("LatticeFunction::from_csv: bad line '" + line + "'");
        entries.emplace_back(idx, val);
    }
    if (entries.empty()) return LatticeFunction();
    int lo = entries.front().first, hi = entries.front().first;
    for (auto& [i, v] : entries) {
        lo = std::min(lo, i);
        hi = std::max(hi, i);
    }
    std::vector<double> vals(static_cast<size_t>(hi - lo + 1), 0.0);
    for (auto& [i, v] : entries) vals[static_cast<size_t>(i - lo)] = v;
    return LatticeFunction(lo, std::move(vals));
}

bool operator==(const LatticeFunction& a, const LatticeFunction& b)
{
    if (a.values_.empty() || b.values_.empty()) return a.is_zero() && b.is_zero();
    int lo = std::min(a.min_index(), b.min_index());
    int hi = std::max(a.max_index(), b.max_index());
    for (int n = lo; n <= hi; ++n)
        if (a(n) != b(n)) return false;
    return true;
}

LatticeFunction scaled_sum(double a, const LatticeFunction& f,
                           double b, const LatticeFunction& g)
{
    int lo = std::min(f.min_index(), g.min_index());
    int hi = std::max(f.max_index(), g.max_index());
    std::vector<double> vals(static_cast<size_t>(hi - lo + 1));
    for (int n = lo; n <= hi; ++n)
        vals[static_cast<size_t>(n - lo)] = a * f(n) + b * g(n);
    return LatticeFunction(lo, std::move(vals));
}

LatticeFunction shifted(const LatticeFunction& f, int by)
{
    return LatticeFunction(f.min_index() + by, f.values());
}

double heat_kernel(double t, int m)
{
    if (!(t > 0.0)) throw std::domain_error("heat_kernel: time must be positive");
    return bessel_i_scaled(std::abs(m), 2.0 * t);
}

HeatKernelSample sample_heat_kernel(double t, int lag)
{
    return HeatKernelSample{t, lag, heat_kernel(t, lag)};
}

LatticeFunction heat_apply(const LatticeFunction& f, double t,
                           int window_lo, int window_hi)
{
    if (!(t > 0.0)) throw std::domain_error("heat_apply: time must be positive");
    if (window_lo > window_hi)
        throw std::invalid_argument("heat_apply: empty window");
    std::vector<double> vals(static_cast<size_t>(window_hi - window_lo + 1), 0.0);
    for (int n = window_lo; n <= window_hi; ++n) {
        double s = 0.0;
        for (int m = f.min_index(); m <= f.max_index(); ++m) {
            double fm = f(m);
            if (fm != 0.0) s += heat_kernel(t, n - m) * fm;
        }
        vals[static_cast<size_t>(n - window_lo)] = s;
    }
    return LatticeFunction(window_lo, std::move(vals));
}

namespace {

// kernel envelope: p_t(k) <= t^|k|/|k|! for all t, sharpened by
// 2 t^|k|/sqrt(1+|k|) (t <= 1) and 2 t^{-1/4}/sqrt(1+|k|) (t >= 1)
double kernel_envelope(double t, int k)
{
    double a = std::abs(static_cast<double>(k));
    double factorial_bound = std::exp(a * std::log(t) - std::lgamma(a + 1.0));
    double sqrt_bound = (t <= 1.0) ? 2.0 * std::pow(t, a) / std::sqrt(1.0 + a)
                                   : 2.0 * std::pow(t, -0.25) / std::sqrt(1.0 + a);
    return std::min(factorial_bound, sqrt_bound);
}

} // namespace

std::pair<int, int> significant_window(const LatticeFunction& f, double t, double tol)
{
    if (!(tol > 0.0)) throw std::invalid_argument("significant_window: tol must be positive");
    double mass = f.abs_sum();
    if (mass == 0.0) return {0, 0};
    int lo = f.min_index();
    int hi = f.max_index();
    auto bound_outside = [&](int margin) {
        // |p_t * f|(n) <= mass * envelope(t, margin) for n at distance >= margin
        return mass * kernel_envelope(t, margin);
    };
    int margin = 1;
    while (bound_outside(margin) > tol / 10.0 && margin < 100000) ++margin;
    return {lo - margin, hi + margin};
}

} // namespace loglap
