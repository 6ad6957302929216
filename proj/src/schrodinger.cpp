#include "loglap/schrodinger.hpp"

#include "loglap/special_functions.hpp"

#include <cmath>
#include <stdexcept>

namespace loglap {

namespace {

constexpr double pi = 3.14159265358979323846264338327950288;

double norm_of(std::span<const double> x)
{
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

double log_sinh(double z) // z > 0
{
    return z + std::log(-std::expm1(-2.0 * z)) - std::log(2.0);
}

double log_cosh(double z)
{
    return z + std::log1p(std::exp(-2.0 * z)) - std::log(2.0);
}

double sinc(double w)
{
    if (std::abs(w) < 1e-8) return 1.0 - w * w / 6.0;
    return std::sin(w) / w;
}

} // namespace

PotentialModel PotentialModel::free_laplacian(int d)
{
    PotentialModel m;
    m.kind = Kind::free;
    m.dimension = d;
    m.validate();
    return m;
}

PotentialModel PotentialModel::constant(double mass, int d)
{
    PotentialModel m;
    m.kind = Kind::constant_mass;
    m.mass = mass;
    m.dimension = d;
    m.validate();
    return m;
}

PotentialModel PotentialModel::harmonic(int d)
{
    PotentialModel m;
    m.kind = Kind::harmonic;
    m.dimension = d;
    m.validate();
    return m;
}

void PotentialModel::validate() const
{
    if (dimension < 3)
        throw std::invalid_argument("PotentialModel: dimension must be >= 3");
    if (kind == Kind::constant_mass && !(mass > 0.0))
        throw std::invalid_argument("PotentialModel: constant_mass requires mass > 0");
}

double unit_ball_volume(int d)
{
    return std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

double heat_kernel_V(std::span<const double> x, std::span<const double> y,
                     double t, const PotentialModel& model)
{
    model.validate();
    if (!(t > 0.0)) throw std::domain_error("heat_kernel_V: t must be positive");
    if (x.size() != y.size() || static_cast<int>(x.size()) != model.dimension)
        throw std::invalid_argument("heat_kernel_V: point dimension mismatch");
    const int d = model.dimension;

    double dist2 = 0.0, nx2 = 0.0, ny2 = 0.0, xy = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        double diff = x[i] - y[i];
        dist2 += diff * diff;
        nx2 += x[i] * x[i];
        ny2 += y[i] * y[i];
        xy += x[i] * y[i];
    }

    switch (model.kind) {
    case PotentialModel::Kind::free:
        return std::exp(-0.5 * d * std::log(4.0 * pi * t) - dist2 / (4.0 * t));
    case PotentialModel::Kind::constant_mass:
        return std::exp(-model.mass * model.mass * t - 0.5 * d * std::log(4.0 * pi * t) -
                        dist2 / (4.0 * t));
    case PotentialModel::Kind::harmonic: {
        // cross term through 1/sinh so that overflow of sinh zeroes it out
        double quad = 0.5 * (nx2 + ny2) / std::tanh(2.0 * t) - xy / std::sinh(2.0 * t);
        double logT = -0.5 * d * (std::log(2.0 * pi) + log_sinh(2.0 * t)) - quad;
        return std::exp(logT);
    }
    }
    return 0.0;
}

double critical_radius(std::span<const double> x, const PotentialModel& model)
{
    model.validate();
    const int d = model.dimension;
    const double wd = unit_ball_volume(d);
    switch (model.kind) {
    case PotentialModel::Kind::free:
        throw std::invalid_argument("critical_radius: undefined for the free model (V = 0)");
    case PotentialModel::Kind::constant_mass:
        // m^2 wd r^2 = 1
        return 1.0 / (model.mass * std::sqrt(wd));
    case PotentialModel::Kind::harmonic: {
        // wd (r^2 |x|^2 + d r^4 / (d+2)) = 1, quadratic in r^2
        double xi2 = 0.0;
        for (double v : x) xi2 += v * v;
        double a = wd * d / (d + 2.0);
        double b = wd * xi2;
        double q = (-b + std::sqrt(b * b + 4.0 * a)) / (2.0 * a);
        return std::sqrt(q);
    }
    }
    return 0.0;
}

AlphaBeta alpha_beta(int d, const QuadratureSpec& spec)
{
    if (d < 3) throw std::invalid_argument("alpha_beta: d must be >= 3");
    spec.validate();

    auto alpha_integrand = [d](double t) {
        return std::pow(1.0 + t, -0.5 * d) * std::pow(t, 0.5 * d - 1.0);
    };
    double alpha = 2.0 * integrate_finite(alpha_integrand, 0.0, 1.0, spec).value;

    // ((r^2+1)^{-d/2} - r^{-d}) r^{d-1} = expm1(-(d/2) log1p(1/r^2)) / r,
    // cancellation-free pairing
    auto beta_integrand = [d](double u) {
        double r = 1.0 + u;
        return std::expm1(-0.5 * d * std::log1p(1.0 / (r * r))) / r;
    };
    QuadratureSpec s = spec;
    s.split_point = 1.0;
    double beta = 2.0 * integrate_semi_infinite(beta_integrand, s,
                                                TailBound::power_law(0.5 * d, 3.0))
                            .value;
    return AlphaBeta{alpha, beta};
}

namespace {

// T_t^V(x, .) for the harmonic potential is the Gaussian
// amplitude * e^{-a |y - c|^2} with c = x / cosh(2t).
struct MehlerGaussian {
    double log_amplitude;
    double a;
    double offset; // |x - c| = |x| (cosh(2t) - 1)/cosh(2t)
};

MehlerGaussian mehler_gaussian(double xi, double t, int d)
{
    MehlerGaussian g;
    double th = std::tanh(2.0 * t);
    g.log_amplitude = -0.5 * d * (std::log(2.0 * pi) + log_sinh(2.0 * t)) - 0.5 * xi * xi * th;
    g.a = 1.0 / (2.0 * th);
    g.offset = xi * (-std::expm1(-log_cosh(2.0 * t))); // xi (1 - 1/cosh 2t)
    return g;
}

// total mass of the harmonic kernel, exp(-(xi^2/2) tanh 2t) cosh(2t)^{-d/2}
double mehler_log_mass(double xi, double t, int d)
{
    return -0.5 * xi * xi * std::tanh(2.0 * t) - 0.5 * d * log_cosh(2.0 * t);
}

double m1_segment(double a, double lo, double hi)
{
    return (std::exp(-a * lo * lo) - std::exp(-a * hi * hi)) / (2.0 * a);
}

double m0_segment(double a, double lo, double hi)
{
    double sa = std::sqrt(a);
    return 0.5 * std::sqrt(pi / a) * (std::erf(sa * hi) - std::erf(sa * lo));
}

// mass of e^{log_amplitude - a|y-c|^2} over the ball of radius r whose
// center sits at distance b from c
double gaussian_ball_mass(double log_amplitude, double a, double b, double r, int d)
{
    if (std::sqrt(a) * b < 1e-5) {
        double la = log_amplitude + 0.5 * d * std::log(pi / a);
        return std::exp(la) * regularized_gamma_p(0.5 * d, a * r * r);
    }
    if (d != 3)
        throw std::logic_error("gaussian_ball_mass: offset center implemented for d = 3 only");
    double inner = m1_segment(a, -b, r - b) + b * m0_segment(a, -b, r - b) -
                   m1_segment(a, b, r + b) + b * m0_segment(a, b, r + b);
    return std::exp(log_amplitude) * pi / (a * b) * inner;
}

double gaussian_outside_mass(double log_amplitude, double a, double b, double r, int d)
{
    if (std::sqrt(a) * b < 1e-5) {
        double la = log_amplitude + 0.5 * d * std::log(pi / a);
        return std::exp(la) * regularized_gamma_q(0.5 * d, a * r * r);
    }
    if (d != 3)
        throw std::logic_error("gaussian_outside_mass: offset center implemented for d = 3 only");
    double sa = std::sqrt(a);
    double inner = std::exp(-a * (r - b) * (r - b)) / (2.0 * a) +
                   b * 0.5 * std::sqrt(pi / a) * std::erfc(sa * (r - b)) -
                   std::exp(-a * (r + b) * (r + b)) / (2.0 * a) +
                   b * 0.5 * std::sqrt(pi / a) * std::erfc(sa * (r + b));
    return std::exp(log_amplitude) * pi / (a * b) * inner;
}

void require_corrector_support(double xi, const PotentialModel& model, const char* who)
{
    if (model.kind == PotentialModel::Kind::free)
        throw std::invalid_argument(std::string(who) + ": free model has no corrector");
    if (model.kind == PotentialModel::Kind::harmonic && model.dimension != 3 && xi > 0.0)
        throw std::invalid_argument(std::string(who) +
                                    ": harmonic corrector away from the origin needs d = 3");
}

} // namespace

double corrector_K(std::span<const double> x, const PotentialModel& model,
                   const QuadratureSpec& spec)
{
    model.validate();
    spec.validate();
    const double xi = norm_of(x);
    require_corrector_support(xi, model, "corrector_K");

    const int d = model.dimension;
    const double rho = critical_radius(x, model);
    const double rho2 = rho * rho;

    double term1, term2, term3;
    if (model.kind == PotentialModel::Kind::constant_mass) {
        const double m2 = model.mass * model.mass;
        term1 = integrate_finite([m2](double t) { return std::expm1(-m2 * t) / t; }, 0.0,
                                 rho2, spec)
                    .value;
        term2 = -integrate_finite(
                     [m2, d](double t) {
                         return std::exp(-m2 * t) *
                                regularized_gamma_q(0.5 * d, 1.0 / (4.0 * t)) / t;
                     },
                     0.0, rho2, spec)
                     .value;
        auto tail3 = [m2, d, rho2](double u) {
            double t = rho2 + u;
            return std::exp(-m2 * t) * regularized_gamma_p(0.5 * d, 1.0 / (4.0 * t)) / t;
        };
        QuadratureSpec s3 = spec;
        s3.split_point = 1.0;
        term3 = integrate_semi_infinite(
                    tail3, s3, TailBound::exponential(std::exp(-m2 * rho2) / rho2, m2))
                    .value;
    } else {
        auto ball = [&](double t) {
            MehlerGaussian g = mehler_gaussian(xi, t, d);
            return gaussian_ball_mass(g.log_amplitude, g.a, g.offset, 1.0, d);
        };
        auto outside = [&](double t) {
            MehlerGaussian g = mehler_gaussian(xi, t, d);
            return gaussian_outside_mass(g.log_amplitude, g.a, g.offset, 1.0, d);
        };
        term1 = integrate_finite(
                    [&](double t) { return std::expm1(mehler_log_mass(xi, t, d)) / t; }, 0.0,
                    rho2, spec)
                    .value;
        term2 = -integrate_finite([&](double t) { return outside(t) / t; }, 0.0, rho2, spec)
                     .value;
        QuadratureSpec s3 = spec;
        s3.split_point = 1.0;
        double coef = std::pow(2.0, 0.5 * d) * std::exp(-d * rho2) / rho2;
        term3 = integrate_semi_infinite([&](double u) { return ball(rho2 + u) / (rho2 + u); },
                                        s3, TailBound::exponential(coef, d))
                    .value;
    }
    return 2.0 * std::log(rho) + term1 + term2 + term3 + euler_gamma();
}

double corrector_h(std::span<const double> x, const PotentialModel& model,
                   const QuadratureSpec& spec)
{
    model.validate();
    spec.validate();
    const double xi = norm_of(x);
    require_corrector_support(xi, model, "corrector_h");
    const int d = model.dimension;

    double dterm;
    QuadratureSpec s = spec;
    s.split_point = 1.0;
    if (model.kind == PotentialModel::Kind::constant_mass) {
        const double m2 = model.mass * model.mass;
        auto integrand = [m2, d](double u) {
            return std::expm1(-m2 * u) * regularized_gamma_p(0.5 * d, 1.0 / (4.0 * u)) / u;
        };
        double coef = std::pow(0.25, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
        dterm = integrate_semi_infinite(integrand, s, TailBound::power_law(coef, 0.5 * d + 1.0))
                    .value;
    } else {
        // ball_V - ball_free = (mass_V - 1) + (outside_free - outside_V),
        // every piece cancellation-free
        auto integrand = [&](double u) {
            MehlerGaussian g = mehler_gaussian(xi, u, d);
            double mass_defect = std::expm1(mehler_log_mass(xi, u, d));
            double out_free = regularized_gamma_q(0.5 * d, 1.0 / (4.0 * u));
            double out_v = gaussian_outside_mass(g.log_amplitude, g.a, g.offset, 1.0, d);
            return (mass_defect + out_free - out_v) / u;
        };
        double coef = std::pow(0.25, 0.5 * d) / std::tgamma(0.5 * d + 1.0) +
                      std::pow(2.0, 0.5 * d) * std::exp(-static_cast<double>(d));
        dterm = integrate_semi_infinite(integrand, s, TailBound::power_law(coef, 0.5 * d + 1.0))
                    .value;
    }

    // The boundary limit of the ball piece of 2 u_f is (alpha_d/2) f(x)
    // under this normalization of u_f (direct computation:
    // \int_{B(0,t)} Gamma(d/2) pi^{-d/2} (|z|^2+t^2)^{-d/2} dz = alpha_d/2),
    // so alpha_d enters h with the half weight.
    AlphaBeta ab = alpha_beta(d, spec);
    return corrector_K(x, model, spec) - dterm - 0.5 * ab.alpha_d - ab.beta_d;
}

CorrectorValues corrector_values(std::span<const double> x, const PotentialModel& model,
                                 const QuadratureSpec& spec)
{
    AlphaBeta ab = alpha_beta(model.dimension, spec);
    CorrectorValues cv;
    cv.x_norm = norm_of(x);
    cv.rho = critical_radius(x, model);
    cv.K_of_x = corrector_K(x, model, spec);
    cv.h_of_x = corrector_h(x, model, spec);
    cv.alpha_d = ab.alpha_d;
    cv.beta_d = ab.beta_d;
    return cv;
}

RadialProfile::RadialProfile(std::function<double(double)> radial, bool is_gaussian,
                             double amplitude, double width, double lipschitz, TailBound tail)
    : radial_(std::move(radial)),
      is_gaussian_(is_gaussian),
      amplitude_(amplitude),
      width_(width),
      lipschitz_(lipschitz),
      tail_(tail)
{
}

RadialProfile RadialProfile::gaussian(double amplitude, double width)
{
    if (!(width > 0.0))
        throw std::invalid_argument("RadialProfile::gaussian: width must be positive");
    auto F = [amplitude, width](double r) { return amplitude * std::exp(-width * r * r); };
    double lip = std::abs(amplitude) * std::sqrt(2.0 * width) * std::exp(-0.5);
    // e^{-w r^2} <= e^{-w r} on r >= 1
    TailBound tail = TailBound::exponential(std::max(std::abs(amplitude), 1e-300), width);
    return RadialProfile(std::move(F), true, amplitude, width, lip, tail);
}

RadialProfile RadialProfile::custom(std::function<double(double)> radial,
                                    double lipschitz_bound, TailBound spatial_tail)
{
    if (!(lipschitz_bound >= 0.0))
        throw std::invalid_argument("RadialProfile::custom: bad Lipschitz bound");
    return RadialProfile(std::move(radial), false, 0.0, 0.0, lipschitz_bound, spatial_tail);
}

namespace {

// \int_0^infty T_t^V(x,y)/t dt for constant mass, as a function of
// z = |x-y|:  (pi z^2)^{-d/2} \int_0^infty e^{-v - m^2 z^2 / 4v} v^{d/2-1} dv
double log_kernel_constant(double z, double m, int d, const QuadratureSpec& spec)
{
    double c = 0.25 * m * m * z * z;
    auto g = [c, d](double v) {
        return std::exp(-v - c / v + (0.5 * d - 1.0) * std::log(v));
    };
    // v^{d/2-1} e^{-v/2} peaks at v = d-2
    double peak = std::max(1.0, d - 2.0);
    double coef = std::exp((0.5 * d - 1.0) * std::log(peak) - 0.5 * peak) + 1e-12;
    QuadratureSpec s = spec;
    s.split_point = peak;
    double J = integrate_semi_infinite(g, s, TailBound::exponential(coef, 0.5)).value;
    return std::exp(-0.5 * d * std::log(pi * z * z)) * J;
}

// same kernel for the harmonic potential at x = 0, d = 3: the free part
// 1/(2 pi z^3) in closed form plus a regular correction integral
double log_kernel_harmonic_origin(double z, const QuadratureSpec& spec)
{
    auto correction = [z](double t) {
        double lt_free = -1.5 * std::log(4.0 * pi * t) - z * z / (4.0 * t);
        double log_ratio, qdiff;
        if (t < 0.05) {
            double t2 = t * t;
            // sinh(2t)/(2t) - 1 and (2t cosh 2t - sinh 2t)/(4t sinh 2t) by series
            double r = t2 * (2.0 / 3.0 + t2 * (2.0 / 15.0 + t2 * (4.0 / 315.0)));
            log_ratio = std::log1p(r);
            double num = t * t2 * (8.0 / 3.0 + t2 * (16.0 / 15.0 + t2 * (768.0 / 5040.0)));
            qdiff = num / (4.0 * t * std::sinh(2.0 * t));
        } else if (t > 20.0) {
            // coth(2t) = 1 past double resolution
            log_ratio = log_sinh(2.0 * t) - std::log(2.0 * t);
            qdiff = 0.5 - 1.0 / (4.0 * t);
        } else {
            log_ratio = log_sinh(2.0 * t) - std::log(2.0 * t);
            qdiff = (2.0 * t * std::cosh(2.0 * t) - std::sinh(2.0 * t)) /
                    (4.0 * t * std::sinh(2.0 * t));
        }
        double delta = -1.5 * log_ratio - z * z * qdiff;
        double tfree = std::exp(lt_free);
        if (tfree == 0.0) return 0.0;
        return tfree * std::expm1(delta) / t;
    };
    QuadratureSpec s = spec;
    s.split_point = 1.0;
    double corr = integrate_semi_infinite(correction, s, TailBound::power_law(0.05, 2.5)).value;
    return 1.0 / (2.0 * pi * z * z * z) + corr;
}

// inner angular integral \int_{-1}^{1} F(sqrt(xi^2+s^2+2 s xi mu)) dmu for a
// Gaussian profile (closed form) or a custom profile (nested quadrature)
double angular_mean(const RadialProfile& f, double xi, double s, const QuadratureSpec& spec)
{
    if (f.is_gaussian()) {
        double a = f.width();
        double w = 2.0 * a * s * xi;
        double sinhc = (w < 1e-4) ? 1.0 + w * w / 6.0 : std::sinh(w) / w;
        return 2.0 * f.amplitude() * std::exp(-a * (s * s + xi * xi)) * sinhc;
    }
    auto g = [&](double mu) {
        return f(std::sqrt(xi * xi + s * s + 2.0 * s * xi * mu));
    };
    QuadratureSpec inner = spec;
    inner.abs_tol = std::max(spec.abs_tol * 0.1, 1e-14);
    return integrate_finite(g, -1.0, 1.0, inner).value;
}

} // namespace

double log_schrodinger_pointwise(const RadialProfile& f, std::span<const double> x,
                                 const PotentialModel& model, const QuadratureSpec& spec)
{
    model.validate();
    spec.validate();
    const int d = model.dimension;
    const double xi = norm_of(x);

    if (model.kind == PotentialModel::Kind::free)
        throw std::invalid_argument("log_schrodinger_pointwise: free model unsupported");
    if (model.kind == PotentialModel::Kind::harmonic && (xi > 0.0 || d != 3))
        throw std::invalid_argument(
            "log_schrodinger_pointwise: harmonic potential supported at x = 0, d = 3");
    if (model.kind == PotentialModel::Kind::constant_mass && xi > 0.0 && d != 3)
        throw std::invalid_argument(
            "log_schrodinger_pointwise: off-origin evaluation needs d = 3");

    QuadratureSpec inner = spec;
    inner.abs_tol = std::max(1e-14, spec.abs_tol * 0.01);
    inner.rel_tol = std::max(1e-13, spec.rel_tol * 0.1);

    auto kernel = [&](double z) {
        return model.kind == PotentialModel::Kind::constant_mass
                   ? log_kernel_constant(z, model.mass, d, inner)
                   : log_kernel_harmonic_origin(z, inner);
    };

    const double fx = f(xi);
    const double surface = 2.0 * std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d);
    const double free_kernel_coef = std::tgamma(0.5 * d) * std::pow(pi, -0.5 * d);

    double in_part, out_part;
    if (xi == 0.0) {
        auto in_integrand = [&](double s) {
            return (f(s) - fx) * kernel(s) * std::pow(s, d - 1.0);
        };
        in_part = surface * integrate_finite(in_integrand, 0.0, 1.0, spec).value;

        auto out_integrand = [&](double u) {
            double s = 1.0 + u;
            return f(s) * kernel(s) * std::pow(s, d - 1.0);
        };
        // |f G s^{d-1}| <= tail(f) * Gamma(d/2) pi^{-d/2} / s
        const TailBound& ft = f.spatial_tail();
        TailBound tb = ft.kind == TailBound::Kind::exponential
                           ? TailBound::exponential(ft.coefficient * free_kernel_coef *
                                                        std::exp(-ft.rate),
                                                    ft.rate)
                           : TailBound::power_law(ft.coefficient * free_kernel_coef,
                                                  ft.exponent + 1.0);
        QuadratureSpec so = spec;
        so.split_point = 1.0;
        out_part = surface * integrate_semi_infinite(out_integrand, so, tb).value;
    } else {
        auto in_integrand = [&](double s) {
            double w = angular_mean(f, xi, s, spec) - 2.0 * fx;
            return s * s * kernel(s) * w;
        };
        in_part = 2.0 * pi * integrate_finite(in_integrand, 0.0, 1.0, spec).value;

        auto out_integrand = [&](double u) {
            double s = 1.0 + u;
            return s * s * kernel(s) * angular_mean(f, xi, s, spec);
        };
        // angular mean <= 2 sup_{r >= s - xi} |F|; kernel s^2 <= c/s
        const TailBound& ft = f.spatial_tail();
        double split = std::max(1.0, xi + 1.0);
        TailBound tb = ft.kind == TailBound::Kind::exponential
                           ? TailBound::exponential(2.0 * ft.coefficient * free_kernel_coef *
                                                        std::exp(ft.rate * xi),
                                                    ft.rate)
                           : TailBound::power_law(2.0 * ft.coefficient * free_kernel_coef *
                                                      std::pow(2.0, ft.exponent),
                                                  ft.exponent + 1.0);
        QuadratureSpec so = spec;
        so.split_point = split;
        out_part = 2.0 * pi * integrate_semi_infinite(out_integrand, so, tb).value;
    }

    return -in_part - out_part - fx * corrector_K(x, model, spec);
}

double log_schrodinger_spectral(const RadialProfile& f, std::span<const double> x,
                                double m, int d, const QuadratureSpec& spec)
{
    if (d != 3)
        throw std::invalid_argument("log_schrodinger_spectral: closed inverse transform needs d = 3");
    if (!f.is_gaussian())
        throw std::invalid_argument("log_schrodinger_spectral: requires a Gaussian profile");
    if (!(m > 0.0)) throw std::invalid_argument("log_schrodinger_spectral: m must be positive");
    spec.validate();

    const double A = f.amplitude();
    const double a = f.width();
    const double xi = norm_of(x);
    const double fhat_coef = A * std::pow(pi / a, 1.5);

    auto integrand = [&](double rho) {
        return std::log(rho * rho + m * m) * fhat_coef * std::exp(-rho * rho / (4.0 * a)) *
               rho * rho * sinc(rho * xi) / (2.0 * pi * pi);
    };
    // beyond rho = max(8a, 4): e^{-rho^2/4a} <= e^{-2 rho} and
    // rho^2 log(rho^2+m^2) <= (1 + log(1+m^2)) e^rho
    QuadratureSpec s = spec;
    s.split_point = std::max({8.0 * a, 4.0, spec.split_point});
    double coef =
        std::abs(fhat_coef) * (1.0 + std::log1p(m * m)) / (2.0 * pi * pi) + 1e-12;
    return integrate_semi_infinite(integrand, s, TailBound::exponential(coef, 1.0)).value;
}

namespace {

// T_u^V(f)(x) in closed form for a Gaussian profile
double semigroup_on_gaussian(const RadialProfile& f, double xi, double u,
                             const PotentialModel& model)
{
    const double A = f.amplitude();
    const double a = f.width();
    const int d = model.dimension;
    if (model.kind == PotentialModel::Kind::constant_mass) {
        double den = 1.0 + 4.0 * a * u;
        return A * std::exp(-model.mass * model.mass * u - 0.5 * d * std::log(den) -
                            a * xi * xi / den);
    }
    // harmonic, x = 0: (2 a sinh 2u + cosh 2u)^{-d/2}
    double lsh = log_sinh(2.0 * u);
    double lch = log_cosh(2.0 * u);
    double big = std::max(lsh + std::log(2.0 * a), lch);
    double small = std::min(lsh + std::log(2.0 * a), lch);
    double logden = big + std::log1p(std::exp(small - big));
    return A * std::exp(-0.5 * d * logden);
}

void require_gaussian_constant(const RadialProfile& f, const PotentialModel& model,
                               const char* who)
{
    if (!f.is_gaussian())
        throw std::invalid_argument(std::string(who) + ": requires a Gaussian profile");
    if (model.kind != PotentialModel::Kind::constant_mass)
        throw std::invalid_argument(std::string(who) + ": requires the constant-mass model");
}

} // namespace

double schrodinger_extension_u(const RadialProfile& f, std::span<const double> x, double t,
                               const PotentialModel& model, const QuadratureSpec& spec,
                               ContinuousExtensionMethod method)
{
    model.validate();
    spec.validate();
    if (!(t > 0.0)) throw std::domain_error("schrodinger_extension_u: t must be positive");
    const double xi = norm_of(x);
    if (!f.is_gaussian())
        throw std::invalid_argument("schrodinger_extension_u: requires a Gaussian profile");

    if (method == ContinuousExtensionMethod::multiplier) {
        require_gaussian_constant(f, model, "schrodinger_extension_u (multiplier)");
        if (model.dimension != 3)
            throw std::invalid_argument("schrodinger_extension_u (multiplier): needs d = 3");
        const double m = model.mass;
        const double a = f.width();
        const double fhat_coef = f.amplitude() * std::pow(pi / a, 1.5);
        auto integrand = [&](double rho) {
            return bessel_k0(t * std::sqrt(rho * rho + m * m)) * fhat_coef *
                   std::exp(-rho * rho / (4.0 * a)) * rho * rho * sinc(rho * xi) /
                   (2.0 * pi * pi);
        };
        QuadratureSpec s = spec;
        s.split_point = std::max({8.0 * a, 4.0, spec.split_point});
        double coef = std::abs(fhat_coef) * bessel_k0(t * m) / (2.0 * pi * pi) + 1e-12;
        return integrate_semi_infinite(integrand, s, TailBound::exponential(coef, 1.0)).value;
    }

    if (model.kind == PotentialModel::Kind::harmonic && xi > 0.0)
        throw std::invalid_argument(
            "schrodinger_extension_u: harmonic potential supported at x = 0");
    if (model.kind == PotentialModel::Kind::free)
        throw std::invalid_argument("schrodinger_extension_u: free model unsupported");

    const double A = std::abs(f.amplitude()) + 1e-300;
    if (t >= 1e-4) {
        auto integrand = [&](double u) {
            return 0.5 * semigroup_on_gaussian(f, xi, u, model) *
                   std::exp(-t * t / (4.0 * u)) / u;
        };
        double rate = model.kind == PotentialModel::Kind::constant_mass
                          ? model.mass * model.mass
                          : static_cast<double>(model.dimension);
        double coef = model.kind == PotentialModel::Kind::constant_mass
                          ? 0.5 * A
                          : 0.5 * A * std::pow(2.0, 0.5 * model.dimension);
        QuadratureSpec s = spec;
        s.split_point = 1.0;
        return integrate_semi_infinite(integrand, s, TailBound::exponential(coef, rate)).value;
    }
    auto integrand = [&](double v) {
        return 0.5 * semigroup_on_gaussian(f, xi, t * t / (4.0 * v), model) * std::exp(-v) / v;
    };
    QuadratureSpec s = spec;
    s.split_point = 1.0;
    return integrate_semi_infinite(integrand, s, TailBound::exponential(A, 1.0)).value;
}

BoundaryRecovery boundary_recovery(const RadialProfile& f, std::span<const double> x,
                                   const PotentialModel& model,
                                   std::span<const double> t_grid,
                                   const QuadratureSpec& spec)
{
    require_gaussian_constant(f, model, "boundary_recovery");
    if (t_grid.size() < 4)
        throw std::invalid_argument("boundary_recovery: needs at least 4 grid points");
    for (size_t i = 0; i + 1 < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i + 1]) || !(t_grid[i + 1] > 0.0))
            throw std::invalid_argument("boundary_recovery: grid must be positive decreasing");
    if (!(t_grid.front() < 1.0))
        throw std::invalid_argument("boundary_recovery: grid must lie in (0,1)");

    const double xi = norm_of(x);
    const double fx = f(xi);
    const double A = std::abs(f.amplitude()) + 1e-300;

    std::vector<std::pair<double, double>> flux, ratio, logsamp;
    for (double t : t_grid) {
        // t d_t u_f = -\int_0^infty T^V_{t^2/4w}(f)(x) e^{-w} dw
        auto integrand = [&](double w) {
            return semigroup_on_gaussian(f, xi, t * t / (4.0 * w), model) * std::exp(-w);
        };
        QuadratureSpec s = spec;
        s.split_point = 1.0;
        double tdu =
            -integrate_semi_infinite(integrand, s, TailBound::exponential(A, 1.0)).value;
        double u = schrodinger_extension_u(f, x, t, model, spec);
        flux.emplace_back(t, tdu);
        ratio.emplace_back(-1.0 / std::log(t), u / std::log(t));
        logsamp.emplace_back(t, u + fx * std::log(t));
    }

    BoundaryRecovery out;
    out.flux = richardson_limit(flux, LimitModel::power);
    out.log_ratio = linear_zero_limit(ratio);
    ConvergenceReport value_rep = richardson_limit(logsamp, LimitModel::power);
    if (!value_rep.converged)
        throw NonConvergenceError("boundary_recovery: boundary value limit did not contract",
                                  value_rep.error_estimate);
    out.log_value = -2.0 * value_rep.extrapolated_limit - fx * corrector_h(x, model, spec);
    return out;
}

ConvergenceReport small_s_limit_constant(const RadialProfile& f, std::span<const double> x,
                                         double m, std::span<const double> s_grid,
                                         const QuadratureSpec& spec)
{
    if (!f.is_gaussian())
        throw std::invalid_argument("small_s_limit_constant: requires a Gaussian profile");
    if (s_grid.size() < 3)
        throw std::invalid_argument("small_s_limit_constant: needs at least 3 grid points");
    for (double s : s_grid)
        if (!(s > 0.0 && s <= 0.5))
            throw std::invalid_argument("small_s_limit_constant: grid must lie in (0, 1/2]");
    spec.validate();

    const double A = f.amplitude();
    const double a = f.width();
    const double xi = norm_of(x);
    const double fhat_coef = A * std::pow(pi / a, 1.5);

    if (A == 0.0) {
        ConvergenceReport r;
        r.samples_used = static_cast<int>(s_grid.size());
        r.converged = true;
        return r;
    }

    std::vector<std::pair<double, double>> samples;
    for (double s : s_grid) {
        auto integrand = [&](double rho) {
            double lambda_log = std::log(rho * rho + m * m);
            return std::expm1(s * lambda_log) / s * fhat_coef *
                   std::exp(-rho * rho / (4.0 * a)) * rho * rho * sinc(rho * xi) /
                   (2.0 * pi * pi);
        };
        // |(lambda^s - 1)/s| <= sqrt(lambda) log lambda for lambda >= 1, s <= 1/2
        QuadratureSpec sp = spec;
        sp.split_point = std::max({8.0 * a, 12.0 + m, spec.split_point});
        double coef = 4.0 * std::abs(fhat_coef) * std::sqrt(1.0 + m * m) *
                          (1.0 + std::log1p(m * m)) / (2.0 * pi * pi) +
                      1e-12;
        double v = integrate_semi_infinite(integrand, sp, TailBound::exponential(coef, 1.0))
                       .value;
        samples.emplace_back(s, v);
    }
    // analytic in s: polynomial extrapolation
    return polynomial_zero_limit(samples);
}

} // namespace loglap
