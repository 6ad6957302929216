#pragma once

// Integral evaluation and limit extraction: adaptive Gauss-Kronrod
// quadrature on finite intervals, semi-infinite integration driven by
// caller-supplied tail bounds, periodic quadrature that tolerates a
// logarithmic singularity at the origin, and Richardson extrapolation of
// t -> 0+ limits.

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>

namespace loglap {

/// Tolerances and budget parameters governing every integral evaluation.
struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    double split_point = 1.0;
    int max_subdivisions = 4000;
    double tail_cutoff_factor = 10.0;

    /// Throws std::invalid_argument when the invariants do not hold.
    void validate() const;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

/// Thrown when an adaptive evaluation exhausts its subdivision budget with
/// the error estimate still above tolerance, or when a limit extraction
/// detects no contraction.
class NonConvergenceError : public std::runtime_error {
public:
    NonConvergenceError(const std::string& what, double achieved_error)
        : std::runtime_error(what), achieved_error_(achieved_error) {}
    double achieved_error() const { return achieved_error_; }

private:
    double achieved_error_;
};

/// A rigorous decay bound for a semi-infinite integrand, valid on the tail
/// region u >= split_point:
///   exponential:  |f(u)| <= coefficient * e^{-rate * u}
///   power_law:    |f(u)| <= coefficient * u^{-exponent},  exponent > 1
struct TailBound {
    enum class Kind { exponential, power_law };
    Kind kind;
    double coefficient;
    double rate = 0.0;
    double exponent = 0.0;

    static TailBound exponential(double coefficient, double rate);
    static TailBound power_law(double coefficient, double exponent);
};

/// Adaptive bisection with an embedded Gauss-Kronrod 7-15 estimate per
/// panel.  Endpoints are never evaluated, so integrable endpoint
/// singularities are admissible.
QuadratureResult integrate_finite(const std::function<double(double)>& integrand,
                                  double a, double b, const QuadratureSpec& spec);

/// Integral over (0, infinity).  The finite part up to spec.split_point is
/// handled directly; the tail is truncated (exponential bound) or mapped to
/// a finite interval by the graded substitution u = split/s^4 (power bound).
QuadratureResult integrate_semi_infinite(const std::function<double(double)>& integrand,
                                         const QuadratureSpec& spec,
                                         const TailBound& tail);

/// n-th Fourier coefficient (1/2pi) \int_{-pi}^{pi} symbol(theta) e^{i n theta} dtheta
/// of an even symbol that may carry an integrable log singularity at 0.
/// The graded substitution theta = pi sigma^4 removes the singularity.
double periodic_log_quadrature(const std::function<double(double)>& symbol,
                               int n, const QuadratureSpec& spec);

/// Extrapolated limit of a sampled quantity v(t) as t -> 0+, with the
/// fitted convergence order and a residual-based error estimate.
struct ConvergenceReport {
    double extrapolated_limit = 0.0;
    double observed_order = 0.0;
    double error_estimate = 0.0;
    int samples_used = 0;
    /// False when the sample differences fail to contract ("no convergence
    /// detected"); the limit fields then hold the best available values.
    bool converged = false;
};

enum class LimitModel {
    power,          // v(t) = L + C t^alpha
    power_plus_log, // v(t) = L + C t^alpha log t
};

/// Fits the model on consecutive sample triples (t must be positive and
/// strictly decreasing, at least 3 samples) and extrapolates t -> 0.
ConvergenceReport richardson_limit(std::span<const std::pair<double, double>> samples,
                                   LimitModel model);

/// Neville polynomial extrapolation to t = 0 for data analytic in t (the
/// small-power difference quotients are); uses the last <= 8 samples.
ConvergenceReport polynomial_zero_limit(std::span<const std::pair<double, double>> samples);

/// Fixed-order extrapolation v = L + C t for data known to be linear in
/// the abscissa up to a faster-decaying remainder (the -1/log t
/// substitution of the boundary log-ratio limits); least squares over the
/// last <= 4 samples.
ConvergenceReport linear_zero_limit(std::span<const std::pair<double, double>> samples);

} // namespace loglap
