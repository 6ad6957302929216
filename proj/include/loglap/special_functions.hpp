#pragma once

// Exact-formula evaluation of the special functions every kernel and
// constant in this library depends on: scaled modified Bessel functions,
// exponential integrals and the regularized incomplete gamma function.
// All routines are pure, reentrant and work in double precision with
// compensated summation where cancellation matters.

#include <stdexcept>

namespace loglap {

inline constexpr double euler_mascheroni = 0.57721566490153286060651209008240243;

/// e^{-x} I_order(x), the exponentially scaled modified Bessel function of
/// the first kind.  Power series below x = 2*max(10, order), normalized
/// backward recurrence above.  Relative accuracy ~1e-13 for x <= 1e6.
double bessel_i_scaled(int order, double x);

/// A scaled Bessel evaluation together with its arguments.  Values lie in
/// [0,1], are positive for x > 0 or order 0, and are nonincreasing in the
/// order at fixed argument.
struct ScaledBesselValue {
    int order;
    double argument;
    double value;
};

ScaledBesselValue scaled_bessel(int order, double x);

/// K_0(x), the modified Bessel function of the second kind of order zero.
/// Ascending series for x <= 2, trapezoidal evaluation of
/// \int_0^infty e^{-x cosh s} ds above (geometric convergence).
double bessel_k0(double x);

/// E_1(x) = \int_x^infty e^{-v}/v dv for x > 0.  Alternating series for
/// x <= 1, modified-Lentz continued fraction for x > 1.
double exp_integral_e1(double x);

/// Ein(x) = \int_0^x (1 - e^{-v})/v dv, entire; evaluated by its
/// everywhere-convergent series.  Satisfies E_1(x) = -gamma - log x + Ein(x).
double exp_integral_ein(double x);

/// The Euler-Mascheroni constant as a stored reference value.
double euler_gamma();

/// P(a,x) = gamma(a,x) / Gamma(a), the regularized lower incomplete gamma
/// function.  Monotone in x, P(a,0) = 0, P(a,x) -> 1 as x -> infinity.
double regularized_gamma_p(double a, double x);

/// Q(a,x) = 1 - P(a,x), computed directly on its own branch so that tiny
/// tails keep full relative accuracy.
double regularized_gamma_q(double a, double x);

} // namespace loglap
