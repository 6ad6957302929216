#pragma once

// The extension function u_f(n,t) = \int_0^infty p_u(f)(n) e^{-t^2/4u}/u du
// on Z x (0,infty), its t-derivatives under the integral sign, the
// degenerate-PDE residual, and the boundary limits that recover
// log(-Delta_d) f up to the explicit constant
// K = -gamma + \int_{1/4}^infty e^{-v}/v dv - \int_0^{1/4}(1-e^{-v})/v dv.

#include "loglap/lattice.hpp"
#include "loglap/quadrature.hpp"

#include <span>
#include <string>
#include <vector>

namespace loglap {

enum class ExtensionMethod {
    subordination, // the defining heat-semigroup integral
    multiplier,    // (1/pi) \int K_0(2t sin(theta/2)) fhat e^{in theta} dtheta
};

double extension_u(const LatticeFunction& f, int n, double t,
                   const QuadratureSpec& spec,
                   ExtensionMethod method = ExtensionMethod::subordination);

/// d/dt u_f, differentiated analytically under the integral sign.
double extension_dt(const LatticeFunction& f, int n, double t,
                    const QuadratureSpec& spec);

/// d^2/dt^2 u_f, analytic form.
double extension_dtt(const LatticeFunction& f, int n, double t,
                     const QuadratureSpec& spec);

/// (d_tt + d_t/t + Delta_d) u_f at (n, t); vanishes identically.
double pde_residual(const LatticeFunction& f, int n, double t,
                    const QuadratureSpec& spec);

struct BoundaryLimits {
    ConvergenceReport flux_limit;      // t d_t u_f -> -2 f(n)
    ConvergenceReport log_ratio_limit; // u_f / log t -> -2 f(n)
};

/// Both boundary limits, extrapolated from a geometric t-grid (all t < 1,
/// at least 4 points).  The log-ratio is extrapolated in the variable
/// -1/log t, in which its error term is linear.
BoundaryLimits boundary_limits(const LatticeFunction& f, int n,
                               std::span<const double> t_grid,
                               const QuadratureSpec& spec);

/// The explicit constant of the boundary recovery identity; equals
/// 2 log 2 - 2 gamma.
double extension_log_constant();

/// log(-Delta_d) f at n recovered from boundary data:
/// -lim_{t->0}(u_f(n,t) + 2 f(n) log t) + f(n) K.
/// Throws NonConvergenceError when the extrapolation does not contract.
double log_via_extension(const LatticeFunction& f, int n,
                         std::span<const double> t_grid,
                         const QuadratureSpec& spec);

/// Sampled extension values along a decreasing t-grid at one site.
struct ExtensionTrace {
    int site = 0;
    std::vector<double> t;
    std::vector<double> u;
    std::vector<double> t_du;
    std::vector<double> residual;

    /// Header "t,u,t_du,residual" plus one row per grid point.
    std::string to_csv() const;
};

ExtensionTrace extension_trace(const LatticeFunction& f, int site,
                               std::span<const double> t_grid,
                               const QuadratureSpec& spec);

} // namespace loglap
