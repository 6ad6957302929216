#pragma once

// The discrete logarithmic Laplacian on Z: the split kernels
// W0(m) = \int_0^1 p_t(m)/t dt and Winf(m) = \int_1^infty p_t(m)/t dt, the
// pointwise representation
//   sum_{m != n} W0(n-m)(f(n)-f(m)) - sum_m Winf(n-m) f(m) - gamma f(n),
// fractional powers, and the Fourier-multiplier oracle with symbol
// log(4 sin^2(theta/2)).

#include "loglap/lattice.hpp"
#include "loglap/quadrature.hpp"

#include <span>
#include <string>
#include <vector>

namespace loglap {

/// Tabulated split kernels up to a maximal lag, symmetric in the lag.
struct LogKernelTable {
    int max_lag = 0;
    std::vector<double> w0;    // w0[k-1] = W0(k), k = 1..max_lag
    std::vector<double> w_inf; // w_inf[k] = Winf(k), k = 0..max_lag
    double gamma = 0.0;

    double w0_at(int lag) const;
    double w_inf_at(int lag) const;
    bool covers(int lag) const { return std::abs(lag) <= max_lag; }

    /// "lag,w0,w_inf" rows for lags 0..max_lag (w0 blank at lag 0).
    std::string to_csv() const;
};

LogKernelTable build_kernel_table(int max_lag, const QuadratureSpec& spec);

/// Pointwise kernel representation of log(-Delta_d) f at site n.  The
/// constant-part tail of the W0 sum is truncated where the bound
/// W0(k) <= 1/(|k| |k|!) certifies the neglected mass below abs_tol/10.
double log_laplacian_pointwise(const LatticeFunction& f, int n,
                               const LogKernelTable& table,
                               double abs_tol = 1e-10);

/// Spectral-multiplier evaluation (1/2pi) \int log(4 sin^2(theta/2))
/// fhat(theta) e^{in theta} dtheta.
double log_laplacian_spectral(const LatticeFunction& f, int n,
                              const QuadratureSpec& spec);

/// Multiplier evaluation with symbol (4 sin^2(theta/2))^s, 0 < s <= 1.
double fractional_power_spectral(const LatticeFunction& f, double s, int n,
                                 const QuadratureSpec& spec);

/// Evaluates ((-Delta_d)^s f - f)/s at n over a decreasing s-grid in
/// (0, 1/2] and extrapolates s -> 0; the limit matches the pointwise
/// representation.
ConvergenceReport small_s_limit_check(const LatticeFunction& f, int n,
                                      std::span<const double> s_grid,
                                      const QuadratureSpec& spec);

} // namespace loglap
