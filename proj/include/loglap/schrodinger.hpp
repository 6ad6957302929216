#pragma once

// The logarithmic Schrodinger operator log(-Delta + V) for potentials with
// closed-form heat kernels: the free Gaussian kernel, the constant-mass
// kernel e^{-m^2 t} T_t, and the harmonic-oscillator (Mehler) kernel.
// Provides the critical radius rho(x), the boundary constants alpha_d and
// beta_d, the correctors K(x) and h(x), the pointwise kernel
// representation, the subordination extension u_f, and the spectral
// multiplier oracle log(|xi|^2 + m^2) for constant mass.

#include "loglap/quadrature.hpp"

#include <functional>
#include <span>
#include <vector>

namespace loglap {

struct PotentialModel {
    enum class Kind { free, constant_mass, harmonic };
    Kind kind = Kind::free;
    double mass = 0.0; // constant_mass only
    int dimension = 3;

    static PotentialModel free_laplacian(int d = 3);
    static PotentialModel constant(double m, int d = 3);
    static PotentialModel harmonic(int d = 3);

    void validate() const; // d >= 3; mass > 0 for constant_mass
};

double unit_ball_volume(int d);

/// Heat kernel T_t^V(x, y).  Symmetric in x and y and dominated by the
/// free Gaussian kernel pointwise.
double heat_kernel_V(std::span<const double> x, std::span<const double> y,
                     double t, const PotentialModel& model);

/// Critical radius rho(x) = sup{ r : r^{2-d} \int_{B(x,r)} V <= 1 }.
/// Closed-form for both implemented potentials; rejects the free model.
double critical_radius(std::span<const double> x, const PotentialModel& model);

struct AlphaBeta {
    double alpha_d; // 2 \int_0^1 (1+t)^{-d/2} t^{d/2-1} dt
    double beta_d;  // 2 \int_1^infty ((r^2+1)^{-d/2} - r^{-d}) r^{d-1} dr
};

AlphaBeta alpha_beta(int d, const QuadratureSpec& spec);

/// The corrector K(x): 2 log rho(x), the three kernel integrals split at
/// t = rho(x)^2, plus gamma.  constant_mass supports any d >= 3; harmonic
/// supports d = 3 at arbitrary x and any d at x = 0.
double corrector_K(std::span<const double> x, const PotentialModel& model,
                   const QuadratureSpec& spec);

/// h(x) = K(x) - \int_{B(x,1)} \int_0^infty (T_u^V - T_u)/u du dy
///        - alpha_d/2 - beta_d.  The half weight on alpha_d is what the
/// boundary limit of u_f produces under this normalization.
double corrector_h(std::span<const double> x, const PotentialModel& model,
                   const QuadratureSpec& spec);

struct CorrectorValues {
    double x_norm;
    double rho;
    double K_of_x;
    double h_of_x;
    double alpha_d;
    double beta_d;
};

CorrectorValues corrector_values(std::span<const double> x, const PotentialModel& model,
                                 const QuadratureSpec& spec);

/// A closed-form radial profile f(y) = F(|y|), Lipschitz and integrable
/// against (1+|y|)^{-d}.  Gaussian profiles carry their transform in
/// closed form; custom profiles supply a Lipschitz bound and a rigorous
/// spatial tail bound valid for r >= 1.
class RadialProfile {
public:
    static RadialProfile gaussian(double amplitude, double width);
    static RadialProfile custom(std::function<double(double)> radial,
                                double lipschitz_bound, TailBound spatial_tail);

    double operator()(double r) const { return radial_(r); }
    bool is_gaussian() const { return is_gaussian_; }
    double amplitude() const { return amplitude_; }
    double width() const { return width_; }
    double lipschitz_bound() const { return lipschitz_; }
    const TailBound& spatial_tail() const { return tail_; }

private:
    RadialProfile(std::function<double(double)> radial, bool is_gaussian, double amplitude,
                  double width, double lipschitz, TailBound tail);

    std::function<double(double)> radial_;
    bool is_gaussian_;
    double amplitude_;
    double width_;
    double lipschitz_;
    TailBound tail_;
};

/// Pointwise kernel representation of log(-Delta + V) f at x for radial f:
/// -\int_{B(x,1)}(f(y)-f(x)) G_V dy - \int_{B(x,1)^c} f(y) G_V dy - f(x) K(x),
/// G_V(x,y) = \int_0^infty T_t^V(x,y)/t dt.  constant_mass: any |x| at
/// d = 3, x = 0 at other d; harmonic: x = 0, d = 3.
double log_schrodinger_pointwise(const RadialProfile& f, std::span<const double> x,
                                 const PotentialModel& model, const QuadratureSpec& spec);

/// Spectral evaluation (2pi)^{-d} \int log(|xi|^2+m^2) fhat e^{i<xi,x>} dxi
/// for Gaussian f at d = 3, reduced to a radial integral.  Serves as the
/// independent oracle for the constant-mass operator.
double log_schrodinger_spectral(const RadialProfile& f, std::span<const double> x,
                                double m, int d, const QuadratureSpec& spec);

enum class ContinuousExtensionMethod { subordination, multiplier };

/// u_f(x,t) = (1/2) \int_0^infty T_u^V(f)(x) e^{-t^2/4u}/u du for Gaussian
/// f.  The multiplier route (2pi)^{-d} \int K_0(t sqrt(|xi|^2+m^2)) fhat ...
/// is available for constant mass as an independent oracle.
double schrodinger_extension_u(const RadialProfile& f, std::span<const double> x, double t,
                               const PotentialModel& model, const QuadratureSpec& spec,
                               ContinuousExtensionMethod method =
                                   ContinuousExtensionMethod::subordination);

struct BoundaryRecovery {
    ConvergenceReport flux;      // t d_t u_f -> -f(x)
    ConvergenceReport log_ratio; // u_f / log t -> -f(x)
    double log_value;            // -2 lim (u_f + f(x) log t) - f(x) h(x)
};

/// The three boundary identities of the extension problem at a point,
/// extrapolated over a geometric t-grid.  constant_mass only.
BoundaryRecovery boundary_recovery(const RadialProfile& f, std::span<const double> x,
                                   const PotentialModel& model,
                                   std::span<const double> t_grid,
                                   const QuadratureSpec& spec);

/// ((-Delta + m^2)^s f - f)/s at x over a decreasing s-grid in (0, 1/2],
/// extrapolated to s = 0; the limit matches the spectral evaluation.
ConvergenceReport small_s_limit_constant(const RadialProfile& f, std::span<const double> x,
                                         double m, std::span<const double> s_grid,
                                         const QuadratureSpec& spec);

} // namespace loglap
