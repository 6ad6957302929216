#pragma once

// The discrete heat semigroup on Z: the kernel p_t(m) = e^{-2t} I_|m|(2t),
// its convolution action on finitely supported sequences, and window
// helpers with certified truncation bounds.

#include <iosfwd>
#include <string>
#include <vector>

namespace loglap {

/// A finitely supported real sequence on Z, stored as a contiguous window.
/// Equality disregards zero padding; indices outside the window read as 0.
class LatticeFunction {
public:
    LatticeFunction() = default;
    LatticeFunction(int offset, std::vector<double> values);

    static LatticeFunction delta(int site);

    double operator()(int n) const;
    int min_index() const { return offset_; }
    int max_index() const { return offset_ + static_cast<int>(values_.size()) - 1; }
    bool is_zero() const;
    const std::vector<double>& values() const { return values_; }

    /// Sum_m |f(m)| (finite support makes every summability gate automatic).
    double abs_sum() const;

    /// One "index,value" line per stored entry.
    std::string to_csv() const;
    static LatticeFunction from_csv(std::istream& in);

    friend bool operator==(const LatticeFunction& a, const LatticeFunction& b);

private:
    int offset_ = 0;
    std::vector<double> values_;
};

LatticeFunction scaled_sum(double a, const LatticeFunction& f,
                           double b, const LatticeFunction& g);
LatticeFunction shifted(const LatticeFunction& f, int by);

/// Heat kernel p_t(m) = e^{-2t} I_|m|(2t); symmetric in m, positive, mass 1.
double heat_kernel(double t, int m);

/// Sampled kernel value together with its arguments; the short- and
/// long-time envelopes 2 t^{|m|}/sqrt(1+|m|) (t <= 1) and
/// C t^{-1/4}/sqrt(1+|m|) (t >= 1) hold for `value`.
struct HeatKernelSample {
    double time;
    int lag;
    double value;
};

HeatKernelSample sample_heat_kernel(double t, int lag);

/// Convolution p_t * f restricted to [window_lo, window_hi]; the sum over
/// the support of f is exact.
LatticeFunction heat_apply(const LatticeFunction& f, double t,
                           int window_lo, int window_hi);

/// Window on which |p_t * f| exceeds tol/10 nowhere outside, certified via
/// the short/long-time kernel envelopes.
std::pair<int, int> significant_window(const LatticeFunction& f, double t, double tol);

} // namespace loglap
