#include "loglap/lattice.hpp"

#include "loglap/quadrature.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace loglap;

TEST_CASE("heat kernel short-time identity and off-diagonal vanishing")
{
    CHECK(heat_kernel(1e-9, 0) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(heat_kernel(1e-9, 1) < 1e-8);
    CHECK(heat_kernel(1e-9, 5) < 1e-40);
    CHECK_THROWS_AS(heat_kernel(0.0, 0), std::domain_error);
    CHECK_THROWS_AS(heat_kernel(-1.0, 0), std::domain_error);
}

TEST_CASE("heat kernel symmetry and stochastic completeness")
{
    for (int m : {1, 3, 10}) CHECK(heat_kernel(0.7, m) == heat_kernel(0.7, -m));
    double mass = 0.0;
    for (int m = -40; m <= 40; ++m) mass += heat_kernel(1.0, m);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("positivity and windowed mass across time scales")
{
    for (double t : {0.01, 0.1, 1.0, 10.0}) {
        int window = 60 + static_cast<int>(12.0 * t);
        double mass = 0.0;
        for (int m = -window; m <= window; ++m) {
            double p = heat_kernel(t, m);
            CHECK(p >= 0.0);
            mass += p;
        }
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("short-time and long-time kernel envelopes")
{
    for (double u : {0.02, 0.1, 0.5, 1.0}) {
        for (int k = 0; k <= 30; ++k) {
            CHECK(heat_kernel(u, k) <=
                  2.0 * std::pow(u, k) / std::sqrt(1.0 + k) * (1.0 + 1e-12));
        }
    }
    for (double u : {1.0, 3.0, 10.0, 100.0}) {
        for (int k = 0; k <= 30; ++k) {
            double fitted_c = heat_kernel(u, k) * std::pow(u, 0.25) * std::sqrt(1.0 + k);
            CHECK(fitted_c <= 2.0);
        }
    }
}

TEST_CASE("heat kernel agrees with its Fourier representation")
{
    auto spec = test_util::spec();
    for (double t : {0.5, 2.0}) {
        auto symbol = [t](double theta) {
            double s = std::sin(0.5 * theta);
            return std::exp(-4.0 * t * s * s);
        };
        for (int m : {0, 1, 5}) {
            CHECK(heat_kernel(t, m) ==
                  doctest::Approx(periodic_log_quadrature(symbol, m, spec)).epsilon(1e-10));
        }
    }
}

TEST_CASE("convolution with a delta reproduces the kernel")
{
    LatticeFunction delta = LatticeFunction::delta(0);
    LatticeFunction out = heat_apply(delta, 0.4, -6, 6);
    for (int n = -6; n <= 6; ++n) CHECK(out(n) == heat_kernel(0.4, n));
}

TEST_CASE("convolution is linear")
{
    LatticeFunction f(-1, {0.5, -2.0, 1.0});
    LatticeFunction g(2, {3.0});
    LatticeFunction combo = scaled_sum(2.0, f, -1.5, g);
    LatticeFunction lhs = heat_apply(combo, 0.8, -5, 7);
    LatticeFunction rhs = scaled_sum(2.0, heat_apply(f, 0.8, -5, 7), -1.5,
                                     heat_apply(g, 0.8, -5, 7));
    for (int n = -5; n <= 7; ++n) CHECK(lhs(n) == doctest::Approx(rhs(n)).epsilon(1e-14));
}

TEST_CASE("semigroup composition matches the direct kernel")
{
    LatticeFunction delta = LatticeFunction::delta(0);
    auto [lo, hi] = significant_window(delta, 0.3, 1e-13);
    LatticeFunction stage = heat_apply(delta, 0.3, lo, hi);
    LatticeFunction out = heat_apply(stage, 0.7, 2, 2);
    CHECK(out(2) == doctest::Approx(heat_kernel(1.0, 2)).epsilon(1e-12));
}

TEST_CASE("significant window certifies the neglected tail")
{
    LatticeFunction f(-2, {1.0, 0.0, 2.0, -1.0, 0.5});
    for (double t : {0.2, 1.5}) {
        auto [lo, hi] = significant_window(f, t, 1e-10);
        LatticeFunction conv = heat_apply(f, t, lo - 3, hi + 3);
        for (int n : {lo - 3, lo - 2, lo - 1, hi + 1, hi + 2, hi + 3})
            CHECK(std::abs(conv(n)) <= 1e-11);
    }
}

TEST_CASE("lattice function window semantics and equality up to padding")
{
    LatticeFunction f(-1, {1.0, 2.0, 3.0});
    CHECK(f(-2) == 0.0);
    CHECK(f(-1) == 1.0);
    CHECK(f(1) == 3.0);
    CHECK(f(9) == 0.0);

    LatticeFunction padded(-3, {0.0, 0.0, 1.0, 2.0, 3.0, 0.0});
    CHECK(f == padded);
    LatticeFunction different(-1, {1.0, 2.0, 3.5});
    CHECK_FALSE(f == different);
    CHECK(LatticeFunction() == LatticeFunction(5, {0.0, 0.0}));
}

TEST_CASE("csv serialization round trip is exact")
{
    LatticeFunction f(-3, {0.125, -7.0, 1.0 / 3.0, 1e-17, 3.0});
    std::istringstream in(f.to_csv());
    LatticeFunction back = LatticeFunction::from_csv(in);
    for (int n = f.min_index(); n <= f.max_index(); ++n) CHECK(back(n) == f(n));

    std::istringstream bad("1,2,banana\n");
    CHECK_THROWS_AS(LatticeFunction::from_csv(bad), std::invalid_argument);
}

TEST_CASE("heat apply validates its arguments")
{
    LatticeFunction delta = LatticeFunction::delta(0);
    CHECK_THROWS_AS(heat_apply(delta, -0.5, 0, 1), std::domain_error);
    CHECK_THROWS_AS(heat_apply(delta, 1.0, 3, 2), std::invalid_argument);
}

TEST_CASE("heat kernel samples carry their envelope invariants")
{
    for (double t : {0.05, 0.4, 1.0, 6.0}) {
        for (int lag : {-12, -3, 0, 1, 7, 25}) {
            HeatKernelSample s = sample_heat_kernel(t, lag);
            CHECK(s.time == t);
            CHECK(s.lag == lag);
            CHECK(s.value >= 0.0);
            CHECK(s.value <= 1.0);
            double root = std::sqrt(1.0 + std::abs(lag));
            if (t <= 1.0) CHECK(s.value <= 2.0 * std::pow(t, std::abs(lag)) / root * (1 + 1e-12));
            if (t >= 1.0) CHECK(s.value <= 2.0 * std::pow(t, -0.25) / root);
        }
    }
}
