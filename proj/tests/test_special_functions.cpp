#include "loglap/special_functions.hpp"

#include "loglap/lattice.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace loglap;

namespace {

// extended-precision scaled power series, the oracle for moderate arguments
double scaled_bessel_series_oracle(int n, double x)
{
    long double term;
    if (n == 0) {
        term = std::exp(-static_cast<long double>(x));
    } else {
        long double lt = n * std::log(static_cast<long double>(x) / 2.0L) -
                         std::lgamma(static_cast<long double>(n) + 1.0L) -
                         static_cast<long double>(x);
        term = std::exp(lt);
    }
    long double q = static_cast<long double>(x) * x / 4.0L;
    long double sum = term;
    for (int k = 0; k < 20000; ++k) {
        term *= q / ((k + 1.0L) * (n + k + 1.0L));
        sum += term;
        if (term < 1e-25L * sum) break;
    }
    return static_cast<double>(sum);
}

// large-argument expansion e^{-x} I_n(x) ~ (2 pi x)^{-1/2} sum_k a_k(n)/x^k
double scaled_bessel_asymptotic_oracle(int n, double x)
{
    double mu = 4.0 * n * n;
    double t1 = -(mu - 1.0) / (8.0 * x);
    double t2 = (mu - 1.0) * (mu - 9.0) / (2.0 * std::pow(8.0 * x, 2));
    double t3 = -(mu - 1.0) * (mu - 9.0) * (mu - 25.0) / (6.0 * std::pow(8.0 * x, 3));
    double t4 = (mu - 1.0) * (mu - 9.0) * (mu - 25.0) * (mu - 49.0) /
                (24.0 * std::pow(8.0 * x, 4));
    return (1.0 + t1 + t2 + t3 + t4) / std::sqrt(2.0 * M_PI * x);
}

} // namespace

TEST_CASE("scaled Bessel I at the origin")
{
    CHECK(bessel_i_scaled(0, 0.0) == 1.0);
    CHECK(bessel_i_scaled(1, 0.0) == 0.0);
    CHECK(bessel_i_scaled(7, 0.0) == 0.0);
    CHECK_THROWS_AS(bessel_i_scaled(0, -1.0), std::domain_error);
    CHECK_THROWS_AS(bessel_i_scaled(-2, 1.0), std::domain_error);
}

TEST_CASE("scaled Bessel I matches the large-x expansion at x = 50")
{
    double got = bessel_i_scaled(0, 50.0);
    double approx = (1.0 + 1.0 / (8.0 * 50.0)) / std::sqrt(2.0 * M_PI * 50.0);
    CHECK(std::abs(got - approx) / approx < 5e-4); // 3 significant digits
    CHECK(got == doctest::Approx(scaled_bessel_asymptotic_oracle(0, 50.0)).epsilon(1e-7));
}

TEST_CASE("scaled Bessel I against the extended-precision series")
{
    for (int n : {0, 1, 2, 5, 20}) {
        for (double x : {0.1, 0.5, 1.0, 5.0, 19.0, 25.0, 60.0, 300.0, 2000.0}) {
            double want = scaled_bessel_series_oracle(n, x);
            double got = bessel_i_scaled(n, x);
            CHECK(std::abs(got - want) <= 1e-13 * std::max(want, 1e-30));
        }
    }
}

TEST_CASE("scaled Bessel I against the asymptotic expansion at large x")
{
    for (int n : {0, 1, 3}) {
        for (double x : {1e4, 1e5, 1e6}) {
            double want = scaled_bessel_asymptotic_oracle(n, x);
            CHECK(bessel_i_scaled(n, x) == doctest::Approx(want).epsilon(1e-11));
        }
    }
}

TEST_CASE("scaled Bessel I range, monotonicity in order, recurrence")
{
    for (double x = 1e-3; x <= 1e4; x *= 10.0) {
        double prev = 2.0;
        for (int nu = 0; nu <= 50; ++nu) {
            double v = bessel_i_scaled(nu, x);
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            CHECK(v <= prev + 1e-16);
            prev = v;
        }
        for (int nu = 1; nu <= 49; ++nu) {
            double lhs = bessel_i_scaled(nu - 1, x) - bessel_i_scaled(nu + 1, x);
            double rhs = (2.0 * nu / x) * bessel_i_scaled(nu, x);
            double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-280});
            if (scale > 1e-250) CHECK(std::abs(lhs - rhs) / scale < 1e-10);
        }
    }
}

TEST_CASE("heat kernel generating function with factorial tail bound")
{
    for (double t : {0.05, 0.3, 1.0}) {
        for (int window : {8, 14, 25}) {
            double sum = 0.0;
            for (int m = -window; m <= window; ++m) sum += bessel_i_scaled(std::abs(m), 2.0 * t);
            double tail = 2.0 * std::pow(2.0 * t, window + 1) / std::tgamma(window + 2.0);
            CHECK(sum <= 1.0 + 1e-13);
            CHECK(sum >= 1.0 - tail - 1e-13);
        }
    }
}

TEST_CASE("exponential integral E1 against the quadrature oracle")
{
    auto spec = test_util::spec();
    // E1(x) = \int_x^infty e^{-v}/v dv, shifted to (0,infty)
    auto e1_quadrature = [&](double x) {
        auto g = [x](double u) { return std::exp(-(x + u)) / (x + u); };
        return integrate_semi_infinite(g, spec, TailBound::exponential(std::exp(-x) / x, 1.0))
            .value;
    };
    for (double x : {0.1, 0.25, 0.5, 0.9, 1.0, 1.1, 1.5, 2.0, 5.0, 20.0}) {
        double want = e1_quadrature(x);
        CHECK(exp_integral_e1(x) == doctest::Approx(want).epsilon(1e-11));
    }
    CHECK(exp_integral_e1(0.25) == doctest::Approx(1.0442826344).epsilon(1e-8));
    CHECK_THROWS_AS(exp_integral_e1(0.0), std::domain_error);
    CHECK_THROWS_AS(exp_integral_e1(-3.0), std::domain_error);
}

TEST_CASE("E1 series and continued-fraction branches agree on [0.5, 2]")
{
    // the series form -gamma - log x + Ein(x) converges everywhere, so it
    // can be compared against the continued-fraction branch beyond x = 1
    for (double x = 0.5; x <= 2.0; x += 0.1) {
        double series_form = -euler_gamma() - std::log(x) + exp_integral_ein(x);
        CHECK(std::abs(series_form - exp_integral_e1(x)) <= 1e-11);
    }
}

TEST_CASE("E1 decreases monotonically to zero")
{
    double prev = exp_integral_e1(0.5);
    for (double x : {1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
        double v = exp_integral_e1(x);
        CHECK(v > 0.0);
        CHECK(v < prev);
        prev = v;
    }
    CHECK(exp_integral_e1(200.0) < 1e-85);
}

TEST_CASE("gamma = Ein(1) - E1(1), both sides by quadrature")
{
    auto spec = test_util::spec();
    auto ein_quad = integrate_finite([](double v) { return -std::expm1(-v) / v; }, 0.0, 1.0,
                                     spec)
                        .value;
    auto e1_quad = integrate_semi_infinite(
                       [](double u) { return std::exp(-(1.0 + u)) / (1.0 + u); }, spec,
                       TailBound::exponential(0.4, 1.0))
                       .value;
    CHECK(ein_quad - e1_quad == doctest::Approx(euler_gamma()).epsilon(1e-10));
    CHECK(exp_integral_ein(1.0) - exp_integral_e1(1.0) ==
          doctest::Approx(euler_gamma()).epsilon(1e-13));
}

TEST_CASE("Ein at 1/4 against direct quadrature")
{
    auto spec = test_util::spec();
    double quad = integrate_finite([](double v) { return -std::expm1(-v) / v; }, 0.0, 0.25,
                                   spec)
                      .value;
    CHECK(exp_integral_ein(0.25) == doctest::Approx(quad).epsilon(1e-11));
    CHECK(exp_integral_ein(0.25) == doctest::Approx(0.2352039382).epsilon(1e-8));
}

TEST_CASE("euler gamma stored value and accelerated-sum oracle")
{
    CHECK(euler_gamma() == doctest::Approx(0.5772156649015329).epsilon(1e-15));
    CHECK(euler_gamma() > 0.57);
    CHECK(euler_gamma() < 0.58);

    const int n = 20000;
    double sum = 0.0;
    for (int k = n; k >= 1; --k) sum += 1.0 / k;
    double accelerated = sum - std::log(static_cast<double>(n)) - 0.5 / n + 1.0 / (12.0 * static_cast<double>(n) * n);
    CHECK(accelerated == doctest::Approx(euler_gamma()).epsilon(1e-13));
}

TEST_CASE("gamma from the heat kernel split at the origin")
{
    // \int_0^1 (1 - p_t(0))/t dt - \int_1^infty p_t(0)/t dt = gamma
    auto spec = test_util::spec(1e-11, 1e-11);
    double head = integrate_finite(
                      [](double t) { return (1.0 - heat_kernel(t, 0)) / t; }, 0.0, 1.0, spec)
                      .value;
    double tail = integrate_semi_infinite(
                      [](double u) { return heat_kernel(1.0 + u, 0) / (1.0 + u); }, spec,
                      TailBound::power_law(0.5, 1.5))
                      .value;
    CHECK(head - tail == doctest::Approx(euler_gamma()).epsilon(1e-9));
}

TEST_CASE("regularized incomplete gamma basics")
{
    for (double a : {0.5, 1.5, 3.0}) CHECK(regularized_gamma_p(a, 0.0) == 0.0);
    for (double x : {0.1, 0.7, 1.0, 3.0, 10.0})
        CHECK(regularized_gamma_p(1.0, x) == doctest::Approx(-std::expm1(-x)).epsilon(1e-13));
    CHECK(regularized_gamma_p(1.5, 50.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(regularized_gamma_p(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(regularized_gamma_p(-1.0, 1.0), std::domain_error);

    // monotone in x, and P + Q = 1
    double prev = -1.0;
    for (double x : {0.0, 0.2, 0.5, 1.0, 2.0, 4.0, 8.0}) {
        double p = regularized_gamma_p(1.5, x);
        CHECK(p >= prev);
        CHECK(p + regularized_gamma_q(1.5, x) == doctest::Approx(1.0).epsilon(1e-13));
        prev = p;
    }
    // deep tail keeps relative accuracy on its own branch
    double q = regularized_gamma_q(1.5, 200.0);
    CHECK(q > 0.0);
    CHECK(q < 1e-80);
}

TEST_CASE("K0 against the subordination quadrature oracle")
{
    auto spec = test_util::spec();
    auto k0_quad = [&](double z) {
        // K0(z) = (1/2) \int_0^infty e^{-u - z^2/4u} du/u
        double b = z * z / 4.0;
        auto g = [b](double u) { return std::exp(-u - b / u) / u; };
        return 0.5 * integrate_semi_infinite(g, spec, TailBound::exponential(1.0, 1.0)).value;
    };
    for (double z : {0.3, 0.7, 1.0, 1.9, 2.1, 3.0, 5.0, 12.0}) {
        CHECK(bessel_k0(z) == doctest::Approx(k0_quad(z)).epsilon(1e-10));
    }
    CHECK_THROWS_AS(bessel_k0(0.0), std::domain_error);
}

TEST_CASE("K0 small-argument expansion and branch continuity")
{
    double x = 1e-3;
    double leading = -std::log(x / 2.0) - euler_gamma();
    CHECK(bessel_k0(x) == doctest::Approx(leading).epsilon(1e-6));
    CHECK(bessel_k0(2.0 - 1e-9) == doctest::Approx(bessel_k0(2.0 + 1e-9)).epsilon(1e-9));
}

TEST_CASE("scaled bessel record carries its invariant data")
{
    ScaledBesselValue v = scaled_bessel(3, 7.5);
    CHECK(v.order == 3);
    CHECK(v.argument == 7.5);
    CHECK(v.value == bessel_i_scaled(3, 7.5));
    CHECK(v.value > 0.0);
    CHECK(v.value < 1.0);
}
