#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fracmix/errors.hpp"
#include "fracmix/special_functions.hpp"

using namespace fracmix;

namespace {

double gaussian(double z) { return std::exp(-z * z / 4.0) / std::sqrt(std::numbers::pi); }

// 6th-order central difference
template <class F>
double central_diff(F f, double z, double h)
{
    return (45.0 * (f(z + h) - f(z - h)) - 9.0 * (f(z + 2 * h) - f(z - 2 * h)) +
            (f(z + 3 * h) - f(z - 3 * h))) /
           (60.0 * h);
}

}  // namespace

TEST_CASE("reciprocal gamma")
{
    CHECK(reciprocal_gamma(1.0) == 1.0);
    CHECK(reciprocal_gamma(0.0) == 0.0);
    CHECK(reciprocal_gamma(-3.0) == 0.0);
    CHECK(reciprocal_gamma(0.5) == doctest::Approx(1.0 / std::sqrt(std::numbers::pi)).epsilon(1e-15));
    // Gamma(-1.5) = 4 sqrt(pi) / 3
    CHECK(reciprocal_gamma(-1.5) ==
          doctest::Approx(3.0 / (4.0 * std::sqrt(std::numbers::pi))).epsilon(1e-14));
    CHECK(reciprocal_gamma(200.0) == 0.0);
}

TEST_CASE("series at the origin keeps one term")
{
    WrightParams p{1.0, 0.25, 1.0, 0.25};
    CHECK(wright_eval(p, 0.0) == doctest::Approx(reciprocal_gamma(0.25)).epsilon(1e-15));
    CHECK(wright_eval(p, 0.0) == doctest::Approx(0.2758).epsilon(1e-3));
}

TEST_CASE("Gaussian reduction at beta = delta = 1/2")
{
    WrightParams p{1.0, 0.5, 1.0, 0.5};
    CHECK(wright_eval(p, -1.0) == doctest::Approx(0.4393912).epsilon(1e-7));
    for (int i = 0; i <= 100; ++i) {
        double z = -10.0 * i / 100.0;
        CHECK(std::fabs(wright_eval(p, z) - gaussian(z)) < 1e-10);
    }
}

TEST_CASE("extended precision oracle values")
{
    struct Case {
        double a, b, mu, d, z, expect;
    };
    const Case cases[] = {
        {1, 0.3, 1.2, 0.8, -2, 0.27610407383218646259},
        {1, 0.25, 1, 0.25, -30, 6.7419023341381073727e-20},
        {1, 0.45, 1, 0.55, -10, 3.1191081604957796846e-9},
        {1, 0.1, 0.7, -0.4, -7.5, 0.0084546471585753164118},
        {1, 0.35, 2.0, 1.3, 3.0, 3.7200625948294718652},
        {1, 0.5, 1, 0.5, -8, 6.3491173359332791342e-8},
        {1.5, 0.3, 0.5, 0.2, -4, -0.2191508975657303708},
    };
    for (const auto& c : cases) {
        CAPTURE(c.z);
        CAPTURE(c.b);
        double v = wright_eval({c.a, c.b, c.mu, c.d}, c.z);
        CHECK(std::fabs(v - c.expect) < 1e-12 * std::max(1.0, std::fabs(c.expect)));
    }
    CHECK(std::fabs(wright_eval({1, 0.25, 1, 0.25}, -30.0)) < 1e-6);
}

TEST_CASE("magnitude cap and parameter guards")
{
    WrightParams p{1.0, 0.25, 1.0, 0.25};
    CHECK_THROWS_AS(wright_eval(p, -41.0), DivergenceGuard);
    CHECK_THROWS_AS(wright_eval({0.2, 0.3, 1.0, 0.5}, -1.0), DomainError);
    CHECK_THROWS_AS(wright_eval(p, -1.0, SeriesControl{1e-16, 2, 40.0}), NonConvergence);
}

TEST_CASE("derivative formula")
{
    WrightParams g{1.0, 0.5, 1.0, 0.5};
    CHECK(wright_derivative(g, -1.0) == doctest::Approx(0.5 * gaussian(-1.0)).epsilon(1e-12));
    CHECK(wright_derivative(g, -1.0) == doctest::Approx(0.2196956).epsilon(1e-6));
    CHECK_THROWS_AS(wright_derivative(g, 0.0), DomainError);

    WrightParams p{1.0, 0.3, 1.1, 0.7};
    CHECK(wright_derivative_series(p, 0.0) ==
          doctest::Approx(reciprocal_gamma(2.1) * reciprocal_gamma(0.4)).epsilon(1e-14));

    auto f = [&](double z) { return wright_eval(p, z); };
    double h = 1e-5;
    double fd = (f(-0.7 + h) - f(-0.7 - h)) / (2 * h);
    CHECK(std::fabs(wright_derivative(p, -0.7) - fd) < 1e-6);
    CHECK(std::fabs(wright_derivative(p, -0.7) - wright_derivative_series(p, -0.7)) < 1e-13);
    for (double z : {-9.0, -4.0, -1.5, -0.2}) {
        CAPTURE(z);
        CHECK(std::fabs(wright_derivative(p, z) - central_diff(f, z, 1e-2)) < 1e-10);
    }
}

TEST_CASE("recurrences")
{
    CHECK(recurrence_residual_step({1.0, 0.3, 1.2, 0.8}, -2.0) < 1e-10);
    CHECK(recurrence_residual_step({1.0, 0.3, 1.2, 0.8}, 0.0) < 1e-14);
    CHECK(recurrence_residual_shift({1.0, 0.5, 1.0, 0.5}, -1.0, 0, ShiftIdentity::first) < 1e-10);
    CHECK(recurrence_residual_shift({1.0, 0.5, 1.0, 0.5}, -1.0, 0, ShiftIdentity::second) < 1e-10);
    CHECK(recurrence_residual_shift({1.0, 0.3, 1.0, 0.6}, -0.25, 1, ShiftIdentity::first) < 1e-10);
    CHECK_THROWS_AS(recurrence_residual_shift({1.0, 0.3, 1.0, 0.6}, 0.0, 1, ShiftIdentity::first),
                    DomainError);

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ub(0.05, 0.5), um(0.5, 2.0), ud(-0.5, 1.5);
    const double zs[] = {-10, -5, -2, -1, -0.5, -0.1, 0, 0.1};
    for (int i = 0; i < 20; ++i) {
        WrightParams p{1.0, ub(rng), um(rng), ud(rng)};
        for (double z : zs) {
            CAPTURE(z);
            CHECK(recurrence_residual_step(p, z) < 1e-10);
            if (z != 0.0) {
                CHECK(recurrence_residual_shift(p, z, 0, ShiftIdentity::first) < 1e-10);
                CHECK(recurrence_residual_shift(p, z, 1, ShiftIdentity::second) < 1e-10);
            }
        }
    }
}

TEST_CASE("kernel Psi: Laplace inversion agrees with the series")
{
    for (double b : {0.1, 0.25, 0.45}) {
        for (double g : {0.6, 1.0, 1.75, 3.2}) {
            for (double y : {0.0, 0.2, 1.0, 3.0}) {
                for (double s : {0.01, 0.3, 1.0}) {
                    double z = y / std::pow(s, b);
                    if (z > 4.0) continue;
                    double ser = std::pow(s, g - 1.0) * wright_eval({1.0, b, 1.0, g}, -z);
                    CAPTURE(b);
                    CAPTURE(g);
                    CAPTURE(y);
                    CAPTURE(s);
                    CHECK(std::fabs(psi_talbot(g, b, y, s, 32) - ser) <
                          1e-12 * std::max(1.0, std::pow(s, g - 1.0)));
                }
            }
        }
    }
}

TEST_CASE("kernel Psi: derivative and antiderivative identities")
{
    const double b = 0.3, y = 0.8, s = 0.6, h = 1e-3;
    auto ps = [&](double g, double yy, double ss) { return psi_kernel(g, b, yy, ss); };
    // d/ds Psi_g = Psi_{g-1}
    double ds = (ps(1.5, y, s + h) - ps(1.5, y, s - h)) / (2 * h);
    CHECK(ds == doctest::Approx(ps(0.5, y, s)).epsilon(1e-6));
    // d/dy Psi_g = -Psi_{g-b}
    double dy = (ps(1.2, y + h, s) - ps(1.2, y - h, s)) / (2 * h);
    CHECK(dy == doctest::Approx(-ps(1.2 - b, y, s)).epsilon(1e-6));
    // classical limit: Psi_1 at b = 1/2 is erfc(y / (2 sqrt s))
    CHECK(psi_kernel(1.0, 0.5, y, s) == doctest::Approx(std::erfc(y / (2 * std::sqrt(s)))).epsilon(1e-12));
}
