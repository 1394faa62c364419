#include <cmath>

#include "doctest.h"
#include "fracmix/fractional_calculus.hpp"
#include "fracmix/special_functions.hpp"

using namespace fracmix;

namespace {

double max_error(int n, double mu, double lambda)
{
    TimeGrid g(n);
    auto f = GridFunction::sample(g, [&](double t) { return std::pow(t, mu); });
    double err = 0.0;
    for (int k = 1; k < n; ++k)
        err = std::max(err, std::fabs(caputo_l1(f, lambda, k) - caputo_power_oracle(mu, lambda, g.t(k))));
    return err;
}

}  // namespace

TEST_CASE("constants have zero Caputo derivative")
{
    TimeGrid g(33);
    GridFunction five(g, 5.0);
    for (int k = 0; k < g.n_points; ++k) CHECK(caputo_l1(five, 0.4, k) == 0.0);
    CHECK_THROWS(caputo_l1(five, 0.4, 33));
    CHECK_THROWS(caputo_l1(five, 0.4, -1));
}

TEST_CASE("closed forms")
{
    TimeGrid g(257);
    auto lin = GridFunction::sample(g, [](double t) { return t; });
    CHECK(caputo_l1(lin, 0.5, 256) == doctest::Approx(1.1283792).epsilon(1e-7));
    auto sq = GridFunction::sample(g, [](double t) { return t * t; });
    CHECK(std::fabs(caputo_l1(sq, 0.5, 256) - 1.5045056) < 5.0 * std::pow(g.h(), 1.5));
    CHECK(caputo_power_oracle(1.0, 0.5, 1.0) == doctest::Approx(1.1283792).epsilon(1e-7));
    CHECK(caputo_power_oracle(2.0, 0.5, 0.0) == 0.0);
    CHECK(caputo_power_oracle(1.0, 1.0 - 1e-9, 1.0) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK_THROWS(caputo_power_oracle(0.0, 0.5, 1.0));
}

TEST_CASE("linearity")
{
    TimeGrid g(65);
    auto a = GridFunction::sample(g, [](double t) { return std::sin(3 * t); });
    auto b = GridFunction::sample(g, [](double t) { return std::exp(-t); });
    auto c = GridFunction::sample(g, [](double t) { return 2 * std::sin(3 * t) - 0.5 * std::exp(-t); });
    for (int k = 0; k < 65; ++k)
        CHECK(caputo_l1(c, 0.3, k) ==
              doctest::Approx(2 * caputo_l1(a, 0.3, k) - 0.5 * caputo_l1(b, 0.3, k)).epsilon(1e-12));
}

TEST_CASE("refinement order on powers")
{
    for (double lambda : {0.25, 0.5, 0.75}) {
        CHECK(max_error(65, 1.0, lambda) < 1e-13);
        for (double mu : {2.0, 3.0}) {
            double e1 = max_error(65, mu, lambda), e2 = max_error(129, mu, lambda),
                   e3 = max_error(257, mu, lambda);
            CAPTURE(lambda);
            CAPTURE(mu);
            // the L1 scheme is of order 2 - lambda on smooth data
            double expected = std::min(1.4, 2.0 - lambda - 0.05);
            CHECK(std::log2(e1 / e2) >= expected);
            CHECK(std::log2(e2 / e3) >= expected);
        }
    }
}
