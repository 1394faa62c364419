#include <algorithm>
#include <string>

#include "doctest.h"
#include "fracmix/errors.hpp"
#include "fracmix/problem_config.hpp"

using namespace fracmix;

namespace {

bool failed(const UniquenessReport& r, const std::string& name)
{
    auto f = r.failed();
    return std::find(f.begin(), f.end(), name) != f.end();
}

std::string base(const std::string& extra = "")
{
    return R"({"lambda": 0.5, "sigma": [0.2, 0.1, 0.3], "alpha": [1, 1, 1], "beta": [0, 0, 0])" + extra + "}";
}

}  // namespace

TEST_CASE("catalog expressions and their derivatives")
{
    CatalogExpr p = parse_catalog(R"({"family": "poly", "coeffs": [1, -2, 3]})");
    CHECK(p(2.0) == doctest::Approx(9.0));
    CHECK(p.d1(2.0) == doctest::Approx(10.0));
    CHECK(p.d2(2.0) == doctest::Approx(6.0));
    CatalogExpr e = parse_catalog(R"({"family": "exp", "coeffs": [2, -0.5]})");
    CHECK(e(1.0) == doctest::Approx(2.0 * std::exp(-0.5)));
    CHECK(e.d1(1.0) == doctest::Approx(-std::exp(-0.5)));
    CHECK(e.d2(1.0) == doctest::Approx(0.5 * std::exp(-0.5)));
    CHECK(parse_catalog(R"({"family": "poly", "coeffs": [0, 0]})").is_zero());
    CHECK_THROWS_AS(parse_catalog(R"({"family": "trig", "coeffs": [1]})"), ConfigError);
    CHECK_THROWS_AS(parse_catalog(R"({"family": "exp", "coeffs": [1]})"), ConfigError);
}

TEST_CASE("config parsing and invariants")
{
    ProblemConfig c = parse_config(base(R"(, "grid": {"n_points": 65}, "curves": {"epsilon": [0.1, 0.2, 0.3]})"));
    CHECK(c.n_points == 65);
    CHECK(c.curves.epsilon[2] == 0.3);
    CHECK(c.homogeneous());
    CHECK(c.branch() == Branch::general);

    CHECK_THROWS_AS(parse_config("{ not json"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"sigma": [0, 0, 0]})"), ConfigError);
    // |sigma| = 1
    try {
        parse_config(R"({"lambda": 0.5, "sigma": [1, 0, 0], "alpha": [1, 1, 1], "beta": [0, 0, 0]})");
        FAIL("accepted sigma_1 = 1");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("degenerate") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config(R"({"lambda": 1.0, "sigma": [0, 0, 0], "alpha": [1, 1, 1], "beta": [0, 0, 0]})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"lambda": 0.5, "sigma": [0, 0, 0], "alpha": [0, 1, 1], "beta": [0, 0, 0]})"),
                    ConfigError);
    // exactly one of alpha_2, alpha_3 vanishing
    CHECK_THROWS_AS(parse_config(R"({"lambda": 0.5, "sigma": [0, 0, 0], "alpha": [1, 0, 1], "beta": [0, 1, 0]})"),
                    ConfigError);
    ProblemConfig a =
        parse_config(R"({"lambda": 0.5, "sigma": [0, 0, 0], "alpha": [1, 0, 0], "beta": [0, 1, 1]})");
    CHECK(a.branch() == Branch::abel);
}

TEST_CASE("uniqueness checker examples")
{
    // all beta_i = 0 and the scalar signs hold: kernel conditions are vacuous
    UniquenessReport r0 = check_uniqueness_conditions(parse_config(base()));
    CHECK(r0.pass());

    // sigma_2 = 0, alpha_2 = -1: alpha_2 (1 + sigma_2) / (1 - sigma_2) = -1 < 0
    UniquenessReport r1 = check_uniqueness_conditions(
        parse_config(R"({"lambda": 0.5, "sigma": [0.2, 0, 0.3], "alpha": [1, -1, 1], "beta": [0, 0, 0]})"));
    CHECK_FALSE(r1.pass());
    CHECK(failed(r1, "sigma2_alpha_sign"));
    CHECK(r1.failed().size() == 1);

    // P_22(s) = s does not vanish at 1
    UniquenessReport r2 = check_uniqueness_conditions(parse_config(base(
        R"(, "kernels": [{}, {"p2": {"family": "poly", "coeffs": [0, 1]}}, {}])")));
    CHECK_FALSE(r2.pass());
    CHECK(failed(r2, "p22_vanishes_at_one"));
    CHECK_FALSE(failed(r2, "p32_vanishes_at_one"));
}

TEST_CASE("uniqueness checker reports the first violating sample")
{
    // beta_2 P_21 P_22 must be <= 0; P_21 = 1 - 2s changes sign at 1/2
    ProblemConfig c = parse_config(base(
        R"(, "kernels": [{}, {"p1": {"family": "poly", "coeffs": [1, -2]}}, {}])"));
    c.beta_coef[1] = -1.0;
    UniquenessReport r = check_uniqueness_conditions(c);
    auto it = std::find_if(r.conditions.begin(), r.conditions.end(),
                           [](const ConditionVerdict& v) { return v.name == "sigma2_kernel_product"; });
    REQUIRE(it != r.conditions.end());
    CHECK_FALSE(it->pass);
    REQUIRE(it->first_violation.has_value());
    CHECK(*it->first_violation == doctest::Approx(0.51));

    // P_22' = 0 somewhere on the sample
    ProblemConfig z = parse_config(base(
        R"(, "kernels": [{}, {"p2": {"family": "poly", "coeffs": [0.25, -1, 1]}}, {}])"));
    z.beta_coef[1] = 1.0;
    CHECK_THROWS_AS(check_uniqueness_conditions(z), ConfigError);
}
