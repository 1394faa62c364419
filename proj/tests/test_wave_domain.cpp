#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fracmix/errors.hpp"
#include "fracmix/wave_domain.hpp"

using namespace fracmix;

namespace {

constexpr double pi = std::numbers::pi;

LineData line_from(int n, const std::function<double(double)>& tau, const std::function<double(double)>& nu)
{
    TimeGrid g(n);
    SingularGridFunction nu_g(GridFunction::sample(g, nu));
    return {Trace(GridFunction::sample(g, tau)), primitive_trace(nu_g)};
}

// [u_x + dir u_t] at a physical point by central differences
double directional(const LineData& d, const Source& f, XT p, int domain, double dir)
{
    const double h = 1e-5;
    auto u = [&](double x, double t) { return dalembert_xt(d, f, x, t, domain); };
    double ux = (u(p.x + h, p.t) - u(p.x - h, p.t)) / (2 * h);
    double ut = (u(p.x, p.t + h) - u(p.x, p.t - h)) / (2 * h);
    return ux + dir * ut;
}

}  // namespace

TEST_CASE("curve intersections")
{
    CurveSpec flat;
    for (double s : {0.1, 0.5, 0.9}) {
        auto th = theta_points(flat, s, ThetaKind::theta1);
        CHECK(std::fabs(th.a - s) < 1e-15);
        CHECK(std::fabs(th.b - s) < 1e-15);
    }
    double worst = 0.0;
    for (double eps : {0.0, 0.1, 0.3, 0.6, 0.9})
        for (int k = 0; k <= 100; ++k) {
            double xi = k / 100.0;
            worst = std::max(worst, std::fabs(curve_rho(eps, curve_v(eps, xi)) - xi));
        }
    CHECK(worst < 1e-12);

    // closed-form root of p + eps p (1 - p) = s
    const double eps = 0.3, s = 0.5;
    double p = ((1 + eps) - std::sqrt((1 + eps) * (1 + eps) - 4 * eps * s)) / (2 * eps);
    CHECK(std::fabs(curve_rho(eps, s) - (p - eps * p * (1 - p))) < 1e-13);

    CurveSpec c{{0.3, 0.3, 0.1}};
    auto a = theta_points(c, 0.4, ThetaKind::theta1_star), b = theta_points(c, 0.4, ThetaKind::theta2_star);
    CHECK(a.a == b.a);
    CHECK(a.b == b.b);
    CHECK_THROWS_AS(theta_points(c, 1.5, ThetaKind::theta1), GeometryError);
    CHECK_THROWS_AS((CurveSpec{{1.0, 0.0, 0.0}}.validate()), ConfigError);

    for (int d = 1; d <= 3; ++d) {
        XT p = to_physical(d, to_local(d, 0.37, 0.21));
        CHECK(std::fabs(p.x - 0.37) < 1e-15);
        CHECK(std::fabs(p.t - 0.21) < 1e-15);
    }
}

TEST_CASE("d'Alembert closed forms")
{
    auto lin = line_from(65, [](double s) { return s; }, [](double) { return 0.0; });
    CHECK(std::fabs(dalembert_u(lin, nullptr, {0.3, 0.7}, 1) - 0.5) < 1e-14);
    auto nu1 = line_from(65, [](double) { return 0.0; }, [](double) { return 1.0; });
    CHECK(std::fabs(dalembert_u(nu1, nullptr, {0.3, 0.7}, 1) + 0.2) < 1e-14);
    auto zero = line_from(65, [](double) { return 0.0; }, [](double) { return 0.0; });
    const double c = 1.7;
    Source f = [&](double, double) { return 4 * c; };
    CHECK(std::fabs(dalembert_u(zero, f, {0.3, 0.7}, 1) + 0.08 * c) < 1e-14);
    CHECK_THROWS_AS(dalembert_u(zero, f, {0.7, 0.3}, 1), DomainError);
}

TEST_CASE("wave equation and trace reproduction")
{
    Source f = [](double x, double t) { return std::sin(2 * x + t) + x * x; };
    auto d = line_from(257, [](double s) { return std::sin(pi * s) * s; }, [](double s) { return std::exp(s); });
    for (int dom = 1; dom <= 3; ++dom) {
        CAPTURE(dom);
        const double a = 0.35, b = 0.6;
        double errs[3];
        int k = 0;
        for (double h : {0.02, 0.01, 0.005}) {
            auto u = [&](double aa, double bb) { return dalembert_u(d, f, {aa, bb}, dom); };
            double mixed = (u(a + h, b + h) - u(a + h, b - h) - u(a - h, b + h) + u(a - h, b - h)) / (4 * h * h);
            errs[k++] = std::fabs(mixed - local_source(f, dom, a, b));
        }
        CHECK(std::log2(errs[0] / errs[1]) >= 1.8);
        CHECK(std::log2(errs[1] / errs[2]) >= 1.8);
        CHECK(std::fabs(dalembert_u(d, f, {0.4, 0.4}, dom) - std::sin(0.4 * pi) * 0.4) < 1e-9);
    }

    // normal derivative on the line: u_t(x, -0) = nu in domain 1, refined in the trace grid
    double e[3];
    int k = 0;
    for (int n : {65, 129, 257}) {
        auto dn = line_from(n, [](double s) { return std::sin(pi * s) * s; }, [](double s) { return std::exp(s); });
        auto u = [&](double t) { return dalembert_xt(dn, f, 0.5, t, 1); };
        const double dl = 1e-4;
        double ut = (3 * u(0.0) - 4 * u(-dl) + u(-2 * dl)) / (2 * dl);
        e[k++] = std::fabs(ut - std::exp(0.5));
    }
    CHECK(std::log2(e[0] / e[1]) >= 1.8);
    CHECK(std::log2(e[1] / e[2]) >= 1.8);
}

TEST_CASE("functional correlations")
{
    CurveSpec c{{0.3, 0.2, 0.25}};
    std::array<double, 3> sigma{0.5, -0.3, 0.4};
    for (int i = 1; i <= 3; ++i) CHECK(correlation_rhs(c, nullptr, sigma, 0.4, i) == 0.0);
    Source one = [](double, double) { return 4.0; };
    CHECK(std::fabs(correlation_rhs(CurveSpec{}, one, sigma, 0.5, 1)) < 1e-15);
    double x = 0.5, rho = curve_rho(0.3, x), v = curve_v(0.3, x);
    CHECK(std::fabs(correlation_rhs(c, one, sigma, x, 1) - (2 * (x - rho) + 2 * 0.5 * (v - x))) < 1e-13);

    TimeGrid g(33);
    auto tp = GridFunction::sample(g, [](double t) { return std::cos(t); });
    auto A = GridFunction::sample(g, [](double t) { return t * t; });
    for (int i = 1; i <= 3; ++i) {
        GridFunction nu(g);
        for (int k = 0; k < g.n_points; ++k) nu[k] = correlation_nu(tp[k], sigma[i - 1], A[k], i);
        CHECK(functional_correlation(tp, nu, sigma[i - 1], A, i).max_abs() < 1e-12);
    }
    CHECK(functional_correlation(tp, tp, 0.0, GridFunction(g), 1).max_abs() < 1e-15);
    CHECK_THROWS_AS(functional_correlation(tp, tp, 1.0, A, 1), ConfigError);
}

TEST_CASE("nonlocal conditions hold for traces built from the correlations")
{
    CurveSpec c{{0.3, 0.2, 0.25}};
    std::array<double, 3> sigma{0.5, -0.3, 0.4};
    Source f = [](double x, double t) { return 1.0 + x * t + std::cos(x - 2 * t); };
    auto tau = [](double s) { return s * (1 - s) * std::exp(s); };
    auto taup = [](double s) { return (1 - s - s * s) * std::exp(s); };
    for (int i = 1; i <= 3; ++i) {
        auto nu = [&](double s) {
            double n = correlation_nu(taup(s), sigma[i - 1], correlation_rhs(c, f, sigma, s, i), i);
            return i == 3 ? -n : n;
        };
        auto d = line_from(2049, tau, nu);
        double worst = 0.0;
        for (int k = 1; k < 65; ++k) {
            double s = k / 65.0;
            if (s < 0.05 || s > 0.95) continue;
            ThetaKind th = i == 1 ? ThetaKind::theta1 : i == 2 ? ThetaKind::theta2 : ThetaKind::theta3;
            ThetaKind ts = i == 1 ? ThetaKind::theta1_star : i == 2 ? ThetaKind::theta2_star : ThetaKind::theta3_star;
            XT p = to_physical(i, theta_points(c, s, th)), q = to_physical(i, theta_points(c, s, ts));
            double r;
            if (i == 3)
                r = directional(d, f, p, i, 1) - sigma[2] * directional(d, f, q, i, -1);
            else
                r = directional(d, f, p, i, -1) - sigma[i - 1] * directional(d, f, q, i, 1);
            worst = std::max(worst, std::fabs(r));
        }
        CAPTURE(i);
        CHECK(worst < 1e-6);
    }
}
