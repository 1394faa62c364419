#include "fracmix/wave_domain.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "fracmix/errors.hpp"

namespace fracmix {

namespace {

using GL = boost::math::quadrature::gauss<double, 20>;

// solve p + dir * gamma(p) = s on [0, 1] by bisection
double curve_parameter(double eps, double s, double dir)
{
    if (!(s >= 0.0 && s <= 1.0)) throw GeometryError("curve intersection outside the characteristic triangle");
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid + dir * curve_gamma(eps, mid) < s)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double kappa(const std::array<double, 3>& sigma, int i)
{
    return i == 1 ? sigma[0] : -sigma[i - 1];
}

void check_domain(int domain)
{
    if (domain < 1 || domain > 3) throw DomainError("hyperbolic domain index must be 1, 2 or 3");
}

}  // namespace

void CurveSpec::validate() const
{
    for (double e : epsilon)
        if (!(e >= 0.0 && e < 1.0)) throw ConfigError("curve amplitude must lie in [0, 1)");
}

double curve_gamma(double eps, double p) { return eps * p * (1.0 - p); }

double curve_rho(double eps, double s)
{
    double p = curve_parameter(eps, s, 1.0);
    return p - curve_gamma(eps, p);
}

double curve_v(double eps, double s)
{
    double p = curve_parameter(eps, s, -1.0);
    return p + curve_gamma(eps, p);
}

CharPoint to_local(int domain, double x, double t)
{
    check_domain(domain);
    if (domain == 1) return {x + t, x - t};
    if (domain == 2) return {x + t, t - x};
    return {t + 1.0 - x, t + x - 1.0};
}

XT to_physical(int domain, CharPoint p)
{
    check_domain(domain);
    if (domain == 1) return {0.5 * (p.a + p.b), 0.5 * (p.a - p.b)};
    if (domain == 2) return {0.5 * (p.a - p.b), 0.5 * (p.a + p.b)};
    return {1.0 + 0.5 * (p.b - p.a), 0.5 * (p.a + p.b)};
}

CharPoint theta_points(const CurveSpec& curve, double s, ThetaKind which)
{
    if (!(s > 0.0 && s < 1.0)) throw GeometryError("theta_points: s outside (0,1)");
    switch (which) {
    case ThetaKind::theta1: return {curve_rho(curve.epsilon[0], s), s};
    case ThetaKind::theta2: return {curve_rho(curve.epsilon[1], s), s};
    case ThetaKind::theta3: return {curve_rho(curve.epsilon[2], s), s};
    case ThetaKind::theta1_star: return {s, curve_v(curve.epsilon[0], s)};
    case ThetaKind::theta2_star: return {s, curve_v(curve.epsilon[1], s)};
    case ThetaKind::theta3_star: return {s, curve_v(curve.epsilon[2], s)};
    }
    return {};
}

Trace::Trace(const GridFunction& regular, double coef, double power, double slope0, double slope1)
    : v_(regular.values), h_(regular.grid.h()), coef_(coef), power_(power)
{
    boost::math::interpolators::cardinal_cubic_b_spline<double> sp(v_.data(), v_.size(), 0.0, h_, slope0, slope1);
    val_ = [sp](double t) { return sp(t); };
    der_ = [sp](double t) { return sp.prime(t); };
}

double Trace::operator()(double t) const
{
    double v = val_ ? val_(t) : 0.0;
    if (coef_ != 0.0) v += coef_ * std::pow(t, power_);
    return v;
}

double Trace::derivative(double t) const
{
    double v = der_ ? der_(t) : 0.0;
    if (coef_ != 0.0) v += coef_ * power_ * std::pow(t, power_ - 1.0);
    return v;
}

Trace primitive_trace(const SingularGridFunction& g)
{
    const TimeGrid& grid = g.regular.grid;
    GridFunction prim(grid);
    const double h = grid.h();
    for (int k = 1; k < grid.n_points; ++k) prim[k] = prim[k - 1] + 0.5 * h * (g.regular[k - 1] + g.regular[k]);
    const double d0 = g.regular[0], d1 = g.regular[grid.n_points - 1];
    if (g.coef == 0.0) return Trace(prim, 0.0, 1.0, d0, d1);
    return Trace(prim, g.coef / (g.power + 1.0), g.power + 1.0, d0, d1);
}

double local_source(const Source& f, int domain, double a, double b)
{
    XT p = to_physical(domain, CharPoint{a, b});
    double v = 0.25 * f(p.x, p.t);
    return domain == 1 ? v : -v;
}

double dalembert_u(const LineData& d, const Source& f, CharPoint p, int domain)
{
    check_domain(domain);
    const double a = p.a, b = p.b;
    const double tol = 1e-12;
    if (!(a >= -tol && b <= 1.0 + tol && a <= b + tol))
        throw DomainError("dalembert_u: point outside the characteristic triangle");
    double u = 0.5 * (d.tau(a) + d.tau(b)) - 0.5 * (d.nu_primitive(b) - d.nu_primitive(a));
    if (f && b > a) {
        // collapsed Gauss-Legendre over a <= a1 <= b1 <= b
        auto inner = [&](double a1) {
            auto g = [&](double b1) { return local_source(f, domain, a1, b1); };
            return GL::integrate(g, a1, b);
        };
        u -= GL::integrate(inner, a, b);
    }
    return u;
}

double dalembert_xt(const LineData& d, const Source& f, double x, double t, int domain)
{
    return dalembert_u(d, f, to_local(domain, x, t), domain);
}

double correlation_rhs(const CurveSpec& curve, const Source& f, const std::array<double, 3>& sigma, double s, int i)
{
    check_domain(i);
    if (!(s >= 0.0 && s <= 1.0)) throw GeometryError("correlation_rhs: s outside [0,1]");
    if (!f) return 0.0;
    const double eps = curve.epsilon[i - 1];
    const double rho = curve_rho(eps, s), v = curve_v(eps, s);
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    double first = 0.0, second = 0.0;
    if (s > rho) first = GK::integrate([&](double a1) { return local_source(f, i, a1, s); }, rho, s, 8, 1e-14);
    if (v > s) second = GK::integrate([&](double b1) { return local_source(f, i, s, b1); }, s, v, 8, 1e-14);
    return 2.0 * first + 2.0 * kappa(sigma, i) * second;
}

GridFunction functional_correlation(const GridFunction& tau_prime, const GridFunction& nu, double sigma,
                                    const GridFunction& A, int i)
{
    check_domain(i);
    if (std::fabs(std::fabs(sigma) - 1.0) < 1e-14) throw ConfigError("|sigma| = 1 is the decoupled degenerate case");
    GridFunction r(tau_prime.grid);
    for (int k = 0; k < r.size(); ++k) {
        double tp = tau_prime[k], n = nu[k];
        if (i == 1)
            r[k] = (1 - sigma) * tp - (1 + sigma) * n - A[k];
        else if (i == 2)
            r[k] = (1 + sigma) * tp + (sigma - 1) * n - A[k];
        else
            r[k] = (1 + sigma) * tp + (1 - sigma) * n - A[k];
    }
    return r;
}

double correlation_nu(double tau_prime, double sigma, double A, int i)
{
    check_domain(i);
    if (std::fabs(std::fabs(sigma) - 1.0) < 1e-14) throw ConfigError("|sigma| = 1 is the decoupled degenerate case");
    if (i == 1) return ((1 - sigma) * tau_prime - A) / (1 + sigma);
    if (i == 2) return ((1 + sigma) * tau_prime - A) / (1 - sigma);
    return (A - (1 + sigma) * tau_prime) / (1 - sigma);
}

}  // namespace fracmix
