#include "fracmix/special_functions.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "fracmix/errors.hpp"

extern "C" {
#include <quadmath.h>
}

namespace fracmix {

namespace {

constexpr double pi = std::numbers::pi;

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

// sin(pi x) with exact zeros at the integers
double sin_pi(double x)
{
    double r = std::fmod(x, 2.0);
    if (r < 0) r += 2.0;
    if (r == 0.0 || r == 1.0) return 0.0;
    if (r > 1.0) return -std::sin(pi * (r - 1.0));
    return std::sin(pi * r);
}

// log|1/Gamma(x)| and its sign; sign 0 at the poles
double log_abs_rgamma(double x, int& sign)
{
    if (is_nonpositive_integer(x)) {
        sign = 0;
        return -std::numeric_limits<double>::infinity();
    }
    if (x > 0.5) {
        sign = 1;
        return -std::lgamma(x);
    }
    // 1/Gamma(x) = sin(pi x) Gamma(1-x) / pi
    double s = sin_pi(x);
    sign = s > 0 ? 1 : -1;
    return std::log(std::fabs(s)) + std::lgamma(1.0 - x) - std::log(pi);
}

void validate(const WrightParams& p)
{
    if (!(p.alpha > 0.0)) throw DomainError("wright: alpha must be positive");
    if (!(p.alpha > p.beta)) throw DomainError("wright: alpha must exceed beta");
}

struct SeriesResult {
    double value;
    double max_term;
};

// Neumaier-compensated double series; n-th term is coef(n) z^n
SeriesResult double_series(const WrightParams& p, double z, const SeriesControl& ctrl, int deriv)
{
    double sum = 0.0, comp = 0.0, max_term = 0.0;
    int quiet = 0, zeros = 0;
    const double logz = std::log(std::fabs(z));
    for (int n = deriv; n < ctrl.max_terms; ++n) {
        int s1, s2;
        double la = log_abs_rgamma(p.alpha * n + p.mu, s1);
        double lb = log_abs_rgamma(p.delta - p.beta * n, s2);
        double term = 0.0;
        if (s1 != 0 && s2 != 0) {
            int m = n - deriv;
            double lz = m == 0 ? 0.0 : (z == 0.0 ? -INFINITY : m * logz);
            double mag = std::exp(la + lb + lz);
            if (deriv == 1) mag *= n;
            int sg = s1 * s2 * ((z < 0 && (m % 2)) ? -1 : 1);
            term = sg * mag;
        }
        double t = sum + term;
        if (std::fabs(sum) >= std::fabs(term))
            comp += (sum - t) + term;
        else
            comp += (term - t) + sum;
        sum = t;
        max_term = std::max(max_term, std::fabs(term));
        // exact zeros at the poles of Gamma say nothing about the tail
        if (term == 0.0) {
            if (z == 0.0 || ++zeros > 64) return {sum + comp, max_term};
            continue;
        }
        zeros = 0;
        if (std::fabs(term) <= ctrl.term_tolerance * std::fabs(sum + comp)) {
            if (++quiet >= 3) return {sum + comp, max_term};
        } else {
            quiet = 0;
        }
    }
    throw NonConvergence("wright: series did not settle within max_terms");
}

const __float128 pi_q = acosq(-1);

__float128 sin_pi_q(__float128 x)
{
    __float128 r = fmodq(x, 2);
    if (r < 0) r += 2;
    if (r == 0 || r == 1) return 0;
    return sinq(pi_q * r);
}

double quad_series(const WrightParams& p, double z, int deriv, int max_terms)
{
    __float128 sum = 0, zq = z, tol = (__float128)1e-30;
    int quiet = 0, zeros = 0;
    for (int n = deriv; n < 4 * max_terms; ++n) {
        __float128 a = (__float128)p.alpha * n + p.mu;
        __float128 b = (__float128)p.delta - (__float128)p.beta * n;
        __float128 ra, rb;
        if (a <= 0 && a == floorq(a))
            ra = 0;
        else if (a > (__float128)0.5)
            ra = expq(-lgammaq(a));
        else
            ra = sin_pi_q(a) * expq(lgammaq(1 - a)) / pi_q;
        if (b <= 0 && b == floorq(b))
            rb = 0;
        else if (b > (__float128)0.5)
            rb = expq(-lgammaq(b));
        else
            rb = sin_pi_q(b) * expq(lgammaq(1 - b)) / pi_q;
        int m = n - deriv;
        __float128 term = ra * rb * powq(zq, m);
        if (deriv == 1) term *= n;
        sum += term;
        if (term == 0) {
            if (z == 0 || ++zeros > 64) return (double)sum;
            continue;
        }
        zeros = 0;
        if (fabsq(term) <= tol * fabsq(sum)) {
            if (++quiet >= 3) return (double)sum;
        } else {
            quiet = 0;
        }
    }
    throw NonConvergence("wright: extended-precision series did not settle");
}

// digits lost to cancellation beyond which the double sum is not trusted
constexpr double cancellation_limit = 1e2;

double evaluate(const WrightParams& p, double z, const SeriesControl& ctrl, int deriv)
{
    validate(p);
    if (std::fabs(z) > ctrl.z_magnitude_cap)
        throw DivergenceGuard("wright: |z| exceeds the magnitude cap");
    SeriesResult r = double_series(p, z, ctrl, deriv);
    if (r.max_term <= cancellation_limit * std::fabs(r.value) || r.max_term < 1e-6) return r.value;
    if (deriv == 0 && p.alpha == 1.0 && p.mu == 1.0 && z < 0 && p.beta > 0 && p.beta < 1)
        return psi_talbot(p.delta, p.beta, -z, 1.0, 32);
    if (r.max_term * 1e-33 > 1e-13 * std::max(std::fabs(r.value), 1.0))
        throw NonConvergence("wright: cancellation exceeds extended precision");
    return quad_series(p, z, deriv, ctrl.max_terms);
}

}  // namespace

double reciprocal_gamma(double x)
{
    int s;
    double l = log_abs_rgamma(x, s);
    if (s == 0) return 0.0;
    if (x > 0.5) return 1.0 / std::tgamma(x);
    return s * std::exp(l);
}

double wright_eval(const WrightParams& p, double z, const SeriesControl& ctrl)
{
    return evaluate(p, z, ctrl, 0);
}

double wright_derivative(const WrightParams& p, double z, const SeriesControl& ctrl)
{
    if (z == 0.0) throw DomainError("wright_derivative: formula singular at z = 0");
    if (p.beta == 0.0) throw DomainError("wright_derivative: beta = 0");
    WrightParams lower = p;
    lower.delta = p.delta - 1.0;
    double a = wright_eval(lower, z, ctrl);
    double b = wright_eval(p, z, ctrl);
    return -(a + (1.0 - p.delta) * b) / (p.beta * z);
}

double wright_derivative_series(const WrightParams& p, double z, const SeriesControl& ctrl)
{
    return evaluate(p, z, ctrl, 1);
}

double recurrence_residual_step(const WrightParams& p, double z, const SeriesControl& ctrl)
{
    WrightParams m1 = p, d1 = p;
    m1.mu -= 1.0;
    d1.delta -= 1.0;
    double lhs = wright_eval(m1, z, ctrl) / p.alpha + wright_eval(d1, z, ctrl) / p.beta;
    double c = (p.mu - 1.0) / p.alpha + (p.delta - 1.0) / p.beta;
    return std::fabs(lhs - c * wright_eval(p, z, ctrl));
}

double recurrence_residual_shift(const WrightParams& p, double z, int k, ShiftIdentity which,
                             const SeriesControl& ctrl)
{
    if (z == 0.0) throw DomainError("recurrence_residual_shift: z = 0");
    if (k < 0) throw DomainError("recurrence_residual_shift: k must be nonnegative");
    WrightParams a = p, b = p;
    if (which == ShiftIdentity::first) {
        a.mu = -k;
        b.mu = p.alpha - k;
        b.delta = p.delta - p.beta;
    } else {
        a.delta = -k;
        b.mu = p.mu + p.alpha;
        b.delta = -k - p.beta;
    }
    return std::fabs(wright_eval(a, z, ctrl) / z - wright_eval(b, z, ctrl));
}

double psi_talbot(double g, double b, double y, double s, int nodes)
{
    if (!(s > 0.0)) throw DomainError("psi_talbot: s must be positive");
    using cd = std::complex<double>;
    const double scale = nodes / s;
    double acc = 0.0;
    for (int k = nodes / 2; k < nodes; ++k) {
        double th = -pi + (k + 0.5) * 2.0 * pi / nodes;
        double c = 0.6407 * th;
        cd sig(-0.6122 + 0.5017 * th / std::tan(c), 0.2645 * th);
        cd dsig(0.5017 * (1.0 / std::tan(c) - c / (std::sin(c) * std::sin(c))), 0.2645);
        cd z = scale * sig;
        cd term = std::exp(double(nodes) * sig - g * std::log(z) - y * std::pow(z, b)) * dsig;
        acc += term.imag();
    }
    return 2.0 * acc / s;
}

double psi_kernel(double g, double b, double y, double s)
{
    if (!(s > 0.0)) throw DomainError("psi_kernel: s must be positive");
    if (y < 0.0) throw DomainError("psi_kernel: y must be nonnegative");
    if (y == 0.0) return std::pow(s, g - 1.0) * reciprocal_gamma(g);
    double z = y / std::pow(s, b);
    double growth = (1.0 - b) * std::pow(std::pow(b, b) * z, 1.0 / (1.0 - b));
    if (growth < 2.0) {
        WrightParams p{1.0, b, 1.0, g};
        return std::pow(s, g - 1.0) * wright_eval(p, -z, SeriesControl{1e-17, 500, 1e300});
    }
    return psi_talbot(g, b, y, s, 32);
}

}  // namespace fracmix
