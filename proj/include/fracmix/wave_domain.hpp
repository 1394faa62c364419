#pragma once

#include <array>
#include <functional>
#include <limits>

#include "fracmix/fractional_calculus.hpp"
#include "fracmix/integral_equations.hpp"

namespace fracmix {

// f(x, t) in physical coordinates
using Source = std::function<double(double, double)>;

// gamma_i(p) = epsilon_i p (1 - p)
struct CurveSpec {
    std::array<double, 3> epsilon{0.0, 0.0, 0.0};
    void validate() const;
};

double curve_gamma(double eps, double p);
// intersection of the curve p -> (p - gamma(p), p + gamma(p)) with b = s, returns its a
double curve_rho(double eps, double s);
// intersection with a = s, returns its b
double curve_v(double eps, double s);

// Local characteristic coordinates of a hyperbolic subdomain; the type-change line is a = b
// and the characteristic triangle is 0 <= a <= b <= 1.
//   domain 1: a = x + t,      b = x - t
//   domain 2: a = x + t,      b = t - x
//   domain 3: a = t + 1 - x,  b = t + x - 1
struct CharPoint {
    double a = 0.0;
    double b = 0.0;
};

struct XT {
    double x = 0.0;
    double t = 0.0;
};

CharPoint to_local(int domain, double x, double t);
XT to_physical(int domain, CharPoint p);

enum class ThetaKind { theta1, theta2, theta3, theta1_star, theta2_star, theta3_star };

CharPoint theta_points(const CurveSpec& curve, double s, ThetaKind which);

// c * t^power plus a cubic B-spline through uniform grid values
class Trace {
public:
    Trace() = default;
    // end slopes of the spline part; NaN lets the spline estimate them
    Trace(const GridFunction& regular, double coef = 0.0, double power = 1.0,
          double slope0 = std::numeric_limits<double>::quiet_NaN(),
          double slope1 = std::numeric_limits<double>::quiet_NaN());
    double operator()(double t) const;
    double derivative(double t) const;

private:
    std::vector<double> v_;
    double h_ = 1.0, coef_ = 0.0, power_ = 1.0;
    std::function<double(double)> val_, der_;
};

// primitive of a (possibly singular) piecewise-linear function, as a Trace
Trace primitive_trace(const SingularGridFunction& g);

// data on the type-change line: tau and the primitive of the normal trace nu~
// (nu~ = nu_1^-, nu_2^-, -nu_3^+ for domains 1, 2, 3)
struct LineData {
    Trace tau;
    Trace nu_primitive;
};

// u_ab = g in local coordinates
double local_source(const Source& f, int domain, double a, double b);

// u = [tau(a) + tau(b)] / 2 - (1/2) int_a^b nu~ - int_a^b da1 int_a1^b g db1
double dalembert_u(const LineData& d, const Source& f, CharPoint p, int domain);
double dalembert_xt(const LineData& d, const Source& f, double x, double t, int domain);

// A_i(s) from the nonlocal condition on the curve
double correlation_rhs(const CurveSpec& curve, const Source& f, const std::array<double, 3>& sigma, double s,
                       int i);

// residual of the type-change relation between tau' and nu:
//   1: (1 - s) tau' - (1 + s) nu - A,  2: (1 + s) tau' + (s - 1) nu - A,  3: (1 + s) tau' + (1 - s) nu - A
GridFunction functional_correlation(const GridFunction& tau_prime, const GridFunction& nu, double sigma,
                                    const GridFunction& A, int i);
// nu solved from the same relation
double correlation_nu(double tau_prime, double sigma, double A, int i);

}  // namespace fracmix
