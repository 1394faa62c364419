#include "fracmix/integral_equations.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <numbers>

#include "fracmix/errors.hpp"

namespace fracmix {

namespace {

// integral of the piecewise-linear interpolant from 0 to x
double linear_primitive(const GridFunction& g, double x)
{
    const double h = g.grid.h();
    const int n = g.grid.intervals();
    x = std::clamp(x, 0.0, g.grid.t_max);
    int j = std::min(int(x / h), n - 1);
    double acc = 0.0;
    for (int i = 0; i < j; ++i) acc += 0.5 * h * (g[i] + g[i + 1]);
    double w = x - j * h;
    double slope = (g[j + 1] - g[j]) / h;
    return acc + w * g[j] + 0.5 * w * w * slope;
}

Eigen::MatrixXd factor_check(const Eigen::MatrixXd& A, Eigen::PartialPivLU<Eigen::MatrixXd>& lu)
{
    lu.compute(A);
    double rc = lu.rcond();
    if (!(rc > 1e-13)) throw SingularOperator("integral operator is numerically singular", 1.0 / rc);
    return A;
}

Eigen::MatrixXd operator_matrix(const DiscretizedKernel& K, KernelSign sign)
{
    const int n = K.entries.rows();
    if (K.entries.cols() != n || n != K.grid.n_points) throw DomainError("kernel: shape mismatch");
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n);
    if (sign == KernelSign::minus)
        A -= K.entries;
    else
        A += K.entries;
    return A;
}

}  // namespace

double SingularGridFunction::at(double t) const
{
    double v = regular.at(t);
    if (coef != 0.0) v += coef * std::pow(t, power);
    return v;
}

double SingularGridFunction::integral(double a, double b) const
{
    double v = linear_primitive(regular, b) - linear_primitive(regular, a);
    if (coef != 0.0) v += coef * (std::pow(b, power + 1.0) - std::pow(a, power + 1.0)) / (power + 1.0);
    return v;
}

DiscretizedKernel discretize_fredholm(const TimeGrid& g, const std::function<double(double, double)>& k)
{
    const int n = g.n_points;
    DiscretizedKernel K{g, Eigen::MatrixXd(n, n), 0.0};
    const double h = g.h();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double w = (j == 0 || j == n - 1) ? 0.5 * h : h;
            K.entries(i, j) = w * k(g.t(i), g.t(j));
        }
    return K;
}

GridFunction nystrom_solve(const DiscretizedKernel& K, const GridFunction& F, KernelSign sign)
{
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
    factor_check(operator_matrix(K, sign), lu);
    Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(F.values.data(), F.size());
    Eigen::VectorXd x = lu.solve(rhs);
    return GridFunction(F.grid, std::vector<double>(x.data(), x.data() + x.size()));
}

Resolvent resolvent_build(const DiscretizedKernel& K, KernelSign sign)
{
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
    factor_check(operator_matrix(K, sign), lu);
    const int n = K.entries.rows();
    Eigen::MatrixXd R = lu.inverse() - Eigen::MatrixXd::Identity(n, n);
    return {K.grid, R};
}

GridFunction apply_resolvent(const Resolvent& R, const GridFunction& F)
{
    Eigen::VectorXd f = Eigen::Map<const Eigen::VectorXd>(F.values.data(), F.size());
    Eigen::VectorXd x = f + R.entries * f;
    return GridFunction(F.grid, std::vector<double>(x.data(), x.data() + x.size()));
}

Eigen::MatrixXd volterra_matrix(const TimeGrid& g, const std::function<double(int)>& mom0,
                                const std::function<double(int)>& mom1)
{
    const int n = g.n_points;
    const double h = g.h();
    std::vector<double> m0(n), m1(n);
    for (int m = 1; m < n; ++m) {
        m0[m] = mom0(m);
        m1[m] = mom1(m);
    }
    Eigen::MatrixXd V = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k)
        for (int l = 0; l < k; ++l) {
            int m = k - l;
            V(k, l + 1) += m0[m] - m1[m] / h;
            V(k, l) += m1[m] / h;
        }
    return V;
}

Eigen::MatrixXd singular_weights(const TimeGrid& g, double exponent, WeightKind kind)
{
    if (!(exponent > 0.0 && exponent < 1.0)) throw DomainError("singular_weights: exponent outside (0,1)");
    const double h = g.h(), e = exponent;
    auto mom0 = [&](int m) { return (std::pow(m * h, 1 - e) - std::pow((m - 1) * h, 1 - e)) / (1 - e); };
    auto mom1 = [&](int m) {
        auto F = [&](double s) {
            return std::pow(s, 2 - e) / (2 - e) - (m - 1) * h * std::pow(s, 1 - e) / (1 - e);
        };
        return F(m * h) - F((m - 1) * h);
    };
    Eigen::MatrixXd W = volterra_matrix(g, mom0, mom1);
    if (kind == WeightKind::fredholm) {
        const int n = g.n_points;
        for (int k = 0; k < n; ++k)
            for (int l = k; l < n - 1; ++l) {
                int m = l - k + 1;
                W(k, l) += mom0(m) - mom1(m) / h;
                W(k, l + 1) += mom1(m) / h;
            }
    }
    return W;
}

Eigen::MatrixXd abel_matrix(const TimeGrid& g, double beta)
{
    if (!(beta > 0.0 && beta < 1.0)) throw DomainError("abel_invert: beta outside (0,1)");
    const int n = g.n_points;
    const double c = std::sin(beta * std::numbers::pi) / std::numbers::pi;
    const double e = 1.0 - beta;
    // on each cell Fbar = A_j + B_j z^{1-beta}, so constant tau' is reproduced exactly
    std::vector<double> inv(n - 1);
    for (int j = 0; j < n - 1; ++j) inv[j] = 1.0 / (std::pow(g.t(j + 1), e) - std::pow(g.t(j), e));
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n + 1, n);
    A(0, 0) = c;
    A(1, 1) += e * inv[0];
    A(1, 0) -= e * inv[0];
    for (int k = 1; k < n; ++k) {
        double tk = g.t(k);
        double lo = 0.0;
        for (int j = 0; j < k; ++j) {
            double hi = boost::math::beta(e, beta, std::min(1.0, g.t(j + 1) / tk));
            double w = c * e * inv[j] * (hi - lo);
            A(k + 1, j + 1) += w;
            A(k + 1, j) -= w;
            lo = hi;
        }
    }
    return A;
}

Eigen::MatrixXd abel_collocation_matrix(const TimeGrid& g, double beta)
{
    if (!(beta > 0.0 && beta < 1.0)) throw DomainError("abel_collocation_matrix: beta outside (0,1)");
    const int n = g.n_points;
    if (n < 4) throw DomainError("abel_collocation_matrix: need at least four points");
    // forward rows at every node, closed by psi_0 - 2 psi_1 + psi_2 = 0
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n + 1, n + 1);
    M.block(0, 1, n, n) = singular_weights(g, beta, WeightKind::volterra_lower);
    const double B = boost::math::beta(beta, 1.0 - beta);
    for (int k = 0; k < n; ++k) M(k, 0) = B;
    M(n, 1) = 1.0;
    M(n, 2) = -2.0;
    M(n, 3) = 1.0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    if (!lu.isInvertible()) throw SingularOperator("abel collocation matrix", 0.0);
    Eigen::MatrixXd inv = lu.inverse();
    return inv.leftCols(n);
}

SingularGridFunction abel_invert(const GridFunction& Fbar, double beta)
{
    Eigen::MatrixXd A = abel_matrix(Fbar.grid, beta);
    Eigen::VectorXd f = Eigen::Map<const Eigen::VectorXd>(Fbar.values.data(), Fbar.size());
    Eigen::VectorXd x = A * f;
    GridFunction reg(Fbar.grid, std::vector<double>(x.data() + 1, x.data() + x.size()));
    return SingularGridFunction(std::move(reg), x[0], beta - 1.0);
}

GridFunction abel_forward(const SingularGridFunction& tp, double beta)
{
    const TimeGrid& g = tp.regular.grid;
    Eigen::MatrixXd W = singular_weights(g, beta, WeightKind::volterra_lower);
    Eigen::VectorXd r = Eigen::Map<const Eigen::VectorXd>(tp.regular.values.data(), g.n_points);
    Eigen::VectorXd f = W * r;
    GridFunction out(g, std::vector<double>(f.data(), f.data() + f.size()));
    if (tp.coef != 0.0) {
        double p = tp.power;
        double B = boost::math::beta(p + 1.0, 1.0 - beta);
        for (int k = 0; k < g.n_points; ++k) out[k] += tp.coef * std::pow(g.t(k), p + 1.0 - beta) * B;
    }
    return out;
}

}  // namespace fracmix
