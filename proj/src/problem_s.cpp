#include "fracmix/problem_s.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <algorithm>
#include <cmath>

#include "fracmix/errors.hpp"

namespace fracmix {

namespace {

using GL = boost::math::quadrature::gauss<double, 10>;

double em1_over(double c, double x) { return std::fabs(c) < 1e-12 ? x : std::expm1(c * x) / c; }
double wronskian_scale(double c) { return std::fabs(c) < 1e-12 ? 1.0 : -std::expm1(-c) / c; }

// (T phi)(t_k) = P1(t_k) int_{t_k}^1 phi(s) P2(s) ds, exact in phi for piecewise-linear phi and
// for the singular basis t^{beta-1}
struct Tail {
    Eigen::MatrixXd reg;
    Eigen::VectorXd power;
};

Tail tail_operator(const KernelPair& k, const TimeGrid& g, double beta)
{
    const int n = g.n_points, N = g.intervals();
    const double h = g.h();
    std::vector<double> a(N), b(N), p(N);
    for (int l = 0; l < N; ++l) {
        const double t0 = g.t(l);
        a[l] = GL::integrate([&](double s) { return (1.0 - (s - t0) / h) * k.p2(s); }, t0, t0 + h);
        b[l] = GL::integrate([&](double s) { return (s - t0) / h * k.p2(s); }, t0, t0 + h);
        if (l == 0) {
            // s = u^{1/beta} removes the endpoint singularity
            const double ub = std::pow(h, beta);
            p[l] = GL::integrate([&](double u) { return k.p2(std::pow(u, 1.0 / beta)); }, 0.0, ub) / beta;
        } else {
            p[l] = GL::integrate([&](double s) { return std::pow(s, beta - 1.0) * k.p2(s); }, t0, t0 + h);
        }
    }
    Tail T{Eigen::MatrixXd::Zero(n, n), Eigen::VectorXd::Zero(n)};
    double tail_p = 0.0;
    for (int kk = N; kk >= 0; --kk) {
        if (kk < N) tail_p += p[kk];
        const double q = k.p1(g.t(kk));
        for (int l = kk; l < N; ++l) {
            T.reg(kk, l) += q * a[l];
            T.reg(kk, l + 1) += q * b[l];
        }
        T.power[kk] = q * tail_p;
    }
    return T;
}

Eigen::VectorXd vec(const GridFunction& g) { return Eigen::Map<const Eigen::VectorXd>(g.values.data(), g.size()); }

GridFunction grid_fn(const TimeGrid& g, const Eigen::VectorXd& v)
{
    return GridFunction(g, std::vector<double>(v.data(), v.data() + v.size()));
}

GridFunction correlation_data(const ProblemConfig& cfg, const TimeGrid& g, int i)
{
    Source f = cfg.source_function();
    GridFunction A(g);
    if (!f) return A;
    for (int k = 0; k < g.n_points; ++k) A[k] = correlation_rhs(cfg.curves, f, cfg.sigma, g.t(k), i);
    return A;
}

// cumulative trapezoid of v from x_j to 1
std::vector<double> right_cumulative(const std::vector<double>& v, double h)
{
    const int n = int(v.size());
    std::vector<double> c(n, 0.0);
    for (int j = n - 2; j >= 0; --j) c[j] = c[j + 1] + 0.5 * h * (v[j] + v[j + 1]);
    return c;
}

Eigen::MatrixXd checked_inverse(const Eigen::MatrixXd& A, const std::string& what)
{
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    double rc = lu.rcond();
    if (!(rc > 1e-13)) throw SingularOperator(what + " is numerically singular", 1.0 / rc);
    return lu.inverse();
}

Eigen::VectorXd checked_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const std::string& what)
{
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    double rc = lu.rcond();
    if (!(rc > 1e-13)) throw SingularOperator(what + " is numerically singular", 1.0 / rc);
    return lu.solve(b);
}

struct BoundaryData {
    TimeGrid grid;
    LateralFlux flux;
    BoundaryVolterra vol;
    Tail t2, t3;
    GridFunction A2, A3;
    Eigen::VectorXd R2, R3;
};

BoundaryData boundary_data(const ProblemConfig& cfg, const Tau1Result& tau1)
{
    TimeGrid g(cfg.n_points);
    const double b = cfg.beta();
    const int N = g.intervals();
    SeparableSource src = sample_source(cfg, g);
    BoundaryData d{g,
                   lateral_flux(b, tau1.tau1, tau1.tau1_prime[0], tau1.tau1_prime[N], src),
                   boundary_volterra(b, g),
                   tail_operator(cfg.kernels[1], g, b),
                   tail_operator(cfg.kernels[2], g, b),
                   correlation_data(cfg, g, 2),
                   correlation_data(cfg, g, 3),
                   {},
                   {}};
    const auto& s = cfg.sigma;
    const auto& al = cfg.alpha;
    const auto& be = cfg.beta_coef;
    Eigen::VectorXd A2 = vec(d.A2), A3 = vec(d.A3);
    d.R2 = vec(d.flux.left) + (al[1] * A2 + be[1] * (d.t2.reg * A2)) / (1 - s[1]);
    d.R3 = vec(d.flux.right) - (al[2] * A3 + be[2] * (d.t3.reg * A3)) / (1 - s[2]);
    return d;
}

// one-sided second-order derivatives of the d'Alembert field in local coordinates, pointing
// into the characteristic triangle
std::pair<double, double> local_gradient(const LineData& d, const Source& f, CharPoint p, int domain)
{
    const double e = 1e-5;
    auto u = [&](double a, double b) { return dalembert_u(d, f, {a, b}, domain); };
    double u0 = u(p.a, p.b);
    double ua = (3 * u0 - 4 * u(p.a - e, p.b) + u(p.a - 2 * e, p.b)) / (2 * e);
    double ub = (-3 * u0 + 4 * u(p.a, p.b + e) - u(p.a, p.b + 2 * e)) / (2 * e);
    return {ua, ub};
}

// physical (u_x, u_t) from local derivatives
std::pair<double, double> physical_gradient(int domain, double ua, double ub)
{
    if (domain == 1) return {ua + ub, ua - ub};
    if (domain == 2) return {ua - ub, ua + ub};
    return {ub - ua, ua + ub};
}

bool in_window(double s) { return s >= 0.05 - 1e-12 && s <= 0.95 + 1e-12; }

}  // namespace

double two_point_green(double c, double x, double xi)
{
    const double lo = std::min(x, xi), hi = std::max(x, xi);
    return em1_over(c, lo) * em1_over(c, hi - 1.0) / (std::exp(c * xi) * wronskian_scale(c));
}

double two_point_green_x(double c, double x, double xi, int side)
{
    const double w = std::exp(c * xi) * wronskian_scale(c);
    const double below = em1_over(c, xi) * std::exp(c * (x - 1.0)) / w;  // xi < x
    const double above = std::exp(c * x) * em1_over(c, xi - 1.0) / w;    // xi > x
    if (xi < x) return below;
    if (xi > x) return above;
    if (side < 0) return below;
    if (side > 0) return above;
    return 0.5 * (below + above);
}

SeparableSource sample_source(const ProblemConfig& cfg, const TimeGrid& g)
{
    SeparableSource s;
    for (const auto& term : cfg.source) {
        if (term.x.is_zero() || term.t.is_zero()) continue;
        s.x.push_back(GridFunction::sample(g, [&](double x) { return term.x(x); }).values);
        s.t.push_back(GridFunction::sample(g, [&](double t) { return term.t(t); }).values);
    }
    return s;
}

Tau1Result solve_tau1(const ProblemConfig& cfg)
{
    cfg.validate();
    const TimeGrid g(cfg.n_points);
    const int n = g.n_points, N = g.intervals();
    const double h = g.h();
    const double s1 = cfg.sigma[0], a1 = cfg.alpha[0], b1 = cfg.beta_coef[0];
    const double gl = std::tgamma(cfg.lambda);
    const double c = gl * a1 * (1 - s1) / (1 + s1);
    const double k1 = gl * b1 * (1 - s1) / (1 + s1);
    const auto& P = cfg.kernels[0];

    Tau1Result res{GridFunction(g), GridFunction(g), correlation_data(cfg, g, 1)};
    std::vector<double> w(n, h), p11(n), p12(n), p12d(n), AP(n), Q(n);
    w[0] = w[N] = 0.5 * h;
    for (int j = 0; j < n; ++j) {
        double x = g.t(j);
        p11[j] = P.p1(x);
        p12[j] = P.p2(x);
        p12d[j] = P.p2.d1(x);
        AP[j] = res.A1[j] * p12[j];
    }
    auto IA = right_cumulative(AP, h);
    for (int j = 0; j < n; ++j)
        Q[j] = cfg.f(g.t(j), 0.0) - gl / (1 + s1) * (a1 * res.A1[j] + b1 * p11[j] * IA[j]);

    Eigen::MatrixXd G(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) G(i, j) = two_point_green(c, g.t(i), g.t(j));

    DiscretizedKernel K{g, Eigen::MatrixXd::Zero(n, n), 0.0};
    GridFunction F(g);
    for (int i = 0; i < n; ++i) {
        double cum = 0.0;  // int_0^{x_j} G0(x_i, xi) P11(xi) d xi
        for (int j = 0; j < n; ++j) {
            if (j > 0) cum += 0.5 * h * (G(i, j - 1) * p11[j - 1] + G(i, j) * p11[j]);
            if (k1 != 0.0) K.entries(i, j) = -k1 * w[j] * (G(i, j) * p11[j] * p12[j] + p12d[j] * cum);
            F[i] += w[j] * G(i, j) * Q[j];
        }
    }
    res.tau1 = k1 == 0.0 ? F : nystrom_solve(K, F, KernelSign::minus);
    res.tau1[0] = res.tau1[N] = 0.0;

    // full right-hand side of the two-point problem, then tau1' through the derivative kernel
    std::vector<double> tp(n);
    for (int j = 0; j < n; ++j) tp[j] = res.tau1[j] * p12d[j];
    auto IT = right_cumulative(tp, h);
    std::vector<double> r(n);
    for (int j = 0; j < n; ++j) r[j] = Q[j] + k1 * p11[j] * (-res.tau1[j] * p12[j] - IT[j]);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) {
            int side = i == 0 ? +1 : (i == N ? -1 : 0);
            acc += w[j] * two_point_green_x(c, g.t(i), g.t(j), side) * r[j];
        }
        res.tau1_prime[i] = acc;
    }
    return res;
}

Tau23Result solve_tau23_general(const ProblemConfig& cfg, const Tau1Result& tau1)
{
    cfg.validate();
    if (cfg.alpha[1] == 0.0 || cfg.alpha[2] == 0.0)
        throw ConfigError("general branch needs alpha_2 and alpha_3 both nonzero");
    BoundaryData d = boundary_data(cfg, tau1);
    const TimeGrid& g = d.grid;
    const int n = g.n_points;
    const auto& s = cfg.sigma;
    const double a2 = cfg.alpha[1] * (1 + s[1]) / (1 - s[1]), b2 = cfg.beta_coef[1] * (1 + s[1]) / (1 - s[1]);
    const double a3 = -cfg.alpha[2] * (1 + s[2]) / (1 - s[2]), b3 = -cfg.beta_coef[2] * (1 + s[2]) / (1 - s[2]);
    const Eigen::MatrixXd& V1 = d.vol.k1;
    const Eigen::MatrixXd& V2 = d.vol.k2;
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);

    // left equation: phi2 - K3 phi2 = (R2 + V2 phi3) / a2
    DiscretizedKernel K3{g, -(V1 + b2 * d.t2.reg) / a2, cfg.beta()};
    Resolvent R1 = resolvent_build(K3, KernelSign::minus);
    const Eigen::MatrixXd S = (I + R1.entries) / a2;
    // right equation after elimination: phi3 - K5 phi3 = F4
    DiscretizedKernel K5{g, (V1 - b3 * d.t3.reg - V2 * S * V2) / a3, cfg.beta()};
    Eigen::VectorXd F4 = (d.R3 - V2 * (S * d.R2)) / a3;
    Resolvent R2 = resolvent_build(K5, KernelSign::minus);
    GridFunction phi3 = apply_resolvent(R2, grid_fn(g, F4));
    Eigen::VectorXd p3 = vec(phi3);
    Eigen::VectorXd p2 = S * (d.R2 + V2 * p3);

    Eigen::MatrixXd B(2 * n, 2 * n);
    B << a2 * I + V1 + b2 * d.t2.reg, -V2, V2, a3 * I - V1 + b3 * d.t3.reg;
    Eigen::VectorXd rhs(2 * n);
    rhs << d.R2, d.R3;
    Eigen::VectorXd xb = checked_solve(B, rhs, "coupled boundary system");
    Eigen::VectorXd xc(2 * n);
    xc << p2, p3;

    Tau23Result out;
    out.phi2 = SingularGridFunction(grid_fn(g, p2));
    out.phi3 = SingularGridFunction(grid_fn(g, p3));
    out.chain_vs_block = (xc - xb).lpNorm<Eigen::Infinity>();
    out.defect = (B * xc - rhs).lpNorm<Eigen::Infinity>();
    return out;
}

Tau23Result solve_tau23_abel(const ProblemConfig& cfg, const Tau1Result& tau1, const Tau23Options& opt)
{
    cfg.validate();
    if (cfg.alpha[1] != 0.0 || cfg.alpha[2] != 0.0) throw ConfigError("Abel branch needs alpha_2 = alpha_3 = 0");
    if (cfg.beta_coef[1] * cfg.beta_coef[2] == 0.0) throw ConfigError("Abel branch needs beta_2 and beta_3 nonzero");
    BoundaryData d = boundary_data(cfg, tau1);
    const TimeGrid& g = d.grid;
    const int n = g.n_points, m = n + 1;
    const double beta = cfg.beta();
    const auto& s = cfg.sigma;
    const double b2 = cfg.beta_coef[1] * (1 + s[1]) / (1 - s[1]);
    const double b3 = -cfg.beta_coef[2] * (1 + s[2]) / (1 - s[2]);

    // operators on the coordinates (c, psi_0..psi_N) of phi = c t^{beta-1} + psi
    auto lift = [&](const Eigen::VectorXd& power, const Eigen::MatrixXd& reg) {
        Eigen::MatrixXd M(n, m);
        M.col(0) = power;
        M.rightCols(n) = reg;
        return M;
    };
    Eigen::MatrixXd Kb = lift(d.vol.k1bar_power, d.vol.k1bar);
    Eigen::MatrixXd W2 = lift(d.vol.k2_power, d.vol.k2);
    Eigen::MatrixXd T2 = lift(d.t2.power, d.t2.reg);
    Eigen::MatrixXd T3 = lift(d.t3.power, d.t3.reg);
    Eigen::MatrixXd V1 = lift(d.vol.k1_power, d.vol.k1);
    if (opt.isolate_abel_layer) {
        Kb.setZero();
        W2.setZero();
        T2.setZero();
        T3.setZero();
    }
    const Eigen::MatrixXd GA = std::tgamma(1 - beta) * abel_collocation_matrix(g, beta);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(m, m);

    // x2 - K6 x2 = GA (R2 + W2 x3)
    Eigen::MatrixXd K6 = -GA * (b2 * T2 + Kb);
    Eigen::MatrixXd S = checked_inverse(I - K6, "left Abel-reduced operator") * GA;
    // x3 - K7 x3 = F6
    Eigen::MatrixXd K7 = GA * (b3 * T3 - Kb) + GA * W2 * S * W2;
    Eigen::VectorXd F6 = -GA * d.R3 + GA * W2 * (S * d.R2);
    Eigen::VectorXd x3 = checked_solve(I - K7, F6, "right Abel-reduced operator");
    Eigen::VectorXd x2 = S * (d.R2 + W2 * x3);

    Eigen::MatrixXd B(2 * m, 2 * m);
    B << I + GA * (b2 * T2 + Kb), -GA * W2, -GA * W2, I + GA * (Kb - b3 * T3);
    Eigen::VectorXd rhs(2 * m);
    rhs << GA * d.R2, -GA * d.R3;
    Eigen::VectorXd xb = checked_solve(B, rhs, "coupled Abel-reduced system");
    Eigen::VectorXd xc(2 * m);
    xc << x2, x3;

    Tau23Result out;
    auto to_sgf = [&](const Eigen::VectorXd& x) {
        return SingularGridFunction(grid_fn(g, x.tail(n)), x[0], beta - 1.0);
    };
    out.phi2 = to_sgf(x2);
    out.phi3 = to_sgf(x3);
    out.chain_vs_block = (xc - xb).lpNorm<Eigen::Infinity>();
    if (!opt.isolate_abel_layer) {
        Eigen::VectorXd e2 = V1 * x2 + b2 * (T2 * x2) - W2 * x3 - d.R2;
        Eigen::VectorXd e3 = -V1 * x3 + b3 * (T3 * x3) + W2 * x2 - d.R3;
        out.defect = std::max(e2.lpNorm<Eigen::Infinity>(), e3.lpNorm<Eigen::Infinity>());
    }
    return out;
}

Tau23Result solve_tau23(const ProblemConfig& cfg, const Tau1Result& tau1)
{
    return cfg.branch() == Branch::general ? solve_tau23_general(cfg, tau1) : solve_tau23_abel(cfg, tau1);
}

TraceSet recover_nu(const ProblemConfig& cfg, const Tau1Result& tau1, const Tau23Result& tau23)
{
    cfg.validate();
    const TimeGrid g(cfg.n_points);
    const int n = g.n_points;
    const double beta = cfg.beta();
    const auto& s = cfg.sigma;
    const auto& al = cfg.alpha;
    const auto& be = cfg.beta_coef;

    TraceSet tr;
    tr.grid = g;
    tr.tau1 = tau1.tau1;
    tr.tau1_prime = tau1.tau1_prime;
    tr.tau2_prime = tau23.phi2;
    tr.tau3_prime = tau23.phi3;
    tr.A1 = tau1.A1;
    tr.A2 = correlation_data(cfg, g, 2);
    tr.A3 = correlation_data(cfg, g, 3);

    Tail t1 = tail_operator(cfg.kernels[0], g, beta);
    Tail t2 = tail_operator(cfg.kernels[1], g, beta);
    Tail t3 = tail_operator(cfg.kernels[2], g, beta);
    auto transmit = [&](const SingularGridFunction& nu, double a, double b, const Tail& T) {
        Eigen::VectorXd r = a * vec(nu.regular) + b * (T.reg * vec(nu.regular) + nu.coef * T.power);
        return SingularGridFunction(grid_fn(g, r), a * nu.coef, nu.power);
    };

    GridFunction n1(g);
    for (int k = 0; k < n; ++k) n1[k] = correlation_nu(tr.tau1_prime[k], s[0], tr.A1[k], 1);
    tr.nu1_minus = SingularGridFunction(n1);
    tr.nu1_plus = transmit(tr.nu1_minus, al[0], be[0], t1);

    GridFunction n2(g), n3(g);
    for (int k = 0; k < n; ++k) {
        n2[k] = correlation_nu(tr.tau2_prime.regular[k], s[1], tr.A2[k], 2);
        n3[k] = correlation_nu(tr.tau3_prime.regular[k], s[2], tr.A3[k], 3);
    }
    tr.nu2_minus = SingularGridFunction(n2, (1 + s[1]) / (1 - s[1]) * tr.tau2_prime.coef, beta - 1.0);
    tr.nu3_plus = SingularGridFunction(n3, -(1 + s[2]) / (1 - s[2]) * tr.tau3_prime.coef, beta - 1.0);
    tr.nu2_plus = transmit(tr.nu2_minus, al[1], be[1], t2);
    tr.nu3_minus = transmit(tr.nu3_plus, al[2], be[2], t3);
    return tr;
}

ParabolicInputs parabolic_inputs(const ProblemConfig& cfg, const TraceSet& tr)
{
    return {cfg.beta(), tr.tau1, tr.tau2_prime, tr.tau3_prime, sample_source(cfg, tr.grid)};
}

std::array<LineData, 3> line_data(const TraceSet& tr)
{
    SingularGridFunction minus3 = tr.nu3_plus;
    for (double& v : minus3.regular.values) v = -v;
    minus3.coef = -minus3.coef;
    return {LineData{Trace(tr.tau1, 0.0, 1.0, tr.tau1_prime[0], tr.tau1_prime[tr.grid.intervals()]),
                     primitive_trace(tr.nu1_minus)},
            LineData{primitive_trace(tr.tau2_prime), primitive_trace(tr.nu2_minus)},
            LineData{primitive_trace(tr.tau3_prime), primitive_trace(minus3)}};
}

std::vector<FieldSample> SolutionField::samples() const
{
    std::vector<FieldSample> out;
    const int n = grid.n_points;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) out.push_back({0, grid.t(i), grid.t(k), parabolic(i, k)});
    out.insert(out.end(), hyperbolic.begin(), hyperbolic.end());
    return out;
}

double SolutionField::max_abs() const
{
    double m = parabolic.cwiseAbs().maxCoeff();
    for (const auto& s : hyperbolic) m = std::max(m, std::fabs(s.u));
    return m;
}

SolutionField assemble_solution(const ProblemConfig& cfg, const TraceSet& tr)
{
    const TimeGrid& g = tr.grid;
    const int n = g.n_points;
    SolutionField out;
    out.grid = g;
    std::vector<int> cols(n);
    for (int i = 0; i < n; ++i) cols[i] = i;
    out.parabolic = parabolic_columns(parabolic_inputs(cfg, tr), 0.0, cols);
    out.lines = line_data(tr);

    Source f = cfg.source_function();
    const double h = g.h();
    for (int d = 1; d <= 3; ++d) {
        const double eps = cfg.curves.epsilon[d - 1];
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                const double a = i * h, b = j * h;
                if (0.5 * (b - a) > curve_gamma(eps, 0.5 * (a + b)) + 1e-14) continue;
                XT p = to_physical(d, {a, b});
                out.hyperbolic.push_back({d, p.x, p.t, dalembert_u(out.lines[d - 1], f, {a, b}, d)});
            }
    }
    return out;
}

double ResidualReport::max() const
{
    double m = 0.0;
    for (const auto& e : entries) m = std::max(m, e.second);
    return m;
}

double ResidualReport::get(const std::string& name) const
{
    for (const auto& e : entries)
        if (e.first == name) return e.second;
    throw DomainError("no residual named " + name);
}

ResidualReport interface_residuals(const ProblemConfig& cfg, const TraceSet& tr, const SolutionField& field)
{
    const TimeGrid& g = tr.grid;
    const int n = g.n_points, N = g.intervals();
    const double h = g.h();
    const auto& sg = cfg.sigma;
    const auto& al = cfg.alpha;
    const auto& be = cfg.beta_coef;
    Source f = cfg.source_function();
    const auto& lines = field.lines;
    ResidualReport rep;
    auto add = [&](const std::string& name, double v) { rep.entries.emplace_back(name, v); };

    add("point_conditions", std::max(std::fabs(field.parabolic(0, 0)), std::fabs(field.parabolic(N, 0))));

    // nonlocal conditions on the curves
    const ThetaKind th[3] = {ThetaKind::theta1, ThetaKind::theta2, ThetaKind::theta3};
    const ThetaKind ts[3] = {ThetaKind::theta1_star, ThetaKind::theta2_star, ThetaKind::theta3_star};
    for (int d = 1; d <= 3; ++d) {
        double worst = 0.0;
        for (int k = 1; k < N; ++k) {
            const double s = g.t(k);
            if (!in_window(s)) continue;
            CharPoint p = theta_points(cfg.curves, s, th[d - 1]), q = theta_points(cfg.curves, s, ts[d - 1]);
            auto [pa, pb] = local_gradient(lines[d - 1], f, p, d);
            auto [qa, qb] = local_gradient(lines[d - 1], f, q, d);
            auto [px, pt] = physical_gradient(d, pa, pb);
            auto [qx, qt] = physical_gradient(d, qa, qb);
            double r = d == 3 ? (px + pt) - sg[2] * (qx - qt) : (px - pt) - sg[d - 1] * (qx + qt);
            worst = std::max(worst, std::fabs(r));
        }
        add("nonlocal_" + std::to_string(d), worst);
    }

    // transmitting condition on the initial line, tau1'' by central differences
    {
        const auto& P = cfg.kernels[0];
        std::vector<double> nu(n), nup(n);
        for (int k = 0; k < n; ++k) {
            double d1;
            if (k == 0)
                d1 = (-3 * tr.tau1[0] + 4 * tr.tau1[1] - tr.tau1[2]) / (2 * h);
            else if (k == N)
                d1 = (3 * tr.tau1[N] - 4 * tr.tau1[N - 1] + tr.tau1[N - 2]) / (2 * h);
            else
                d1 = (tr.tau1[k + 1] - tr.tau1[k - 1]) / (2 * h);
            nu[k] = correlation_nu(d1, sg[0], tr.A1[k], 1);
            nup[k] = nu[k] * P.p2(g.t(k));
        }
        auto I = right_cumulative(nup, h);
        const double gl = std::tgamma(cfg.lambda);
        double worst = 0.0;
        for (int k = 1; k < N; ++k) {
            const double x = g.t(k);
            if (!in_window(x)) continue;
            double d2 = (tr.tau1[k + 1] - 2 * tr.tau1[k] + tr.tau1[k - 1]) / (h * h);
            double lhs = (d2 - cfg.f(x, 0.0)) / gl;
            double rhs = al[0] * nu[k] + be[0] * P.p1(x) * I[k];
            worst = std::max(worst, std::fabs(lhs - rhs));
        }
        add("transmitting_1", worst);
    }

    // lateral transmitting conditions, u_x of the parabolic field by one-sided differences
    {
        const double dl = std::min(1e-3, h / 8);
        ParabolicInputs in = parabolic_inputs(cfg, tr);
        Eigen::MatrixXd L(5, n), R(5, n);
        L.row(0) = field.parabolic.row(0);
        R.row(0) = field.parabolic.row(N);
        for (int m = 1; m <= 4; ++m) {
            L.row(m) = parabolic_columns(in, m * dl, {0}).row(0);
            R.row(m) = parabolic_columns(in, h - m * dl, {N - 1}).row(0);
        }
        Tail t2 = tail_operator(cfg.kernels[1], g, cfg.beta());
        Tail t3 = tail_operator(cfg.kernels[2], g, cfg.beta());
        auto rhs = [&](const SingularGridFunction& nu, double a, double b, const Tail& T) {
            return Eigen::VectorXd(a * vec(nu.regular) + b * (T.reg * vec(nu.regular) + nu.coef * T.power));
        };
        Eigen::VectorXd R2 = rhs(tr.nu2_minus, al[1], be[1], t2), R3 = rhs(tr.nu3_plus, al[2], be[2], t3);
        // fourth-order one-sided first derivative, cubic extrapolation to the line
        const double st[5] = {-25.0, 48.0, -36.0, 16.0, -3.0};
        auto ext = [](double u1, double u2, double u3, double u4) { return 4 * u1 - 6 * u2 + 4 * u3 - u4; };
        double w2 = 0.0, w3 = 0.0, c2 = 0.0, c3 = 0.0;
        for (int k = 1; k < N; ++k) {
            const double t = g.t(k);
            if (!in_window(t)) continue;
            double ux0 = 0.0, ux1 = 0.0;
            for (int m = 0; m < 5; ++m) {
                ux0 += st[m] * L(m, k);
                ux1 -= st[m] * R(m, k);
            }
            ux0 /= 12 * dl;
            ux1 /= 12 * dl;
            double pw2 = tr.nu2_minus.coef * std::pow(t, tr.nu2_minus.power);
            double pw3 = tr.nu3_plus.coef * std::pow(t, tr.nu3_plus.power);
            w2 = std::max(w2, std::fabs(ux0 - (R2[k] + al[1] * pw2)));
            w3 = std::max(w3, std::fabs(ux1 - (R3[k] + al[2] * pw3)));

            // continuity across the lateral lines, both sides extrapolated to the line
            auto u2 = [&](double x) { return dalembert_xt(lines[1], f, x, t, 2); };
            auto u3 = [&](double x) { return dalembert_xt(lines[2], f, x, t, 3); };
            double in0 = ext(L(1, k), L(2, k), L(3, k), L(4, k));
            double out0 = ext(u2(-dl), u2(-2 * dl), u2(-3 * dl), u2(-4 * dl));
            double in1 = ext(R(1, k), R(2, k), R(3, k), R(4, k));
            double out1 = ext(u3(1 + dl), u3(1 + 2 * dl), u3(1 + 3 * dl), u3(1 + 4 * dl));
            c2 = std::max(c2, std::fabs(in0 - out0));
            c3 = std::max(c3, std::fabs(in1 - out1));
        }
        add("transmitting_2", w2);
        add("transmitting_3", w3);
        add("continuity_left", c2);
        add("continuity_right", c3);
    }

    // correlations: tau' from the parabolic field along the line, nu from the hyperbolic field
    {
        double w[3] = {0.0, 0.0, 0.0};
        for (int k = 1; k < N; ++k) {
            const double s = g.t(k);
            if (!in_window(s)) continue;
            auto d5 = [&](auto u) { return (u(k - 2) - 8 * u(k - 1) + 8 * u(k + 1) - u(k + 2)) / (12 * h); };
            double tp[3] = {d5([&](int j) { return field.parabolic(j, 0); }),
                            d5([&](int j) { return field.parabolic(0, j); }),
                            d5([&](int j) { return field.parabolic(N, j); })};
            const double A[3] = {tr.A1[k], tr.A2[k], tr.A3[k]};
            for (int d = 1; d <= 3; ++d) {
                auto [ua, ub] = local_gradient(lines[d - 1], f, {s, s}, d);
                auto [ux, ut] = physical_gradient(d, ua, ub);
                double nu = d == 1 ? ut : ux;
                const double sd = sg[d - 1];
                double r = d == 1   ? (1 - sd) * tp[0] - (1 + sd) * nu - A[0]
                           : d == 2 ? (1 + sd) * tp[1] + (sd - 1) * nu - A[1]
                                    : (1 + sd) * tp[2] + (1 - sd) * nu - A[2];
                w[d - 1] = std::max(w[d - 1], std::fabs(r));
            }
        }
        for (int d = 1; d <= 3; ++d) add("correlation_" + std::to_string(d), w[d - 1]);
    }

    // continuity across the initial line: u(x, t) - tau1(x) ~ C t^lambda, eliminated from two early times
    {
        ParabolicInputs in = parabolic_inputs(cfg, tr);
        const double t1 = 1e-12, t2 = 4e-12;
        auto u1 = parabolic_early_row(in, t1), u2 = parabolic_early_row(in, t2);
        const double q1 = std::pow(t1, cfg.lambda), q2 = std::pow(t2, cfg.lambda);
        double worst = 0.0;
        for (int i = 1; i < N; ++i) {
            const double x = g.t(i);
            if (!in_window(x)) continue;
            double lim = (u1[i] * q2 - u2[i] * q1) / (q2 - q1);
            worst = std::max(worst, std::fabs(lim - dalembert_u(lines[0], f, {x, x}, 1)));
        }
        add("continuity_initial", worst);
    }
    return rep;
}

Eigen::MatrixXd fd_field(const ProblemConfig& cfg, const TraceSet& tr)
{
    const TimeGrid& g = tr.grid;
    const int N = g.intervals(), M = 2 * N;
    const double h = g.h(), lam = cfg.lambda;
    const double r = (2.0 - lam) / lam;
    std::vector<double> t(M + 1);
    for (int n = 0; n <= M; ++n) t[n] = std::pow(double(n) / M, r);
    const double g2 = std::tgamma(2.0 - lam);

    // levels u[n][i], i = 0..N
    std::vector<std::vector<double>> u(M + 1, std::vector<double>(N + 1));
    for (int i = 0; i <= N; ++i) u[0][i] = tr.tau1[i];
    std::vector<double> diag(N - 1), rhs(N - 1), cp(N - 1);
    for (int n = 1; n <= M; ++n) {
        auto b = [&](int j) {
            return (std::pow(t[n] - t[j - 1], 1 - lam) - std::pow(t[n] - t[j], 1 - lam)) / (g2 * (t[j] - t[j - 1]));
        };
        const double bn = b(n);
        std::vector<double> hist(N + 1, 0.0);
        for (int j = 1; j < n; ++j) {
            const double bj = b(j);
            for (int i = 1; i < N; ++i) hist[i] += bj * (u[j][i] - u[j - 1][i]);
        }
        u[n][0] = tr.tau2(t[n]);
        u[n][N] = tr.tau3(t[n]);
        // (u_{i+1} - 2 u_i + u_{i-1}) / h^2 - bn u_i = f - bn u_i^{n-1} + hist_i
        const double off = 1.0 / (h * h), dg = -2.0 / (h * h) - bn;
        for (int i = 1; i < N; ++i) {
            double v = cfg.f(g.t(i), t[n]) - bn * u[n - 1][i] + hist[i];
            if (i == 1) v -= off * u[n][0];
            if (i == N - 1) v -= off * u[n][N];
            rhs[i - 1] = v;
        }
        // Thomas sweep
        double den = dg;
        cp[0] = off / den;
        rhs[0] /= den;
        for (int i = 1; i < N - 1; ++i) {
            den = dg - off * cp[i - 1];
            cp[i] = off / den;
            rhs[i] = (rhs[i] - off * rhs[i - 1]) / den;
        }
        for (int i = N - 3; i >= 0; --i) rhs[i] -= cp[i] * rhs[i + 1];
        for (int i = 1; i < N; ++i) u[n][i] = rhs[i - 1];
    }

    // cubic Lagrange in t onto the uniform nodes
    Eigen::MatrixXd out(N + 1, N + 1);
    for (int k = 0; k <= N; ++k) {
        const double tk = g.t(k);
        int j = int(std::upper_bound(t.begin(), t.end(), tk) - t.begin()) - 1;
        j = std::clamp(j - 1, 0, M - 3);
        for (int i = 0; i <= N; ++i) {
            double v = 0.0;
            for (int a = 0; a < 4; ++a) {
                double l = 1.0;
                for (int c = 0; c < 4; ++c)
                    if (c != a) l *= (tk - t[j + c]) / (t[j + a] - t[j + c]);
                v += l * u[j + a][i];
            }
            out(i, k) = v;
        }
    }
    return out;
}

OracleReport fd_oracle(const ProblemConfig& cfg, const TraceSet& tr, const SolutionField& field)
{
    Eigen::MatrixXd fd = fd_field(cfg, tr);
    const int N = tr.grid.intervals();
    const double h = tr.grid.h();
    OracleReport rep;
    rep.time_steps = 2 * N;
    double ss = 0.0;
    for (int k = 1; k <= N; ++k)
        for (int i = 1; i < N; ++i) {
            double d = std::fabs(fd(i, k) - field.parabolic(i, k));
            rep.max_discrepancy = std::max(rep.max_discrepancy, d);
            ss += d * d;
        }
    rep.l2_discrepancy = std::sqrt(ss * h * h);
    return rep;
}

}  // namespace fracmix
