#include "fracmix/parabolic_field.hpp"

#include <cmath>

#include "fracmix/errors.hpp"
#include "fracmix/green_kernels.hpp"
#include "fracmix/special_functions.hpp"

namespace fracmix {

namespace {

std::vector<double> node_times(int N)
{
    std::vector<double> t(N);
    for (int k = 1; k <= N; ++k) t[k - 1] = double(k) / N;
    return t;
}

// Index of a family inside a lattice; families are few, linear search is fine.
int fam(const ImageLattice& L, double g)
{
    for (int f = 0; f < L.family_count(); ++f)
        if (std::fabs(L.family(f) - g) < 1e-14) return f;
    throw DomainError("lattice family missing");
}

// int_0^1 (1/2) sum_n [Psi_g(|x_i - xi + 2n|, s_m) - Psi_g(|x_i + xi + 2n|, s_m)] v(xi) d xi,
// v piecewise linear on the nodes; fa, fb hold the families g + beta and g + 2 beta
double image_pair(const ImageLattice& L, int fa, int fb, int i, int m, const std::vector<double>& v)
{
    const int N = int(v.size()) - 1;
    const double h = L.step();
    double acc = 0.0;
    for (int j = 0; j < N; ++j) {
        int p = i - j - 1, q = i - j, r = i + j + 1, s = i + j;
        double Tp = L.T(fa, p, m, +1), Tq = L.T(fa, q, m, -1);
        double Tr = L.T(fa, r, m, -1), Ts = L.T(fa, s, m, +1);
        double d0 = Tp - Tq;
        double d1 = h * Tp - (L.U(fb, p, m) - L.U(fb, q, m));
        double e0 = Ts - Tr;
        double e1 = -h * Tr - (L.U(fb, r, m) - L.U(fb, s, m));
        if (j == i && L.offset() > 0.0) {
            // x lies inside this cell: the direct image changes sign at xi = x
            double z = 2.0 * std::pow(L.time(m), L.family(fa) - 1.0) * reciprocal_gamma(L.family(fa));
            d0 += z;
            d1 += L.offset() * z;
        }
        double slope = (v[j + 1] - v[j]) / h;
        acc += v[j] * (d0 - e0) + slope * (d1 - e1);
    }
    return 0.5 * acc;
}

// int_0^1 sum_n sgn(xi + 2n) Psi_g(|xi + 2n|, s_m) v(xi) d xi on the zero-offset lattice
double signed_images(const ImageLattice& L, int fa, int fb, int m, const std::vector<double>& v)
{
    const int N = int(v.size()) - 1;
    const double h = L.step();
    double acc = 0.0;
    for (int j = 0; j < N; ++j) {
        double Ua = L.U(fa, j + 1, m);
        double i0 = -(Ua - L.U(fa, j, m));
        double i1 = -h * Ua - (L.T(fb, j + 1, m) - L.T(fb, j, m));
        acc += v[j] * i0 + (v[j + 1] - v[j]) / h * i1;
    }
    return acc;
}

std::vector<double> reversed(const std::vector<double>& v) { return {v.rbegin(), v.rend()}; }

double interp(const std::vector<double>& v, double x)
{
    const int N = int(v.size()) - 1;
    double p = std::clamp(x, 0.0, 1.0) * N;
    int j = std::min(int(p), N - 1);
    double w = p - j;
    return (1 - w) * v[j] + w * v[j + 1];
}

}  // namespace

std::vector<double> convolve_primitives(const std::vector<double>& prim1, const std::vector<double>& prim2,
                                        const std::vector<double>& phi, double h)
{
    const int n = int(phi.size());
    std::vector<double> w0(n), w1(n), out(n, 0.0);
    for (int m = 1; m < n; ++m) {
        double m0 = prim1[m] - prim1[m - 1];
        double m1 = h * prim1[m] - (prim2[m] - prim2[m - 1]);
        w0[m] = m0 - m1 / h;
        w1[m] = m1 / h;
    }
    for (int k = 1; k < n; ++k) {
        double acc = 0.0;
        for (int m = 1; m <= k; ++m) acc += w0[m] * phi[k - m + 1] + w1[m] * phi[k - m];
        out[k] = acc;
    }
    return out;
}

LateralFlux lateral_flux(double beta, const GridFunction& tau1, double dtau_left, double dtau_right,
                         const SeparableSource& f)
{
    const TimeGrid& g = tau1.grid;
    const int N = g.intervals();
    const double b = beta, h = g.h();
    ImageLattice L(b, N, {1 - b, 1.0, 1 + b, 1 + 2 * b, 2 + b, 2 + 2 * b}, node_times(N));
    const int f0 = fam(L, 1 - b), f1 = fam(L, 1.0), f2 = fam(L, 1 + b), f3 = fam(L, 1 + 2 * b),
              f4 = fam(L, 2 + b), f5 = fam(L, 2 + 2 * b);

    LateralFlux out{GridFunction(g), GridFunction(g)};
    const std::vector<double>& v = tau1.values;
    std::vector<double> vr = reversed(v);
    for (int k = 1; k <= N; ++k) {
        out.left[k] = signed_images(L, f0, f1, k - 1, v);
        out.right[k] = -signed_images(L, f0, f1, k - 1, vr);
    }
    for (int r = 0; r < f.terms(); ++r) {
        std::vector<double> xr = reversed(f.x[r]);
        std::vector<double> p1(N + 1, 0.0), p2(N + 1, 0.0), q1(N + 1, 0.0), q2(N + 1, 0.0);
        for (int m = 1; m <= N; ++m) {
            p1[m] = signed_images(L, f2, f3, m - 1, f.x[r]);
            p2[m] = signed_images(L, f4, f5, m - 1, f.x[r]);
            q1[m] = signed_images(L, f2, f3, m - 1, xr);
            q2[m] = signed_images(L, f4, f5, m - 1, xr);
        }
        auto dl = convolve_primitives(p1, p2, f.t[r], h);
        auto dr = convolve_primitives(q1, q2, f.t[r], h);
        for (int k = 1; k <= N; ++k) {
            out.left[k] -= dl[k];
            out.right[k] += dr[k];
        }
    }
    out.left[0] = dtau_left;
    out.right[0] = dtau_right;
    return out;
}

BoundaryVolterra boundary_volterra(double beta, const TimeGrid& g)
{
    const int N = g.intervals();
    const double b = beta;
    ImageLattice L(b, N, {1.0, 2 - b, 3 - b}, node_times(N));
    const int fp = fam(L, 1.0), fa = fam(L, 2 - b), fb = fam(L, 3 - b);
    const double ga = reciprocal_gamma(2 - b), gb = reciprocal_gamma(3 - b), gbeta = std::tgamma(b);

    std::vector<double> a1(N + 1, 0.0), a2(N + 1, 0.0), c1(N + 1, 0.0), c2(N + 1, 0.0), z1(N + 1, 0.0),
        z2(N + 1, 0.0);
    BoundaryVolterra out;
    out.k1_power = Eigen::VectorXd::Zero(N + 1);
    out.k2_power = Eigen::VectorXd::Zero(N + 1);
    out.k1bar_power = Eigen::VectorXd::Zero(N + 1);
    out.k1_power[0] = gbeta;
    for (int m = 1; m <= N; ++m) {
        const double s = g.t(m);
        a1[m] = L.U(fa, 0, m - 1);
        a2[m] = L.U(fb, 0, m - 1);
        c1[m] = L.U(fa, N, m - 1);
        c2[m] = L.U(fb, N, m - 1);
        // the n = 0 image alone
        z1[m] = a1[m] - std::pow(s, 1 - b) * ga;
        z2[m] = a2[m] - std::pow(s, 2 - b) * gb;
        double u0 = L.U(fp, 0, m - 1);
        out.k1_power[m] = gbeta * u0;
        out.k1bar_power[m] = gbeta * (u0 - 1.0);
        out.k2_power[m] = gbeta * L.U(fp, N, m - 1);
    }
    auto mat = [&](const std::vector<double>& p1, const std::vector<double>& p2) {
        auto m0 = [&](int m) { return p1[m] - p1[m - 1]; };
        auto m1 = [&](int m) { return g.h() * p1[m] - (p2[m] - p2[m - 1]); };
        return volterra_matrix(g, m0, m1);
    };
    out.k1 = mat(a1, a2);
    out.k2 = mat(c1, c2);
    out.k1bar = mat(z1, z2);
    return out;
}

Eigen::MatrixXd parabolic_columns(const ParabolicInputs& in, double offset, const std::vector<int>& cols)
{
    const TimeGrid& g = in.tau1.grid;
    const int N = g.intervals();
    const double b = in.beta, h = g.h();
    ImageLattice L(b, N, {1.0, 1 + b, 2.0, 3.0, 2 * b + 1, 3 * b + 1, 2 * b + 2, 3 * b + 2}, node_times(N), offset);
    const int g1 = fam(L, 1.0), g2 = fam(L, 1 + b), w2 = fam(L, 2.0), w3 = fam(L, 3.0), s1 = fam(L, 2 * b + 1),
              s2 = fam(L, 3 * b + 1), s3 = fam(L, 2 * b + 2), s4 = fam(L, 3 * b + 2);
    const double gbeta = std::tgamma(b);

    auto tau_at = [&](const SingularGridFunction& phi, int k) { return phi.integral(0.0, g.t(k)); };

    Eigen::MatrixXd U(cols.size(), N + 1);
    for (std::size_t c = 0; c < cols.size(); ++c) {
        const int i = cols[c];
        const double x = offset + i * h;
        if (offset == 0.0 && (i == 0 || i == N)) {
            const SingularGridFunction& phi = i == 0 ? in.phi2 : in.phi3;
            for (int k = 0; k <= N; ++k) U(c, k) = tau_at(phi, k);
            U(c, 0) = 0.0;
            continue;
        }
        U(c, 0) = interp(in.tau1.values, x);

        std::vector<double> t2(N + 1, 0.0), t3(N + 1, 0.0), r2(N + 1, 0.0), r3(N + 1, 0.0);
        for (int m = 1; m <= N; ++m) {
            t2[m] = L.T(w2, i, m - 1);
            t3[m] = L.T(w3, i, m - 1);
            r2[m] = L.T(w2, i + N, m - 1);
            r3[m] = L.T(w3, i + N, m - 1);
        }
        auto b0 = convolve_primitives(t2, t3, in.phi2.regular.values, h);
        auto b1 = convolve_primitives(r2, r3, in.phi3.regular.values, h);
        for (int k = 1; k <= N; ++k) {
            double u = image_pair(L, g1, g2, i, k - 1, in.tau1.values) + b0[k] - b1[k];
            if (in.phi2.coef != 0.0) u += in.phi2.coef * gbeta * L.T(g2, i, k - 1);
            if (in.phi3.coef != 0.0) u -= in.phi3.coef * gbeta * L.T(g2, i + N, k - 1);
            U(c, k) = u;
        }
        for (int r = 0; r < in.source.terms(); ++r) {
            std::vector<double> p1(N + 1, 0.0), p2(N + 1, 0.0);
            for (int m = 1; m <= N; ++m) {
                p1[m] = image_pair(L, s1, s2, i, m - 1, in.source.x[r]);
                p2[m] = image_pair(L, s3, s4, i, m - 1, in.source.x[r]);
            }
            auto d = convolve_primitives(p1, p2, in.source.t[r], h);
            for (int k = 1; k <= N; ++k) U(c, k) -= d[k];
        }
    }
    return U;
}

std::vector<double> parabolic_early_row(const ParabolicInputs& in, double t)
{
    const TimeGrid& g = in.tau1.grid;
    const int N = g.intervals();
    const double b = in.beta;
    if (!(t > 0.0 && t < g.h())) throw DomainError("parabolic_early_row: t must lie in (0, h)");
    ImageLattice L(b, N, {1.0, 1 + b, 2.0}, {t});
    const int g1 = fam(L, 1.0), g2 = fam(L, 1 + b), w2 = fam(L, 2.0);
    const double gbeta = std::tgamma(b);
    std::vector<double> row(N + 1);
    for (int i = 0; i <= N; ++i) {
        if (i == 0 || i == N) {
            row[i] = (i == 0 ? in.phi2 : in.phi3).integral(0.0, t);
            continue;
        }
        double u = image_pair(L, g1, g2, i, 0, in.tau1.values);
        u += in.phi2.regular[0] * L.T(w2, i, 0) - in.phi3.regular[0] * L.T(w2, i + N, 0);
        if (in.phi2.coef != 0.0) u += in.phi2.coef * gbeta * L.T(g2, i, 0);
        if (in.phi3.coef != 0.0) u -= in.phi3.coef * gbeta * L.T(g2, i + N, 0);
        row[i] = u;
    }
    return row;
}

}  // namespace fracmix
