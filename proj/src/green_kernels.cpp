#include "fracmix/green_kernels.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>

#include "fracmix/errors.hpp"

namespace fracmix {

namespace {

constexpr double pi = std::numbers::pi;

// number of image pairs needed at time s; terms |n| > N have arguments beyond the decay threshold
int image_count(double beta, double s, const GreenSeriesConfig& cfg)
{
    double zd = wright_decay_threshold(beta, cfg.tail_tolerance);
    int n = int(std::ceil(0.5 * (zd * std::pow(s, beta) + 2.0)));
    return std::clamp(n, 1, std::max(1, cfg.n_images));
}

double psi_abs(double g, double beta, double y, double s) { return psi_kernel(g, beta, std::fabs(y), s); }

double sgn(double y) { return y < 0.0 ? -1.0 : 1.0; }

void check_lambda(double lambda)
{
    if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("green kernel: lambda outside (0,1)");
}

}  // namespace

double wright_decay_threshold(double beta, double tol)
{
    if (!(beta > 0.0 && beta < 1.0)) throw DomainError("decay threshold: beta outside (0,1)");
    return std::pow(std::log(1.0 / tol) / (1.0 - beta), 1.0 - beta) / std::pow(beta, beta);
}

double green_g(double x, double t, double xi, double eta, double lambda, const GreenSeriesConfig& cfg)
{
    check_lambda(lambda);
    if (!(t > eta)) throw DomainError("green_g: t must exceed eta");
    const double b = lambda / 2, s = t - eta;
    const int N = image_count(b, s, cfg);
    double acc = 0.0;
    for (int n = -N; n <= N; ++n)
        acc += psi_abs(b, b, x - xi + 2 * n, s) - psi_abs(b, b, x + xi + 2 * n, s);
    return 0.5 * acc;
}

double green_gx(double x, double t, double xi, double eta, double lambda, const GreenSeriesConfig& cfg)
{
    check_lambda(lambda);
    if (!(t > eta)) throw DomainError("green_gx: t must exceed eta");
    const double b = lambda / 2, s = t - eta;
    const int N = image_count(b, s, cfg);
    double acc = 0.0;
    for (int n = -N; n <= N; ++n) {
        double y1 = x - xi + 2 * n, y2 = x + xi + 2 * n;
        acc += -sgn(y1) * psi_abs(0.0, b, y1, s) + sgn(y2) * psi_abs(0.0, b, y2, s);
    }
    return 0.5 * acc;
}

double green_gbar_closed(double x, double xi, double t, double lambda, const GreenSeriesConfig& cfg)
{
    check_lambda(lambda);
    if (!(t > 0.0)) throw DomainError("green_gbar: t must be positive");
    const double b = lambda / 2;
    const int N = image_count(b, t, cfg);
    double acc = 0.0;
    for (int n = -N; n <= N; ++n)
        acc += psi_abs(1 - b, b, x - xi + 2 * n, t) - psi_abs(1 - b, b, x + xi + 2 * n, t);
    return 0.5 * acc;
}

double green_gbar(double x, double xi, double t, double lambda, const GreenSeriesConfig& cfg)
{
    check_lambda(lambda);
    if (!(t > 0.0)) throw DomainError("green_gbar: t must be positive");
    boost::math::quadrature::tanh_sinh<double> ts;
    auto f = [&](double t1, double tc) {
        // tc = t - t1, accurate near the upper end
        double s = t1 > 0.5 * t ? tc : t - t1;
        if (!(s > 0.0) || !(t1 > 0.0)) return 0.0;
        return std::pow(t1, -lambda) * green_g(x, s, xi, 0.0, lambda, cfg);
    };
    double v = ts.integrate(f, 0.0, t, 1e-11);
    return v / std::tgamma(1.0 - lambda);
}

double green_gbar_x(double x, double xi, double t, double lambda, const GreenSeriesConfig& cfg)
{
    check_lambda(lambda);
    if (!(t > 0.0)) throw DomainError("green_gbar_x: t must be positive");
    const double b = lambda / 2;
    const int N = image_count(b, t, cfg);
    double acc = 0.0;
    for (int n = -N; n <= N; ++n) {
        double y1 = x - xi + 2 * n, y2 = x + xi + 2 * n;
        acc += -sgn(y1) * psi_abs(1 - 2 * b, b, y1, t) + sgn(y2) * psi_abs(1 - 2 * b, b, y2, t);
    }
    return 0.5 * acc;
}

double kernel_k1(double t, double eta, double beta, const GreenSeriesConfig& cfg)
{
    if (!(t > eta)) throw DomainError("kernel_k1: t must exceed eta");
    const double s = t - eta;
    const int N = image_count(beta, s, cfg);
    double acc = psi_kernel(1 - beta, beta, 0.0, s);
    for (int n = 1; n <= N; ++n) acc += 2.0 * psi_kernel(1 - beta, beta, 2.0 * n, s);
    return acc;
}

double kernel_k2(double t, double eta, double beta, const GreenSeriesConfig& cfg)
{
    if (!(t > eta)) throw DomainError("kernel_k2: t must exceed eta");
    const double s = t - eta;
    const int N = image_count(beta, s, cfg);
    double acc = 0.0;
    for (int n = 0; n <= N; ++n) acc += 2.0 * psi_kernel(1 - beta, beta, 2.0 * n + 1.0, s);
    return acc;
}

double kernel_k1_bar(double t, double eta, double beta, const GreenSeriesConfig& cfg)
{
    if (!(t > eta)) throw DomainError("kernel_k1_bar: t must exceed eta");
    const double s = t - eta;
    const int N = image_count(beta, s, cfg);
    double acc = 0.0;
    for (int n = 1; n <= N; ++n) acc += 2.0 * psi_kernel(1 - beta, beta, 2.0 * n, s);
    return acc;
}

ImageLattice::ImageLattice(double beta, int intervals, std::vector<double> families, std::vector<double> times,
                           double offset, int nodes)
    : beta_(beta), offset_(offset), n_(intervals), families_(std::move(families)), times_(std::move(times))
{
    if (!(beta > 0.0 && beta < 1.0)) throw DomainError("ImageLattice: beta outside (0,1)");
    if (n_ < 1) throw DomainError("ImageLattice: need at least one interval");
    const double h = 1.0 / n_;
    if (!(offset >= 0.0 && offset < h)) throw DomainError("ImageLattice: offset outside [0, h)");
    for (double s : times_)
        if (!(s > 0.0)) throw DomainError("ImageLattice: times must be positive");

    using cd = std::complex<double>;
    const int P = 2 * n_, F = int(families_.size()), M = int(times_.size());
    u_.assign(std::size_t(F) * M * P, 0.0);
    t_.assign(u_.size(), 0.0);

    std::vector<cd> sig, dsig;
    for (int k = nodes / 2; k < nodes; ++k) {
        double th = -pi + (k + 0.5) * 2.0 * pi / nodes;
        double c = 0.6407 * th;
        sig.emplace_back(-0.6122 + 0.5017 * th / std::tan(c), 0.2645 * th);
        dsig.emplace_back(0.5017 * (1.0 / std::tan(c) - c / (std::sin(c) * std::sin(c))), 0.2645);
    }

    std::vector<cd> pw(P + 1), S(P), Tq(P), base(F);
    std::vector<double> accU(std::size_t(F) * P), accT(std::size_t(F) * P);
    for (int m = 0; m < M; ++m) {
        const double s = times_[m], scale = nodes / s;
        std::fill(accU.begin(), accU.end(), 0.0);
        std::fill(accT.begin(), accT.end(), 0.0);
        for (std::size_t k = 0; k < sig.size(); ++k) {
            cd z = scale * sig[k];
            cd lz = std::log(z);
            cd w = std::exp(beta_ * lz);
            cd r = std::exp(-h * w);
            pw[0] = 1.0;
            for (int j = 1; j <= P; ++j) pw[j] = pw[j - 1] * r;
            cd inv = 1.0 / (1.0 - pw[P]);
            cd lo = std::exp(-offset_ * w) * inv, hi = std::exp(offset_ * w) * inv;
            for (int j = 0; j < P; ++j) {
                cd a = lo * pw[j], b = hi * pw[P - j];
                S[j] = a + b;
                Tq[j] = a - b;
            }
            for (int f = 0; f < F; ++f) base[f] = std::exp(double(nodes) * sig[k] - families_[f] * lz) * dsig[k];
            for (int f = 0; f < F; ++f) {
                double* au = &accU[std::size_t(f) * P];
                double* at = &accT[std::size_t(f) * P];
                const double br = base[f].real(), bi = base[f].imag();
                for (int j = 0; j < P; ++j) {
                    au[j] += br * S[j].imag() + bi * S[j].real();
                    at[j] += br * Tq[j].imag() + bi * Tq[j].real();
                }
            }
        }
        for (int f = 0; f < F; ++f)
            for (int j = 0; j < P; ++j) {
                u_[index(f, j, m)] = 2.0 * accU[std::size_t(f) * P + j] / s;
                t_[index(f, j, m)] = 2.0 * accT[std::size_t(f) * P + j] / s;
            }
    }
}

double ImageLattice::T(int fam, int q, int m, int zero_sign) const
{
    double v = t_[index(fam, q, m)];
    if (zero_sign < 0 && offset_ == 0.0 && wrap(q) == 0) {
        double g = families_[fam];
        v -= 2.0 * std::pow(times_[m], g - 1.0) * reciprocal_gamma(g);
    }
    return v;
}

}  // namespace fracmix
