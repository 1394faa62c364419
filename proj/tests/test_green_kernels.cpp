#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fracmix/errors.hpp"
#include "fracmix/green_kernels.hpp"

using namespace fracmix;

namespace {

constexpr double pi = std::numbers::pi;

double heat_images(double x, double xi, double s)
{
    double acc = 0.0;
    for (int n = -30; n <= 30; ++n) {
        double a = x - xi + 2 * n, b = x + xi + 2 * n;
        acc += std::exp(-a * a / (4 * s)) - std::exp(-b * b / (4 * s));
    }
    return acc / std::sqrt(4 * pi * s);
}

double heat_images_x(double x, double xi, double s)
{
    double acc = 0.0;
    for (int n = -30; n <= 30; ++n) {
        double a = x - xi + 2 * n, b = x + xi + 2 * n;
        acc += -a / (2 * s) * std::exp(-a * a / (4 * s)) + b / (2 * s) * std::exp(-b * b / (4 * s));
    }
    return acc / std::sqrt(4 * pi * s);
}

// brute-force image sums with a fixed, generous number of images
double brute_u(double g, double b, double y, double s)
{
    double acc = 0.0;
    for (int n = -40; n <= 40; ++n) acc += psi_kernel(g, b, std::fabs(y + 2 * n), s);
    return acc;
}

double brute_t(double g, double b, double y, double s)
{
    double acc = 0.0;
    for (int n = -40; n <= 40; ++n) {
        double v = y + 2 * n;
        acc += (v < 0 ? -1.0 : 1.0) * psi_kernel(g, b, std::fabs(v), s);
    }
    return acc;
}

}  // namespace

TEST_CASE("Dirichlet boundary vanishing and symmetry")
{
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u01(0.0, 1.0), ul(0.05, 0.95), us(0.01, 1.0);
    double worst_b = 0.0, worst_s = 0.0;
    for (int i = 0; i < 50; ++i) {
        double xi = u01(rng), s = us(rng), lam = ul(rng), x = u01(rng);
        worst_b = std::max(worst_b, std::fabs(green_g(0.0, s, xi, 0.0, lam)));
        worst_b = std::max(worst_b, std::fabs(green_g(1.0, s, xi, 0.0, lam)));
        worst_s = std::max(worst_s, std::fabs(green_g(x, s, xi, 0.0, lam) - green_g(xi, s, x, 0.0, lam)));
    }
    CHECK(worst_b < 1e-12);
    CHECK(worst_s < 1e-12);
    CHECK(std::fabs(green_g(0.2, 0.5, 0.7, 0.1, 0.6) - green_g(0.7, 0.5, 0.2, 0.1, 0.6)) < 1e-12);
    CHECK_THROWS_AS(green_g(0.2, 0.1, 0.3, 0.1, 0.5), DomainError);
}

TEST_CASE("near-classical limit")
{
    const double lam = 1 - 1e-9;
    CHECK(std::fabs(green_g(0.3, 0.2, 0.6, 0.0, lam) - heat_images(0.3, 0.6, 0.2)) < 1e-6);
    double worst = 0.0;
    for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b)
            for (int c = 0; c < 5; ++c) {
                double x = 0.1 + 0.2 * a, xi = 0.05 + 0.2 * b, s = 0.02 + 0.2 * c;
                worst = std::max(worst, std::fabs(green_g(x, s, xi, 0.0, lam) - heat_images(x, xi, s)));
            }
    CHECK(worst < 1e-6);
    CHECK(std::fabs(green_gx(0.4, 0.3, 0.7, 0.0, lam) - heat_images_x(0.4, 0.7, 0.3)) < 1e-5);
}

TEST_CASE("x-derivatives against central differences")
{
    const double h = 1e-5;
    auto g = [](double x) { return green_g(x, 0.5, 0.6, 0.1, 0.5); };
    CHECK(std::fabs(green_gx(0.4, 0.5, 0.6, 0.1, 0.5) - (g(0.4 + h) - g(0.4 - h)) / (2 * h)) < 1e-6);
    auto gb = [](double x) { return green_gbar_closed(x, 0.35, 0.4, 0.7); };
    CHECK(std::fabs(green_gbar_x(0.6, 0.35, 0.4, 0.7) - (gb(0.6 + h) - gb(0.6 - h)) / (2 * h)) < 1e-6);

    // at x = xi the n = 0 pair cancels and only the smooth image tail is left
    GreenSeriesConfig wide;
    wide.n_images = 50;
    wide.tail_tolerance = 1e-20;
    double v = green_gx(0.3, 0.8, 0.3, 0.0, 0.5);
    CHECK(std::isfinite(v));
    CHECK(std::fabs(v - green_gx(0.3, 0.8, 0.3, 0.0, 0.5, wide)) < 1e-12);
}

TEST_CASE("time-integrated kernel")
{
    for (double lam : {0.4, 0.7}) {
        for (double xi : {0.25, 0.6}) {
            double q = green_gbar(0.45, xi, 0.3, lam), c = green_gbar_closed(0.45, xi, 0.3, lam);
            CAPTURE(lam);
            CAPTURE(xi);
            CHECK(std::fabs(q - c) < 1e-8 * std::max(1.0, std::fabs(c)));
        }
    }
    CHECK(std::fabs(green_gbar_closed(0.0, 0.4, 0.3, 0.5)) < 1e-13);
    CHECK(std::fabs(green_gbar_closed(1.0, 0.4, 0.3, 0.5)) < 1e-13);
    CHECK(std::fabs(green_gbar_closed(0.5, 0.25, 0.3, 0.5) - green_gbar_closed(0.5, 0.75, 0.3, 0.5)) < 1e-13);
    CHECK_THROWS_AS(green_gbar(0.5, 0.5, 0.0, 0.5), DomainError);

    // unit initial data on an unbounded time scale: integral of the kernel plus the two
    // boundary layers equals one exactly
    for (double lam : {0.3, 0.8}) {
        const double b = lam / 2, t = 0.2, x = 0.3;
        int n = 4000;
        double acc = 0.0;
        for (int j = 0; j <= n; ++j) {
            double w = (j == 0 || j == n) ? 0.5 : 1.0;
            acc += w * green_gbar_closed(x, double(j) / n, t, lam) / n;
        }
        double w0 = brute_t(1.0, b, x, t), w1 = -brute_t(1.0, b, x + 1.0, t);
        CHECK(std::fabs(acc + w0 + w1 - 1.0) < 1e-6);
    }
    double acc = 0.0;
    for (int j = 0; j <= 2000; ++j) {
        double w = (j == 0 || j == 2000) ? 0.5 : 1.0;
        acc += w * green_gbar_closed(0.5, j / 2000.0, 0.01, 0.99) / 2000.0;
    }
    CHECK(std::fabs(acc - 1.0) < 5e-3);
}

TEST_CASE("boundary kernels")
{
    const double b = 0.25;
    CHECK(std::pow(0.25, -0.25) * reciprocal_gamma(0.75) == doctest::Approx(1.15407).epsilon(1e-5));
    CHECK(std::fabs(kernel_k1(0.25, 0.0, b) - kernel_k1_bar(0.25, 0.0, b) - std::pow(0.25, -b) / std::tgamma(1 - b)) < 1e-14);
    // extended-precision series values
    CHECK(std::fabs(kernel_k2(1e-4, 0.0, b) - 0.000254164262331315243) < 1e-14);
    CHECK(std::fabs(kernel_k1_bar(0.5, 0.0, b) - 0.2938703909028575214) < 1e-12);
    CHECK(std::fabs(kernel_k2(0.3 + 1e-7, 0.3, b)) < 1e-8);
    CHECK(std::fabs(kernel_k1_bar(0.3 + 1e-4, 0.3, 0.3)) < 1e-8);
    CHECK(std::fabs(kernel_k1_bar(0.8, 0.3, 0.3) - (kernel_k1(0.8, 0.3, 0.3) - std::pow(0.5, -0.3) / std::tgamma(0.7))) < 1e-14);

    GreenSeriesConfig big;
    big.n_images = 100;
    big.tail_tolerance = 1e-30;
    CHECK(std::fabs(kernel_k1(0.5, 0.0, b, big) - kernel_k1(0.5, 0.0, b)) < 1e-13);
    CHECK(std::fabs(kernel_k1_bar(0.5, 0.0, 0.3, big) - kernel_k1_bar(0.5, 0.0, 0.3)) < 1e-13);
    CHECK(std::fabs(kernel_k2(0.5, 0.0, b, big) - kernel_k2(0.5, 0.0, b)) < 1e-13);

    // singularity strength: K1 (t - eta)^beta -> 1 / Gamma(1 - beta)
    for (double s : {1e-5, 1e-7, 1e-9}) CHECK(std::fabs(kernel_k1(s, 0.0, b) * std::pow(s, b) * std::tgamma(1 - b) - 1.0) < 1e-10);
    CHECK_THROWS_AS(kernel_k1(0.2, 0.3, b), DomainError);
}

TEST_CASE("image lattice agrees with pointwise sums")
{
    const double b = 0.3;
    const int N = 16;
    const double h = 1.0 / N;
    std::vector<double> fam{1 - b, 1.0, 2 * b + 1, 3 * b + 2, 2.0};
    std::vector<double> times{0.004, 0.3, 1.0};
    for (double off : {0.0, 0.37 * h}) {
        ImageLattice L(b, N, fam, times, off);
        double worst = 0.0;
        for (int f = 0; f < int(fam.size()); ++f)
            for (int m = 0; m < int(times.size()); ++m)
                for (int q = -N; q <= 2 * N; q += 3) {
                    double y = off + q * h;
                    double scale = std::max(1.0, std::pow(times[m], fam[f] - 1));
                    worst = std::max(worst, std::fabs(L.U(f, q, m) - brute_u(fam[f], b, y, times[m])) / scale);
                    worst = std::max(worst, std::fabs(L.T(f, q, m) - brute_t(fam[f], b, y, times[m])) / scale);
                }
        CAPTURE(off);
        CHECK(worst < 1e-11);
    }
    ImageLattice L(b, N, fam, times);
    double zero = std::pow(0.3, 1.0 - b - 1.0) * reciprocal_gamma(1 - b);
    CHECK(std::fabs(L.T(0, 0, 1, +1) - L.T(0, 0, 1, -1) - 2 * zero) < 1e-14);
    CHECK(L.T(0, 2 * N, 1, -1) == L.T(0, 0, 1, -1));
}
