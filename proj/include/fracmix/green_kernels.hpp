#pragma once

#include <complex>
#include <vector>

#include "fracmix/special_functions.hpp"

namespace fracmix {

struct GreenSeriesConfig {
    int n_images = 25;
    double tail_tolerance = 1e-14;
    SeriesControl series_ctrl{};
};

// argument beyond which |e^{1,g}_{1,beta}(-z)| is below tol (super-exponential decay)
double wright_decay_threshold(double beta, double tol);

// Green's function of the first boundary problem, beta = lambda / 2
double green_g(double x, double t, double xi, double eta, double lambda, const GreenSeriesConfig& cfg = {});
double green_gx(double x, double t, double xi, double eta, double lambda, const GreenSeriesConfig& cfg = {});

// (1/Gamma(1-lambda)) int_0^t t1^{-lambda} G(x, t, xi, t1) dt1 by quadrature
double green_gbar(double x, double xi, double t, double lambda, const GreenSeriesConfig& cfg = {});
// same kernel in closed form, (1/2) sum [Psi_{1-beta}(|x-xi+2n|, t) - Psi_{1-beta}(|x+xi+2n|, t)]
double green_gbar_closed(double x, double xi, double t, double lambda, const GreenSeriesConfig& cfg = {});
double green_gbar_x(double x, double xi, double t, double lambda, const GreenSeriesConfig& cfg = {});

double kernel_k1(double t, double eta, double beta, const GreenSeriesConfig& cfg = {});
double kernel_k2(double t, double eta, double beta, const GreenSeriesConfig& cfg = {});
double kernel_k1_bar(double t, double eta, double beta, const GreenSeriesConfig& cfg = {});

// Image-summed Psi tables on the lattice y_q = offset + q h, h = 1 / intervals,
// for several families g and times s_m > 0:
//   U(g, q, m) = sum_n Psi_g(|y_{q+2nN}|, s_m)
//   T(g, q, m) = sum_n sgn(y_{q+2nN}) Psi_g(|y_{q+2nN}|, s_m),  sgn(0) := zero_sign
// The image sums are geometric in the Laplace variable, so every node on the
// Talbot contour is summed in closed form and nothing is truncated.
class ImageLattice {
public:
    ImageLattice(double beta, int intervals, std::vector<double> families, std::vector<double> times,
                 double offset = 0.0, int nodes = 32);

    double U(int fam, int q, int m) const { return u_[index(fam, q, m)]; }
    double T(int fam, int q, int m, int zero_sign = 1) const;
    int family_count() const { return int(families_.size()); }
    double family(int f) const { return families_[f]; }
    int time_count() const { return int(times_.size()); }
    double time(int m) const { return times_[m]; }
    double step() const { return 1.0 / n_; }
    double offset() const { return offset_; }

private:
    int wrap(int q) const
    {
        int p = 2 * n_;
        return ((q % p) + p) % p;
    }
    std::size_t index(int fam, int q, int m) const
    {
        return (std::size_t(fam) * times_.size() + m) * std::size_t(2 * n_) + wrap(q);
    }

    double beta_, offset_;
    int n_;
    std::vector<double> families_, times_;
    std::vector<double> u_, t_;
};

}  // namespace fracmix
