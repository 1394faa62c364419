#pragma once

namespace fracmix {

// e^{mu,delta}_{alpha,beta}(z) = sum_n z^n / (Gamma(alpha n + mu) Gamma(delta - beta n))
struct WrightParams {
    double alpha = 1.0;
    double beta = 0.5;
    double mu = 1.0;
    double delta = 0.5;
};

struct SeriesControl {
    double term_tolerance = 1e-16;
    int max_terms = 500;
    double z_magnitude_cap = 40.0;
};

enum class ShiftIdentity { first, second };

double reciprocal_gamma(double x);

double wright_eval(const WrightParams& p, double z, const SeriesControl& ctrl = {});

// Differentiation formula; singular at z = 0.
double wright_derivative(const WrightParams& p, double z, const SeriesControl& ctrl = {});
// Termwise derivative of the power series, valid at z = 0 as well.
double wright_derivative_series(const WrightParams& p, double z, const SeriesControl& ctrl = {});

double recurrence_residual_step(const WrightParams& p, double z, const SeriesControl& ctrl = {});
double recurrence_residual_shift(const WrightParams& p, double z, int k, ShiftIdentity which,
                             const SeriesControl& ctrl = {});

// Psi_g(y, s) = s^{g-1} e^{1,g}_{1,b}(-y / s^b) for y >= 0, s > 0, 0 < b < 1,
// the inverse Laplace transform (in s) of p^{-g} exp(-y p^b).
double psi_kernel(double g, double b, double y, double s);

// Same quantity by Talbot inversion on a fixed cotangent contour.
double psi_talbot(double g, double b, double y, double s, int nodes = 24);

}  // namespace fracmix
