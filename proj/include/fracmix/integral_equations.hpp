#pragma once

#include <Eigen/Dense>
#include <functional>

#include "fracmix/fractional_calculus.hpp"

namespace fracmix {

// (K tau)(t_i) = sum_j entries(i, j) tau_j, quadrature weights already folded in
struct DiscretizedKernel {
    TimeGrid grid;
    Eigen::MatrixXd entries;
    double singularity_exponent = 0.0;
};

struct Resolvent {
    TimeGrid grid;
    Eigen::MatrixXd entries;
};

// minus: tau - K tau = F;  plus: tau + K tau = F
enum class KernelSign { plus, minus };

enum class WeightKind { volterra_lower, fredholm };

// c * t^power + piecewise-linear regular part
struct SingularGridFunction {
    GridFunction regular;
    double coef = 0.0;
    double power = 0.0;

    SingularGridFunction() = default;
    explicit SingularGridFunction(GridFunction g, double c = 0.0, double p = 0.0)
        : regular(std::move(g)), coef(c), power(p) {}
    double at(double t) const;
    // integral over [a, b] of the represented function
    double integral(double a, double b) const;
};

DiscretizedKernel discretize_fredholm(const TimeGrid& g, const std::function<double(double, double)>& k);

GridFunction nystrom_solve(const DiscretizedKernel& K, const GridFunction& F, KernelSign sign);
Resolvent resolvent_build(const DiscretizedKernel& K, KernelSign sign);
GridFunction apply_resolvent(const Resolvent& R, const GridFunction& F);

// Lower-triangular product-integration matrix for int_0^{t_k} phi(eta) K(t_k - eta) d eta,
// exact for piecewise-linear phi; mom0(m) = int_{s_{m-1}}^{s_m} K ds and
// mom1(m) = int_{s_{m-1}}^{s_m} (s - s_{m-1}) K ds, m = 1..n-1.
Eigen::MatrixXd volterra_matrix(const TimeGrid& g, const std::function<double(int)>& mom0,
                                const std::function<double(int)>& mom1);

// weights against |t_k - z|^{-exponent}
Eigen::MatrixXd singular_weights(const TimeGrid& g, double exponent, WeightKind kind);

// maps nodal Fbar to [c; psi_0..psi_{n-1}] with tau'(t) = c t^{beta-1} + psi(t)
Eigen::MatrixXd abel_matrix(const TimeGrid& g, double beta);
// same map from collocating the exact forward operator at the nodes; second order, and
// abel_forward of the result reproduces Fbar at the nodes
Eigen::MatrixXd abel_collocation_matrix(const TimeGrid& g, double beta);
SingularGridFunction abel_invert(const GridFunction& Fbar, double beta);
// Fbar(t_k) = int_0^{t_k} tau'(eta) (t_k - eta)^{-beta} d eta
GridFunction abel_forward(const SingularGridFunction& tau_prime, double beta);

}  // namespace fracmix
