#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fracmix/integral_equations.hpp"

namespace fracmix {

// f(x, t) = sum_r X_r(x) T_r(t), both factors sampled on the uniform nodes
struct SeparableSource {
    std::vector<std::vector<double>> x;
    std::vector<std::vector<double>> t;
    int terms() const { return int(x.size()); }
};

// int_0^{t_k} K(t_k - eta) phi(eta) d eta for piecewise-linear phi, with K given through its
// first and second primitives in s sampled at s_m = m h (entry 0 is the value at s = 0)
std::vector<double> convolve_primitives(const std::vector<double>& prim1, const std::vector<double>& prim2,
                                        const std::vector<double>& phi, double h);

// u_x(0, t) and u_x(1, t) contributed by the initial trace and the source, on the nodes;
// entry 0 carries the one-sided limits supplied by the caller
struct LateralFlux {
    GridFunction left;
    GridFunction right;
};
LateralFlux lateral_flux(double beta, const GridFunction& tau1, double dtau_left, double dtau_right,
                         const SeparableSource& f);

// product-integration matrices for the boundary kernels K1, K2 and K1 without its n = 0 term,
// plus their images of t^{beta-1} at the nodes
struct BoundaryVolterra {
    Eigen::MatrixXd k1, k2, k1bar;
    Eigen::VectorXd k1_power, k2_power, k1bar_power;
};
BoundaryVolterra boundary_volterra(double beta, const TimeGrid& g);

struct ParabolicInputs {
    double beta = 0.25;
    GridFunction tau1;
    SingularGridFunction phi2;  // tau_2'
    SingularGridFunction phi3;  // tau_3'
    SeparableSource source;
};

// u(offset + i h, t_k), one row per requested column i and one column per node k
Eigen::MatrixXd parabolic_columns(const ParabolicInputs& in, double offset, const std::vector<int>& cols);

// u(x_i, t) at one early time t << h; drops the O(t) source and O(t^2) boundary-slope terms
std::vector<double> parabolic_early_row(const ParabolicInputs& in, double t);

}  // namespace fracmix
