#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "fracmix/integral_equations.hpp"
#include "fracmix/parabolic_field.hpp"
#include "fracmix/problem_config.hpp"
#include "fracmix/wave_domain.hpp"

namespace fracmix {

// two-point Green's function of y'' - c y' on (0, 1) with y(0) = y(1) = 0
double two_point_green(double c, double x, double xi);
// its x-derivative; side = -1 / +1 picks the limit from xi < x / xi > x at xi = x
double two_point_green_x(double c, double x, double xi, int side = 0);

struct Tau1Result {
    GridFunction tau1;
    GridFunction tau1_prime;  // from the Green's function derivative, one-sided limits at the ends
    GridFunction A1;
};
Tau1Result solve_tau1(const ProblemConfig& cfg);

struct Tau23Result {
    SingularGridFunction phi2;  // tau_2'
    SingularGridFunction phi3;  // tau_3'
    double chain_vs_block = 0.0;  // max difference between the resolvent chain and the coupled solve
    double defect = 0.0;          // residual of the coupled boundary equations at the nodes
};

struct Tau23Options {
    // keep only the Abel layer of the left-boundary kernel (test hook)
    bool isolate_abel_layer = false;
};

Tau23Result solve_tau23_general(const ProblemConfig& cfg, const Tau1Result& tau1);
Tau23Result solve_tau23_abel(const ProblemConfig& cfg, const Tau1Result& tau1, const Tau23Options& opt = {});
Tau23Result solve_tau23(const ProblemConfig& cfg, const Tau1Result& tau1);

struct TraceSet {
    TimeGrid grid;
    GridFunction tau1, tau1_prime;
    SingularGridFunction tau2_prime, tau3_prime;
    GridFunction A1, A2, A3;
    SingularGridFunction nu1_plus, nu1_minus, nu2_plus, nu2_minus, nu3_plus, nu3_minus;
    double tau2(double t) const { return tau2_prime.integral(0.0, t); }
    double tau3(double t) const { return tau3_prime.integral(0.0, t); }
};

TraceSet recover_nu(const ProblemConfig& cfg, const Tau1Result& tau1, const Tau23Result& tau23);

struct FieldSample {
    int domain = 0;
    double x = 0.0;
    double t = 0.0;
    double u = 0.0;
};

struct SolutionField {
    TimeGrid grid;
    Eigen::MatrixXd parabolic;  // u(x_i, t_k), rows i, columns k
    std::vector<FieldSample> hyperbolic;
    std::array<LineData, 3> lines;
    std::vector<FieldSample> samples() const;
    double max_abs() const;
};

SeparableSource sample_source(const ProblemConfig& cfg, const TimeGrid& g);
ParabolicInputs parabolic_inputs(const ProblemConfig& cfg, const TraceSet& tr);
std::array<LineData, 3> line_data(const TraceSet& tr);

SolutionField assemble_solution(const ProblemConfig& cfg, const TraceSet& tr);

// named interface residuals over the interior window 0.05 <= s <= 0.95
struct ResidualReport {
    std::vector<std::pair<std::string, double>> entries;
    double max() const;
    double get(const std::string& name) const;
};
ResidualReport interface_residuals(const ProblemConfig& cfg, const TraceSet& tr, const SolutionField& field);

struct OracleReport {
    double max_discrepancy = 0.0;
    double l2_discrepancy = 0.0;
    int time_steps = 0;
};
// implicit L1 finite differences on a graded time mesh with the traces as Dirichlet data
Eigen::MatrixXd fd_field(const ProblemConfig& cfg, const TraceSet& tr);
OracleReport fd_oracle(const ProblemConfig& cfg, const TraceSet& tr, const SolutionField& field);

}  // namespace fracmix
