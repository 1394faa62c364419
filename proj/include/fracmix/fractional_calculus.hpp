#pragma once

#include <vector>

namespace fracmix {

struct TimeGrid {
    int n_points = 129;
    double t_max = 1.0;

    TimeGrid() = default;
    TimeGrid(int n, double tmax = 1.0);
    double h() const { return t_max / (n_points - 1); }
    double t(int k) const { return k * h(); }
    int intervals() const { return n_points - 1; }
};

struct GridFunction {
    TimeGrid grid;
    std::vector<double> values;

    GridFunction() = default;
    explicit GridFunction(const TimeGrid& g, double fill = 0.0);
    GridFunction(const TimeGrid& g, std::vector<double> v);
    template <class F>
    static GridFunction sample(const TimeGrid& g, F f)
    {
        GridFunction out(g);
        for (int k = 0; k < g.n_points; ++k) out.values[k] = f(g.t(k));
        return out;
    }

    double& operator[](int k) { return values[k]; }
    double operator[](int k) const { return values[k]; }
    int size() const { return grid.n_points; }
    // piecewise-linear interpolation
    double at(double t) const;
    double max_abs() const;
};

double caputo_l1(const GridFunction& g, double lambda, int k);
double caputo_power_oracle(double mu, double lambda, double t);

}  // namespace fracmix
