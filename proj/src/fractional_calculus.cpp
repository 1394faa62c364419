#include "fracmix/fractional_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fracmix/errors.hpp"
#include "fracmix/special_functions.hpp"

namespace fracmix {

TimeGrid::TimeGrid(int n, double tmax) : n_points(n), t_max(tmax)
{
    if (n < 3) throw DomainError("TimeGrid: at least 3 points required");
    if (!(tmax > 0.0)) throw DomainError("TimeGrid: t_max must be positive");
}

GridFunction::GridFunction(const TimeGrid& g, double fill) : grid(g), values(g.n_points, fill) {}

GridFunction::GridFunction(const TimeGrid& g, std::vector<double> v) : grid(g), values(std::move(v))
{
    if ((int)values.size() != g.n_points) throw DomainError("GridFunction: length mismatch");
}

double GridFunction::at(double t) const
{
    const double h = grid.h();
    double u = std::clamp(t / h, 0.0, double(grid.intervals()));
    int j = std::min(int(u), grid.intervals() - 1);
    double w = u - j;
    return (1.0 - w) * values[j] + w * values[j + 1];
}

double GridFunction::max_abs() const
{
    double m = 0.0;
    for (double v : values) m = std::max(m, std::fabs(v));
    return m;
}

double caputo_l1(const GridFunction& g, double lambda, int k)
{
    if (k < 0 || k >= g.size()) throw std::out_of_range("caputo_l1: index outside the grid");
    if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("caputo_l1: lambda must lie in (0,1)");
    if (k == 0) return 0.0;
    const double h = g.grid.h();
    const double e = 1.0 - lambda;
    double acc = 0.0;
    for (int j = 0; j < k; ++j) {
        double dg = g[j + 1] - g[j];
        if (dg == 0.0) continue;
        acc += dg / h * (std::pow((k - j) * h, e) - std::pow((k - j - 1) * h, e));
    }
    return acc * reciprocal_gamma(2.0 - lambda);
}

double caputo_power_oracle(double mu, double lambda, double t)
{
    if (!(mu > 0.0)) throw DomainError("caputo_power_oracle: mu must be positive");
    if (t == 0.0) return 0.0;
    return std::tgamma(mu + 1.0) * reciprocal_gamma(mu + 1.0 - lambda) * std::pow(t, mu - lambda);
}

}  // namespace fracmix
