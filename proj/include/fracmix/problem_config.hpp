#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "fracmix/wave_domain.hpp"

namespace fracmix {

// a * x^k summed over coefficients (poly), or c0 * exp(c1 * x) (exp)
struct CatalogExpr {
    enum class Family { poly, exp };
    Family family = Family::poly;
    std::vector<double> coeffs;

    static CatalogExpr constant(double c) { return {Family::poly, {c}}; }
    double operator()(double x) const;
    double d1(double x) const;
    double d2(double x) const;
    bool is_zero() const;
};

struct KernelPair {
    CatalogExpr p1 = CatalogExpr::constant(1.0);
    CatalogExpr p2{CatalogExpr::Family::poly, {1.0, -1.0}};
};

struct SourceTerm {
    CatalogExpr x;
    CatalogExpr t;
};

enum class Branch { general, abel };

struct ProblemConfig {
    double lambda = 0.5;
    std::array<double, 3> sigma{0.0, 0.0, 0.0};
    std::array<double, 3> alpha{1.0, 1.0, 1.0};
    std::array<double, 3> beta_coef{0.0, 0.0, 0.0};
    std::array<KernelPair, 3> kernels;
    std::vector<SourceTerm> source;
    CurveSpec curves;
    int n_points = 129;

    // throws ConfigError naming the violated invariant
    void validate() const;
    Branch branch() const;
    double beta() const { return lambda / 2; }
    bool homogeneous() const;
    double f(double x, double t) const;
    Source source_function() const;
};

ProblemConfig parse_config(const std::string& json_text);
ProblemConfig load_config(const std::string& path);
CatalogExpr parse_catalog(const std::string& json_text);

struct ConditionVerdict {
    std::string name;
    bool pass = true;
    std::optional<double> first_violation;  // sample point, when the condition is pointwise
    std::string detail;
};

struct UniquenessReport {
    std::vector<ConditionVerdict> conditions;
    bool pass() const;
    std::vector<std::string> failed() const;
};

// sign hypotheses of the uniqueness theorem, sampled on 101 points of [0, 1]
UniquenessReport check_uniqueness_conditions(const ProblemConfig& cfg);

}  // namespace fracmix
