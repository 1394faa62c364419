#include "fracmix/problem_config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <sstream>

#include "fracmix/errors.hpp"

namespace fracmix {

namespace {

using nlohmann::json;

CatalogExpr catalog_from(const json& j, const std::string& where)
{
    if (!j.is_object() || !j.contains("family") || !j.contains("coeffs"))
        throw ConfigError(where + ": expected {\"family\": ..., \"coeffs\": [...]}");
    CatalogExpr e;
    std::string fam = j.at("family").get<std::string>();
    if (fam == "poly")
        e.family = CatalogExpr::Family::poly;
    else if (fam == "exp")
        e.family = CatalogExpr::Family::exp;
    else
        throw ConfigError(where + ": unknown family '" + fam + "'");
    if (!j.at("coeffs").is_array()) throw ConfigError(where + ": coeffs must be an array");
    for (const auto& c : j.at("coeffs")) {
        if (!c.is_number()) throw ConfigError(where + ": coeffs must be numbers");
        e.coeffs.push_back(c.get<double>());
    }
    if (e.family == CatalogExpr::Family::exp && e.coeffs.size() != 2)
        throw ConfigError(where + ": exp family takes [scale, rate]");
    if (e.coeffs.empty()) throw ConfigError(where + ": empty coefficient list");
    return e;
}

std::array<double, 3> triple(const json& j, const char* key)
{
    if (!j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
    const json& a = j.at(key);
    if (!a.is_array() || a.size() != 3) throw ConfigError(std::string("'") + key + "' must hold three numbers");
    std::array<double, 3> out{};
    for (int i = 0; i < 3; ++i) {
        if (!a[i].is_number()) throw ConfigError(std::string("'") + key + "' must hold three numbers");
        out[i] = a[i].get<double>();
    }
    return out;
}

std::string idx(int i) { return std::to_string(i + 1); }

}  // namespace

double CatalogExpr::operator()(double x) const
{
    if (family == Family::exp) return coeffs[0] * std::exp(coeffs[1] * x);
    double v = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * x + *it;
    return v;
}

double CatalogExpr::d1(double x) const
{
    if (family == Family::exp) return coeffs[0] * coeffs[1] * std::exp(coeffs[1] * x);
    double v = 0.0;
    for (int k = int(coeffs.size()) - 1; k >= 1; --k) v = v * x + k * coeffs[k];
    return v;
}

double CatalogExpr::d2(double x) const
{
    if (family == Family::exp) return coeffs[0] * coeffs[1] * coeffs[1] * std::exp(coeffs[1] * x);
    double v = 0.0;
    for (int k = int(coeffs.size()) - 1; k >= 2; --k) v = v * x + k * (k - 1) * coeffs[k];
    return v;
}

bool CatalogExpr::is_zero() const
{
    if (family == Family::exp) return coeffs[0] == 0.0;
    for (double c : coeffs)
        if (c != 0.0) return false;
    return true;
}

void ProblemConfig::validate() const
{
    if (!(lambda > 0.0 && lambda < 1.0))
        throw ConfigError("lambda must lie in (0,1); the classical heat case lambda = 1 is not supported");
    for (int i = 0; i < 3; ++i) {
        if (std::fabs(std::fabs(sigma[i]) - 1.0) < 1e-14)
            throw ConfigError("|sigma_" + idx(i) + "| = 1: the decoupled degenerate case is not supported");
        if (!std::isfinite(sigma[i]) || !std::isfinite(alpha[i]) || !std::isfinite(beta_coef[i]))
            throw ConfigError("non-finite coefficient in block " + idx(i));
        if (alpha[i] == 0.0 && beta_coef[i] == 0.0)
            throw ConfigError("alpha_" + idx(i) + " and beta_" + idx(i) + " both vanish");
    }
    if ((alpha[1] == 0.0) != (alpha[2] == 0.0))
        throw ConfigError("exactly one of alpha_2, alpha_3 vanishes: mixed branch is not supported");
    curves.validate();
    if (n_points < 9) throw ConfigError("grid.n_points must be at least 9");
}

Branch ProblemConfig::branch() const { return alpha[1] == 0.0 ? Branch::abel : Branch::general; }

bool ProblemConfig::homogeneous() const
{
    for (const auto& s : source)
        if (!s.x.is_zero() && !s.t.is_zero()) return false;
    return true;
}

double ProblemConfig::f(double x, double t) const
{
    double v = 0.0;
    for (const auto& s : source) v += s.x(x) * s.t(t);
    return v;
}

Source ProblemConfig::source_function() const
{
    if (homogeneous()) return nullptr;
    auto terms = source;
    return [terms](double x, double t) {
        double v = 0.0;
        for (const auto& s : terms) v += s.x(x) * s.t(t);
        return v;
    };
}

ProblemConfig parse_config(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    ProblemConfig c;
    try {
        if (!j.contains("lambda") || !j.at("lambda").is_number()) throw ConfigError("missing numeric field 'lambda'");
        c.lambda = j.at("lambda").get<double>();
        c.sigma = triple(j, "sigma");
        c.alpha = triple(j, "alpha");
        c.beta_coef = triple(j, "beta");
        if (j.contains("kernels")) {
            const json& k = j.at("kernels");
            if (!k.is_array() || k.size() != 3) throw ConfigError("'kernels' must hold three {p1, p2} pairs");
            for (int i = 0; i < 3; ++i) {
                if (k[i].contains("p1")) c.kernels[i].p1 = catalog_from(k[i].at("p1"), "kernels[" + std::to_string(i) + "].p1");
                if (k[i].contains("p2")) c.kernels[i].p2 = catalog_from(k[i].at("p2"), "kernels[" + std::to_string(i) + "].p2");
            }
        }
        if (j.contains("source")) {
            const json& s = j.at("source");
            if (!s.contains("terms") || !s.at("terms").is_array()) throw ConfigError("'source' needs a 'terms' array");
            int n = 0;
            for (const auto& t : s.at("terms")) {
                std::string w = "source.terms[" + std::to_string(n++) + "]";
                if (!t.contains("x") || !t.contains("t")) throw ConfigError(w + ": needs 'x' and 't' factors");
                c.source.push_back({catalog_from(t.at("x"), w + ".x"), catalog_from(t.at("t"), w + ".t")});
            }
        }
        if (j.contains("curves")) c.curves.epsilon = triple(j.at("curves"), "epsilon");
        if (j.contains("grid") && j.at("grid").contains("n_points")) {
            const json& n = j.at("grid").at("n_points");
            if (!n.is_number_integer()) throw ConfigError("grid.n_points must be an integer");
            c.n_points = n.get<int>();
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    c.validate();
    return c;
}

ProblemConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

CatalogExpr parse_catalog(const std::string& text)
{
    try {
        return catalog_from(json::parse(text), "expression");
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed expression: ") + e.what());
    }
}

bool UniquenessReport::pass() const
{
    for (const auto& c : conditions)
        if (!c.pass) return false;
    return true;
}

std::vector<std::string> UniquenessReport::failed() const
{
    std::vector<std::string> out;
    for (const auto& c : conditions)
        if (!c.pass) out.push_back(c.name);
    return out;
}

UniquenessReport check_uniqueness_conditions(const ProblemConfig& cfg)
{
    const double tol = 1e-12;
    const int samples = 101;
    UniquenessReport rep;

    auto scalar = [&](std::string name, double v, int sign, std::string what) {
        ConditionVerdict c{std::move(name), sign * v >= -tol, std::nullopt, std::move(what)};
        rep.conditions.push_back(std::move(c));
    };
    // sign * g(s) >= 0 on the sample
    auto pointwise = [&](std::string name, const std::function<double(double)>& g, int sign, std::string what) {
        ConditionVerdict c{std::move(name), true, std::nullopt, std::move(what)};
        for (int k = 0; k < samples; ++k) {
            double s = double(k) / (samples - 1);
            if (sign * g(s) < -tol) {
                c.pass = false;
                c.first_violation = s;
                break;
            }
        }
        rep.conditions.push_back(std::move(c));
    };
    auto ratio_slope = [](const KernelPair& k) {
        return [k](double s) {
            double d = k.p2.d1(s);
            return (k.p1.d1(s) * d - k.p1(s) * k.p2.d2(s)) / (d * d);
        };
    };

    for (int i = 0; i < 3; ++i) {
        if (cfg.beta_coef[i] == 0.0) continue;
        for (int k = 0; k < samples; ++k) {
            double s = double(k) / (samples - 1);
            if (std::fabs(cfg.kernels[i].p2.d1(s)) < 1e-14)
                throw ConfigError("derivative of P_" + idx(i) + ",2 vanishes at s = " + std::to_string(s));
        }
    }

    const auto& sg = cfg.sigma;
    const auto& al = cfg.alpha;
    const auto& be = cfg.beta_coef;

    // block 1: the transmitting kernel on the initial line
    {
        const auto& k = cfg.kernels[0];
        double c = be[0] * (sg[0] - 1) / (2 * (sg[0] + 1));
        scalar("sigma1_beta_sign", c, +1, "beta_1 (sigma_1 - 1) / (2 (sigma_1 + 1)) >= 0");
        if (be[0] != 0.0) {
            pointwise("sigma1_kernel_product", [&](double s) { return k.p1(s) * k.p2(s); }, +1, "P_1,1 P_1,2 >= 0");
            pointwise("sigma1_kernel_ratio_slope", ratio_slope(k), +1, "(P_1,1 / P_1,2')' >= 0");
        }
    }
    // block 2: left boundary
    {
        const auto& k = cfg.kernels[1];
        double a = al[1] * (1 + sg[1]) / (1 - sg[1]);
        double b = be[1] * (1 + sg[1]) / (1 - sg[1]);
        scalar("sigma2_alpha_sign", a, +1, "alpha_2 (1 + sigma_2) / (1 - sigma_2) >= 0");
        if (be[1] != 0.0) {
            pointwise("sigma2_kernel_product", [&](double s) { return b * k.p1(s) * k.p2(s); }, -1,
                      "beta_2 (1 + sigma_2) / (1 - sigma_2) P_2,1 P_2,2 <= 0");
            scalar("sigma2_kernel_ratio_at_zero", 0.5 * b * k.p1(0.0) / k.p2.d1(0.0), -1,
                   "beta_2 (1 + sigma_2) / (2 (1 - sigma_2)) P_2,1(0) / P_2,2'(0) <= 0");
            auto r = ratio_slope(k);
            pointwise("sigma2_kernel_ratio_slope", [&](double s) { return 0.5 * b * r(s); }, -1,
                      "beta_2 (1 + sigma_2) / (2 (1 - sigma_2)) (P_2,1 / P_2,2')' <= 0");
        }
    }
    // block 3: right boundary
    {
        const auto& k = cfg.kernels[2];
        double a = al[2] * (sg[2] - 1) / (sg[2] + 1);
        double b = be[2] * (sg[2] - 1) / (sg[2] + 1);
        scalar("sigma3_alpha_sign", a, -1, "alpha_3 (sigma_3 - 1) / (sigma_3 + 1) <= 0");
        if (be[2] != 0.0) {
            pointwise("sigma3_kernel_product", [&](double s) { return b * k.p1(s) * k.p2(s); }, +1,
                      "beta_3 (sigma_3 - 1) / (sigma_3 + 1) P_3,1 P_3,2 >= 0");
            scalar("sigma3_kernel_ratio_at_zero", 0.5 * b * k.p1(0.0) / k.p2.d1(0.0), +1,
                   "beta_3 (sigma_3 - 1) / (2 (sigma_3 + 1)) P_3,1(0) / P_3,2'(0) >= 0");
            auto r = ratio_slope(k);
            pointwise("sigma3_kernel_ratio_slope", [&](double s) { return 0.5 * b * r(s); }, +1,
                      "beta_3 (sigma_3 - 1) / (2 (sigma_3 + 1)) (P_3,1 / P_3,2')' >= 0");
        }
    }
    for (int j = 1; j < 3; ++j) {
        double v = cfg.kernels[j].p2(1.0);
        ConditionVerdict c{"p" + idx(j) + "2_vanishes_at_one", std::fabs(v) <= tol, std::nullopt,
                           "P_" + idx(j) + ",2(1) = 0"};
        if (!c.pass) c.first_violation = 1.0;
        rep.conditions.push_back(std::move(c));
    }
    return rep;
}

}  // namespace fracmix
