#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "fracmix/errors.hpp"
#include "fracmix/problem_s.hpp"

using namespace fracmix;
using nlohmann::ordered_json;

namespace {

enum Exit { ok = 0, rejected = 2, numerical = 3 };

const char* domain_tag(int d)
{
    static const char* tags[] = {"omega0", "omega1", "omega2", "omega3"};
    return tags[d];
}

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class Stopwatch {
public:
    double lap()
    {
        auto now = std::chrono::steady_clock::now();
        double s = std::chrono::duration<double>(now - last_).count();
        last_ = now;
        return s;
    }

private:
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

ordered_json verdicts(const UniquenessReport& r)
{
    ordered_json out = ordered_json::array();
    for (const auto& c : r.conditions) {
        ordered_json v{{"name", c.name}, {"pass", c.pass}, {"condition", c.detail}};
        if (c.first_violation) v["first_violation"] = *c.first_violation;
        out.push_back(v);
    }
    return out;
}

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Mixed parabolic-hyperbolic problem with nonlocal and integral transmitting conditions"};
    std::string config_path, output, format = "csv";
    int grid_n = 129, seed = 0;
    bool check_only = false, oracle = false;
    app.add_option("--config", config_path, "problem configuration (JSON)")->required();
    app.add_option("--grid-n", grid_n, "grid points per unit length")->check(CLI::Range(9, 4097));
    app.add_option("--output", output, "solution samples; a manifest goes next to it");
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_flag("--check-only", check_only, "check the configuration and the uniqueness hypotheses only");
    app.add_flag("--oracle", oracle, "compare the parabolic field with finite differences");
    app.add_option("--seed", seed, "recorded in the manifest; the pipeline is deterministic");
    CLI11_PARSE(app, argc, argv);

    ordered_json man;
    man["config"] = config_path;
    man["grid_n"] = grid_n;
    man["output"] = output;
    man["format"] = format;
    man["mode"] = {{"check_only", check_only}, {"oracle", oracle}};
    man["seed"] = seed;
    // json output embeds the manifest, so its timings go to a side file to keep the output reproducible
    auto emit_manifest = [&](const ordered_json& timings) {
        ordered_json m = man;
        if (format == "csv" || output.empty()) {
            if (!timings.empty()) m["timings_s"] = timings;
            if (output.empty())
                std::cout << m.dump(2) << "\n";
            else
                write_text(output + ".manifest.json", m.dump(2) + "\n");
        } else if (!timings.empty()) {
            write_text(output + ".timings.json", ordered_json{{"timings_s", timings}}.dump(2) + "\n");
        }
    };

    ProblemConfig cfg;
    UniquenessReport uniq;
    try {
        cfg = load_config(config_path);
        cfg.n_points = grid_n;
        cfg.validate();
        uniq = check_uniqueness_conditions(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return rejected;
    }
    man["branch"] = cfg.branch() == Branch::general ? "general" : "abel";
    man["uniqueness"] = {{"pass", uniq.pass()}, {"conditions", verdicts(uniq)}};
    for (const auto& name : uniq.failed()) std::cerr << "uniqueness hypothesis not met: " << name << "\n";

    if (check_only) {
        if (format == "json" && !output.empty()) write_text(output, ordered_json{{"manifest", man}}.dump(1) + "\n");
        emit_manifest({});
        return uniq.pass() ? ok : rejected;
    }

    Stopwatch clock;
    ordered_json timings;
    try {
        Tau1Result t1 = solve_tau1(cfg);
        timings["tau1"] = clock.lap();
        Tau23Result t23 = solve_tau23(cfg, t1);
        timings["tau23"] = clock.lap();
        TraceSet tr = recover_nu(cfg, t1, t23);
        timings["recover_nu"] = clock.lap();
        SolutionField field = assemble_solution(cfg, tr);
        timings["assemble"] = clock.lap();
        ResidualReport res = interface_residuals(cfg, tr, field);
        timings["residuals"] = clock.lap();

        man["boundary_system"] = {{"chain_vs_block", t23.chain_vs_block}, {"defect", t23.defect}};
        ordered_json rj;
        for (const auto& [name, v] : res.entries) rj[name] = v;
        man["residuals"] = rj;
        if (oracle) {
            OracleReport o = fd_oracle(cfg, tr, field);
            timings["oracle"] = clock.lap();
            man["oracle"] = {{"max_discrepancy", o.max_discrepancy},
                             {"l2_discrepancy", o.l2_discrepancy},
                             {"time_steps", o.time_steps}};
        }

        auto samples = field.samples();
        if (!output.empty()) {
            if (format == "csv") {
                std::ostringstream os;
                os << "domain,x,t,u\n";
                for (const auto& s : samples)
                    os << domain_tag(s.domain) << ',' << num(s.x) << ',' << num(s.t) << ',' << num(s.u) << '\n';
                write_text(output, os.str());
            } else {
                ordered_json doc;
                doc["manifest"] = man;
                ordered_json rows = ordered_json::array();
                for (const auto& s : samples)
                    rows.push_back({{"domain", domain_tag(s.domain)}, {"x", s.x}, {"t", s.t}, {"u", s.u}});
                doc["samples"] = rows;
                write_text(output, doc.dump(1) + "\n");
            }
        }
        emit_manifest(timings);
        std::cerr << "max residual " << res.max() << ", samples " << samples.size() << "\n";
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return rejected;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return numerical;
    }
    return ok;
}
