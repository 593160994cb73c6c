// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "grushin/scenarios.hpp"

namespace sc = grushin::scenarios;
using grushin::norms::MixedNormParams;

namespace {

int failures = 0;

void line(int n, bool pass, const std::string& detail) {
    std::printf("criterion %d: %s  %s\n", n, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

bool check_named(const sc::Json& report, const std::string& name) {
    for (const auto& c : report["checks"])
        if (c["name"] == name) return c["pass"].get<bool>();
    std::printf("missing check '%s'\n", name.c_str());
    return false;
}

sc::ScenarioResult run(const std::string& id) {
    const auto t0 = std::chrono::steady_clock::now();
    sc::ScenarioSpec s;
    s.id = id;
    auto r = sc::run_scenario(s);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("  [%s %.1fs]\n", id.c_str(), secs);
    return r;
}

}  // namespace

int main() {
    constexpr double kStability = 2.0;  // criterion 2
    constexpr double kSlopeTol = 0.05;  // criterion 7

    std::map<std::string, std::string> first;
    auto keep = [&](const std::string& id) {
        auto r = run(id);
        first[id] = sc::render_report(r.report);
        return r;
    };

    // 1, 2
    const auto env = keep("lemma-envelope");
    const auto& sf = env.report["special_functions"];
    std::string d1;
    for (const auto& c : sf["checks"]) d1 += c["name"].get<std::string>() + " " + fmt("%.1e", c["value"].get<double>()) + "; ";
    line(1, sf["pass"].get<bool>(), d1);
    const double stated = env.report["diagnostics"]["stated_gamma_spread"].get<double>();
    const double gated = env.report["checks"][0]["value"].get<double>();
    line(2, stated <= kStability,
         "constant spread at gamma = 1/4: " + fmt("%.3g", stated) + " (limit 2); at gamma = 1/16: " + fmt("%.4g", gated));

    // 3
    const auto l1 = keep("lemma-l1");
    line(3, l1.pass, "L1 bound spread and k = 0 closed forms");

    // 4
    const auto wy = keep("weyl-identity");
    line(4, wy.pass, "max-entry deviation " + fmt("%.2e", wy.report["checks"][0]["value"].get<double>()));

    // 5, 6
    const auto pe = keep("projection-estimate");
    bool c5 = true;
    for (const auto& c : pe.report["checks"])
        if (c["name"] != "projection algebra") c5 = c5 && c["pass"].get<bool>();
    line(5, c5, "covariance, sup slope, q = 2 contraction, level decay");
    const auto syn = keep("synthesis");
    const auto& alg = pe.report["projection_algebra"];
    const auto& eig = syn.report["eigenrelation"];
    line(6, alg["pass"].get<bool>() && eig["pass"].get<bool>(),
         "algebra worst " + fmt("%.2e", alg["worst"].get<double>()) + ", L residual " +
             fmt("%.2e", eig["residuals"][0].get<double>()) + " order " + fmt("%.3f", eig["observed_order"].get<double>()));

    // 7
    const auto rs = keep("restriction-scaling");
    bool c7 = rs.pass;
    std::string d7 = "(1,3,1,2,2) slope " + fmt("%.4f", rs.report["covariant_family"]["ratio_fit"]["slope"].get<double>()) +
                     ", band spread " + fmt("%.3f", rs.report["generic_family"]["spread"].get<double>());
    const std::vector<double> mus{0.5, 1.0, 2.0, 4.0, 8.0};
    struct Point {
        unsigned d1, d2;
        MixedNormParams m;
        const char* tag;
    };
    const Point pts[] = {{1, 1, {1.0, 2.0, 2.0}, "(1,1,1,2,2)"},
                         {2, 3, {4.0 / 3.0, 2.0, 2.0}, "(2,3,4/3,2,2)"},
                         {1, 3, {1.0, 1.0, INFINITY}, "(1,3,1,1,inf)"}};
    for (const auto& p : pts) {
        const auto j = sc::scaling_point(p.d1, p.d2, p.m, mus);
        const double slope = j["ratio_fit"]["slope"].get<double>();
        const double pred = j["ratio_fit"]["predicted"].get<double>();
        c7 = c7 && j["pass"].get<bool>() && std::abs(slope - pred) <= kSlopeTol;
        d7 += std::string(", ") + p.tag + " " + fmt("%.4f", slope) + " vs " + fmt("%.2f", pred);
    }
    line(7, c7, d7);

    // 8
    const auto kn = keep("knapp");
    sc::ScenarioSpec s12;
    s12.id = "knapp";
    s12.d2 = 2;
    const auto kn2 = sc::run_scenario(s12);
    bool c8 = true;
    for (const auto* k : {&kn, &kn2})
        c8 = c8 && check_named(k->report, "closed form") && check_named(k->report, "route consistency");
    line(8, c8,
         "closed form " + fmt("%.2e", kn.report["closed_form"]["deviation"].get<double>()) + " / " +
             fmt("%.2e", kn2.report["closed_form"]["deviation"].get<double>()) + ", route residual " +
             fmt("%.2e", kn.report["route_consistency"]["residual"].get<double>()) + " / " +
             fmt("%.2e", kn2.report["route_consistency"]["residual"].get<double>()));

    // 9
    bool c9 = true;
    std::string diff;
    for (const auto& [id, bytes] : first) {
        if (sc::render_report(run(id).report) != bytes) {
            c9 = false;
            diff += " " + id;
        }
    }
    line(9, c9, c9 ? "all " + std::to_string(first.size()) + " default reports byte-identical" : "differs:" + diff);

    return failures == 0 ? 0 : 1;
}
