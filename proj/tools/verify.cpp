#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "grushin/error.hpp"
#include "grushin/scenarios.hpp"

namespace sc = grushin::scenarios;

int main(int argc, char** argv) {
    CLI::App app{"Run a verification scenario and write <scenario>.report.json and <scenario>.data.csv"};
    std::string id, mu_grid, pqr, config;
    unsigned d1 = 0, d2 = 0, kmax = 0;
    std::size_t grid = 0;
    std::uint64_t seed = 0x5eed1234;
    std::string out = ".";
    app.add_option("scenario", id, "Scenario id")->required()->check(CLI::IsMember(sc::scenario_ids()));
    auto* o_d1 = app.add_option("--d1", d1, "x dimension");
    auto* o_d2 = app.add_option("--d2", d2, "t dimension");
    auto* o_k = app.add_option("--kmax", kmax, "Largest Hermite level");
    auto* o_mu = app.add_option("--mu-grid", mu_grid, "Log-spaced mu samples a:b:n");
    auto* o_pqr = app.add_option("--pqr", pqr, "Norm exponents p,q,r (inf allowed)");
    auto* o_grid = app.add_option("--grid", grid, "t points per axis");
    app.add_option("--seed", seed, "Seed for randomized ensembles");
    app.add_option("--out", out, "Output directory");
    app.add_option("--config", config, "JSON file overriding the flags");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    sc::ScenarioSpec spec;
    try {
        spec.id = id;
        if (*o_d1) spec.d1 = d1;
        if (*o_d2) spec.d2 = d2;
        if (*o_k) spec.kmax = kmax;
        if (*o_grid) spec.grid = grid;
        if (*o_mu) spec.mu_grid = sc::parse_mu_grid(mu_grid);
        if (*o_pqr) spec.pqr = sc::parse_pqr(pqr);
        spec.seed = seed;
        spec.out_dir = out;
        if (!config.empty()) {
            std::ifstream is(config);
            if (!is) throw grushin::DomainError("config: cannot open " + config);
            nlohmann::json cfg;
            try {
                is >> cfg;
            } catch (const nlohmann::json::parse_error& e) {
                throw grushin::DomainError(std::string("config: ") + e.what());
            }
            sc::apply_config(spec, cfg);
        }
        sc::validate(spec);
    } catch (const grushin::DomainError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    }

    try {
        const auto res = sc::run_and_write(spec);
        for (const auto& c : res.report["checks"])
            std::printf("%s %s\n", c["pass"].get<bool>() ? "PASS" : "FAIL", c["name"].get<std::string>().c_str());
        std::printf("%s: %s\n", spec.id.c_str(), res.pass ? "pass" : "fail");
        return res.pass ? 0 : 1;
    } catch (const grushin::AdmissibilityError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const grushin::DomainError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
