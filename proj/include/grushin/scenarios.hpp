#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "grushin/norms.hpp"

namespace grushin::scenarios {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "grushin-verify/1";

/// Log-spaced mu samples a..b, n points.
struct MuGrid {
    double a = 0.5;
    double b = 8.0;
    std::size_t n = 5;
    std::vector<double> values() const;
};

/// Parses "a:b:n". Throws DomainError.
MuGrid parse_mu_grid(const std::string& s);
/// Parses "p,q,r"; "inf" is accepted, as are fractions like 4/3. Throws DomainError.
norms::MixedNormParams parse_pqr(const std::string& s);

struct ScenarioSpec {
    std::string id;
    std::optional<unsigned> d1;
    std::optional<unsigned> d2;
    std::optional<unsigned> kmax;
    std::optional<MuGrid> mu_grid;
    std::optional<norms::MixedNormParams> pqr;
    std::optional<std::size_t> grid;
    std::uint64_t seed = 0x5eed1234;
    std::string out_dir = ".";
};

/// Known ids, in CLI order.
const std::vector<std::string>& scenario_ids();

/// Overrides fields of `spec` from a JSON object with keys
/// d1, d2, kmax, mu_grid, pqr, grid, seed, out. Throws DomainError naming the field.
void apply_config(ScenarioSpec& spec, const nlohmann::json& cfg);

/// Throws DomainError naming the offending field.
void validate(const ScenarioSpec& spec);

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::string render() const;
};

struct ScenarioResult {
    Json report;
    Csv data;
    bool pass = false;
};

/// A named check inside a report.
Json check(const std::string& name, double value, double limit, bool pass, const std::string& relation = "<=");

ScenarioResult run_scenario(const ScenarioSpec& spec);

/// run_scenario plus <out>/<id>.report.json and <out>/<id>.data.csv.
ScenarioResult run_and_write(const ScenarioSpec& spec);

/// Serialized report exactly as written to disk.
std::string render_report(const Json& report);

// Individual suites, also used by the acceptance tests.
Json specfun_suite();
Json projection_algebra(unsigned k_max = 20);
Json grushin_eigenrelation();
Json generic_band(std::uint64_t seed, std::size_t members = 2);
/// Slope of the mu-scaling for the dilation-covariant power-Gaussian family.
Json scaling_point(unsigned d1, unsigned d2, const norms::MixedNormParams& m, const std::vector<double>& mus,
                   std::optional<unsigned> kmax = {}, std::optional<std::size_t> nt = {});

}  // namespace grushin::scenarios
