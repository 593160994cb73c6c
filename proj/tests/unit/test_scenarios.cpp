#include <doctest.h>

#include "grushin/error.hpp"
#include "grushin/scenarios.hpp"

using namespace grushin;
using namespace grushin::scenarios;

TEST_CASE("flag parsing") {
    const auto g = parse_mu_grid("0.5:32:7");
    const auto v = g.values();
    REQUIRE(v.size() == 7);
    CHECK(v.front() == 0.5);
    CHECK(v.back() == 32.0);
    CHECK(v[1] == doctest::Approx(1.0));
    CHECK_THROWS_AS(parse_mu_grid("1:0.5:5"), DomainError);
    CHECK_THROWS_AS(parse_mu_grid("1:2"), DomainError);
    CHECK_THROWS_AS(parse_mu_grid("1:2:3"), DomainError);

    const auto m = parse_pqr("4/3,2,inf");
    CHECK(m.p == doctest::Approx(4.0 / 3.0));
    CHECK(m.q == 2.0);
    CHECK(std::isinf(m.r));
    CHECK_THROWS_AS(parse_pqr("1,2"), DomainError);
    CHECK_THROWS_AS(parse_pqr("1,x,2"), DomainError);
}

TEST_CASE("spec validation and config overrides") {
    ScenarioSpec s;
    s.id = "nope";
    CHECK_THROWS_AS(validate(s), DomainError);
    s.id = "knapp";
    s.d2 = 4;
    CHECK_THROWS_AS(validate(s), DomainError);
    s.d2 = 2;
    CHECK_NOTHROW(validate(s));

    apply_config(s, nlohmann::json{{"d1", 1}, {"grid", 64}, {"pqr", "1,2,2"}, {"out", "/tmp/x"}});
    CHECK(*s.grid == 64);
    CHECK(s.out_dir == "/tmp/x");
    CHECK_THROWS_AS(apply_config(s, nlohmann::json{{"colour", 1}}), DomainError);
    CHECK_THROWS_AS(apply_config(s, nlohmann::json{{"d1", -1}}), DomainError);
    CHECK_THROWS_AS(apply_config(s, nlohmann::json::array()), DomainError);
}

TEST_CASE("csv rendering") {
    Csv c;
    c.header = {"a", "b"};
    c.rows = {{1.0, 0.1}, {-2.5, 1e-300}};
    CHECK(c.render() == "a,b\n1,0.10000000000000001\n-2.5,1e-300\n");
}

TEST_CASE("knapp scenario report is reproducible and self-describing") {
    ScenarioSpec s;
    s.id = "knapp";
    const auto a = run_scenario(s);
    const auto b = run_scenario(s);
    CHECK(render_report(a.report) == render_report(b.report));
    CHECK(a.report["schema"] == kSchema);
    CHECK(a.report.contains("anchor"));
    CHECK(a.report.contains("tolerances"));
    CHECK(a.pass);
}
