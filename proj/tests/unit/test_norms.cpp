#include <doctest.h>

#include <cmath>
#include <numbers>

#include "grushin/error.hpp"
#include "grushin/norms.hpp"

using namespace grushin;
using namespace grushin::norms;

namespace {
SampledField gaussian_field() {
    const auto g = make_field_grid(1, 8.0, 161, 1, 8.0, 160);
    return SampledField::from_function(g, [](std::span<const double> x, std::span<const double> t) {
        return cplx(std::exp(-x[0] * x[0] - t[0] * t[0]));
    });
}
}  // namespace

TEST_CASE("mixed_norm") {
    const auto f = gaussian_field();
    CHECK(mixed_norm(f, 2, 2) == doctest::Approx(std::sqrt(std::numbers::pi / 2.0)).epsilon(1e-12));
    CHECK(mixed_norm(f, kInf, kInf) == doctest::Approx(1.0).epsilon(1e-15));
    SampledField z(f.grid);
    CHECK(mixed_norm(z, 1, 3) == 0.0);
    CHECK_THROWS_AS(mixed_norm(f, 0.5, 2), DomainError);
    CHECK_THROWS_AS(mixed_norm(f, 2, 0.9), DomainError);

    // homogeneity and the flat L2 norm
    SampledField g = f;
    for (auto& v : g.values) v *= cplx(-2.0, 1.5);
    CHECK(mixed_norm(g, 1.5, 3) == doctest::Approx(2.5 * mixed_norm(f, 1.5, 3)).epsilon(1e-12));
    const auto w = f.grid.x_weights();
    double flat = 0.0;
    for (std::size_t ix = 0; ix < f.nx(); ++ix)
        for (std::size_t it = 0; it < f.nt(); ++it) flat += w[ix] * f.grid.t_cell() * std::norm(f.at(ix, it));
    CHECK(mixed_norm(f, 2, 2) == doctest::Approx(std::sqrt(flat)).epsilon(1e-12));
}

TEST_CASE("predicted_exponent and admissibility") {
    CHECK(predicted_exponent({1, 2, 2}, 1, 1) == doctest::Approx(0.0));
    CHECK(predicted_exponent({1, 2, 2}, 1, 3) == doctest::Approx(2.0));
    CHECK(predicted_exponent({4.0 / 3.0, 1, kInf}, 2, 3) == doctest::Approx(1.5));
    CHECK_THROWS_AS(predicted_exponent({1.1, 2, 2}, 1, 1), AdmissibilityError);
    CHECK_THROWS_AS(predicted_exponent({1, 2.5, 2}, 1, 1), AdmissibilityError);
    CHECK_THROWS_AS(predicted_exponent({1, 1, 1.5}, 1, 1), AdmissibilityError);
    CHECK(admissible({4.0 / 3.0, 1, 2}, 1, 3));
    CHECK_FALSE(admissible({1.34, 1, 2}, 1, 3));
    CHECK(admissible({1.2, 2, 2}, 1, 2));
    CHECK_FALSE(admissible({1.21, 2, 2}, 1, 2));
    CHECK(MixedNormParams{1, 2, 2}.p_prime() == kInf);
    CHECK(MixedNormParams{4.0 / 3.0, 2, 2}.p_prime() == doctest::Approx(4.0));
}

TEST_CASE("fit_scaling_exponent") {
    const std::vector<double> mus{0.5, 1, 2, 4, 8};
    std::vector<double> sq, ce;
    for (double m : mus) {
        sq.push_back(m * m);
        ce.push_back(7.3 * std::pow(m, -0.7));
    }
    const auto a = fit_scaling_exponent(mus, sq, 2.0);
    CHECK(a.slope == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(a.residual < 1e-13);
    CHECK(a.pass);
    const auto b = fit_scaling_exponent(mus, ce, -0.7);
    CHECK(b.slope == doctest::Approx(-0.7).epsilon(1e-13));
    CHECK(b.intercept == doctest::Approx(std::log(7.3)).epsilon(1e-13));
    CHECK_FALSE(fit_scaling_exponent(mus, ce, 0.0).pass);
    CHECK(fit_scaling_exponent(mus, ce, 0.0, 0.05, 0.05, FitMode::UpperBound).pass);

    std::vector<double> bad = sq;
    bad[2] = 0.0;
    CHECK_THROWS_AS(fit_scaling_exponent(mus, bad), DomainError);
    const std::vector<double> three{1, 2, 3};
    CHECK_THROWS_AS(fit_scaling_exponent(three, three), DomainError);
    const std::vector<double> unsorted{1, 3, 2, 4};
    CHECK_THROWS_AS(fit_scaling_exponent(unsorted, unsorted), DomainError);
}

TEST_CASE("projection_norm_estimate") {
    for (unsigned k : {0u, 4u, 9u}) {
        const auto e = projection_norm_estimate(k, 1.3, 1, 2.0, 16);
        CHECK(e.ratio <= 1.0 + 1e-8);
        CHECK(e.ratio > 0.5);
    }
    // exact covariance: the ratio scales as |a|^{d1/4} for q = 1
    const auto r1 = projection_norm_estimate(4, 1.0, 1, 1.0, 16);
    const auto r4 = projection_norm_estimate(4, 4.0, 1, 1.0, 16);
    CHECK(r4.ratio / r1.ratio == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
    // deterministic for a fixed seed
    CHECK(projection_norm_estimate(5, 1.0, 1, 1.0, 16, 9).ratio == projection_norm_estimate(5, 1.0, 1, 1.0, 16, 9).ratio);
}
