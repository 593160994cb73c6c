#include <doctest.h>

#include <cmath>
#include <numbers>

#include "grushin/error.hpp"
#include "grushin/field.hpp"
#include "grushin/hermite_spectral.hpp"
#include "grushin/knapp.hpp"
#include "grushin/restriction.hpp"

using namespace grushin;
using namespace grushin::restriction;

namespace {
const double kPi = std::numbers::pi;

double rel_max(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double n = 0.0, d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        n = std::max(n, std::abs(a[i] - b[i]));
        d = std::max(d, std::abs(b[i]));
    }
    return n / d;
}

// e^{-i a t} Phi^a_0(x), d1 = d2 = 1
SampledField ground_wave(const FieldGrid& g, double a) {
    return SampledField::from_function(g, [a](std::span<const double> x, std::span<const double> t) {
        return std::pow(a / kPi, 0.25) * std::exp(-0.5 * a * x[0] * x[0]) * std::polar(1.0, -a * t[0]);
    });
}
}  // namespace

TEST_CASE("partial_fourier_t of a Gaussian") {
    const auto g = make_field_grid(1, 6.0, 25, 1, 12.0, 96);
    const auto f = SampledField::from_function(g, [](std::span<const double> x, std::span<const double> t) {
        return cplx(std::exp(-x[0] * x[0] - 0.5 * t[0] * t[0]));
    });
    const auto s = partial_fourier_t(f);
    const std::size_t nl = s.lambda[0].n;
    double err = 0.0;
    for (std::size_t ix = 0; ix < g.size_x(); ++ix)
        for (std::size_t m = 0; m < nl; ++m) {
            const double lam = s.lambda[0].node(m), x = g.x[0].node(ix);
            const double ref = std::exp(-x * x) * std::sqrt(2.0 * kPi) * std::exp(-0.5 * lam * lam);
            err = std::max(err, std::abs(s.values[ix * nl + m] - ref));
        }
    CHECK(err < 1e-12);
    const auto back = inverse_partial_fourier_t(s);
    CHECK(rel_max(back.values, f.values) < 1e-10);

    SampledField z(g);
    const auto sz = partial_fourier_t(z);
    for (const auto& v : sz.values) CHECK(v == cplx(0.0));
}

TEST_CASE("support check rejects truncated fields") {
    const auto g = make_field_grid(1, 3.0, 13, 1, 3.0, 12);
    const auto f = SampledField::from_function(g, [](auto, std::span<const double> t) { return cplx(std::exp(-0.1 * t[0] * t[0])); });
    CHECK_THROWS_AS(partial_fourier_t(f), ResolutionError);
}

TEST_CASE("sphere_rule") {
    const auto r1 = sphere_rule(1, 4);
    REQUIRE(r1.size() == 2);
    CHECK(r1.points[0][0] == -1.0);
    CHECK(r1.points[1][0] == 1.0);
    CHECK(r1.weights[0] + r1.weights[1] == doctest::Approx(2.0));
    const auto r2 = sphere_rule(2, 9);
    double s2 = 0.0;
    for (double w : r2.weights) s2 += w;
    CHECK(s2 == doctest::Approx(2.0 * kPi).epsilon(1e-14));
    const auto r3 = sphere_rule(3, 6);
    double s3 = 0.0;
    for (std::size_t i = 0; i < r3.size(); ++i) s3 += r3.weights[i] * r3.points[i][2] * r3.points[i][2];
    CHECK(std::abs(s3 - 4.0 * kPi / 3.0) < 1e-10);
    CHECK(sphere_measure_ft(3, 0.0) == doctest::Approx(4.0 * kPi));
    CHECK(sphere_measure_ft(3, 2.0) == doctest::Approx(4.0 * kPi * std::sin(2.0) / 2.0).epsilon(1e-13));
}

TEST_CASE("restriction of zero is zero") {
    const auto g = make_field_grid(1, 6.0, 25, 2, 8.0, 16);
    SampledField z(g);
    RestrictionConfig cfg;
    cfg.mu = 1.3;
    const auto r = restriction_apply(z, cfg);
    CHECK(r.field.max_abs() == 0.0);
    const std::vector<double> mus{0.5, 1.0}, w{0.5, 0.5};
    CHECK(spectral_synthesis(z, mus, w, cfg, SynthesisKind::Operator).max_abs() == 0.0);
}

TEST_CASE("ground-state packet concentrates at k = 0") {
    const auto in = knapp::KnappInputs::standard(1, 1);
    const auto g = make_field_grid(1, 7.0, 29, 1, 80.0, 160);
    const auto f = knapp::field_direct(in, g);
    RestrictionConfig cfg;
    cfg.mu = 1.0;
    cfg.k_max = 4;
    const auto r = restriction_apply(f, cfg);
    for (std::size_t k = 1; k < r.level_content.size(); ++k) CHECK(r.level_content[k] < 1e-6 * r.level_content[0]);
    const auto closed = knapp::closed_form_p1(in, g);
    CHECK(rel_max(r.field.values, closed.values) < 1e-4);
    // d2 = 1 two-term formula
    CHECK(rel_max(restriction_two_term(f, 1.0, 4).values, r.field.values) < 1e-10);
}

TEST_CASE("input resolution checks") {
    const auto g = make_field_grid(1, 6.0, 13, 1, 8.0, 32);  // x step 1
    const auto f = SampledField::from_function(g, [](std::span<const double> x, std::span<const double> t) {
        return cplx(std::exp(-x[0] * x[0] - t[0] * t[0]));
    });
    RestrictionConfig cfg;
    cfg.mu = 4.0;  // needs x step <= pi/8
    CHECK_THROWS_AS(restriction_apply(f, cfg), ResolutionError);
}

TEST_CASE("grushin_apply_fd eigenfunctions") {
    const auto g = make_field_grid(1, 8.0, 257, 1, 8.0, 256);
    for (double a : {1.0, 2.0}) {
        const auto f = ground_wave(g, a);
        const auto Lf = grushin_apply_fd(f);
        CHECK(interior_relative_residual(Lf, f, a) < 1e-2);
    }
}

TEST_CASE("L P_mu = mu P_mu for a generic field") {
    const auto g = make_field_grid(1, 8.0, 129, 1, 8.0, 128);
    const auto f = SampledField::from_function(g, [](std::span<const double> x, std::span<const double> t) {
        return std::exp(-0.5 * (x[0] - 0.4) * (x[0] - 0.4) - 0.6 * t[0] * t[0]) * std::polar(1.0, 0.3 * t[0]);
    });
    RestrictionConfig cfg;
    cfg.mu = 1.0;
    const auto P = restriction_apply(f, cfg).field;
    CHECK(interior_relative_residual(grushin_apply_fd(P), P, 1.0) < 1e-2);
}

TEST_CASE("inner product") {
    const auto g = make_field_grid(1, 8.0, 129, 1, 8.0, 128);
    const auto f = ground_wave(g, 1.0);
    // |Phi_0|^2 integrates to 1 in x; t contributes the period
    CHECK(inner_product(f, f).real() == doctest::Approx(16.0).epsilon(1e-10));
}
