#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "grushin/error.hpp"
#include "grushin/quadrature.hpp"
#include "grushin/specfun.hpp"

using namespace grushin;
using namespace grushin::specfun;

namespace {

const double kPi = std::numbers::pi;

// L_k^alpha(x) = sum_i (-1)^i binom(k+alpha, k-i) x^i / i!, integer alpha, long double
long double laguerre_series(unsigned k, unsigned alpha, long double x) {
    long double s = 0.0L;
    for (unsigned i = 0; i <= k; ++i) {
        long double binom = 1.0L;
        for (unsigned j = 1; j <= k - i; ++j) binom = binom * (alpha + i + j) / j;
        long double term = binom;
        for (unsigned j = 1; j <= i; ++j) term = term * x / j;
        s += (i % 2 ? -term : term);
    }
    return s;
}

}  // namespace

TEST_CASE("hermite_eval closed forms") {
    CHECK(hermite_eval(0, 0.0) == doctest::Approx(0.751125544464943).epsilon(1e-14));
    CHECK(std::abs(hermite_eval(1, 0.0)) < 1e-16);
    CHECK(hermite_eval(1, 1.0) == doctest::Approx(std::sqrt(2.0) * std::pow(kPi, -0.25) * std::exp(-0.5)).epsilon(1e-13));
    // far tail underflows to zero instead of overflowing
    CHECK(std::isfinite(hermite_eval(200, 60.0)));
}

TEST_CASE("hermite_batch matches hermite_eval") {
    const std::vector<double> x0{0.0};
    const auto t0 = hermite_batch(0, x0);
    CHECK(t0(0, 0) == doctest::Approx(0.751125544464943).epsilon(1e-14));
    const auto t2 = hermite_batch(2, x0);
    CHECK(std::abs(t2(1, 0)) < 1e-16);
    CHECK(t2(2, 0) == doctest::Approx(-std::pow(kPi, -0.25) / std::sqrt(2.0)).epsilon(1e-13));
    const std::vector<double> xs{-7.5, -1.0, 0.3, 2.2, 11.0};
    const auto t = hermite_batch(30, xs);
    for (unsigned k = 0; k <= 30; ++k)
        for (std::size_t i = 0; i < xs.size(); ++i) CHECK(t(k, i) == doctest::Approx(hermite_eval(k, xs[i])).epsilon(1e-12));
}

TEST_CASE("hermite Gram matrix by Gauss-Hermite") {
    const auto gh = gauss_hermite(60);
    const auto H = hermite_batch(50, gh.nodes);
    double dev = 0.0;
    for (unsigned a = 0; a <= 50; ++a)
        for (unsigned b = 0; b <= 50; ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < gh.nodes.size(); ++i) s += gh.scaled_weights[i] * H(a, i) * H(b, i);
            dev = std::max(dev, std::abs(s - (a == b ? 1.0 : 0.0)));
        }
    CHECK(dev < 1e-10);
}

TEST_CASE("laguerre_poly") {
    CHECK(laguerre_poly(0, 0.5, 3.7) == 1.0);
    CHECK(laguerre_poly(1, 0.0, 2.0) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(laguerre_poly(2, 0.0, 3.0) == doctest::Approx(-0.5).epsilon(1e-14));
    for (unsigned k : {3u, 7u, 15u})
        for (unsigned alpha : {0u, 1u, 2u})
            for (double x : {0.1, 2.5, 9.0})
                CHECK(laguerre_poly(k, alpha, x) == doctest::Approx(double(laguerre_series(k, alpha, x))).epsilon(1e-11));
    CHECK_THROWS_AS(laguerre_poly(2, -1.0, 1.0), DomainError);
    CHECK_THROWS_AS(laguerre_normalized(2, 0.0, -1.0), DomainError);
}

TEST_CASE("laguerre_normalized") {
    CHECK(laguerre_normalized(0, 0.0, 2.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(laguerre_normalized(0, 1.0, 0.0) == 0.0);
    CHECK(laguerre_normalized(0, 2.0, 0.0) == 0.0);
    const long double ref = std::sqrt(120.0L / 720.0L) * std::exp(-2.0L) * 2.0L * laguerre_series(5, 1, 4.0L);
    CHECK(laguerre_normalized(5, 1.0, 4.0) == doctest::Approx(double(ref)).epsilon(1e-12));
    // damped form agrees where both are finite
    CHECK(laguerre_damped(6, 1.0, 5.0) * std::sqrt(std::tgamma(7.0) / std::tgamma(8.0)) * std::sqrt(5.0) ==
          doctest::Approx(laguerre_normalized(6, 1.0, 5.0)).epsilon(1e-12));
}

TEST_CASE("laguerre_phi") {
    const std::vector<double> z0{0.0, 0.0};
    CHECK(laguerre_phi(0, 1, z0) == doctest::Approx(1.0).epsilon(1e-15));
    const std::vector<double> z{0.3, -1.2, 0.7, 2.0}, mz{-0.3, 1.2, -0.7, -2.0};
    CHECK(laguerre_phi(3, 2, z) == doctest::Approx(laguerre_phi(3, 2, mz)).epsilon(1e-15));
    const std::vector<double> z2{1.0, 0.0, 1.0, 0.0};  // |z|^2 = 2
    CHECK(laguerre_phi(1, 2, z2) == doctest::Approx(std::exp(-0.5)).epsilon(1e-13));
}

TEST_CASE("envelope_check") {
    const std::vector<double> tau{3.5, 6.0, 10.0};
    const auto rep = envelope_check(0, 0.0, tau, 0.25);
    REQUIRE(rep.regions[3].max_ratio.has_value());
    double expect = 0.0;
    for (double t : tau) expect = std::max(expect, std::exp(-0.5 * t) / std::exp(-0.25 * t));
    CHECK(*rep.regions[3].max_ratio == doctest::Approx(expect).epsilon(1e-13));
    CHECK_FALSE(rep.regions[0].max_ratio.has_value());

    const std::vector<double> empty;
    const auto none = envelope_check(5, 1.0, empty);
    for (const auto& r : none.regions) CHECK_FALSE(r.max_ratio.has_value());
    CHECK_FALSE(none.fitted_constant().has_value());

    CHECK(classify(1.0 / 6.0, 6.0) == EnvelopeRegion::Small);
    CHECK(classify(3.0, 6.0) == EnvelopeRegion::Oscillatory);
    CHECK(classify(9.0, 6.0) == EnvelopeRegion::Turning);
    CHECK(classify(9.01, 6.0) == EnvelopeRegion::Exponential);
}

TEST_CASE("envelope constant at k = 40 against k = 20") {
    const auto grid = log_grid(1e-4, 400.0, 4000);
    const auto c40 = envelope_check(40, 1.0, grid).fitted_constant();
    const auto c20 = envelope_check(20, 1.0, grid).fitted_constant();
    REQUIRE(c40.has_value());
    REQUIRE(c20.has_value());
    CHECK(*c40 / *c20 <= 2.0);
    CHECK(*c20 / *c40 <= 2.0);
}

TEST_CASE("l1_bound_integral") {
    CHECK(l1_bound_integral(0, 1).value == doctest::Approx(std::sqrt(2.0 * kPi)).epsilon(1e-9));
    CHECK(l1_bound_integral(0, 2).value == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(l1_bound_integral(0, 3).value == doctest::Approx(std::sqrt(kPi)).epsilon(1e-9));
    double lo = INFINITY, hi = 0.0;
    for (unsigned k = 10; k <= 100; k += 10) {
        const double v = l1_bound_integral(k, 2).value;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(hi / lo <= 3.0);
}
