#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "grushin/error.hpp"
#include "grushin/io.hpp"
#include "grushin/knapp.hpp"
#include "grushin/norms.hpp"

using namespace grushin;
using namespace grushin::knapp;

TEST_CASE("quintic cutoff") {
    for (unsigned d1 : {1u, 2u, 3u}) {
        const auto c = QuinticCutoff::for_dimension(d1);
        CHECK(c(1.0 / d1) == 1.0);
        CHECK(c(0.9 * c.s0) == 0.0);
        CHECK(c(1.01 * c.s3) == 0.0);
        // C^2 across the joins: the one-sided second differences differ by O(h),
        // where a jump in the second derivative would leave a gap independent of h
        auto gap = [&](double s, double h) {
            const double l = (c(s) - 2 * c(s - h) + c(s - 2 * h)) / (h * h);
            const double r = (c(s + 2 * h) - 2 * c(s + h) + c(s)) / (h * h);
            return std::abs(l - r);
        };
        for (double s : {c.s0, c.s1, c.s2, c.s3}) {
            const double h = 1e-3 * s;
            CHECK(gap(s, h / 8) < 0.2 * gap(s, h));
        }
    }
}

TEST_CASE("route consistency after calibrating n") {
    const auto in = KnappInputs::standard(1, 1);
    const auto g = make_field_grid(1, 7.0, 29, 1, 80.0, 160);
    const auto cal = calibrate_n(in, g, {0.5, 1.0});
    CHECK(cal.n == 0.5);
    CHECK(cal.residual < 1e-6);
    CHECK(cal.constant == doctest::Approx(std::sqrt(2.0 * M_PI)).epsilon(1e-6));
}

TEST_CASE("direct and spectral constructions agree") {
    const auto in = KnappInputs::standard(1, 1);
    const auto g = make_field_grid(1, 7.0, 29, 1, 80.0, 160);
    const auto a = field_direct(in, g);
    const auto b = field_spectral(in, g);
    double n = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) n = std::max(n, std::abs(a.values[i] - b.values[i]));
    CHECK(n / a.max_abs() < 1e-8);
}

TEST_CASE("duality demo") {
    const auto t = make_field_grid(1, 1.0, 3, 2, 16.0, 32).t;
    std::vector<cplx> h(32 * 32);
    for (std::size_t i = 0; i < 32; ++i)
        for (std::size_t j = 0; j < 32; ++j) {
            const double a = t[0].node(i), b = t[1].node(j);
            h[i * 32 + j] = std::exp(-(a * a + b * b) / 8.0);
        }
    const auto d = duality_demo(t, h, 1.0, 1.0);
    CHECK(std::isfinite(d.ratio));
    CHECK(d.ratio > 0.0);
    const std::vector<cplx> z(h.size());
    CHECK(duality_demo(t, z, 1.0, 1.0).conv_norm == 0.0);
    for (double r : {0.5, 2.0})
        for (double tau : {0.3, 4.0})
            CHECK(std::abs(sphere_measure_ft_radius(2, r, tau, 64) - r * sphere_measure_ft(2, r * tau)) < 1e-10);
}

TEST_CASE("field and kernel files round trip") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "grushin_io_test";
    fs::create_directories(dir);
    const auto g = make_field_grid(2, 3.0, 7, 1, 4.0, 8);
    const auto f = SampledField::from_function(g, [](std::span<const double> x, std::span<const double> t) {
        return cplx(x[0] + 2 * x[1], t[0]);
    });
    const auto fp = (dir / "f.grsf").string();
    io::write_field(fp, f);
    const auto f2 = io::read_field(fp);
    CHECK(f2.values == f.values);
    CHECK(f2.grid.x[1].step == f.grid.x[1].step);
    CHECK(fs::exists(fp + ".json"));

    const auto K = spectral::projection_kernel_eigsum(2, 1.5, spectral::policy_grid(1.5, 2, 1));
    const auto kp = (dir / "k.grkn").string();
    io::write_kernel(kp, K);
    const auto K2 = io::read_kernel(kp);
    CHECK(K2.k == 2);
    CHECK(K2.a == 1.5);
    CHECK(K2.values == K.values);
    CHECK(K2.grid.same_as(K.grid));

    CHECK_THROWS_AS(io::read_kernel(fp), Error);
    std::ofstream(dir / "short.grsf") << "GRSF";
    CHECK_THROWS_AS(io::read_field((dir / "short.grsf").string()), Error);
    fs::remove_all(dir);
}
