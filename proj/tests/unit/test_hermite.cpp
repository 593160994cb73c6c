#include <doctest.h>

#include <cmath>
#include <numbers>

#include "grushin/error.hpp"
#include "grushin/grid.hpp"
#include "grushin/hermite_spectral.hpp"

using namespace grushin;
using namespace grushin::spectral;

namespace {
const double kPi = std::numbers::pi;

Eigen::VectorXcd sample(const TensorGrid& g, double (*f)(double)) {
    Eigen::VectorXcd v(Eigen::Index(g.size()));
    for (std::size_t i = 0; i < g.size(); ++i) v(Eigen::Index(i)) = f(g.axes[0].nodes[i]);
    return v;
}
}  // namespace

TEST_CASE("enumerate_multiindices") {
    const auto a = enumerate_multiindices(1, 5);
    REQUIRE(a.size() == 1);
    CHECK(a[0].nu == std::vector<unsigned>{5});
    const auto b = enumerate_multiindices(2, 0);
    REQUIRE(b.size() == 1);
    CHECK(b[0].nu == std::vector<unsigned>{0, 0});
    CHECK(enumerate_multiindices(3, 2).size() == 6);
    CHECK(level_dimension(3, 2) == 6);
    for (const auto& m : enumerate_multiindices(3, 4)) CHECK(m.degree() == 4);
}

TEST_CASE("phi_scaled") {
    const std::vector<double> x0{0.0}, x00{0.0, 0.0};
    CHECK(phi_scaled({{0}}, 1.0, x0) == doctest::Approx(std::pow(kPi, -0.25)).epsilon(1e-14));
    CHECK(phi_scaled({{0, 0}}, 4.0, x00) == doctest::Approx(2.0 / std::sqrt(kPi)).epsilon(1e-14));
    CHECK_THROWS_AS(phi_scaled({{0}}, 0.0, x0), DomainError);
}

TEST_CASE("eigensum kernel closed forms") {
    const auto g = uniform_cube(8.0, 81, 1);  // contains 0 at index 40
    const auto K0 = projection_kernel_eigsum(0, 1.0, g);
    CHECK(K0.values(40, 40).real() == doctest::Approx(1.0 / std::sqrt(kPi)).epsilon(1e-14));
    const auto K1 = projection_kernel_eigsum(1, 1.0, g);
    for (Eigen::Index i : {10, 33, 52})
        for (Eigen::Index j : {5, 40, 70}) {
            const double x = g.axes[0].nodes[std::size_t(i)], y = g.axes[0].nodes[std::size_t(j)];
            const double ref = 2.0 * x * y / std::sqrt(kPi) * std::exp(-0.5 * (x * x + y * y));
            CHECK(std::abs(K1.values(i, j).real() - ref) < 1e-14);
        }
}

TEST_CASE("trace of the discrete projection is the level dimension") {
    for (unsigned d1 : {1u, 2u})
        for (unsigned k : {0u, 3u, 6u}) {
            const double a = 1.5;
            const auto g = policy_grid(a, k, d1);
            if (g.size() > 6000) continue;
            const auto K = projection_kernel_eigsum(k, a, g);
            const auto w = g.weights();
            double tr = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i) tr += K.values(Eigen::Index(i), Eigen::Index(i)).real() * w[i];
            CHECK(tr == doctest::Approx(double(level_dimension(d1, k))).epsilon(1e-9));
        }
}

TEST_CASE("apply_projection") {
    const auto g = policy_grid(1.0, 2, 1);
    const auto phi0 = sample_phi({{0}}, 1.0, g);
    const auto P0 = projection_kernel_eigsum(0, 1.0, g);
    const auto P1 = projection_kernel_eigsum(1, 1.0, g);
    CHECK((apply_projection(P0, phi0) - phi0).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(apply_projection(P1, phi0).cwiseAbs().maxCoeff() < 1e-12);

    // (e^{-x^2}, h_2) = -(2/3) sqrt(2 pi/3) / sqrt(8 sqrt(pi))
    const double c = -(2.0 / 3.0) * std::sqrt(2.0 * kPi / 3.0) / std::sqrt(8.0 * std::sqrt(kPi));
    const auto P2 = projection_kernel_eigsum(2, 1.0, g);
    const auto out = apply_projection(P2, sample(g, [](double x) { return std::exp(-x * x); }));
    const auto h2 = sample_phi({{2}}, 1.0, g);
    CHECK((out - c * h2).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("projection operator agrees with the dense kernel") {
    const auto g = uniform_cube(7.0, 57, 2);
    const ProjectionOperator P(4, 1.0, g);
    const auto K = projection_kernel_eigsum(4, 1.0, g);
    Eigen::VectorXcd v(Eigen::Index(g.size()));
    std::vector<double> pt(2);
    for (std::size_t i = 0; i < g.size(); ++i) {
        g.point(i, pt.data());
        v(Eigen::Index(i)) = std::exp(-0.3 * (pt[0] - 1.0) * (pt[0] - 1.0) - 0.2 * pt[1] * pt[1]);
    }
    CHECK((P.apply(v) - apply_projection(K, v)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("hermite_apply eigenrelations") {
    const auto g = policy_grid(1.0, 4, 1);
    const auto phi0 = sample_phi({{0}}, 1.0, g);
    const auto r0 = hermite_apply(1.0, g, phi0, 0);
    CHECK((r0.values - phi0).cwiseAbs().maxCoeff() < 1e-12);

    const auto g2 = policy_grid(2.5, 6, 2);
    const MultiIndex nu{{2, 1}};
    const auto phi = sample_phi(nu, 2.5, g2);
    const auto r = hermite_apply(2.5, g2, phi, 6);
    CHECK((r.values - (2.0 * 3 + 2) * 2.5 * phi).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(r.tail_norm < 1e-10);
}

TEST_CASE("hermite_apply against finite differences for e^{-x^2}") {
    const auto g = uniform_cube(10.0, 2001, 1);
    const auto phi = sample(g, [](double x) { return std::exp(-x * x); });
    const auto spec = hermite_apply(1.0, g, phi, 20);
    const auto fd = hermite_apply_fd(1.0, g, phi);
    double num = 0.0, den = 0.0;
    for (Eigen::Index i = 1; i + 1 < fd.size(); ++i) {
        num += std::norm(spec.values(i) - fd(i));
        den += std::norm(fd(i));
    }
    CHECK(std::sqrt(num / den) < 1e-4);
}

TEST_CASE("sampling policy is enforced") {
    const auto coarse = uniform_cube(3.0, 9, 1);
    CHECK(resolution_violation(coarse, 1.0, 10).has_value());
    CHECK_THROWS_AS(projection_kernel_eigsum(10, 1.0, coarse), ResolutionError);
    CHECK_FALSE(resolution_violation(policy_grid(1.0, 10, 1), 1.0, 10).has_value());
    CHECK_THROWS_AS(projection_kernel_eigsum(0, 0.0, coarse), DomainError);
}
