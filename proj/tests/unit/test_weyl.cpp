#include <doctest.h>

#include <cmath>
#include <numbers>

#include "grushin/hermite_spectral.hpp"
#include "grushin/weyl.hpp"

using namespace grushin;
using namespace grushin::weyl;

namespace {
const double kPi = std::numbers::pi;
}

TEST_CASE("weyl_kernel of a Gaussian symbol") {
    const auto g = uniform_cube(4.0, 17, 1);  // contains 0 at index 8
    const auto rule = xi_rule_laguerre(0, 1, 1.0, 8.0);
    const auto W = weyl_kernel(phi_ka_symbol(0, 1, 1.0), 1.0, g, rule, "phi_0");
    CHECK(W.values(8, 8).real() == doctest::Approx(2.0 * std::sqrt(kPi)).epsilon(1e-10));

    const auto Wm = weyl_kernel(phi_ka_symbol(0, 1, 1.0), -1.0, g, rule, "phi_0");
    CHECK((Wm.values - W.values.conjugate()).cwiseAbs().maxCoeff() < 1e-13);
    // even in eta: K(x,y) = conj K(y,x)
    CHECK((W.values - W.values.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("projection_kernel_laguerre") {
    const auto g = uniform_cube(6.0, 25, 1);
    const auto F = projection_kernel_laguerre(0, 1.0, g, spectral::ResolutionCheck::Pointwise);
    CHECK(F.values(12, 12).real() == doctest::Approx(1.0 / std::sqrt(kPi)).epsilon(1e-10));
    for (double a : {0.5, 3.0})
        for (unsigned k : {1u, 4u}) {
            const auto gp = spectral::policy_grid(a, k, 1);
            const auto E = spectral::projection_kernel_eigsum(k, a, gp);
            const auto L = projection_kernel_laguerre(k, a, gp);
            CHECK((E.values - L.values).cwiseAbs().maxCoeff() / E.values.cwiseAbs().maxCoeff() < 1e-6);
        }
    const auto g2 = uniform_cube(5.0, 15, 2);
    const auto E2 = spectral::projection_kernel_eigsum(2, 1.0, g2, spectral::ResolutionCheck::Pointwise);
    const auto L2 = projection_kernel_laguerre(2, 1.0, g2, spectral::ResolutionCheck::Pointwise);
    CHECK((E2.values - L2.values).cwiseAbs().maxCoeff() / E2.values.cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("diagonal sup") {
    const auto s0 = kernel_diagonal_sup(0, 1.0, 1);
    CHECK(s0.value == doctest::Approx(1.0 / std::sqrt(kPi)).epsilon(1e-8));
    CHECK(std::abs(s0.radius) < 1e-6);
    // the diagonal of the eigensum kernel is sum_nu Phi_nu(y)^2
    const std::vector<double> y{0.9};
    const double ref = std::pow(spectral::phi_scaled({{3}}, 2.0, y), 2);
    CHECK(kernel_diagonal(3, 2.0, 1, 0.9) == doctest::Approx(ref).epsilon(1e-8));
}

TEST_CASE("weyl_l1_contraction_check") {
    const auto rule = xi_rule_laguerre(0, 1, 1.0, 12.0);
    const TensorGrid xi(std::vector<Quadrature1D>{rule.full_axis()});
    const auto g = SampledSymbol::from_function(phi_ka_symbol(0, 1, 1.0), 1, xi, 0.25, 41);
    const auto rep = weyl_l1_contraction_check(g, 1.0);
    CHECK(rep.l1_norm > 0.0);
    CHECK(rep.ratio <= 1.0 + 1e-3);

    const auto zero = SampledSymbol::from_function([](auto, auto) { return cplx(0.0); }, 1, xi, 0.25, 41);
    CHECK(weyl_l1_contraction_check(zero, 1.0).operator_norm == 0.0);

    const auto bump = SampledSymbol::from_function(
        [](std::span<const double> a, std::span<const double> b) { return cplx(std::exp(-8.0 * (a[0] * a[0] + b[0] * b[0]))); },
        1, xi, 0.25, 41);
    CHECK(weyl_l1_contraction_check(bump, 1.0).ratio <= 1.0 + 1e-3);
}
