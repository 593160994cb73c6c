#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "grushin/grid.hpp"
#include "grushin/hermite_spectral.hpp"

namespace grushin::weyl {

using cplx = std::complex<double>;

/// g(xi, eta) on R^{d1} x R^{d1}.
using SymbolFn = std::function<cplx(std::span<const double> xi, std::span<const double> eta)>;

/// Uniform trapezoid rule in each xi axis: nodes j*step, |j*step| <= half_width.
struct XiRule {
    double half_width = 0.0;
    double step = 0.0;
    std::size_t half_points() const;  // nodes with j >= 0
    Quadrature1D full_axis() const;
};

/// xi rule for phi_{k,a}-type symbols: truncation where the Gaussian factor
/// has decayed past the polynomial growth, step from the larger of the
/// aliasing bound and 6 points per phase period at max |x+y| = max_sum.
XiRule xi_rule_laguerre(unsigned k, unsigned d1, double a, double max_sum);

/// phi_{k,a}(xi, eta) = L_k^{d1-1}((|a|/2) r) e^{-(|a|/4) r}, r = |xi|^2 + |eta|^2.
double phi_ka(unsigned k, unsigned d1, double a, std::span<const double> xi, std::span<const double> eta);
SymbolFn phi_ka_symbol(unsigned k, unsigned d1, double a);

struct WeylKernel {
    double a = 1.0;
    TensorGrid grid;
    Eigen::MatrixXcd values;
    std::string source;
};

/// K(x,y) = int g(xi, y - x) e^{i(a/2) xi.(x+y)} dxi by direct tensor quadrature.
WeylKernel weyl_kernel(const SymbolFn& g, double a, const TensorGrid& grid, const XiRule& rule, std::string source);

/// F_{k,a}(x,y) = (2pi)^{-d1} |a|^{d1} K_{phi_{k,a}}(x,y). Uniform grids use a
/// tabulation over differences and sums of grid points; d1 <= 2.
spectral::ProjectionKernel projection_kernel_laguerre(
    unsigned k, double a, const TensorGrid& grid,
    spectral::ResolutionCheck check = spectral::ResolutionCheck::Enforce);

/// Samples of g on a xi tensor grid times an eta lattice {m h}, |m| < n_x per axis.
/// The induced x-grid is uniform with n_x points and step h per axis, centered at 0.
struct SampledSymbol {
    unsigned d1 = 1;
    TensorGrid xi;
    double h = 1.0;
    std::size_t n_x = 0;
    Eigen::VectorXcd values;  // index: xi_index * (2 n_x - 1)^{d1} + eta_index (row-major)

    std::size_t eta_count() const;
    static SampledSymbol from_function(const SymbolFn& g, unsigned d1, const TensorGrid& xi, double h, std::size_t n_x);
};

struct ContractionReport {
    double operator_norm = 0.0;
    double l1_norm = 0.0;
    double ratio = 0.0;
};

ContractionReport weyl_l1_contraction_check(const SampledSymbol& g, double a);

struct DiagonalSup {
    double value = 0.0;
    double radius = 0.0;  // |y| at which F(y,y) peaks
};

/// sup_{x,y} |F_{k,a}(x,y)|. The kernel is positive semidefinite so the sup is
/// attained on the diagonal; by rotation invariance it is scanned along a ray.
DiagonalSup kernel_diagonal_sup(unsigned k, double a, unsigned d1);

/// F_{k,a}(y,y) at y = (r, 0, ..., 0), Laguerre route.
double kernel_diagonal(unsigned k, double a, unsigned d1, double r);

}  // namespace grushin::weyl
