#pragma once

#include <cstddef>
#include <vector>

namespace grushin {

enum class QuadratureKind { UniformTrapezoid, GaussHermite, GaussLegendre };

/// Nodes and weights for integrating plain functions over an interval or R.
/// Gauss-Hermite rules carry weight-adjusted weights w_i e^{x_i^2}.
struct Quadrature1D {
    std::vector<double> nodes;
    std::vector<double> weights;
    QuadratureKind kind = QuadratureKind::UniformTrapezoid;

    std::size_t size() const { return nodes.size(); }

    // Throws DomainError unless nodes increase strictly and weights are positive.
    void validate() const;

    /// n-point trapezoid rule on [lo, hi] (half weights at the ends).
    static Quadrature1D uniform(double lo, double hi, std::size_t n);
    /// Symmetric grid on [-half_width, half_width].
    static Quadrature1D centered(double half_width, std::size_t n) {
        return uniform(-half_width, half_width, n);
    }
};

struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;         // for the weight e^{-x^2}
    std::vector<double> scaled_weights;  // weights[i] * exp(nodes[i]^2), computed without overflow
};

GaussHermiteRule gauss_hermite(std::size_t n);

/// Gauss-Legendre on [lo, hi].
Quadrature1D gauss_legendre(std::size_t n, double lo = -1.0, double hi = 1.0);

/// Composite Gauss-Legendre with `panels` equal panels of `order` points each.
Quadrature1D composite_gauss_legendre(double lo, double hi, std::size_t panels, std::size_t order = 16);

/// Append nodes/weights of `q` to `into` (no sorting).
void append_rule(Quadrature1D& into, const Quadrature1D& q);

}  // namespace grushin
