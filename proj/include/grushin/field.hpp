#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "grushin/grid.hpp"

namespace grushin {

using cplx = std::complex<double>;

/// Uniform axis: node i = start + i*step.
struct UniformAxis {
    std::size_t n = 0;
    double start = 0.0;
    double step = 1.0;

    double node(std::size_t i) const { return start + double(i) * step; }
    double last() const { return node(n - 1); }
    double max_abs() const;
    double period() const { return double(n) * step; }
    /// n points on [-half_width, half_width] (both ends included).
    static UniformAxis centered(double half_width, std::size_t n);
    /// n points with spacing period/n starting at -period/2 (periodic t-axis).
    static UniformAxis periodic(double period, std::size_t n);
    Quadrature1D trapezoid() const;
};

struct FieldGrid {
    std::vector<UniformAxis> x;  // d1 axes, trapezoid weights
    std::vector<UniformAxis> t;  // d2 periodic axes, weight = step

    unsigned d1() const { return unsigned(x.size()); }
    unsigned d2() const { return unsigned(t.size()); }
    std::size_t size_x() const;
    std::size_t size_t_() const;
    TensorGrid x_grid() const;
    std::vector<double> x_weights() const;
    double t_cell() const;
    /// Coordinates of t-point j (row-major, last axis fastest).
    void t_point(std::size_t j, double* out) const;

    /// Dilation (x, t) -> (x/sqrt(s), t/s): the grid on which f(sqrt(s) x, s t) has the same samples.
    FieldGrid dilated(double s) const;
};

/// Symmetric field grid: d1 x-axes on [-X, X] with nx points, d2 periodic t-axes of period 2T with nt points.
FieldGrid make_field_grid(unsigned d1, double X, std::size_t nx, unsigned d2, double T, std::size_t nt);

/// Complex samples f(x, t); index = ix * size_t_() + it.
struct SampledField {
    FieldGrid grid;
    std::vector<cplx> values;

    SampledField() = default;
    explicit SampledField(FieldGrid g) : grid(std::move(g)), values(grid.size_x() * grid.size_t_()) {}

    unsigned d1() const { return grid.d1(); }
    unsigned d2() const { return grid.d2(); }
    std::size_t nx() const { return grid.size_x(); }
    std::size_t nt() const { return grid.size_t_(); }
    cplx& at(std::size_t ix, std::size_t it) { return values[ix * nt() + it]; }
    const cplx& at(std::size_t ix, std::size_t it) const { return values[ix * nt() + it]; }

    double max_abs() const;
    /// Largest |f| on the outermost layer of any x- or t-axis.
    double boundary_max() const;
    /// Even t point counts, matching sizes. Throws DomainError.
    void check_shape() const;
    /// Throws ResolutionError if boundary_max() > tol * max_abs().
    void check_support(double tol) const;

    static SampledField from_function(const FieldGrid& g,
                                      const std::function<cplx(std::span<const double>, std::span<const double>)>& f);
};

/// f^lambda on the discrete dual grid: lambda_m = (m - n/2) * 2 pi/(n dt) per axis.
struct PartialSpectrum {
    FieldGrid grid;                  // the originating field grid
    std::vector<UniformAxis> lambda; // dual axes
    std::vector<cplx> values;        // index = ix * (prod n) + im
};

PartialSpectrum partial_fourier_t(const SampledField& f, double support_tol = 1e-8);
SampledField inverse_partial_fourier_t(const PartialSpectrum& s);
/// Same, reusing the spectrum's storage.
SampledField inverse_partial_fourier_t(PartialSpectrum&& s);

/// Quadrature on S^{d2-1}, points stored as 3-vectors (unused components 0).
struct SphereRule {
    unsigned d2 = 1;
    unsigned order = 0;
    std::vector<std::array<double, 3>> points;
    std::vector<double> weights;
    std::size_t size() const { return points.size(); }
};

/// d2 = 1: {-1, +1}. d2 = 2: order+1 equispaced points. d2 = 3: Gauss-Legendre
/// in cos(theta) x equispaced azimuth, exact for harmonics of degree <= order.
SphereRule sphere_rule(unsigned d2, unsigned order);

/// Surface measure |S^{d2-1}|.
double sphere_area(unsigned d2);

/// Fourier transform of the unit-sphere measure, int_S e^{-i r e.w} dsigma(e), |w| = 1.
double sphere_measure_ft(unsigned d2, double r);

}  // namespace grushin
