#pragma once

#include <cstddef>
#include <vector>

#include "grushin/quadrature.hpp"

namespace grushin {

/// Tensor product of 1-D rules; points are flattened row-major (last axis fastest).
struct TensorGrid {
    std::vector<Quadrature1D> axes;

    TensorGrid() = default;
    explicit TensorGrid(std::vector<Quadrature1D> a) : axes(std::move(a)) {}
    static TensorGrid cube(const Quadrature1D& axis, unsigned dim) {
        return TensorGrid(std::vector<Quadrature1D>(dim, axis));
    }

    unsigned dim() const { return unsigned(axes.size()); }
    std::size_t size() const;
    std::vector<double> weights() const;
    /// Coordinates of flattened point i written into out[0..dim).
    void point(std::size_t i, double* out) const;
    /// dim x size() matrix of coordinates, row-major by axis.
    std::vector<double> coordinates() const;
    /// Per-axis multi-index of flattened point i.
    void unravel(std::size_t i, std::size_t* idx) const;

    bool same_as(const TensorGrid& other, double tol = 0.0) const;
};

/// Uniform grid on [-half_width, half_width], n points per axis.
TensorGrid uniform_cube(double half_width, std::size_t n, unsigned dim);

}  // namespace grushin
