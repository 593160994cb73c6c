#include "grushin/grid.hpp"

#include <cmath>

namespace grushin {

std::size_t TensorGrid::size() const {
    if (axes.empty()) return 0;
    std::size_t n = 1;
    for (const auto& a : axes) n *= a.size();
    return n;
}

void TensorGrid::unravel(std::size_t i, std::size_t* idx) const {
    for (std::size_t d = axes.size(); d-- > 0;) {
        const std::size_t n = axes[d].size();
        idx[d] = i % n;
        i /= n;
    }
}

void TensorGrid::point(std::size_t i, double* out) const {
    for (std::size_t d = axes.size(); d-- > 0;) {
        const std::size_t n = axes[d].size();
        out[d] = axes[d].nodes[i % n];
        i /= n;
    }
}

std::vector<double> TensorGrid::weights() const {
    std::vector<double> w(size(), 1.0);
    std::vector<std::size_t> idx(axes.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        unravel(i, idx.data());
        for (std::size_t d = 0; d < axes.size(); ++d) w[i] *= axes[d].weights[idx[d]];
    }
    return w;
}

std::vector<double> TensorGrid::coordinates() const {
    const std::size_t n = size(), dm = axes.size();
    std::vector<double> c(dm * n);
    std::vector<double> p(dm);
    for (std::size_t i = 0; i < n; ++i) {
        point(i, p.data());
        for (std::size_t d = 0; d < dm; ++d) c[d * n + i] = p[d];
    }
    return c;
}

bool TensorGrid::same_as(const TensorGrid& other, double tol) const {
    if (axes.size() != other.axes.size()) return false;
    for (std::size_t d = 0; d < axes.size(); ++d) {
        const auto& a = axes[d];
        const auto& b = other.axes[d];
        if (a.size() != b.size()) return false;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (std::abs(a.nodes[i] - b.nodes[i]) > tol || std::abs(a.weights[i] - b.weights[i]) > tol) return false;
    }
    return true;
}

TensorGrid uniform_cube(double half_width, std::size_t n, unsigned dim) {
    return TensorGrid::cube(Quadrature1D::centered(half_width, n), dim);
}

}  // namespace grushin
