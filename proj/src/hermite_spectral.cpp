#include "grushin/hermite_spectral.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "grushin/error.hpp"
#include "grushin/specfun.hpp"

namespace grushin::spectral {

unsigned MultiIndex::degree() const {
    unsigned s = 0;
    for (unsigned v : nu) s += v;
    return s;
}

std::vector<MultiIndex> enumerate_multiindices(unsigned d1, unsigned k) {
    if (d1 == 0) throw DomainError("enumerate_multiindices: d1 must be positive");
    std::vector<MultiIndex> out;
    std::vector<unsigned> cur(d1, 0);
    std::function<void(unsigned, unsigned)> rec = [&](unsigned axis, unsigned left) {
        if (axis + 1 == d1) {
            cur[axis] = left;
            out.push_back(MultiIndex{cur});
            return;
        }
        for (unsigned c = 0; c <= left; ++c) {
            cur[axis] = c;
            rec(axis + 1, left - c);
        }
    };
    rec(0, k);
    return out;
}

std::size_t level_dimension(unsigned d1, unsigned k) {
    // binomial(k + d1 - 1, d1 - 1), exact in integers for the sizes used here
    std::size_t r = 1;
    for (unsigned i = 1; i < d1; ++i) r = r * (k + i) / i;
    return r;
}

double phi_scaled(const MultiIndex& nu, double a, std::span<const double> x) {
    if (a == 0.0) throw DomainError("phi_scaled: scale a must be nonzero");
    if (x.size() != nu.nu.size()) throw DomainError("phi_scaled: dimension mismatch");
    const double s = std::sqrt(std::abs(a));
    double v = std::pow(std::abs(a), 0.25 * double(x.size()));
    for (std::size_t j = 0; j < x.size(); ++j) v *= specfun::hermite_eval(nu.nu[j], s * x[j]);
    return v;
}

ScaledBasis::ScaledBasis(double a, const TensorGrid& grid, unsigned max_level)
    : a_(a), K_(max_level), grid_(grid) {
    if (a == 0.0) throw DomainError("ScaledBasis: scale a must be nonzero");
    const double s = std::sqrt(std::abs(a)), amp = std::pow(std::abs(a), 0.25);
    for (const auto& axis : grid_.axes) {
        std::vector<double> u(axis.nodes.size());
        for (std::size_t i = 0; i < u.size(); ++i) u[i] = s * axis.nodes[i];
        tables_.push_back(amp * specfun::hermite_batch(K_, u));
    }
}

Eigen::MatrixXd ScaledBasis::level_matrix(unsigned k) const {
    if (k > K_) throw DomainError("ScaledBasis: level above the cached maximum");
    const auto idx = enumerate_multiindices(dim(), k);
    const std::size_t n = grid_.size();
    const unsigned d = dim();
    Eigen::MatrixXd B(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(idx.size()));
    std::vector<std::size_t> ii(d);
    for (std::size_t p = 0; p < n; ++p) {
        grid_.unravel(p, ii.data());
        for (std::size_t c = 0; c < idx.size(); ++c) {
            double v = 1.0;
            for (unsigned j = 0; j < d; ++j) v *= tables_[j](idx[c].nu[j], Eigen::Index(ii[j]));
            B(Eigen::Index(p), Eigen::Index(c)) = v;
        }
    }
    return B;
}

std::string to_string(KernelRoute r) { return r == KernelRoute::Eigensum ? "eigensum" : "laguerre"; }

GridRequirement grid_requirement(double a, unsigned K, unsigned d1) {
    if (a == 0.0) throw DomainError("grid_requirement: scale a must be nonzero");
    const double aa = std::abs(a), lev = 2.0 * K + d1;
    GridRequirement r;
    r.min_half_width = std::sqrt((lev + 4.0) / aa);
    // N >= 8 X sqrt(|a| lev)/pi with N ~ 2X/h gives h <= pi/(4 sqrt(|a| lev))
    r.max_spacing = M_PI / (4.0 * std::sqrt(aa * lev));
    return r;
}

std::optional<std::string> resolution_violation(const TensorGrid& grid, double a, unsigned K) {
    const GridRequirement req = grid_requirement(a, K, grid.dim());
    const double lev = 2.0 * K + grid.dim();
    for (unsigned d = 0; d < grid.dim(); ++d) {
        const auto& ax = grid.axes[d];
        if (ax.size() < 2) return "axis " + std::to_string(d) + " has fewer than two nodes";
        const double X = std::min(-ax.nodes.front(), ax.nodes.back());
        std::ostringstream os;
        if (X < req.min_half_width) {
            os << "extent: axis " << d << " half width " << X << " < sqrt((2K+d1+4)/|a|) = " << req.min_half_width;
            return os.str();
        }
        if (ax.kind == QuadratureKind::UniformTrapezoid) {
            const double need = 8.0 * X * std::sqrt(std::abs(a) * lev) / M_PI;
            if (double(ax.size()) < need) {
                os << "spacing: axis " << d << " has N = " << ax.size() << " < 8 X sqrt(|a|(2K+d1))/pi = " << need;
                return os.str();
            }
        }
    }
    return std::nullopt;
}

TensorGrid policy_grid(double a, unsigned K, unsigned d1, double margin) {
    const GridRequirement req = grid_requirement(a, K, d1);
    const double aa = std::abs(a), lev = 2.0 * K + d1;
    const double X = std::max((std::sqrt(lev) + margin) / std::sqrt(aa), req.min_half_width);
    // the trapezoid error for a Gaussian is ~exp(-pi^2/(|a| h^2)); for 2K+d1 < 3 the
    // policy spacing leaves it near 1e-8, so sample at least as finely as 2K+d1 = 3
    std::size_t n = std::size_t(std::ceil(8.0 * X * std::sqrt(aa * std::max(lev, 3.0)) / M_PI)) + 1;
    n = std::max<std::size_t>(n, 16);
    return uniform_cube(X, n, d1);
}

namespace {

void require_resolved(const TensorGrid& grid, double a, unsigned k, ResolutionCheck check) {
    if (check == ResolutionCheck::Pointwise) return;
    if (auto v = resolution_violation(grid, a, k)) throw ResolutionError("grid does not resolve level " + std::to_string(k) + ": " + *v);
}

constexpr std::size_t kMaxDenseKernelPoints = 6000;

}  // namespace

ProjectionKernel projection_kernel_eigsum(unsigned k, double a, const TensorGrid& grid, ResolutionCheck check) {
    if (a == 0.0) throw DomainError("projection_kernel_eigsum: scale a must be nonzero");
    require_resolved(grid, a, k, check);
    if (grid.size() > kMaxDenseKernelPoints)
        throw DomainError("projection_kernel_eigsum: grid too large for a dense kernel; use ProjectionOperator");
    ScaledBasis basis(a, grid, k);
    const Eigen::MatrixXd B = basis.level_matrix(k);
    ProjectionKernel K;
    K.k = k;
    K.a = a;
    K.grid = grid;
    K.route = KernelRoute::Eigensum;
    K.values = (B * B.transpose()).cast<cplx>();
    return K;
}

Eigen::VectorXcd apply_projection(const ProjectionKernel& kernel, const Eigen::VectorXcd& phi) {
    if (std::size_t(phi.size()) != kernel.grid.size())
        throw GridMismatch("apply_projection: samples do not match the kernel grid");
    const auto w = kernel.grid.weights();
    Eigen::VectorXcd wp(phi.size());
    for (Eigen::Index i = 0; i < phi.size(); ++i) wp[i] = w[std::size_t(i)] * phi[i];
    return kernel.values * wp;
}

ProjectionOperator::ProjectionOperator(unsigned k, double a, const TensorGrid& grid, ResolutionCheck check)
    : ProjectionOperator((require_resolved(grid, a, k, check), ScaledBasis(a, grid, k)), k) {}

ProjectionOperator::ProjectionOperator(const ScaledBasis& basis, unsigned k) : k_(k), B_(basis.level_matrix(k)) {
    const auto w = basis.grid().weights();
    w_ = Eigen::Map<const Eigen::VectorXd>(w.data(), Eigen::Index(w.size()));
}

Eigen::VectorXcd ProjectionOperator::coefficients(const Eigen::VectorXcd& phi) const {
    if (phi.size() != B_.rows()) throw GridMismatch("ProjectionOperator: samples do not match the grid");
    return B_.transpose().cast<cplx>() * (w_.cast<cplx>().array() * phi.array()).matrix();
}

Eigen::VectorXcd ProjectionOperator::apply(const Eigen::VectorXcd& phi) const {
    return B_.cast<cplx>() * coefficients(phi);
}

Eigen::MatrixXd ProjectionOperator::weighted_basis() const { return w_.array().sqrt().matrix().asDiagonal() * B_; }

HermiteApplyResult hermite_apply(double a, const TensorGrid& grid, const Eigen::VectorXcd& phi, unsigned K_max) {
    if (a == 0.0) throw DomainError("hermite_apply: scale a must be nonzero");
    if (std::size_t(phi.size()) != grid.size()) throw GridMismatch("hermite_apply: samples do not match the grid");
    ScaledBasis basis(a, grid, K_max);
    const auto w = grid.weights();
    HermiteApplyResult r;
    r.values = Eigen::VectorXcd::Zero(phi.size());
    Eigen::VectorXcd partial = Eigen::VectorXcd::Zero(phi.size());
    for (unsigned k = 0; k <= K_max; ++k) {
        ProjectionOperator P(basis, k);
        Eigen::VectorXcd pk = P.apply(phi);
        r.level_norms.push_back(weighted_norm(pk, w));
        r.values += ((2.0 * k + grid.dim()) * std::abs(a)) * pk;
        partial += pk;
    }
    r.tail_norm = weighted_norm(phi - partial, w);
    r.input_norm = weighted_norm(phi, w);
    return r;
}

Eigen::VectorXcd hermite_apply_fd(double a, const TensorGrid& grid, const Eigen::VectorXcd& phi) {
    const unsigned d = grid.dim();
    const std::size_t n = grid.size();
    if (std::size_t(phi.size()) != n) throw GridMismatch("hermite_apply_fd: samples do not match the grid");
    std::vector<std::size_t> stride(d), size(d);
    std::vector<double> h(d);
    std::size_t s = 1;
    for (unsigned j = d; j-- > 0;) {
        stride[j] = s;
        size[j] = grid.axes[j].size();
        s *= size[j];
        h[j] = grid.axes[j].nodes[1] - grid.axes[j].nodes[0];
    }
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(phi.size());
    std::vector<std::size_t> ii(d);
    std::vector<double> x(d);
    for (std::size_t p = 0; p < n; ++p) {
        grid.unravel(p, ii.data());
        bool interior = true;
        for (unsigned j = 0; j < d; ++j) interior = interior && ii[j] > 0 && ii[j] + 1 < size[j];
        if (!interior) continue;
        grid.point(p, x.data());
        cplx lap = 0.0;
        double r2 = 0.0;
        for (unsigned j = 0; j < d; ++j) {
            lap += (phi[p + stride[j]] - 2.0 * phi[p] + phi[p - stride[j]]) / (h[j] * h[j]);
            r2 += x[j] * x[j];
        }
        out[p] = -lap + a * a * r2 * phi[p];
    }
    return out;
}

Eigen::VectorXcd sample_phi(const MultiIndex& nu, double a, const TensorGrid& grid) {
    Eigen::VectorXcd v(Eigen::Index(grid.size()));
    std::vector<double> x(grid.dim());
    for (std::size_t p = 0; p < grid.size(); ++p) {
        grid.point(p, x.data());
        v[Eigen::Index(p)] = phi_scaled(nu, a, x);
    }
    return v;
}

double weighted_norm(const Eigen::VectorXcd& v, const std::vector<double>& w) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) s += w[std::size_t(i)] * std::norm(v[i]);
    return std::sqrt(s);
}

}  // namespace grushin::spectral
