#include "grushin/quadrature.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "grushin/error.hpp"
#include "grushin/specfun.hpp"

namespace grushin {

void Quadrature1D::validate() const {
    if (nodes.size() != weights.size()) throw DomainError("quadrature: nodes/weights length mismatch");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (!(weights[i] > 0.0)) throw DomainError("quadrature: weights must be positive");
        if (i > 0 && !(nodes[i] > nodes[i - 1])) throw DomainError("quadrature: nodes must increase strictly");
    }
}

Quadrature1D Quadrature1D::uniform(double lo, double hi, std::size_t n) {
    if (n < 2 || !(hi > lo)) throw DomainError("uniform quadrature needs n >= 2 and hi > lo");
    Quadrature1D q;
    q.kind = QuadratureKind::UniformTrapezoid;
    q.nodes.resize(n);
    q.weights.assign(n, (hi - lo) / double(n - 1));
    const double h = (hi - lo) / double(n - 1);
    for (std::size_t i = 0; i < n; ++i) q.nodes[i] = lo + h * double(i);
    q.nodes.back() = hi;
    q.weights.front() *= 0.5;
    q.weights.back() *= 0.5;
    return q;
}

namespace {

// Eigenvalues of a symmetric tridiagonal Jacobi matrix with zero diagonal.
Eigen::VectorXd jacobi_nodes(const Eigen::VectorXd& offdiag) {
    const Eigen::Index n = offdiag.size() + 1;
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, offdiag, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

// Normalized h_{n-1}, h_n at x (with the Gaussian factor dropped, i.e. the
// orthonormal polynomials for e^{-x^2}); rescaled to avoid overflow.
void hermite_pair(std::size_t n, double x, double& pn, double& pnm1) {
    double prev = 0.0, cur = std::pow(M_PI, -0.25);
    for (std::size_t k = 0; k < n; ++k) {
        double next = x * std::sqrt(2.0 / double(k + 1)) * cur - std::sqrt(double(k) / double(k + 1)) * prev;
        prev = cur;
        cur = next;
        if (std::abs(cur) > 1e200) { cur *= 1e-200; prev *= 1e-200; }
    }
    pn = cur;
    pnm1 = prev;
}

}  // namespace

GaussHermiteRule gauss_hermite(std::size_t n) {
    if (n == 0) throw DomainError("gauss_hermite: n must be positive");
    GaussHermiteRule r;
    r.nodes.resize(n);
    if (n == 1) {
        r.nodes[0] = 0.0;
    } else {
        Eigen::VectorXd off(n - 1);
        for (std::size_t k = 1; k < n; ++k) off[k - 1] = std::sqrt(double(k) / 2.0);
        Eigen::VectorXd x = jacobi_nodes(off);
        for (std::size_t i = 0; i < n; ++i) {
            double xi = x[i];
            // Newton polish on the orthonormal polynomial; its derivative is
            // sqrt(2n) p_{n-1}.
            for (int it = 0; it < 3; ++it) {
                double pn, pnm1;
                hermite_pair(n, xi, pn, pnm1);
                double d = std::sqrt(2.0 * double(n)) * pnm1;
                if (d == 0.0) break;
                double step = pn / d;
                xi -= step;
                if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(xi))) break;
            }
            r.nodes[i] = xi;
        }
        for (std::size_t i = 0; i < n / 2; ++i) {
            double s = 0.5 * (r.nodes[n - 1 - i] - r.nodes[i]);
            r.nodes[i] = -s;
            r.nodes[n - 1 - i] = s;
        }
        if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    }
    r.weights.resize(n);
    r.scaled_weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        Eigen::MatrixXd h = specfun::hermite_batch(unsigned(n - 1), std::span<const double>(&r.nodes[i], 1));
        double s = h.col(0).squaredNorm();
        r.scaled_weights[i] = 1.0 / s;
        r.weights[i] = r.scaled_weights[i] * std::exp(-r.nodes[i] * r.nodes[i]);
    }
    return r;
}

Quadrature1D gauss_legendre(std::size_t n, double lo, double hi) {
    if (n == 0) throw DomainError("gauss_legendre: n must be positive");
    Quadrature1D q;
    q.kind = QuadratureKind::GaussLegendre;
    std::vector<double> x(n), w(n);
    if (n == 1) {
        x[0] = 0.0;
        w[0] = 2.0;
    } else {
        Eigen::VectorXd off(n - 1);
        for (std::size_t k = 1; k < n; ++k) off[k - 1] = double(k) / std::sqrt(4.0 * double(k * k) - 1.0);
        Eigen::VectorXd ev = jacobi_nodes(off);
        for (std::size_t i = 0; i < n; ++i) {
            double xi = ev[i], dp = 1.0;
            for (int it = 0; it < 4; ++it) {
                double p0 = 1.0, p1 = xi;
                for (std::size_t k = 1; k < n; ++k) {
                    double p2 = ((2.0 * k + 1.0) * xi * p1 - double(k) * p0) / double(k + 1);
                    p0 = p1;
                    p1 = p2;
                }
                dp = double(n) * (xi * p1 - p0) / (xi * xi - 1.0);
                double step = p1 / dp;
                xi -= step;
                if (std::abs(step) < 1e-16) break;
            }
            double p0 = 1.0, p1 = xi;
            for (std::size_t k = 1; k < n; ++k) {
                double p2 = ((2.0 * k + 1.0) * xi * p1 - double(k) * p0) / double(k + 1);
                p0 = p1;
                p1 = p2;
            }
            dp = double(n) * (xi * p1 - p0) / (xi * xi - 1.0);
            x[i] = xi;
            w[i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
        }
        for (std::size_t i = 0; i < n / 2; ++i) {
            double s = 0.5 * (x[n - 1 - i] - x[i]);
            double ws = 0.5 * (w[i] + w[n - 1 - i]);
            x[i] = -s;
            x[n - 1 - i] = s;
            w[i] = w[n - 1 - i] = ws;
        }
        if (n % 2 == 1) x[n / 2] = 0.0;
    }
    const double c = 0.5 * (hi + lo), h = 0.5 * (hi - lo);
    q.nodes.resize(n);
    q.weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        q.nodes[i] = c + h * x[i];
        q.weights[i] = h * w[i];
    }
    return q;
}

Quadrature1D composite_gauss_legendre(double lo, double hi, std::size_t panels, std::size_t order) {
    if (panels == 0) throw DomainError("composite_gauss_legendre: panels must be positive");
    Quadrature1D out;
    out.kind = QuadratureKind::GaussLegendre;
    const Quadrature1D ref = gauss_legendre(order);
    const double len = (hi - lo) / double(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        const double a = lo + len * double(p);
        for (std::size_t i = 0; i < order; ++i) {
            out.nodes.push_back(a + 0.5 * len * (ref.nodes[i] + 1.0));
            out.weights.push_back(0.5 * len * ref.weights[i]);
        }
    }
    return out;
}

void append_rule(Quadrature1D& into, const Quadrature1D& q) {
    into.nodes.insert(into.nodes.end(), q.nodes.begin(), q.nodes.end());
    into.weights.insert(into.weights.end(), q.weights.begin(), q.weights.end());
}

}  // namespace grushin
