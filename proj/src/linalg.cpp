#include "grushin/linalg.hpp"

#include <cmath>
#include <random>

namespace grushin::linalg {

NormEstimate operator_norm(const Apply& A, const Apply& A_adjoint, Eigen::Index n, unsigned steps, double tol) {
    NormEstimate est;
    if (n == 0) {
        est.converged = true;
        return est;
    }
    std::mt19937_64 rng(0x5eed1234u);
    std::normal_distribution<double> g;
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = {g(rng), g(rng)};
    v.normalize();
    double prev = 0.0;
    for (unsigned it = 1; it <= steps; ++it) {
        Eigen::VectorXcd Av = A(v);
        const double s = Av.norm();
        est.value = s;
        est.iterations = it;
        if (s == 0.0) {
            est.converged = true;
            break;
        }
        if (it > 1 && std::abs(s - prev) <= tol * s) {
            est.converged = true;
            break;
        }
        prev = s;
        Eigen::VectorXcd w = A_adjoint(Av);
        const double wn = w.norm();
        if (wn == 0.0) {
            est.converged = true;
            break;
        }
        v = w / wn;
    }
    return est;
}

NormEstimate operator_norm(const Eigen::MatrixXcd& M, unsigned steps, double tol) {
    return operator_norm([&](const Eigen::VectorXcd& x) -> Eigen::VectorXcd { return M * x; },
                         [&](const Eigen::VectorXcd& x) -> Eigen::VectorXcd { return M.adjoint() * x; },
                         M.cols(), steps, tol);
}

Eigen::MatrixXcd symmetrize_weighted(const Eigen::MatrixXcd& K, const Eigen::VectorXd& w) {
    const Eigen::VectorXd s = w.array().sqrt();
    return s.asDiagonal() * K * s.asDiagonal();
}

}  // namespace grushin::linalg
