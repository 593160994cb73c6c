#pragma once

#include <functional>

#include <Eigen/Dense>

namespace grushin::linalg {

using Apply = std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>;

struct NormEstimate {
    double value = 0.0;
    unsigned iterations = 0;
    bool converged = false;
};

/// Largest singular value of A by power iteration on A^H A. The start vector
/// is a fixed pseudo-random vector, so results are reproducible.
NormEstimate operator_norm(const Apply& A, const Apply& A_adjoint, Eigen::Index n, unsigned steps = 50,
                           double tol = 1e-6);

/// Same for an explicit matrix.
NormEstimate operator_norm(const Eigen::MatrixXcd& M, unsigned steps = 50, double tol = 1e-6);

/// Symmetric weighting S = W^{1/2} K W^{1/2}: the norm of K W in the W-inner product.
Eigen::MatrixXcd symmetrize_weighted(const Eigen::MatrixXcd& K, const Eigen::VectorXd& w);

}  // namespace grushin::linalg
