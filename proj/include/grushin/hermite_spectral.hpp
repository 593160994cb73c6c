#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "grushin/grid.hpp"

namespace grushin::spectral {

using cplx = std::complex<double>;

struct MultiIndex {
    std::vector<unsigned> nu;
    unsigned degree() const;
    bool operator==(const MultiIndex&) const = default;
};

/// All nu in N^{d1} with |nu| = k, lexicographic.
std::vector<MultiIndex> enumerate_multiindices(unsigned d1, unsigned k);

/// binomial(k + d1 - 1, d1 - 1)
std::size_t level_dimension(unsigned d1, unsigned k);

/// |a|^{d1/4} prod_j h_{nu_j}(sqrt|a| x_j), unit norm in L2(R^{d1}).
double phi_scaled(const MultiIndex& nu, double a, std::span<const double> x);

/// Per-axis tables |a|^{1/4} h_m(sqrt|a| x_i), m <= K, for a tensor grid.
class ScaledBasis {
public:
    ScaledBasis(double a, const TensorGrid& grid, unsigned max_level);

    double scale() const { return a_; }
    unsigned dim() const { return grid_.dim(); }
    unsigned max_level() const { return K_; }
    const TensorGrid& grid() const { return grid_; }
    const Eigen::MatrixXd& axis_table(unsigned axis) const { return tables_[axis]; }

    /// grid.size() x level_dimension(d1,k); columns follow enumerate_multiindices.
    Eigen::MatrixXd level_matrix(unsigned k) const;

private:
    double a_;
    unsigned K_;
    TensorGrid grid_;
    std::vector<Eigen::MatrixXd> tables_;
};

enum class KernelRoute { Eigensum, Laguerre };
std::string to_string(KernelRoute r);

struct ProjectionKernel {
    unsigned k = 0;
    double a = 1.0;
    TensorGrid grid;
    Eigen::MatrixXcd values;  // (x_i, y_j)
    KernelRoute route = KernelRoute::Eigensum;
};

/// Sampling requirements of the uniform-grid policy for levels <= K.
struct GridRequirement {
    double min_half_width;  // sqrt((2K + d1 + 4)/|a|)
    double max_spacing;     // from N >= 8 X sqrt(|a|(2K+d1))/pi
};
GridRequirement grid_requirement(double a, unsigned K, unsigned d1);

/// First violated sampling condition, if any.
std::optional<std::string> resolution_violation(const TensorGrid& grid, double a, unsigned K);

/// Uniform grid that satisfies the policy with margin: half width
/// (sqrt(2K+d1) + margin)/sqrt|a|, spacing from the policy rule with 2K+d1 floored at 3.
TensorGrid policy_grid(double a, unsigned K, unsigned d1, double margin = 6.5);

enum class ResolutionCheck { Enforce, Pointwise };

/// Dense kernel sum_{|nu|=k} Phi^a_nu(x) Phi^a_nu(y). `Pointwise` skips the
/// sampling checks for uses that only compare kernel values point by point.
ProjectionKernel projection_kernel_eigsum(unsigned k, double a, const TensorGrid& grid,
                                          ResolutionCheck check = ResolutionCheck::Enforce);

/// (P phi)(x_i) = sum_j K(x_i, y_j) W_j phi(y_j)
Eigen::VectorXcd apply_projection(const ProjectionKernel& kernel, const Eigen::VectorXcd& phi);

/// P_k(a) in factored form B (B^T W .), for grids too large for a dense kernel.
class ProjectionOperator {
public:
    ProjectionOperator(unsigned k, double a, const TensorGrid& grid,
                       ResolutionCheck check = ResolutionCheck::Enforce);
    ProjectionOperator(const ScaledBasis& basis, unsigned k);

    unsigned level() const { return k_; }
    Eigen::VectorXcd apply(const Eigen::VectorXcd& phi) const;
    /// Coefficients (phi, Phi^a_nu), |nu| = k.
    Eigen::VectorXcd coefficients(const Eigen::VectorXcd& phi) const;
    const Eigen::MatrixXd& basis() const { return B_; }
    const Eigen::VectorXd& weights() const { return w_; }
    /// Q = W^{1/2} B: the operator is Q Q^T in weighted coordinates.
    Eigen::MatrixXd weighted_basis() const;

private:
    unsigned k_;
    Eigen::MatrixXd B_;
    Eigen::VectorXd w_;
};

struct HermiteApplyResult {
    Eigen::VectorXcd values;            // sum_{k<=K} (2k+d1)|a| P_k(a) phi
    std::vector<double> level_norms;    // ||P_k(a) phi||_2
    double tail_norm = 0.0;             // ||phi - sum_{k<=K} P_k(a) phi||_2
    double input_norm = 0.0;
};

HermiteApplyResult hermite_apply(double a, const TensorGrid& grid, const Eigen::VectorXcd& phi, unsigned K_max);

/// Second-order finite-difference -Lap phi + a^2 |x|^2 phi on a uniform grid.
/// Boundary points are set to zero.
Eigen::VectorXcd hermite_apply_fd(double a, const TensorGrid& grid, const Eigen::VectorXcd& phi);

/// Samples of Phi^a_nu on the grid.
Eigen::VectorXcd sample_phi(const MultiIndex& nu, double a, const TensorGrid& grid);

/// Weighted L2 norm of grid samples.
double weighted_norm(const Eigen::VectorXcd& v, const std::vector<double>& w);

}  // namespace grushin::spectral
