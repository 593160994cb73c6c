#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "grushin/field.hpp"

namespace grushin::restriction {

using Vec3 = std::array<double, 3>;

/// f^{lambda} between dual-grid points is the trapezoid sum itself evaluated at
/// lambda, i.e. the limit of zero-padded trigonometric interpolation.
enum class LambdaInterpolation { TrigonometricExact };

struct RestrictionConfig {
    double mu = 1.0;
    std::optional<unsigned> k_max;  // default: smallest K with mu/(2K+d1) below the dual grid spacing
    unsigned sphere_order = 0;      // 0: chosen from the data
    LambdaInterpolation interpolation = LambdaInterpolation::TrigonometricExact;
    std::optional<FieldGrid> output_grid;  // default: the input grid
    double support_tolerance = 1e-8;
};

struct RestrictionResult {
    SampledField field;
    unsigned k_max = 0;
    unsigned sphere_order = 0;
    std::size_t sphere_points = 0;
    /// (int_S ||P_k(a_k) f^{a_k e}||_2^2 dsigma)^{1/2} for each k <= k_max
    std::vector<double> level_content;
    /// Bound on the discarded k > k_max terms in L^inf_t L^2_x; infinite for d2 = 1.
    double tail_bound = 0.0;
};

unsigned default_k_max(const SampledField& f, double mu);

/// Largest |t| at which max_x |f(x,t)| exceeds rel_tol * max |f|.
double effective_t_radius(const SampledField& f, double rel_tol = 1e-10);

/// Harmonic degree needed to integrate e^{i e.v} over the sphere for |v| <= v_max.
unsigned required_sphere_order(double v_max);

RestrictionResult restriction_apply(const SampledField& f, const RestrictionConfig& cfg);

/// Direct d2 = 1 evaluation of the two-term formula, without the batched
/// transforms; used to cross-check restriction_apply.
SampledField restriction_two_term(const SampledField& f, double mu, unsigned k_max);

enum class SynthesisKind { Identity, Operator };

/// sum_i w_i P_{mu_i} f (Identity) or sum_i w_i mu_i P_{mu_i} f (Operator).
SampledField spectral_synthesis(const SampledField& f, std::span<const double> mus, std::span<const double> weights,
                                const RestrictionConfig& tmpl, SynthesisKind kind);

/// -Lap_x f - |x|^2 Lap_t f by centered differences; the boundary ring is zero.
SampledField grushin_apply_fd(const SampledField& f);

/// ||Lf - mu f|| / ||mu f|| over interior points (plain sample sums).
double interior_relative_residual(const SampledField& Lf, const SampledField& f, double mu);

/// Weighted inner product <f, g> in L2(x, t).
cplx inner_product(const SampledField& f, const SampledField& g);

/// F(x, j) = cell * sum_t f(x,t) e^{i lambda_j . t}
Eigen::MatrixXcd t_transform(const SampledField& f, const std::vector<Vec3>& lambdas);

/// out(x,t) = sum_j C(x,j) e^{-i lambda_j . t} on the t-axes of `grid`.
SampledField t_synthesis(const Eigen::MatrixXcd& C, const std::vector<Vec3>& lambdas, const FieldGrid& grid);

}  // namespace grushin::restriction
