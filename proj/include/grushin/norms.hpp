#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "grushin/field.hpp"

namespace grushin::norms {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct MixedNormParams {
    double p = 1.0;  // t-exponent of the input norm
    double q = 2.0;  // x-exponent of the input norm
    double r = 2.0;  // x-exponent of the output norm

    /// Conjugate exponent p/(p-1); infinite for p = 1.
    double p_prime() const;
};

/// First violated constraint of 1 <= p <= 2(d2+1)/(d2+3), 1 <= q <= 2 <= r <= inf.
std::optional<std::string> admissibility_violation(const MixedNormParams& m, unsigned d1, unsigned d2);
inline bool admissible(const MixedNormParams& m, unsigned d1, unsigned d2) {
    return !admissibility_violation(m, d1, d2);
}

/// 2 d2 (1/p - 1/2) + (d1/2)(1/q - 1/r) - 1. Throws AdmissibilityError.
double predicted_exponent(const MixedNormParams& m, unsigned d1, unsigned d2);

/// (int (int |f|^q dx)^{p/q} dt)^{1/p}; inner integral over x. Infinite
/// exponents use grid maxima.
double mixed_norm(const SampledField& f, double q, double p);

enum class FitMode {
    Equality,    // |slope - predicted| <= tolerance
    UpperBound,  // slope <= predicted + tolerance
};

struct ExponentFitReport {
    std::vector<double> mus;
    std::vector<double> norms;
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // rms of log residuals
    double predicted = 0.0;
    double tolerance = 0.05;
    double residual_cap = 0.05;
    FitMode mode = FitMode::Equality;
    bool pass = false;
};

/// Least-squares slope of log(norm) against log(mu). Needs at least 4 samples,
/// strictly increasing mus, positive norms.
ExponentFitReport fit_scaling_exponent(std::span<const double> mus, std::span<const double> norms,
                                       double predicted = 0.0, double tolerance = 0.05, double residual_cap = 0.05,
                                       FitMode mode = FitMode::Equality);

struct ProjectionNormEstimate {
    unsigned k = 0;
    double a = 1.0;
    unsigned d1 = 1;
    double q = 1.0;
    double ratio = 0.0;  // sup ||P_k(a) phi||_2 / ||phi||_q over the trials
    std::size_t trials = 0;
    std::string best_trial;
    /// |a|^{d1/2 (1/q-1/2)} (2k+d1)^{(d1-1)/2 (1/q-1/2)}
    double rhs_shape = 0.0;
};

/// Lower estimate of the L^q -> L^2 norm of P_k(a) from `trials` random
/// Gaussian bumps plus eight deterministic candidates, on the policy grid.
ProjectionNormEstimate projection_norm_estimate(unsigned k, double a, unsigned d1, double q, std::size_t trials = 64,
                                                std::uint64_t seed = 0x5eed1234);

struct ProjectionEstimateSeries {
    std::vector<ProjectionNormEstimate> points;
    double fitted_constant = 0.0;       // ratio / rhs_shape at the reference k
    std::vector<double> normalized;     // ratio / (C * rhs_shape)
};

/// Estimates for each k with C fitted at k_ref (which must be in ks).
ProjectionEstimateSeries projection_estimate_series(std::span<const unsigned> ks, double a, unsigned d1, double q,
                                                    unsigned k_ref = 4, std::size_t trials = 64,
                                                    std::uint64_t seed = 0x5eed1234);

struct DecaySeries {
    std::vector<unsigned> ks;
    std::vector<double> level_norms;  // ||P_k(mu/(2k+d1)) g||_2
    ExponentFitReport fit;            // log level_norms against log(2k+d1)
};

/// Per-level factors of the fixed Gaussian g = e^{-|x-c|^2/2}, c = (0.7, 0, ..),
/// at a_k = mu/(2k+d1).
/// With a_k folded in, the projection bound predicts level_norms of order
/// (2k+d1)^{-(1/q-1/2)/2}; the fit is checked against it as an upper bound.
DecaySeries projection_decay_series(std::span<const unsigned> ks, double mu, unsigned d1, double q,
                                    double tolerance = 0.1);

}  // namespace grushin::norms
