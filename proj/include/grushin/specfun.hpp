#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace grushin::specfun {

/// L2-normalized Hermite function h_k(tau). Stable for large k and |tau|.
double hermite_eval(unsigned k, double tau);

/// Table (k_max+1) x nodes.size() with entry (k, i) = h_k(nodes[i]).
Eigen::MatrixXd hermite_batch(unsigned k_max, std::span<const double> nodes);

/// Laguerre polynomial L_k^delta(tau) by the plain three-term recurrence.
double laguerre_poly(unsigned k, double delta, double tau);

/// Normalized Laguerre function
///   sqrt(Gamma(k+1)/Gamma(k+delta+1)) e^{-tau/2} tau^{delta/2} L_k^delta(tau).
double laguerre_normalized(unsigned k, double delta, double tau);

/// L_k^delta(tau) e^{-tau/2}, with the exponential folded into a rescaled
/// recurrence so large tau underflows gracefully instead of producing inf*0.
double laguerre_damped(unsigned k, double delta, double tau);

/// phi_k(z) = L_k^{d1-1}(|z|^2/2) e^{-|z|^2/4}, z in R^{2 d1}.
double laguerre_phi(unsigned k, unsigned d1, std::span<const double> z);

enum class EnvelopeRegion { Small = 0, Oscillatory = 1, Turning = 2, Exponential = 3 };

std::string to_string(EnvelopeRegion r);

inline double envelope_nu(unsigned k, double delta) { return 4.0 * k + 2.0 * delta + 2.0; }

/// Region containing tau. Shared endpoints go to the lower region.
EnvelopeRegion classify(double tau, double nu);

/// Right-hand side of the four-region envelope at tau.
double envelope_bound(EnvelopeRegion region, double tau, double nu, double delta, double gamma);

struct RegionRatio {
    EnvelopeRegion region;
    double lo = 0.0;
    double hi = 0.0;
    std::size_t samples = 0;
    std::optional<double> max_ratio;  // absent when no grid point fell in the region
};

struct EnvelopeReport {
    unsigned k = 0;
    double delta = 0.0;
    double gamma = 0.0;
    double nu = 0.0;
    std::array<RegionRatio, 4> regions;

    /// Largest ratio over all populated regions; absent if every region is empty.
    std::optional<double> fitted_constant() const;
};

inline constexpr double kDefaultEnvelopeGamma = 1.0 / 16.0;

EnvelopeReport envelope_check(unsigned k, double delta, std::span<const double> tau_grid,
                              double gamma = kDefaultEnvelopeGamma);

/// Log-spaced grid on [lo, hi] with n points.
std::vector<double> log_grid(double lo, double hi, std::size_t n);

struct L1Result {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t intervals = 0;
};

/// int_0^inf |L_k^{d1-1}(tau)| tau^{-1/2} dtau for the normalized Laguerre function.
/// Throws QuadratureError if the relative error estimate exceeds rel_tol.
L1Result l1_bound_integral(unsigned k, unsigned d1, double rel_tol = 1e-6);

}  // namespace grushin::specfun
