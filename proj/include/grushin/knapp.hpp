#pragma once

#include <span>
#include <utility>
#include <vector>

#include "grushin/field.hpp"

namespace grushin::knapp {

/// C^2 piecewise-quintic cutoff: 0 on (0, s0], rises to 1 on [s1, s2], back to 0 at s3.
struct QuinticCutoff {
    double s0, s1, s2, s3;

    double operator()(double rho) const;
    /// support [1/(4 d1), 4/d1], plateau [1/(2 d1), 2/d1]
    static QuinticCutoff for_dimension(unsigned d1);
};

enum class ProfileKind {
    GaussianShell,  // hhat(lambda) = exp(-(|lambda| - radius)^2 / (2 width^2))
    PowerGaussian,  // hhat(lambda) = |lambda|^power exp(-|lambda|^2 / (2 width^2))
};

struct KnappInputs {
    unsigned d1 = 1;
    unsigned d2 = 1;
    bool use_cutoff = true;
    QuinticCutoff cutoff{0.25, 0.5, 2.0, 4.0};
    ProfileKind kind = ProfileKind::GaussianShell;
    double radius = 1.0;
    double width = 0.08;
    double power = 0.0;
    double n = 1.0;               // exponent of the |lambda|^n weight
    double spectral_scale = 1.0;  // s: builds f(sqrt(s) x, s t)

    /// Defaults for the counterexample: shell at 1/d1 inside the cutoff plateau.
    static KnappInputs standard(unsigned d1, unsigned d2);

    double hhat(double rho) const;
    double psi(double rho) const { return use_cutoff ? cutoff(rho) : 1.0; }
    /// P(rho) = s^{-d2} (psi hhat rho^n)(rho/s); f^lambda(x) = (2pi)^{d2} P(|lambda|) e^{-|lambda||x|^2/2}.
    double profile(double rho) const;
    /// rho-interval outside which P is below 1e-18 of its peak.
    std::pair<double, double> support() const;
};

/// Route (i): f(x,t) = int P(|lambda|) e^{-|lambda||x|^2/2} e^{-i lambda.t} dlambda
/// by Gauss-Legendre quadrature in rho = |lambda| against the sphere transform.
SampledField field_direct(const KnappInputs& in, const FieldGrid& grid);

enum class GFactor {
    ClosedForm,    // e^{-|lambda||x|^2/2} |lambda|^n
    XiQuadrature,  // int e^{-|xi|^2/(2|lambda|)} e^{-i xi.x} dxi by trapezoid sums, no |lambda|^n
};

/// f^lambda on the dual grid followed by the inverse partial transform. With
/// XiQuadrature this is route (ii): f = h *_t g with g taken from
/// ghat(xi, a) = psi(|a|) e^{-|xi|^2/(2|a|)}. The result is the periodization of f.
SampledField field_spectral(const KnappInputs& in, const FieldGrid& grid, GFactor g = GFactor::ClosedForm);

struct Calibration {
    double n = 0.0;
    double constant = 0.0;  // f_route_ii ~ constant * f_direct(n)
    double residual = 0.0;  // ||f_ii - c f_i|| / ||f_ii||
    std::vector<std::pair<double, double>> candidates;  // (n, residual)
};

/// Fits n and the constant so that route (i) matches route (ii).
Calibration calibrate_n(const KnappInputs& in, const FieldGrid& grid, const std::vector<double>& candidates);

/// int_{S^{d2-1}} hhat(w/d1) e^{-i <w,t>/d1} dsigma(w) by sphere quadrature.
double sphere_trace(const KnappInputs& in, std::span<const double> t, unsigned order);

/// d1^{-d2} d1^{-n} psi(1/d1) e^{-|x|^2/(2 d1)} int_S hhat(w/d1) e^{-i<w,t>/d1} dsigma(w);
/// with n = d1 this is d1^{-d1-d2} e^{-|x|^2/(2d1)} h * dsigma^_{1/d1}(t).
SampledField closed_form_p1(const KnappInputs& in, const FieldGrid& grid);

struct DualityReport {
    double radius = 1.0;
    double p = 1.0;
    double conv_norm = 0.0;  // ||h * dsigma^_r||_{p'}
    double h_norm = 0.0;     // ||h||_p
    double ratio = 0.0;
    unsigned sphere_order = 0;
};

/// h * dsigma^_r on the t-grid, dsigma_r the surface measure of the radius-r sphere,
/// by sphere quadrature of the plane-wave integral.
std::vector<cplx> sphere_convolution(const std::vector<UniformAxis>& t, const std::vector<cplx>& h, double radius);

DualityReport duality_demo(const std::vector<UniformAxis>& t, const std::vector<cplx>& h, double p, double radius);

/// int_{S_r} e^{-i t.w} dsigma_r(w) by quadrature on the radius-r sphere, at |t| = tau.
double sphere_measure_ft_radius(unsigned d2, double r, double tau, unsigned order);

}  // namespace grushin::knapp
