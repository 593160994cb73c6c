#include "grushin/specfun.hpp"

#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "grushin/error.hpp"

namespace grushin::specfun {

namespace {

constexpr double kBig = 1e100;
const double kLogBig = std::log(kBig);

void check_delta(double delta) {
    if (!(delta > -1.0)) throw DomainError("Laguerre type delta must exceed -1");
}

}  // namespace

double hermite_eval(unsigned k, double tau) {
    double prev = 0.0, cur = std::pow(M_PI, -0.25), log_scale = 0.0;
    for (unsigned j = 0; j < k; ++j) {
        double next = tau * std::sqrt(2.0 / (j + 1.0)) * cur - std::sqrt(j / (j + 1.0)) * prev;
        prev = cur;
        cur = next;
        if (std::abs(cur) > kBig) {
            cur /= kBig;
            prev /= kBig;
            log_scale += kLogBig;
        }
    }
    return cur * std::exp(log_scale - 0.5 * tau * tau);
}

Eigen::MatrixXd hermite_batch(unsigned k_max, std::span<const double> nodes) {
    Eigen::MatrixXd out(k_max + 1, Eigen::Index(nodes.size()));
    const double h0 = std::pow(M_PI, -0.25);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double tau = nodes[i];
        const Eigen::Index c = Eigen::Index(i);
        double prev = 0.0, cur = h0, log_scale = 0.0;
        double damp = std::exp(-0.5 * tau * tau);
        out(0, c) = cur * damp;
        for (unsigned j = 0; j < k_max; ++j) {
            double next = tau * std::sqrt(2.0 / (j + 1.0)) * cur - std::sqrt(j / (j + 1.0)) * prev;
            prev = cur;
            cur = next;
            if (std::abs(cur) > kBig) {
                cur /= kBig;
                prev /= kBig;
                log_scale += kLogBig;
                damp = std::exp(log_scale - 0.5 * tau * tau);
            }
            out(j + 1, c) = cur * damp;
        }
    }
    return out;
}

double laguerre_poly(unsigned k, double delta, double tau) {
    check_delta(delta);
    if (k == 0) return 1.0;
    double prev = 1.0, cur = delta + 1.0 - tau;
    for (unsigned j = 1; j < k; ++j) {
        double next = ((2.0 * j + delta + 1.0 - tau) * cur - (j + delta) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

double laguerre_normalized(unsigned k, double delta, double tau) {
    check_delta(delta);
    if (tau < 0.0) throw DomainError("laguerre_normalized: tau must be nonnegative");
    double prev = 0.0, cur = 1.0, log_scale = 0.0;
    for (unsigned j = 0; j < k; ++j) {
        double next = ((2.0 * j + delta + 1.0 - tau) * cur - std::sqrt(j * (j + delta)) * prev) /
                      std::sqrt((j + 1.0) * (j + 1.0 + delta));
        prev = cur;
        cur = next;
        if (std::abs(cur) > kBig) {
            cur /= kBig;
            prev /= kBig;
            log_scale += kLogBig;
        }
    }
    if (tau == 0.0) {
        if (delta == 0.0) return cur * std::exp(log_scale);
        if (delta > 0.0) return 0.0;
        return std::copysign(std::numeric_limits<double>::infinity(), cur);
    }
    const double log_pref = log_scale - 0.5 * tau + 0.5 * delta * std::log(tau) - 0.5 * std::lgamma(delta + 1.0);
    return cur * std::exp(log_pref);
}

double laguerre_damped(unsigned k, double delta, double tau) {
    check_delta(delta);
    double prev = 1.0, cur = delta + 1.0 - tau, log_scale = 0.0;
    if (k == 0) return std::exp(-0.5 * tau);
    for (unsigned j = 1; j < k; ++j) {
        double next = ((2.0 * j + delta + 1.0 - tau) * cur - (j + delta) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
        if (std::abs(cur) > kBig) {
            cur /= kBig;
            prev /= kBig;
            log_scale += kLogBig;
        }
    }
    return cur * std::exp(log_scale - 0.5 * tau);
}

double laguerre_phi(unsigned k, unsigned d1, std::span<const double> z) {
    if (d1 == 0) throw DomainError("laguerre_phi: d1 must be positive");
    double r2 = 0.0;
    for (double v : z) r2 += v * v;
    return laguerre_damped(k, double(d1) - 1.0, 0.5 * r2);
}

std::string to_string(EnvelopeRegion r) {
    switch (r) {
        case EnvelopeRegion::Small: return "small";
        case EnvelopeRegion::Oscillatory: return "oscillatory";
        case EnvelopeRegion::Turning: return "turning";
        case EnvelopeRegion::Exponential: return "exponential";
    }
    return "?";
}

EnvelopeRegion classify(double tau, double nu) {
    if (tau <= 1.0 / nu) return EnvelopeRegion::Small;
    if (tau <= 0.5 * nu) return EnvelopeRegion::Oscillatory;
    if (tau <= 1.5 * nu) return EnvelopeRegion::Turning;
    return EnvelopeRegion::Exponential;
}

double envelope_bound(EnvelopeRegion region, double tau, double nu, double delta, double gamma) {
    switch (region) {
        case EnvelopeRegion::Small: return std::pow(tau * nu, 0.5 * delta);
        case EnvelopeRegion::Oscillatory: return std::pow(tau * nu, -0.25);
        case EnvelopeRegion::Turning:
            return std::pow(nu, -0.25) * std::pow(std::cbrt(nu) + std::abs(nu - tau), -0.25);
        case EnvelopeRegion::Exponential: return std::exp(-gamma * tau);
    }
    return 0.0;
}

std::optional<double> EnvelopeReport::fitted_constant() const {
    std::optional<double> c;
    for (const auto& r : regions)
        if (r.max_ratio) c = c ? std::max(*c, *r.max_ratio) : *r.max_ratio;
    return c;
}

EnvelopeReport envelope_check(unsigned k, double delta, std::span<const double> tau_grid, double gamma) {
    check_delta(delta);
    if (!(gamma > 0.0)) throw DomainError("envelope_check: gamma must be positive");
    EnvelopeReport rep;
    rep.k = k;
    rep.delta = delta;
    rep.gamma = gamma;
    rep.nu = envelope_nu(k, delta);
    const double nu = rep.nu;
    const double edges[5] = {0.0, 1.0 / nu, 0.5 * nu, 1.5 * nu, std::numeric_limits<double>::infinity()};
    for (int r = 0; r < 4; ++r) {
        rep.regions[r].region = EnvelopeRegion(r);
        rep.regions[r].lo = edges[r];
        rep.regions[r].hi = edges[r + 1];
    }
    for (double tau : tau_grid) {
        if (tau < 0.0) throw DomainError("envelope_check: tau grid must be nonnegative");
        const EnvelopeRegion reg = classify(tau, nu);
        RegionRatio& slot = rep.regions[int(reg)];
        const double val = std::abs(laguerre_normalized(k, delta, tau));
        const double bound = envelope_bound(reg, tau, nu, delta, gamma);
        double ratio;
        if (bound == 0.0)
            ratio = (val == 0.0) ? 0.0 : std::numeric_limits<double>::infinity();
        else
            ratio = val / bound;
        ++slot.samples;
        slot.max_ratio = slot.max_ratio ? std::max(*slot.max_ratio, ratio) : ratio;
    }
    return rep;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2) throw DomainError("log_grid: need 0 < lo < hi and n >= 2");
    std::vector<double> g(n);
    const double a = std::log(lo), b = std::log(hi);
    for (std::size_t i = 0; i < n; ++i) g[i] = std::exp(a + (b - a) * double(i) / double(n - 1));
    g.back() = hi;
    return g;
}

L1Result l1_bound_integral(unsigned k, unsigned d1, double rel_tol) {
    if (d1 == 0) throw DomainError("l1_bound_integral: d1 must be positive");
    const double delta = double(d1) - 1.0;
    const double nu = envelope_nu(k, delta);
    // tau = s^2 turns |L(tau)| tau^{-1/2} dtau into 2|L(s^2)| ds, smooth at 0.
    auto g = [&](double s) { return laguerre_normalized(k, delta, s * s); };
    const double s_max = std::sqrt(2.0 * nu + 100.0);
    // Zeros in s are at least pi/sqrt(nu) apart (WKB phase speed sqrt(nu - s^2)).
    const double ds = M_PI / (6.0 * std::sqrt(nu));
    const std::size_t n = std::max<std::size_t>(200, std::size_t(std::ceil(s_max / ds)));

    std::vector<double> cuts{0.0};
    double s_prev = 0.0, g_prev = g(0.0);
    for (std::size_t i = 1; i <= n; ++i) {
        const double s = s_max * double(i) / double(n);
        const double gs = g(s);
        if (g_prev != 0.0 && gs != 0.0 && (g_prev < 0.0) != (gs < 0.0)) {
            boost::uintmax_t iters = 200;
            auto root = boost::math::tools::toms748_solve(g, s_prev, s, g_prev, gs,
                                                          boost::math::tools::eps_tolerance<double>(50), iters);
            cuts.push_back(0.5 * (root.first + root.second));
        }
        s_prev = s;
        g_prev = gs;
    }
    cuts.push_back(s_max);

    L1Result res;
    auto integrand = [&](double s) { return 2.0 * std::abs(g(s)); };
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double err = 0.0;
        res.value += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, cuts[i], cuts[i + 1],
                                                                                   8, 1e-10, &err);
        res.error_estimate += err;
    }
    res.intervals = cuts.size() - 1;
    if (!(res.error_estimate <= rel_tol * res.value))
        throw QuadratureError("l1_bound_integral: adaptive quadrature did not reach relative tolerance");
    return res;
}

}  // namespace grushin::specfun
