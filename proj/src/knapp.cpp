#include "grushin/knapp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>

#include <Eigen/Dense>

#include "grushin/error.hpp"
#include "grushin/quadrature.hpp"
#include "grushin/restriction.hpp"

namespace grushin::knapp {

namespace {

double smoothstep5(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

// |t| with the components summed in a fixed order, so symmetric points share a key.
double radius_of(const double* v, std::size_t d) {
    std::array<double, 3> a{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < d; ++i) a[i] = v[i] * v[i];
    std::sort(a.begin(), a.begin() + long(d));
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) s += a[i];
    return std::sqrt(s);
}

// index of each point's radius in a sorted list of distinct radii
struct RadiusTable {
    std::vector<double> radii;
    std::vector<std::size_t> index;
};

template <class PointFn>
RadiusTable radius_table(std::size_t n, std::size_t d, PointFn point) {
    RadiusTable t;
    std::map<double, std::size_t> ids;
    std::vector<double> r(n);
    std::vector<double> p(std::max<std::size_t>(d, 1));
    for (std::size_t i = 0; i < n; ++i) {
        point(i, p.data());
        r[i] = radius_of(p.data(), d);
        ids.emplace(r[i], 0);
    }
    for (auto& [key, id] : ids) {
        id = t.radii.size();
        t.radii.push_back(key);
    }
    t.index.resize(n);
    for (std::size_t i = 0; i < n; ++i) t.index[i] = ids[r[i]];
    return t;
}

double max_t_norm(const FieldGrid& g) {
    double s = 0.0;
    for (const auto& a : g.t) s += a.max_abs() * a.max_abs();
    return std::sqrt(s);
}

}  // namespace

double QuinticCutoff::operator()(double rho) const {
    if (rho <= s0 || rho >= s3) return 0.0;
    if (rho < s1) return smoothstep5((rho - s0) / (s1 - s0));
    if (rho <= s2) return 1.0;
    return smoothstep5((s3 - rho) / (s3 - s2));
}

QuinticCutoff QuinticCutoff::for_dimension(unsigned d1) {
    const double d = double(d1);
    return {0.25 / d, 0.5 / d, 2.0 / d, 4.0 / d};
}

KnappInputs KnappInputs::standard(unsigned d1, unsigned d2) {
    KnappInputs in;
    in.d1 = d1;
    in.d2 = d2;
    in.cutoff = QuinticCutoff::for_dimension(d1);
    in.radius = 1.0 / double(d1);
    in.width = 0.08;
    in.n = double(d1);
    return in;
}

double KnappInputs::hhat(double rho) const {
    if (kind == ProfileKind::GaussianShell) return std::exp(-0.5 * (rho - radius) * (rho - radius) / (width * width));
    return std::pow(rho, power) * std::exp(-0.5 * rho * rho / (width * width));
}

double KnappInputs::profile(double rho) const {
    if (rho <= 0.0) return 0.0;
    const double u = rho / spectral_scale;
    return std::pow(spectral_scale, -double(d2)) * psi(u) * hhat(u) * std::pow(u, n);
}

std::pair<double, double> KnappInputs::support() const {
    double lo, hi;
    if (kind == ProfileKind::GaussianShell) {
        lo = std::max(0.0, radius - 9.5 * width);
        hi = radius + 9.5 * width;
    } else {
        lo = 0.0;
        // rho^m e^{-rho^2/2w^2} <= 1e-18 of its peak well before this
        hi = width * (std::sqrt(std::max(power + n, 0.0)) + 10.0);
    }
    if (use_cutoff) {
        lo = std::max(lo, cutoff.s0);
        hi = std::min(hi, cutoff.s3);
    }
    if (!(hi > lo)) throw DomainError("KnappInputs: empty spectral support");
    return {lo * spectral_scale, hi * spectral_scale};
}

SampledField field_direct(const KnappInputs& in, const FieldGrid& grid) {
    if (grid.d2() != in.d2 || grid.d1() != in.d1) throw GridMismatch("field_direct: grid dimensions differ from inputs");
    const auto [lo, hi] = in.support();
    const double tmax = max_t_norm(grid);
    const std::size_t panels = std::size_t(std::ceil((hi - lo) * (tmax + 1.0) / M_PI)) + 4;
    const Quadrature1D rule = composite_gauss_legendre(lo, hi, panels, 16);
    const std::size_t nq = rule.size();

    const TensorGrid xg = grid.x_grid();
    const RadiusTable xr = radius_table(grid.size_x(), grid.d1(), [&](std::size_t i, double* p) { xg.point(i, p); });
    const RadiusTable tr = radius_table(grid.size_t_(), grid.d2(), [&](std::size_t i, double* p) { grid.t_point(i, p); });

    Eigen::MatrixXd A(static_cast<Eigen::Index>(xr.radii.size()), static_cast<Eigen::Index>(nq));
    Eigen::MatrixXd B(static_cast<Eigen::Index>(nq), static_cast<Eigen::Index>(tr.radii.size()));
    for (std::size_t q = 0; q < nq; ++q) {
        const double rho = rule.nodes[q];
        const double wq = rule.weights[q] * std::pow(rho, double(in.d2) - 1.0) * in.profile(rho);
        for (std::size_t i = 0; i < xr.radii.size(); ++i)
            A(Eigen::Index(i), Eigen::Index(q)) = wq * std::exp(-0.5 * rho * xr.radii[i] * xr.radii[i]);
        for (std::size_t j = 0; j < tr.radii.size(); ++j)
            B(Eigen::Index(q), Eigen::Index(j)) = sphere_measure_ft(in.d2, rho * tr.radii[j]);
    }
    const Eigen::MatrixXd F = A * B;
    SampledField f(grid);
    const std::size_t NT = f.nt();
    for (std::size_t ix = 0; ix < f.nx(); ++ix)
        for (std::size_t it = 0; it < NT; ++it)
            f.values[ix * NT + it] = F(Eigen::Index(xr.index[ix]), Eigen::Index(tr.index[it]));
    return f;
}

namespace {

// int e^{-xi^2/(2 rho)} e^{-i xi x} dxi by the trapezoid rule on a truncated line
std::vector<cplx> xi_integrals(double rho, const UniformAxis& xa) {
    const double X = xa.max_abs();
    const double half = std::sqrt(90.0 * rho);
    const double h = 2.0 * M_PI / (X + std::sqrt(80.0 / rho));
    const long m = long(std::ceil(half / h));
    std::vector<cplx> out(xa.n, 0.0);
    for (std::size_t i = 0; i < xa.n; ++i) {
        const double x = xa.node(i);
        cplx s = 0.0;
        for (long j = -m; j <= m; ++j) {
            const double xi = double(j) * h;
            s += std::exp(-0.5 * xi * xi / rho) * std::polar(1.0, -xi * x);
        }
        out[i] = s * h;
    }
    return out;
}

}  // namespace

SampledField field_spectral(const KnappInputs& in, const FieldGrid& grid, GFactor gf) {
    if (grid.d2() != in.d2 || grid.d1() != in.d1) throw GridMismatch("field_spectral: grid dimensions differ from inputs");
    PartialSpectrum s;
    s.grid = grid;
    for (const auto& a : grid.t) {
        const double dl = 2.0 * M_PI / (double(a.n) * a.step);
        s.lambda.push_back(UniformAxis{a.n, -double(a.n / 2) * dl, dl});
    }
    const std::size_t NX = grid.size_x(), NT = grid.size_t_();
    s.values.assign(NX * NT, 0.0);
    KnappInputs base = in;
    if (gf == GFactor::XiQuadrature) base.n = 0.0;
    const auto [lo, hi] = in.support();
    const double c = std::pow(2.0 * M_PI, double(in.d2));
    const TensorGrid xg = grid.x_grid();
    const RadiusTable xr = radius_table(NX, grid.d1(), [&](std::size_t i, double* p) { xg.point(i, p); });
    std::vector<double> lam(in.d2);
    std::vector<std::size_t> xi_idx(grid.d1());
    for (std::size_t m = 0; m < NT; ++m) {
        std::size_t r = m;
        for (std::size_t d = s.lambda.size(); d-- > 0;) {
            lam[d] = s.lambda[d].node(r % s.lambda[d].n);
            r /= s.lambda[d].n;
        }
        const double rho = radius_of(lam.data(), lam.size());
        if (rho < lo || rho > hi) continue;
        const double P = c * base.profile(rho);
        if (P == 0.0) continue;
        if (gf == GFactor::ClosedForm) {
            for (std::size_t ix = 0; ix < NX; ++ix) {
                const double x2 = xr.radii[xr.index[ix]] * xr.radii[xr.index[ix]];
                s.values[ix * NT + m] = P * std::exp(-0.5 * rho * x2);
            }
        } else {
            std::vector<std::vector<cplx>> I;
            for (const auto& ax : grid.x) I.push_back(xi_integrals(rho, ax));
            for (std::size_t ix = 0; ix < NX; ++ix) {
                xg.unravel(ix, xi_idx.data());
                cplx g = 1.0;
                for (std::size_t d = 0; d < I.size(); ++d) g *= I[d][xi_idx[d]];
                s.values[ix * NT + m] = P * g;
            }
        }
    }
    return inverse_partial_fourier_t(std::move(s));
}

Calibration calibrate_n(const KnappInputs& in, const FieldGrid& grid, const std::vector<double>& candidates) {
    if (candidates.empty()) throw DomainError("calibrate_n: no candidate exponents");
    const SampledField fg = field_spectral(in, grid, GFactor::XiQuadrature);
    double gg = 0.0;
    for (const auto& v : fg.values) gg += std::norm(v);
    Calibration cal;
    cal.residual = std::numeric_limits<double>::infinity();
    for (double n : candidates) {
        KnappInputs trial = in;
        trial.n = n;
        const SampledField fd = field_direct(trial, grid);
        cplx num = 0.0;
        double dd = 0.0;
        for (std::size_t i = 0; i < fd.values.size(); ++i) {
            num += std::conj(fd.values[i]) * fg.values[i];
            dd += std::norm(fd.values[i]);
        }
        const cplx c = num / dd;
        double rr = 0.0;
        for (std::size_t i = 0; i < fd.values.size(); ++i) rr += std::norm(fg.values[i] - c * fd.values[i]);
        const double res = std::sqrt(rr / gg);
        cal.candidates.emplace_back(n, res);
        if (res < cal.residual) {
            cal.residual = res;
            cal.n = n;
            cal.constant = c.real();
        }
    }
    return cal;
}

double sphere_trace(const KnappInputs& in, std::span<const double> t, unsigned order) {
    const SphereRule rule = sphere_rule(in.d2, order);
    const double inv = 1.0 / double(in.d1);
    cplx s = 0.0;
    for (std::size_t j = 0; j < rule.size(); ++j) {
        double dot = 0.0;
        for (unsigned d = 0; d < in.d2; ++d) dot += rule.points[j][d] * t[d];
        s += rule.weights[j] * in.hhat(inv) * std::polar(1.0, -dot * inv);
    }
    return s.real();
}

SampledField closed_form_p1(const KnappInputs& in, const FieldGrid& grid) {
    if (in.spectral_scale != 1.0) throw DomainError("closed_form_p1: needs spectral_scale = 1");
    const double d1 = double(in.d1), inv = 1.0 / d1;
    const double pref = std::pow(d1, -double(in.d2)) * std::pow(inv, in.n) * in.psi(inv);
    const unsigned order = in.d2 == 1 ? 1 : restriction::required_sphere_order(inv * max_t_norm(grid));
    SampledField out(grid);
    const TensorGrid xg = grid.x_grid();
    std::vector<double> x(grid.d1()), t(grid.d2());
    std::vector<double> trace(out.nt());
    for (std::size_t it = 0; it < out.nt(); ++it) {
        grid.t_point(it, t.data());
        trace[it] = sphere_trace(in, t, order);
    }
    for (std::size_t ix = 0; ix < out.nx(); ++ix) {
        xg.point(ix, x.data());
        double r2 = 0.0;
        for (double v : x) r2 += v * v;
        const double gx = pref * std::exp(-0.5 * r2 * inv);
        for (std::size_t it = 0; it < out.nt(); ++it) out.at(ix, it) = gx * trace[it];
    }
    return out;
}

std::vector<cplx> sphere_convolution(const std::vector<UniformAxis>& t, const std::vector<cplx>& h, double radius) {
    const unsigned d2 = unsigned(t.size());
    if (d2 < 1 || d2 > 3) throw DomainError("sphere_convolution: d2 must be 1, 2 or 3");
    std::size_t NT = 1;
    double cell = 1.0, tmax2 = 0.0;
    for (const auto& a : t) {
        NT *= a.n;
        cell *= a.step;
        tmax2 += a.max_abs() * a.max_abs();
    }
    if (h.size() != NT) throw GridMismatch("sphere_convolution: sample count does not match the t-grid");
    const unsigned order = d2 == 1 ? 1 : restriction::required_sphere_order(2.0 * radius * std::sqrt(tmax2));
    const SphereRule rule = sphere_rule(d2, order);
    FieldGrid g;
    g.t = t;
    std::vector<double> tp(d2);
    // H(w) = int h(s) e^{i s.w} ds on the sphere points
    std::vector<cplx> H(rule.size(), 0.0);
    for (std::size_t it = 0; it < NT; ++it) {
        g.t_point(it, tp.data());
        for (std::size_t j = 0; j < rule.size(); ++j) {
            double dot = 0.0;
            for (unsigned d = 0; d < d2; ++d) dot += rule.points[j][d] * tp[d];
            H[j] += h[it] * std::polar(1.0, radius * dot);
        }
    }
    const double wr = std::pow(radius, double(d2) - 1.0);
    std::vector<cplx> out(NT, 0.0);
    for (std::size_t it = 0; it < NT; ++it) {
        g.t_point(it, tp.data());
        cplx s = 0.0;
        for (std::size_t j = 0; j < rule.size(); ++j) {
            double dot = 0.0;
            for (unsigned d = 0; d < d2; ++d) dot += rule.points[j][d] * tp[d];
            s += rule.weights[j] * H[j] * std::polar(1.0, -radius * dot);
        }
        out[it] = s * cell * wr;
    }
    return out;
}

namespace {

double lp_norm(const std::vector<cplx>& v, double cell, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (const auto& z : v) m = std::max(m, std::abs(z));
        return m;
    }
    double s = 0.0;
    for (const auto& z : v) s += std::pow(std::abs(z), p);
    return std::pow(s * cell, 1.0 / p);
}

}  // namespace

DualityReport duality_demo(const std::vector<UniformAxis>& t, const std::vector<cplx>& h, double p, double radius) {
    if (!(p >= 1.0 && p <= 2.0)) throw DomainError("duality_demo: p must lie in [1, 2]");
    if (!(radius > 0.0)) throw DomainError("duality_demo: radius must be positive");
    double cell = 1.0, tmax2 = 0.0;
    for (const auto& a : t) {
        cell *= a.step;
        tmax2 += a.max_abs() * a.max_abs();
    }
    DualityReport r;
    r.radius = radius;
    r.p = p;
    r.sphere_order = t.size() == 1 ? 1 : restriction::required_sphere_order(2.0 * radius * std::sqrt(tmax2));
    const auto conv = sphere_convolution(t, h, radius);
    const double pp = p == 1.0 ? std::numeric_limits<double>::infinity() : p / (p - 1.0);
    r.conv_norm = lp_norm(conv, cell, pp);
    r.h_norm = lp_norm(h, cell, p);
    r.ratio = r.h_norm > 0.0 ? r.conv_norm / r.h_norm : 0.0;
    return r;
}

double sphere_measure_ft_radius(unsigned d2, double r, double tau, unsigned order) {
    const SphereRule rule = sphere_rule(d2, order);
    const double wr = std::pow(r, double(d2) - 1.0);
    cplx s = 0.0;
    for (std::size_t j = 0; j < rule.size(); ++j) s += rule.weights[j] * wr * std::polar(1.0, -r * rule.points[j][0] * tau);
    return s.real();
}

}  // namespace grushin::knapp
