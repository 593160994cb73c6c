#include "grushin/field.hpp"

#include <cmath>
#include <sstream>

#include <fftw3.h>

#include "grushin/error.hpp"

namespace grushin {

double UniformAxis::max_abs() const { return std::max(std::abs(start), std::abs(last())); }

UniformAxis UniformAxis::centered(double half_width, std::size_t n) {
    if (n < 2 || !(half_width > 0.0)) throw DomainError("UniformAxis::centered: need n >= 2 and positive width");
    return UniformAxis{n, -half_width, 2.0 * half_width / double(n - 1)};
}

UniformAxis UniformAxis::periodic(double period, std::size_t n) {
    if (n < 2 || !(period > 0.0)) throw DomainError("UniformAxis::periodic: need n >= 2 and positive period");
    return UniformAxis{n, -0.5 * period, period / double(n)};
}

Quadrature1D UniformAxis::trapezoid() const {
    Quadrature1D q;
    q.kind = QuadratureKind::UniformTrapezoid;
    q.nodes.resize(n);
    q.weights.assign(n, step);
    for (std::size_t i = 0; i < n; ++i) q.nodes[i] = node(i);
    q.weights.front() *= 0.5;
    q.weights.back() *= 0.5;
    return q;
}

std::size_t FieldGrid::size_x() const {
    std::size_t s = 1;
    for (const auto& a : x) s *= a.n;
    return s;
}

std::size_t FieldGrid::size_t_() const {
    std::size_t s = 1;
    for (const auto& a : t) s *= a.n;
    return s;
}

TensorGrid FieldGrid::x_grid() const {
    std::vector<Quadrature1D> axes;
    for (const auto& a : x) axes.push_back(a.trapezoid());
    return TensorGrid(std::move(axes));
}

std::vector<double> FieldGrid::x_weights() const { return x_grid().weights(); }

double FieldGrid::t_cell() const {
    double c = 1.0;
    for (const auto& a : t) c *= a.step;
    return c;
}

void FieldGrid::t_point(std::size_t j, double* out) const {
    for (std::size_t d = t.size(); d-- > 0;) {
        out[d] = t[d].node(j % t[d].n);
        j /= t[d].n;
    }
}

FieldGrid FieldGrid::dilated(double s) const {
    FieldGrid g = *this;
    const double rx = 1.0 / std::sqrt(s);
    for (auto& a : g.x) {
        a.start *= rx;
        a.step *= rx;
    }
    for (auto& a : g.t) {
        a.start /= s;
        a.step /= s;
    }
    return g;
}

FieldGrid make_field_grid(unsigned d1, double X, std::size_t nx, unsigned d2, double T, std::size_t nt) {
    FieldGrid g;
    g.x.assign(d1, UniformAxis::centered(X, nx));
    g.t.assign(d2, UniformAxis::periodic(2.0 * T, nt));
    return g;
}

double SampledField::max_abs() const {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v));
    return m;
}

double SampledField::boundary_max() const {
    const std::size_t NX = nx(), NT = nt();
    const unsigned dx = d1(), dt = d2();
    std::vector<char> tb(NT, 0);
    for (std::size_t j = 0; j < NT; ++j) {
        std::size_t r = j;
        for (unsigned d = dt; d-- > 0;) {
            const std::size_t i = r % grid.t[d].n;
            if (i == 0 || i + 1 == grid.t[d].n) tb[j] = 1;
            r /= grid.t[d].n;
        }
    }
    double m = 0.0;
    for (std::size_t ix = 0; ix < NX; ++ix) {
        bool xb = false;
        std::size_t r = ix;
        for (unsigned d = dx; d-- > 0;) {
            const std::size_t i = r % grid.x[d].n;
            if (i == 0 || i + 1 == grid.x[d].n) xb = true;
            r /= grid.x[d].n;
        }
        for (std::size_t it = 0; it < NT; ++it)
            if (xb || tb[it]) m = std::max(m, std::abs(values[ix * NT + it]));
    }
    return m;
}

void SampledField::check_shape() const {
    if (grid.x.empty() || grid.t.empty()) throw DomainError("SampledField: need d1 >= 1 and d2 >= 1");
    if (grid.t.size() > 3) throw DomainError("SampledField: d2 > 3 unsupported");
    for (const auto& a : grid.t)
        if (a.n % 2 != 0) throw DomainError("SampledField: t-axes need an even point count");
    if (values.size() != nx() * nt()) throw DomainError("SampledField: value count does not match the grid");
}

void SampledField::check_support(double tol) const {
    const double m = max_abs();
    if (m == 0.0) return;
    const double b = boundary_max();
    if (b > tol * m) {
        std::ostringstream os;
        os << "boundary-support violation: |f| on the grid boundary is " << b / m << " of max (limit " << tol << ")";
        throw ResolutionError(os.str());
    }
}

SampledField SampledField::from_function(
    const FieldGrid& g, const std::function<cplx(std::span<const double>, std::span<const double>)>& f) {
    SampledField s(g);
    const TensorGrid xg = g.x_grid();
    std::vector<double> x(g.d1()), t(g.d2());
    for (std::size_t ix = 0; ix < s.nx(); ++ix) {
        xg.point(ix, x.data());
        for (std::size_t it = 0; it < s.nt(); ++it) {
            g.t_point(it, t.data());
            s.at(ix, it) = f(x, t);
        }
    }
    return s;
}

namespace {

// Batched multi-dimensional DFT over the t-axes with sign +1 (FFTW_BACKWARD)
// or -1 (FFTW_FORWARD), unnormalized.
void batched_dft(std::vector<cplx>& data, const std::vector<UniformAxis>& axes, std::size_t howmany, int sign) {
    std::vector<int> dims;
    int total = 1;
    for (const auto& a : axes) {
        dims.push_back(int(a.n));
        total *= int(a.n);
    }
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan p = fftw_plan_many_dft(int(dims.size()), dims.data(), int(howmany), ptr, nullptr, 1, total, ptr,
                                     nullptr, 1, total, sign, FFTW_ESTIMATE);
    fftw_execute(p);
    fftw_destroy_plan(p);
}

// Per-point factor prod_d (-1)^{j_d} and phase e^{sign i lambda_m . t0}.
std::vector<double> alternating(const std::vector<UniformAxis>& axes) {
    std::size_t n = 1;
    for (const auto& a : axes) n *= a.n;
    std::vector<double> s(n, 1.0);
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t r = j;
        int parity = 0;
        for (std::size_t d = axes.size(); d-- > 0;) {
            parity += int(r % axes[d].n);
            r /= axes[d].n;
        }
        s[j] = (parity % 2) ? -1.0 : 1.0;
    }
    return s;
}

std::vector<cplx> dual_phase(const std::vector<UniformAxis>& t, const std::vector<UniformAxis>& lam, double sign) {
    std::size_t n = 1;
    for (const auto& a : lam) n *= a.n;
    std::vector<cplx> ph(n);
    for (std::size_t m = 0; m < n; ++m) {
        std::size_t r = m;
        double acc = 0.0;
        for (std::size_t d = lam.size(); d-- > 0;) {
            acc += lam[d].node(r % lam[d].n) * t[d].start;
            r /= lam[d].n;
        }
        ph[m] = std::polar(1.0, sign * acc);
    }
    return ph;
}

}  // namespace

PartialSpectrum partial_fourier_t(const SampledField& f, double support_tol) {
    f.check_shape();
    f.check_support(support_tol);
    PartialSpectrum s;
    s.grid = f.grid;
    for (const auto& a : f.grid.t) {
        const double dl = 2.0 * M_PI / (double(a.n) * a.step);
        s.lambda.push_back(UniformAxis{a.n, -double(a.n / 2) * dl, dl});
    }
    const std::size_t NX = f.nx(), NT = f.nt();
    s.values = f.values;
    const auto alt = alternating(f.grid.t);
    for (std::size_t ix = 0; ix < NX; ++ix)
        for (std::size_t j = 0; j < NT; ++j) s.values[ix * NT + j] *= alt[j];
    batched_dft(s.values, f.grid.t, NX, FFTW_BACKWARD);
    const auto ph = dual_phase(f.grid.t, s.lambda, +1.0);
    const double cell = f.grid.t_cell();
    for (std::size_t ix = 0; ix < NX; ++ix)
        for (std::size_t m = 0; m < NT; ++m) s.values[ix * NT + m] *= cell * ph[m];
    return s;
}

SampledField inverse_partial_fourier_t(const PartialSpectrum& s) {
    PartialSpectrum copy = s;
    return inverse_partial_fourier_t(std::move(copy));
}

SampledField inverse_partial_fourier_t(PartialSpectrum&& s) {
    SampledField f;
    f.grid = s.grid;
    const std::size_t NX = f.nx(), NT = f.nt();
    f.values = std::move(s.values);
    const auto ph = dual_phase(s.grid.t, s.lambda, -1.0);
    for (std::size_t ix = 0; ix < NX; ++ix)
        for (std::size_t m = 0; m < NT; ++m) f.values[ix * NT + m] *= ph[m];
    batched_dft(f.values, s.grid.t, NX, FFTW_FORWARD);
    const auto alt = alternating(s.grid.t);
    double norm = 1.0;
    for (const auto& a : s.grid.t) norm *= double(a.n) * a.step;
    // (2 pi)^{-d2} dlambda^{d2} combined with the forward cell factor
    const double scale = 1.0 / norm;
    for (std::size_t ix = 0; ix < NX; ++ix)
        for (std::size_t j = 0; j < NT; ++j) f.values[ix * NT + j] *= scale * alt[j];
    return f;
}

double sphere_area(unsigned d2) {
    switch (d2) {
        case 1: return 2.0;
        case 2: return 2.0 * M_PI;
        case 3: return 4.0 * M_PI;
    }
    throw DomainError("sphere_area: d2 must be 1, 2 or 3");
}

SphereRule sphere_rule(unsigned d2, unsigned order) {
    SphereRule r;
    r.d2 = d2;
    r.order = order;
    if (d2 == 1) {
        r.points = {{-1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}};
        r.weights = {1.0, 1.0};
        return r;
    }
    if (order == 0) throw DomainError("sphere_rule: order must be positive");
    if (d2 == 2) {
        const std::size_t n = order + 1;
        for (std::size_t j = 0; j < n; ++j) {
            const double th = 2.0 * M_PI * double(j) / double(n);
            r.points.push_back({std::cos(th), std::sin(th), 0.0});
            r.weights.push_back(2.0 * M_PI / double(n));
        }
        return r;
    }
    if (d2 == 3) {
        const std::size_t nth = (order + 2) / 2, nph = order + 1;
        const Quadrature1D gl = gauss_legendre(nth);
        for (std::size_t i = 0; i < nth; ++i) {
            const double z = gl.nodes[i], s = std::sqrt(std::max(0.0, 1.0 - z * z));
            for (std::size_t j = 0; j < nph; ++j) {
                const double ph = 2.0 * M_PI * double(j) / double(nph);
                r.points.push_back({s * std::cos(ph), s * std::sin(ph), z});
                r.weights.push_back(gl.weights[i] * 2.0 * M_PI / double(nph));
            }
        }
        return r;
    }
    throw DomainError("sphere_rule: unsupported d2 (must be 1, 2 or 3)");
}

double sphere_measure_ft(unsigned d2, double r) {
    switch (d2) {
        case 1: return 2.0 * std::cos(r);
        case 2: return 2.0 * M_PI * std::cyl_bessel_j(0.0, std::abs(r));
        case 3: return r == 0.0 ? 4.0 * M_PI : 4.0 * M_PI * std::sin(r) / r;
    }
    throw DomainError("sphere_measure_ft: d2 must be 1, 2 or 3");
}

}  // namespace grushin
