#include "grushin/weyl.hpp"

#include <cmath>
#include <map>

#include <boost/math/tools/minima.hpp>

#include "grushin/error.hpp"
#include "grushin/linalg.hpp"
#include "grushin/specfun.hpp"

namespace grushin::weyl {

namespace {

struct UniformAxisInfo {
    double x0 = 0.0, h = 0.0;
    std::size_t n = 0;
};

std::optional<UniformAxisInfo> uniform_info(const Quadrature1D& q) {
    if (q.size() < 2) return std::nullopt;
    UniformAxisInfo u{q.nodes.front(), q.nodes[1] - q.nodes[0], q.size()};
    for (std::size_t i = 1; i < q.size(); ++i)
        if (std::abs(q.nodes[i] - (u.x0 + double(i) * u.h)) > 1e-12 * std::max(1.0, std::abs(q.nodes[i]))) return std::nullopt;
    return u;
}

double max_abs_node(const TensorGrid& g) {
    double m = 0.0;
    for (const auto& ax : g.axes)
        for (double x : ax.nodes) m = std::max(m, std::abs(x));
    return m;
}

constexpr std::size_t kMaxDensePoints = 6000;

}  // namespace

std::size_t XiRule::half_points() const { return std::size_t(std::floor(half_width / step + 1e-9)) + 1; }

Quadrature1D XiRule::full_axis() const {
    const std::size_t m = half_points();
    Quadrature1D q;
    q.kind = QuadratureKind::UniformTrapezoid;
    for (std::size_t i = 0; i < 2 * m - 1; ++i) {
        q.nodes.push_back((double(i) - double(m - 1)) * step);
        q.weights.push_back(step);
    }
    return q;
}

XiRule xi_rule_laguerre(unsigned k, unsigned d1, double a, double max_sum) {
    if (a == 0.0) throw DomainError("xi rule: scale a must be nonzero");
    const double aa = std::abs(a);
    const double nu = 4.0 * k + 2.0 * d1;
    // In v = sqrt(|a|/2) xi the symbol is a Gaussian e^{-v^2/2} times a
    // degree-2k polynomial: negligible beyond sqrt(nu) + 9, band-limited to
    // about the same frequency.
    const double vmax = std::sqrt(nu) + 9.0;
    const double scale = std::sqrt(aa / 2.0);
    XiRule r;
    r.half_width = vmax / scale;
    const double band = vmax * scale;          // symbol bandwidth in xi units
    const double omega = 0.5 * aa * max_sum;  // phase frequency
    double h = 2.0 * M_PI / (omega + 2.0 * band);
    if (omega > 0.0) h = std::min(h, 2.0 * M_PI / (6.0 * omega));
    r.step = h;
    return r;
}

double phi_ka(unsigned k, unsigned d1, double a, std::span<const double> xi, std::span<const double> eta) {
    double r = 0.0;
    for (double v : xi) r += v * v;
    for (double v : eta) r += v * v;
    return specfun::laguerre_damped(k, double(d1) - 1.0, 0.5 * std::abs(a) * r);
}

SymbolFn phi_ka_symbol(unsigned k, unsigned d1, double a) {
    return [=](std::span<const double> xi, std::span<const double> eta) -> cplx { return phi_ka(k, d1, a, xi, eta); };
}

WeylKernel weyl_kernel(const SymbolFn& g, double a, const TensorGrid& grid, const XiRule& rule, std::string source) {
    if (a == 0.0) throw DomainError("weyl_kernel: scale a must be nonzero");
    if (!(rule.step > 0.0) || !(rule.half_width > 0.0)) throw QuadratureError("weyl_kernel: invalid xi rule");
    const unsigned d = grid.dim();
    const std::size_t n = grid.size();
    if (n > kMaxDensePoints) throw DomainError("weyl_kernel: grid too large for a dense kernel");
    const TensorGrid xg = TensorGrid::cube(rule.full_axis(), d);
    const std::size_t m = xg.size();
    const auto xw = xg.weights();
    const auto xc = xg.coordinates();
    const auto gc = grid.coordinates();

    WeylKernel K;
    K.a = a;
    K.grid = grid;
    K.source = std::move(source);
    K.values.resize(Eigen::Index(n), Eigen::Index(n));
    std::vector<double> xi(d), eta(d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            cplx acc = 0.0;
            for (unsigned c = 0; c < d; ++c) eta[c] = gc[c * n + j] - gc[c * n + i];
            for (std::size_t q = 0; q < m; ++q) {
                double ph = 0.0;
                for (unsigned c = 0; c < d; ++c) {
                    xi[c] = xc[c * m + q];
                    ph += xi[c] * (gc[c * n + i] + gc[c * n + j]);
                }
                const cplx gv = g(xi, eta);
                if (gv == 0.0) continue;
                acc += xw[q] * gv * std::polar(1.0, 0.5 * a * ph);
            }
            K.values(Eigen::Index(i), Eigen::Index(j)) = acc;
        }
    }
    if (!K.values.allFinite()) throw QuadratureError("weyl_kernel: non-finite kernel values (symbol not integrable?)");
    return K;
}

spectral::ProjectionKernel projection_kernel_laguerre(unsigned k, double a, const TensorGrid& grid,
                                                      spectral::ResolutionCheck check) {
    if (a == 0.0) throw DomainError("projection_kernel_laguerre: scale a must be nonzero");
    if (check == spectral::ResolutionCheck::Enforce)
        if (auto v = spectral::resolution_violation(grid, a, k))
            throw ResolutionError("grid does not resolve level " + std::to_string(k) + ": " + *v);
    const unsigned d = grid.dim();
    const std::size_t n = grid.size();
    if (n > kMaxDensePoints) throw DomainError("projection_kernel_laguerre: grid too large for a dense kernel");
    const double aa = std::abs(a);
    const double pref = std::pow(2.0 * M_PI, -double(d)) * std::pow(aa, double(d));
    const XiRule rule = xi_rule_laguerre(k, d, a, 2.0 * max_abs_node(grid));

    spectral::ProjectionKernel out;
    out.k = k;
    out.a = a;
    out.grid = grid;
    out.route = spectral::KernelRoute::Laguerre;

    std::vector<UniformAxisInfo> ua;
    for (const auto& ax : grid.axes) {
        auto u = uniform_info(ax);
        if (!u) break;
        ua.push_back(*u);
    }
    const bool fast = (d == 1 || d == 2) && ua.size() == d;
    if (!fast) {
        WeylKernel W = weyl_kernel(phi_ka_symbol(k, d, a), a, grid, rule, "phi_k");
        out.values = pref * W.values;
        return out;
    }

    // Half-line xi nodes; the symbol is even in each xi component, so the
    // phase reduces to a product of cosines.
    const std::size_t Q = rule.half_points();
    Eigen::VectorXd xi(Q), w(Q);
    for (std::size_t q = 0; q < Q; ++q) {
        xi[Eigen::Index(q)] = double(q) * rule.step;
        w[Eigen::Index(q)] = (q == 0 ? 1.0 : 2.0) * rule.step;
    }
    const double delta = double(d) - 1.0;
    auto G = [&](double r) { return specfun::laguerre_damped(k, delta, 0.5 * aa * r); };
    auto cos_table = [&](const UniformAxisInfo& u) {
        const std::size_t P = 2 * u.n - 1;
        Eigen::MatrixXd C(static_cast<Eigen::Index>(Q), static_cast<Eigen::Index>(P));
        for (std::size_t p = 0; p < P; ++p) {
            const double s = 2.0 * u.x0 + double(p) * u.h;
            for (std::size_t q = 0; q < Q; ++q) C(Eigen::Index(q), Eigen::Index(p)) = std::cos(0.5 * a * xi[Eigen::Index(q)] * s);
        }
        return C;
    };

    Eigen::MatrixXd F(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    if (d == 1) {
        const auto& u = ua[0];
        Eigen::MatrixXd Gm(static_cast<Eigen::Index>(u.n), static_cast<Eigen::Index>(Q));
        for (std::size_t m = 0; m < u.n; ++m) {
            const double dd = double(m) * u.h;
            for (std::size_t q = 0; q < Q; ++q)
                Gm(Eigen::Index(m), Eigen::Index(q)) = w[Eigen::Index(q)] * G(xi[Eigen::Index(q)] * xi[Eigen::Index(q)] + dd * dd);
        }
        const Eigen::MatrixXd V = Gm * cos_table(u);
        for (std::size_t i = 0; i < u.n; ++i)
            for (std::size_t j = 0; j < u.n; ++j)
                F(Eigen::Index(i), Eigen::Index(j)) = pref * V(Eigen::Index(i > j ? i - j : j - i), Eigen::Index(i + j));
    } else {
        const auto &u1 = ua[0], &u2 = ua[1];
        const Eigen::MatrixXd C1 = cos_table(u1), C2 = cos_table(u2);
        const bool same_h = std::abs(u1.h - u2.h) <= 1e-14 * u1.h;
        // Group the offsets (m1, m2) by |x - y|^2.
        std::map<long long, std::size_t> key_to_group;
        std::vector<double> group_r2;
        std::vector<std::size_t> group_of(u1.n * u2.n);
        for (std::size_t m1 = 0; m1 < u1.n; ++m1)
            for (std::size_t m2 = 0; m2 < u2.n; ++m2) {
                const long long key = same_h ? (long long)(m1 * m1 + m2 * m2) : (long long)(m1 * u2.n + m2);
                auto [it, inserted] = key_to_group.emplace(key, group_r2.size());
                if (inserted) {
                    const double a1 = double(m1) * u1.h, a2 = double(m2) * u2.h;
                    group_r2.push_back(a1 * a1 + a2 * a2);
                }
                group_of[m1 * u2.n + m2] = it->second;
            }
        std::vector<Eigen::MatrixXd> T(group_r2.size());
        Eigen::MatrixXd Gr(static_cast<Eigen::Index>(Q), static_cast<Eigen::Index>(Q));
        for (std::size_t g = 0; g < group_r2.size(); ++g) {
            for (std::size_t q1 = 0; q1 < Q; ++q1)
                for (std::size_t q2 = 0; q2 <= q1; ++q2) {
                    const double r = xi[Eigen::Index(q1)] * xi[Eigen::Index(q1)] + xi[Eigen::Index(q2)] * xi[Eigen::Index(q2)] + group_r2[g];
                    const double v = G(r);
                    Gr(Eigen::Index(q1), Eigen::Index(q2)) = w[Eigen::Index(q1)] * w[Eigen::Index(q2)] * v;
                    Gr(Eigen::Index(q2), Eigen::Index(q1)) = Gr(Eigen::Index(q1), Eigen::Index(q2));
                }
            T[g] = C1.transpose() * Gr * C2;
        }
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t i1 = i / u2.n, i2 = i % u2.n;
            for (std::size_t j = 0; j < n; ++j) {
                const std::size_t j1 = j / u2.n, j2 = j % u2.n;
                const std::size_t m1 = i1 > j1 ? i1 - j1 : j1 - i1, m2 = i2 > j2 ? i2 - j2 : j2 - i2;
                F(Eigen::Index(i), Eigen::Index(j)) = pref * T[group_of[m1 * u2.n + m2]](Eigen::Index(i1 + j1), Eigen::Index(i2 + j2));
            }
        }
    }
    if (!F.allFinite()) throw QuadratureError("projection_kernel_laguerre: non-finite kernel values");
    out.values = F.cast<cplx>();
    return out;
}

std::size_t SampledSymbol::eta_count() const {
    std::size_t c = 1;
    for (unsigned j = 0; j < d1; ++j) c *= 2 * n_x - 1;
    return c;
}

SampledSymbol SampledSymbol::from_function(const SymbolFn& g, unsigned d1, const TensorGrid& xi, double h,
                                           std::size_t n_x) {
    if (xi.dim() != d1) throw DomainError("SampledSymbol: xi grid dimension mismatch");
    SampledSymbol s;
    s.d1 = d1;
    s.xi = xi;
    s.h = h;
    s.n_x = n_x;
    const std::size_t ne = s.eta_count(), nx = xi.size();
    s.values.resize(Eigen::Index(nx * ne));
    std::vector<double> xv(d1), ev(d1);
    std::vector<std::size_t> ei(d1);
    for (std::size_t q = 0; q < nx; ++q) {
        xi.point(q, xv.data());
        for (std::size_t e = 0; e < ne; ++e) {
            std::size_t rem = e;
            for (unsigned c = d1; c-- > 0;) {
                ev[c] = (double(rem % (2 * n_x - 1)) - double(n_x - 1)) * h;
                rem /= 2 * n_x - 1;
            }
            s.values[Eigen::Index(q * ne + e)] = g(xv, ev);
        }
    }
    return s;
}

ContractionReport weyl_l1_contraction_check(const SampledSymbol& g, double a) {
    if (a == 0.0) throw DomainError("weyl_l1_contraction_check: scale a must be nonzero");
    const unsigned d = g.d1;
    const std::size_t ne = g.eta_count(), nq = g.xi.size();
    if (std::size_t(g.values.size()) != ne * nq) throw GridMismatch("SampledSymbol: value count mismatch");
    std::size_t n = 1;
    for (unsigned c = 0; c < d; ++c) n *= g.n_x;
    if (n > kMaxDensePoints) throw DomainError("weyl_l1_contraction_check: induced x-grid too large");
    const double cell = std::pow(g.h, double(d));
    const auto qw = g.xi.weights();
    const auto qc = g.xi.coordinates();

    ContractionReport rep;
    for (std::size_t q = 0; q < nq; ++q)
        for (std::size_t e = 0; e < ne; ++e) rep.l1_norm += std::abs(g.values[Eigen::Index(q * ne + e)]) * qw[q] * cell;

    auto coord = [&](std::size_t i, unsigned c) {
        std::size_t rem = i;
        for (unsigned cc = d; cc-- > c + 1;) rem /= g.n_x;
        return (double(rem % g.n_x) - 0.5 * double(g.n_x - 1)) * g.h;
    };
    auto idx = [&](std::size_t i, unsigned c) {
        std::size_t rem = i;
        for (unsigned cc = d; cc-- > c + 1;) rem /= g.n_x;
        return rem % g.n_x;
    };
    Eigen::MatrixXcd A(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t e = 0;
            for (unsigned c = 0; c < d; ++c) e = e * (2 * g.n_x - 1) + (idx(j, c) + g.n_x - 1 - idx(i, c));
            cplx acc = 0.0;
            for (std::size_t q = 0; q < nq; ++q) {
                double ph = 0.0;
                for (unsigned c = 0; c < d; ++c) ph += qc[c * nq + q] * (coord(i, c) + coord(j, c));
                acc += qw[q] * g.values[Eigen::Index(q * ne + e)] * std::polar(1.0, 0.5 * a * ph);
            }
            A(Eigen::Index(i), Eigen::Index(j)) = cell * acc;
        }
    rep.operator_norm = linalg::operator_norm(A).value;
    rep.ratio = rep.l1_norm > 0.0 ? rep.operator_norm / rep.l1_norm : 0.0;
    return rep;
}

namespace {

// Radial profile P(xi_1) = int G(xi_1^2 + |xi'|^2) dxi' on half-line nodes.
struct DiagonalProfile {
    Eigen::VectorXd xi, wp;  // wp = weight * P(xi)
    double pref = 0.0, a = 0.0;

    DiagonalProfile(unsigned k, double a_, unsigned d1, double r_max) : a(a_) {
        const double aa = std::abs(a);
        pref = std::pow(2.0 * M_PI, -double(d1)) * std::pow(aa, double(d1));
        const XiRule rule = xi_rule_laguerre(k, d1, a, 2.0 * r_max);
        const std::size_t Q = rule.half_points();
        xi.resize(Eigen::Index(Q));
        wp.resize(Eigen::Index(Q));
        const double delta = double(d1) - 1.0;
        for (std::size_t q = 0; q < Q; ++q) xi[Eigen::Index(q)] = double(q) * rule.step;
        for (std::size_t q = 0; q < Q; ++q) {
            const double w = (q == 0 ? 1.0 : 2.0) * rule.step;
            const double x2 = xi[Eigen::Index(q)] * xi[Eigen::Index(q)];
            double P = 0.0;
            if (d1 == 1) {
                P = specfun::laguerre_damped(k, delta, 0.5 * aa * x2);
            } else if (d1 == 2) {
                for (std::size_t q2 = 0; q2 < Q; ++q2) {
                    const double w2 = (q2 == 0 ? 1.0 : 2.0) * rule.step;
                    P += w2 * specfun::laguerre_damped(k, delta, 0.5 * aa * (x2 + xi[Eigen::Index(q2)] * xi[Eigen::Index(q2)]));
                }
            } else {
                throw DomainError("kernel_diagonal: d1 must be 1 or 2");
            }
            wp[Eigen::Index(q)] = w * P;
        }
    }

    double operator()(double r) const {
        double s = 0.0;
        for (Eigen::Index q = 0; q < xi.size(); ++q) s += wp[q] * std::cos(a * xi[q] * r);
        return pref * s;
    }
};

double diag_r_max(unsigned k, double a, unsigned d1) {
    return (std::sqrt(2.0 * k + d1) + 6.0) / std::sqrt(std::abs(a));
}

}  // namespace

double kernel_diagonal(unsigned k, double a, unsigned d1, double r) {
    if (a == 0.0) throw DomainError("kernel_diagonal: scale a must be nonzero");
    return DiagonalProfile(k, a, d1, std::max(r, diag_r_max(k, a, d1)))(r);
}

DiagonalSup kernel_diagonal_sup(unsigned k, double a, unsigned d1) {
    if (a == 0.0) throw DomainError("kernel_diagonal_sup: scale a must be nonzero");
    const double r_max = diag_r_max(k, a, d1);
    DiagonalProfile F(k, a, d1, r_max);
    const double nu = 2.0 * k + d1;
    const double dr = M_PI / (16.0 * std::sqrt(std::abs(a) * nu));
    const std::size_t n = std::size_t(std::ceil(r_max / dr)) + 1;
    DiagonalSup best;
    std::size_t ibest = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = r_max * double(i) / double(n - 1);
        const double v = F(r);
        if (v > best.value) {
            best.value = v;
            best.radius = r;
            ibest = i;
        }
    }
    const double lo = r_max * double(ibest == 0 ? 0 : ibest - 1) / double(n - 1);
    const double hi = r_max * double(std::min(ibest + 1, n - 1)) / double(n - 1);
    auto res = boost::math::tools::brent_find_minima([&](double r) { return -F(r); }, lo, hi, 50);
    if (-res.second > best.value) {
        best.value = -res.second;
        best.radius = res.first;
    }
    return best;
}

}  // namespace grushin::weyl
