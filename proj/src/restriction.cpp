#include "grushin/restriction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "grushin/error.hpp"
#include "grushin/hermite_spectral.hpp"

namespace grushin::restriction {

namespace {

using Idx = Eigen::Index;
using RowMatC = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kChunkBytes = 256.0 * 1024 * 1024;

// exp(sign i lambda_j[d] t_i) as an (n_t x J) table.
Eigen::MatrixXcd phase_table(const UniformAxis& ax, const std::vector<Vec3>& lam, unsigned d, double sign,
                             std::size_t begin = 0, std::size_t count = std::size_t(-1)) {
    count = std::min(count, lam.size() - begin);
    Eigen::MatrixXcd E(static_cast<Idx>(ax.n), static_cast<Idx>(count));
    for (std::size_t j = 0; j < count; ++j)
        for (std::size_t i = 0; i < ax.n; ++i) E(Idx(i), Idx(j)) = std::polar(1.0, sign * lam[begin + j][d] * ax.node(i));
    return E;
}

struct Run {
    std::size_t begin, len;
    double value;
};

// Consecutive runs of equal last component (rings of a product sphere rule).
std::vector<Run> runs_by_last(const std::vector<Vec3>& lam) {
    std::vector<Run> r;
    for (std::size_t j = 0; j < lam.size(); ++j) {
        if (r.empty() || lam[j][2] != r.back().value)
            r.push_back({j, 1, lam[j][2]});
        else
            ++r.back().len;
    }
    return r;
}

std::size_t chunk_rows(std::size_t per_row_elems, std::size_t nx) {
    const double per = double(per_row_elems) * sizeof(cplx);
    return std::max<std::size_t>(1, std::min<std::size_t>(nx, std::size_t(kChunkBytes / std::max(per, 1.0))));
}

Eigen::VectorXd to_vec(const std::vector<double>& v) { return Eigen::Map<const Eigen::VectorXd>(v.data(), Idx(v.size())); }

}  // namespace

Eigen::MatrixXcd t_transform(const SampledField& f, const std::vector<Vec3>& lam) {
    f.check_shape();
    const unsigned d2 = f.d2();
    const std::size_t NX = f.nx(), NT = f.nt(), J = lam.size();
    const auto& T = f.grid.t;
    Eigen::MatrixXcd F = Eigen::MatrixXcd::Zero(Idx(NX), Idx(J));
    if (J == 0) return F;
    if (d2 == 1) {
        Eigen::Map<const RowMatC> fm(f.values.data(), Idx(NX), Idx(NT));
        F.noalias() = fm * phase_table(T[0], lam, 0, +1.0);
    } else if (d2 == 2) {
        const std::size_t N1 = T[0].n, N2 = T[1].n;
        const Eigen::MatrixXcd E1 = phase_table(T[0], lam, 0, +1.0), E2 = phase_table(T[1], lam, 1, +1.0);
        const std::size_t c = chunk_rows(N1 * J, NX);
        for (std::size_t x0 = 0; x0 < NX; x0 += c) {
            const std::size_t cn = std::min(c, NX - x0);
            Eigen::Map<const RowMatC> fm(f.values.data() + x0 * NT, Idx(cn * N1), Idx(N2));
            const Eigen::MatrixXcd G = fm * E2;
            for (std::size_t x = 0; x < cn; ++x)
                F.row(Idx(x0 + x)) = G.middleRows(Idx(x * N1), Idx(N1)).cwiseProduct(E1).colwise().sum();
        }
    } else {
        const std::size_t N1 = T[0].n, N2 = T[1].n, N3 = T[2].n;
        const auto runs = runs_by_last(lam);
        const std::size_t G = runs.size();
        Eigen::MatrixXcd E3(static_cast<Idx>(N3), static_cast<Idx>(G));
        for (std::size_t g = 0; g < G; ++g)
            for (std::size_t i = 0; i < N3; ++i) E3(Idx(i), Idx(g)) = std::polar(1.0, runs[g].value * T[2].node(i));
        const Eigen::MatrixXcd E1 = phase_table(T[0], lam, 0, +1.0), E2 = phase_table(T[1], lam, 1, +1.0);
        const std::size_t c = chunk_rows(N1 * N2 * G, NX);
        for (std::size_t x0 = 0; x0 < NX; x0 += c) {
            const std::size_t cn = std::min(c, NX - x0);
            Eigen::Map<const RowMatC> fm(f.values.data() + x0 * NT, Idx(cn * N1 * N2), Idx(N3));
            Eigen::MatrixXcd A = fm * E3;
            for (std::size_t g = 0; g < G; ++g) {
                const Run& r = runs[g];
                Eigen::Map<const RowMatC> Mg(A.col(Idx(g)).data(), Idx(cn * N1), Idx(N2));
                const Eigen::MatrixXcd Bg = Mg * E2.middleCols(Idx(r.begin), Idx(r.len));
                const auto E1g = E1.middleCols(Idx(r.begin), Idx(r.len));
                for (std::size_t x = 0; x < cn; ++x)
                    F.block(Idx(x0 + x), Idx(r.begin), 1, Idx(r.len)) =
                        Bg.middleRows(Idx(x * N1), Idx(N1)).cwiseProduct(E1g).colwise().sum();
            }
        }
    }
    return F * f.grid.t_cell();
}

SampledField t_synthesis(const Eigen::MatrixXcd& C, const std::vector<Vec3>& lam, const FieldGrid& grid) {
    SampledField out(grid);
    const unsigned d2 = grid.d2();
    const std::size_t NX = grid.size_x(), NT = grid.size_t_(), J = lam.size();
    if (std::size_t(C.rows()) != NX || std::size_t(C.cols()) != J) throw GridMismatch("t_synthesis: coefficient shape");
    if (J == 0) return out;
    const auto& T = grid.t;
    if (d2 == 1) {
        Eigen::Map<RowMatC> om(out.values.data(), Idx(NX), Idx(NT));
        om.noalias() = C * phase_table(T[0], lam, 0, -1.0).transpose();
    } else if (d2 == 2) {
        const std::size_t N1 = T[0].n, N2 = T[1].n;
        const Eigen::MatrixXcd E1 = phase_table(T[0], lam, 0, -1.0);
        const Eigen::MatrixXcd E2t = phase_table(T[1], lam, 1, -1.0).transpose();
        const std::size_t c = chunk_rows(N1 * J, NX);
        Eigen::MatrixXcd B;
        for (std::size_t x0 = 0; x0 < NX; x0 += c) {
            const std::size_t cn = std::min(c, NX - x0);
            B.resize(Idx(cn * N1), Idx(J));
            for (std::size_t x = 0; x < cn; ++x)
                B.middleRows(Idx(x * N1), Idx(N1)) = E1.array().rowwise() * C.row(Idx(x0 + x)).array();
            Eigen::Map<RowMatC> om(out.values.data() + x0 * NT, Idx(cn * N1), Idx(N2));
            om.noalias() = B * E2t;
        }
    } else {
        const std::size_t N1 = T[0].n, N2 = T[1].n, N3 = T[2].n;
        const auto runs = runs_by_last(lam);
        const std::size_t G = runs.size();
        Eigen::MatrixXcd E3t(static_cast<Idx>(G), static_cast<Idx>(N3));
        for (std::size_t g = 0; g < G; ++g)
            for (std::size_t i = 0; i < N3; ++i) E3t(Idx(g), Idx(i)) = std::polar(1.0, -runs[g].value * T[2].node(i));
        const Eigen::MatrixXcd E1 = phase_table(T[0], lam, 0, -1.0);
        const Eigen::MatrixXcd E2t = phase_table(T[1], lam, 1, -1.0).transpose();
        const std::size_t c = chunk_rows(N1 * N2 * G, NX);
        Eigen::MatrixXcd A, Bg;
        for (std::size_t x0 = 0; x0 < NX; x0 += c) {
            const std::size_t cn = std::min(c, NX - x0);
            A.resize(Idx(cn * N1 * N2), Idx(G));
            for (std::size_t g = 0; g < G; ++g) {
                const Run& r = runs[g];
                Bg.resize(Idx(cn * N1), Idx(r.len));
                const auto E1g = E1.middleCols(Idx(r.begin), Idx(r.len));
                for (std::size_t x = 0; x < cn; ++x)
                    Bg.middleRows(Idx(x * N1), Idx(N1)) =
                        E1g.array().rowwise() * C.row(Idx(x0 + x)).segment(Idx(r.begin), Idx(r.len)).array();
                Eigen::Map<RowMatC> Ag(A.col(Idx(g)).data(), Idx(cn * N1), Idx(N2));
                Ag.noalias() = Bg * E2t.middleRows(Idx(r.begin), Idx(r.len));
            }
            Eigen::Map<RowMatC> om(out.values.data() + x0 * NT, Idx(cn * N1 * N2), Idx(N3));
            om.noalias() = A * E3t;
        }
    }
    return out;
}

unsigned default_k_max(const SampledField& f, double mu) {
    double lam_min = std::numeric_limits<double>::infinity();
    for (const auto& a : f.grid.t) lam_min = std::min(lam_min, 2.0 * M_PI / a.period());
    const double K = std::ceil(0.5 * (mu / lam_min - double(f.d1())));
    return unsigned(std::clamp(K, 0.0, 400.0));
}

double effective_t_radius(const SampledField& f, double rel_tol) {
    const std::size_t NX = f.nx(), NT = f.nt();
    std::vector<double> m(NT, 0.0);
    for (std::size_t ix = 0; ix < NX; ++ix)
        for (std::size_t it = 0; it < NT; ++it) m[it] = std::max(m[it], std::abs(f.values[ix * NT + it]));
    double mx = 0.0;
    for (double v : m) mx = std::max(mx, v);
    double r = 0.0;
    std::vector<double> t(f.d2());
    for (std::size_t it = 0; it < NT; ++it) {
        if (m[it] <= rel_tol * mx) continue;
        f.grid.t_point(it, t.data());
        double s = 0.0;
        for (double v : t) s += v * v;
        r = std::max(r, std::sqrt(s));
    }
    return r;
}

unsigned required_sphere_order(double v_max) {
    return unsigned(std::ceil(v_max + 6.0 * std::cbrt(v_max) + 12.0));
}

namespace {

double max_t_radius(const FieldGrid& g) {
    double s = 0.0;
    for (const auto& a : g.t) s += a.max_abs() * a.max_abs();
    return std::sqrt(s);
}

void check_input(const SampledField& f, double mu, double support_tol) {
    if (!(mu > 0.0)) throw DomainError("restriction: mu must be positive");
    f.check_shape();
    f.check_support(support_tol);
    for (std::size_t d = 0; d < f.grid.x.size(); ++d)
        if (f.grid.x[d].step > M_PI / (4.0 * std::sqrt(mu)) * (1.0 + 1e-12))
            throw ResolutionError("x spacing: axis " + std::to_string(d) + " step exceeds pi/(4 sqrt(mu))");
    const double a0 = mu / double(f.d1());
    for (std::size_t d = 0; d < f.grid.t.size(); ++d)
        if (a0 >= M_PI / f.grid.t[d].step)
            throw ResolutionError("lambda outside resolved dual grid: mu/d1 exceeds the t-axis Nyquist frequency");
}

double tail_sum(unsigned K, unsigned d1, unsigned d2) {
    if (d2 == 1) return std::numeric_limits<double>::infinity();
    const std::size_t M = 100000;
    double s = 0.0;
    for (std::size_t k = std::size_t(K) + 1; k <= std::size_t(K) + M; ++k) s += std::pow(2.0 * double(k) + d1, -double(d2));
    const double x = 2.0 * (double(K) + double(M) + 0.5) + d1;
    return s + std::pow(x, 1.0 - double(d2)) / (2.0 * (double(d2) - 1.0));
}

}  // namespace

RestrictionResult restriction_apply(const SampledField& f, const RestrictionConfig& cfg) {
    check_input(f, cfg.mu, cfg.support_tolerance);
    const unsigned d1 = f.d1(), d2 = f.d2();
    const double mu = cfg.mu;
    const FieldGrid out_grid = cfg.output_grid ? *cfg.output_grid : f.grid;
    if (out_grid.d1() != d1 || out_grid.d2() != d2) throw GridMismatch("restriction: output grid dimensions differ");

    RestrictionResult res;
    res.k_max = cfg.k_max ? *cfg.k_max : default_k_max(f, mu);
    const unsigned K = res.k_max;
    const double a0 = mu / double(d1);
    if (d2 > 1) {
        const unsigned need = required_sphere_order(a0 * (effective_t_radius(f) + max_t_radius(out_grid)));
        if (cfg.sphere_order != 0 && cfg.sphere_order < need)
            throw ResolutionError("unresolved sphere rule: order " + std::to_string(cfg.sphere_order) + " < required " +
                                  std::to_string(need));
        res.sphere_order = cfg.sphere_order ? cfg.sphere_order : need;
    }
    const SphereRule rule = sphere_rule(d2, res.sphere_order);
    const std::size_t M = rule.size();
    res.sphere_points = M;

    std::vector<Vec3> lam;
    lam.reserve((K + 1) * M);
    for (unsigned k = 0; k <= K; ++k) {
        const double ak = mu / (2.0 * k + d1);
        for (const auto& e : rule.points) lam.push_back({ak * e[0], ak * e[1], ak * e[2]});
    }
    const Eigen::MatrixXcd F = t_transform(f, lam);

    const TensorGrid xin = f.grid.x_grid(), xout = out_grid.x_grid();
    const Eigen::VectorXd win = to_vec(xin.weights());
    const Eigen::VectorXd sw = to_vec(rule.weights);
    Eigen::MatrixXcd C(static_cast<Idx>(out_grid.size_x()), static_cast<Idx>(lam.size()));
    const double pref = std::pow(2.0 * M_PI, -double(d2)) * std::pow(mu, double(d2) - 1.0);
    for (unsigned k = 0; k <= K; ++k) {
        const double ak = mu / (2.0 * k + d1);
        const Eigen::MatrixXd Bi = spectral::ScaledBasis(ak, xin, k).level_matrix(k);
        const Eigen::MatrixXd Bo = spectral::ScaledBasis(ak, xout, k).level_matrix(k);
        const auto Fk = F.middleCols(Idx(k * M), Idx(M));
        const Eigen::MatrixXcd coef = (win.asDiagonal() * Bi).transpose().cast<cplx>() * Fk;
        res.level_content.push_back(std::sqrt((coef.cwiseAbs2().colwise().sum().transpose().array() * sw.array()).sum()));
        const double ck = pref * std::pow(2.0 * k + d1, -double(d2));
        C.middleCols(Idx(k * M), Idx(M)).noalias() = Bo.cast<cplx>() * (coef * (ck * sw).asDiagonal());
    }
    res.field = t_synthesis(C, lam, out_grid);

    // sup_lambda ||f^lambda||_2 <= int ||f(., t)||_2 dt
    double B = 0.0;
    {
        const std::size_t NX = f.nx(), NT = f.nt();
        for (std::size_t it = 0; it < NT; ++it) {
            double s = 0.0;
            for (std::size_t ix = 0; ix < NX; ++ix) s += win[Idx(ix)] * std::norm(f.values[ix * NT + it]);
            B += std::sqrt(s);
        }
        B *= f.grid.t_cell();
    }
    res.tail_bound = pref * sphere_area(d2) * B * tail_sum(K, d1, d2);
    return res;
}

SampledField restriction_two_term(const SampledField& f, double mu, unsigned k_max) {
    check_input(f, mu, 1e-8);
    if (f.d2() != 1) throw DomainError("restriction_two_term: d2 must be 1");
    const unsigned d1 = f.d1();
    const std::size_t NX = f.nx(), NT = f.nt();
    const auto& tax = f.grid.t[0];
    const TensorGrid xg = f.grid.x_grid();
    SampledField out(f.grid);
    for (unsigned k = 0; k <= k_max; ++k) {
        const double a = mu / (2.0 * k + d1);
        const spectral::ProjectionOperator P(k, a, xg, spectral::ResolutionCheck::Pointwise);
        for (int sgn : {+1, -1}) {
            Eigen::VectorXcd fl(static_cast<Idx>(NX));
            for (std::size_t ix = 0; ix < NX; ++ix) {
                cplx s = 0.0;
                for (std::size_t it = 0; it < NT; ++it) s += f.values[ix * NT + it] * std::polar(1.0, sgn * a * tax.node(it));
                fl[Idx(ix)] = s * tax.step;
            }
            const Eigen::VectorXcd pf = P.apply(fl);
            const double c = 1.0 / (2.0 * M_PI * (2.0 * k + d1));
            for (std::size_t ix = 0; ix < NX; ++ix)
                for (std::size_t it = 0; it < NT; ++it)
                    out.values[ix * NT + it] += c * pf[Idx(ix)] * std::polar(1.0, -sgn * a * tax.node(it));
        }
    }
    return out;
}

SampledField spectral_synthesis(const SampledField& f, std::span<const double> mus, std::span<const double> weights,
                                const RestrictionConfig& tmpl, SynthesisKind kind) {
    if (mus.size() != weights.size()) throw DomainError("spectral_synthesis: nodes and weights differ in length");
    SampledField acc(tmpl.output_grid ? *tmpl.output_grid : f.grid);
    for (std::size_t i = 0; i < mus.size(); ++i) {
        RestrictionConfig c = tmpl;
        c.mu = mus[i];
        const RestrictionResult r = restriction_apply(f, c);
        const double w = weights[i] * (kind == SynthesisKind::Operator ? mus[i] : 1.0);
        for (std::size_t p = 0; p < acc.values.size(); ++p) acc.values[p] += w * r.field.values[p];
    }
    return acc;
}

namespace {

std::vector<char> interior_mask(const FieldGrid& g) {
    const std::size_t NX = g.size_x(), NT = g.size_t_();
    std::vector<char> xi(NX, 1), ti(NT, 1);
    for (std::size_t ix = 0; ix < NX; ++ix) {
        std::size_t r = ix;
        for (std::size_t d = g.x.size(); d-- > 0;) {
            const std::size_t i = r % g.x[d].n;
            if (i == 0 || i + 1 == g.x[d].n) xi[ix] = 0;
            r /= g.x[d].n;
        }
    }
    for (std::size_t it = 0; it < NT; ++it) {
        std::size_t r = it;
        for (std::size_t d = g.t.size(); d-- > 0;) {
            const std::size_t i = r % g.t[d].n;
            if (i == 0 || i + 1 == g.t[d].n) ti[it] = 0;
            r /= g.t[d].n;
        }
    }
    std::vector<char> m(NX * NT);
    for (std::size_t ix = 0; ix < NX; ++ix)
        for (std::size_t it = 0; it < NT; ++it) m[ix * NT + it] = char(xi[ix] && ti[it]);
    return m;
}

}  // namespace

SampledField grushin_apply_fd(const SampledField& f) {
    f.check_shape();
    const FieldGrid& g = f.grid;
    const std::size_t NX = f.nx(), NT = f.nt();
    const auto mask = interior_mask(g);
    std::vector<std::size_t> xs(g.x.size()), ts(g.t.size());
    {
        std::size_t s = NT;
        for (std::size_t d = g.x.size(); d-- > 0;) {
            xs[d] = s;
            s *= g.x[d].n;
        }
        s = 1;
        for (std::size_t d = g.t.size(); d-- > 0;) {
            ts[d] = s;
            s *= g.t[d].n;
        }
    }
    const TensorGrid xg = g.x_grid();
    std::vector<double> x(g.x.size());
    SampledField out(g);
    for (std::size_t ix = 0; ix < NX; ++ix) {
        xg.point(ix, x.data());
        double r2 = 0.0;
        for (double v : x) r2 += v * v;
        for (std::size_t it = 0; it < NT; ++it) {
            const std::size_t p = ix * NT + it;
            if (!mask[p]) continue;
            cplx lx = 0.0, lt = 0.0;
            for (std::size_t d = 0; d < g.x.size(); ++d)
                lx += (f.values[p + xs[d]] - 2.0 * f.values[p] + f.values[p - xs[d]]) / (g.x[d].step * g.x[d].step);
            for (std::size_t d = 0; d < g.t.size(); ++d)
                lt += (f.values[p + ts[d]] - 2.0 * f.values[p] + f.values[p - ts[d]]) / (g.t[d].step * g.t[d].step);
            out.values[p] = -lx - r2 * lt;
        }
    }
    return out;
}

double interior_relative_residual(const SampledField& Lf, const SampledField& f, double mu) {
    const auto mask = interior_mask(f.grid);
    double num = 0.0, den = 0.0;
    for (std::size_t p = 0; p < f.values.size(); ++p) {
        if (!mask[p]) continue;
        num += std::norm(Lf.values[p] - mu * f.values[p]);
        den += std::norm(mu * f.values[p]);
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

cplx inner_product(const SampledField& f, const SampledField& g) {
    if (f.values.size() != g.values.size()) throw GridMismatch("inner_product: field sizes differ");
    const auto w = f.grid.x_weights();
    const std::size_t NT = f.nt();
    cplx s = 0.0;
    for (std::size_t ix = 0; ix < f.nx(); ++ix)
        for (std::size_t it = 0; it < NT; ++it) s += w[ix] * std::conj(f.values[ix * NT + it]) * g.values[ix * NT + it];
    return s * f.grid.t_cell();
}

}  // namespace grushin::restriction
