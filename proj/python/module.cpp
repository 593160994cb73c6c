#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "grushin/error.hpp"
#include "grushin/hermite_spectral.hpp"
#include "grushin/norms.hpp"
#include "grushin/scenarios.hpp"
#include "grushin/specfun.hpp"
#include "grushin/weyl.hpp"

namespace py = pybind11;
using namespace grushin;

namespace {

py::array_t<double> map1(const py::array_t<double, py::array::c_style | py::array::forcecast>& x,
                         const std::function<double(double)>& f) {
    py::array_t<double> out(x.request().shape);
    const double* in = x.data();
    double* o = out.mutable_data();
    for (py::ssize_t i = 0; i < x.size(); ++i) o[i] = f(in[i]);
    return out;
}

py::dict kernel_dict(const spectral::ProjectionKernel& K) {
    py::dict d;
    d["k"] = K.k;
    d["a"] = K.a;
    d["route"] = spectral::to_string(K.route);
    const auto c = K.grid.coordinates();
    py::array_t<double> pts({py::ssize_t(K.grid.size()), py::ssize_t(K.grid.dim())});
    std::copy(c.begin(), c.end(), pts.mutable_data());
    d["points"] = pts;
    d["weights"] = K.grid.weights();
    d["values"] = Eigen::MatrixXcd(K.values);
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Grushin spectral projection numerics";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<ResolutionError>(m, "ResolutionError", base.ptr());
    py::register_exception<QuadratureError>(m, "QuadratureError", base.ptr());
    py::register_exception<GridMismatch>(m, "GridMismatch", base.ptr());
    py::register_exception<AdmissibilityError>(m, "AdmissibilityError", base.ptr());

    m.def("hermite", [](unsigned k, const py::array_t<double, py::array::c_style | py::array::forcecast>& x) {
        return map1(x, [k](double t) { return specfun::hermite_eval(k, t); });
    }, py::arg("k"), py::arg("x"), "L2-normalized Hermite function h_k");
    m.def("laguerre_normalized", [](unsigned k, double delta, const py::array_t<double, py::array::c_style | py::array::forcecast>& tau) {
        return map1(tau, [k, delta](double t) { return specfun::laguerre_normalized(k, delta, t); });
    }, py::arg("k"), py::arg("delta"), py::arg("tau"));
    m.def("l1_bound_integral", [](unsigned k, unsigned d1, double rel_tol) {
        const auto r = specfun::l1_bound_integral(k, d1, rel_tol);
        return py::make_tuple(r.value, r.error_estimate);
    }, py::arg("k"), py::arg("d1"), py::arg("rel_tol") = 1e-6);

    m.def("predicted_exponent", [](double p, double q, double r, unsigned d1, unsigned d2) {
        return norms::predicted_exponent({p, q, r}, d1, d2);
    }, py::arg("p"), py::arg("q"), py::arg("r"), py::arg("d1"), py::arg("d2"));
    m.def("admissibility_violation", [](double p, double q, double r, unsigned d1, unsigned d2) {
        return norms::admissibility_violation({p, q, r}, d1, d2);
    }, py::arg("p"), py::arg("q"), py::arg("r"), py::arg("d1"), py::arg("d2"));
    m.def("fit_scaling_exponent", [](std::vector<double> mus, std::vector<double> vals, double predicted, double tol) {
        const auto f = norms::fit_scaling_exponent(mus, vals, predicted, tol);
        py::dict d;
        d["slope"] = f.slope;
        d["intercept"] = f.intercept;
        d["residual"] = f.residual;
        d["predicted"] = f.predicted;
        d["pass"] = f.pass;
        return d;
    }, py::arg("mus"), py::arg("norms"), py::arg("predicted"), py::arg("tolerance") = 0.05);

    m.def("projection_kernel", [](unsigned k, double a, unsigned d1, const std::string& route) {
        const auto g = spectral::policy_grid(a, k, d1);
        if (route == "eigensum") return kernel_dict(spectral::projection_kernel_eigsum(k, a, g));
        if (route == "laguerre") return kernel_dict(weyl::projection_kernel_laguerre(k, a, g));
        throw DomainError("route: expected 'eigensum' or 'laguerre'");
    }, py::arg("k"), py::arg("a"), py::arg("d1") = 1, py::arg("route") = "eigensum",
       "Kernel of P_k(a) on the default grid, as a dict with points, weights and values");

    m.def("scenario_ids", &scenarios::scenario_ids);
    m.def("run_scenario", [](const std::string& id, std::optional<unsigned> d1, std::optional<unsigned> d2,
                             std::optional<unsigned> kmax, std::optional<std::size_t> grid, std::uint64_t seed) {
        scenarios::ScenarioSpec s;
        s.id = id;
        s.d1 = d1;
        s.d2 = d2;
        s.kmax = kmax;
        s.grid = grid;
        s.seed = seed;
        scenarios::ScenarioResult r;
        {
            py::gil_scoped_release nogil;
            r = scenarios::run_scenario(s);
        }
        return py::make_tuple(scenarios::render_report(r.report), r.pass);
    }, py::arg("id"), py::arg("d1") = py::none(), py::arg("d2") = py::none(), py::arg("kmax") = py::none(),
       py::arg("grid") = py::none(), py::arg("seed") = 0x5eed1234,
       "Runs a scenario; returns (report JSON text, pass)");
}
