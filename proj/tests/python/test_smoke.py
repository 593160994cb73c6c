import math

import numpy as np
import pytest

import grushin


def test_hermite_ground_state():
    x = np.linspace(-3, 3, 7)
    ref = np.pi ** -0.25 * np.exp(-0.5 * x * x)
    assert np.allclose(grushin.hermite(0, x), ref, rtol=0, atol=1e-14)


def test_laguerre_orthonormal():
    tau, w = np.polynomial.laguerre.laggauss(80)
    w = w * np.exp(tau)
    a = grushin.laguerre_normalized(3, 1.0, tau)
    b = grushin.laguerre_normalized(4, 1.0, tau)
    assert abs(np.sum(w * a * a) - 1) < 1e-10
    assert abs(np.sum(w * a * b)) < 1e-10


def test_l1_closed_form():
    v, err = grushin.l1_bound_integral(0, 1)
    assert abs(v - math.sqrt(2 * math.pi)) < 1e-8


def test_exponent_and_admissibility():
    assert grushin.predicted_exponent(1, 2, 2, 1, 3) == pytest.approx(2.0)
    assert grushin.admissibility_violation(1, 2, 2, 1, 3) is None
    assert grushin.admissibility_violation(3, 2, 2, 1, 3) is not None
    with pytest.raises(grushin.AdmissibilityError):
        grushin.predicted_exponent(3, 2, 2, 1, 3)
    fit = grushin.fit_scaling_exponent([1, 2, 4, 8], [3, 6, 12, 24], 1.0)
    assert fit["slope"] == pytest.approx(1.0)
    assert fit["pass"]


@pytest.mark.parametrize("route", ["eigensum", "laguerre"])
def test_projection_kernel_idempotent(route):
    K = grushin.projection_kernel(2, 1.0, 1, route)
    P = K["values"] * np.asarray(K["weights"])[None, :]
    assert np.max(np.abs(P @ P - P)) < 1e-8
    assert K["points"].shape == (len(K["weights"]), 1)


def test_knapp_report():
    assert "knapp" in grushin.scenario_ids()
    rep, ok = grushin.run_scenario("knapp")
    assert ok
    assert rep["verdict"] == "pass"
    with pytest.raises(grushin.DomainError):
        grushin.run_scenario("knapp", d2=5)
