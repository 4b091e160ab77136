import cmath
import math

import numpy as np
import pytest

from varopuc.errors import DomainError, UnsupportedVariantError
from varopuc.ratio import (
    convergence_report,
    mp_error_ladder,
    observed_ratio,
    one_period_product,
    predicted_limit,
    ratio_bounds,
)
from varopuc.schedules import Constant, Periodic, SampledFunction, power
from varopuc.spectral import discriminant, g_a, g_delta, geronimus_functions, periodic_schur


def test_free_case_opuc_step():
    for z in (2.0, -1.5j, 3 + 1j):
        assert observed_ratio("opuc_step", Constant(0), 10, 10, 1.0, z) == pytest.approx(z)
        assert predicted_limit("opuc_step", 0.0, 1.0, z) == pytest.approx(z)


def test_blaschke_at_origin():
    s = SampledFunction(power(1.0))
    assert observed_ratio("blaschke", s, 7, 10, 1.0, 0) == pytest.approx(-0.6)


def test_popuc_step_constant():
    obs = observed_ratio("popuc_step", Constant(0.5), 400, 400, 1.0, 2.0)
    assert abs(obs - g_a(2.0, 0.5)) <= 5e-2


def test_opuc_over_popuc_free_case():
    assert predicted_limit("opuc_over_popuc", 0.0, 1.0, 2.0) == pytest.approx(0.5)
    assert observed_ratio("opuc_over_popuc", Constant(0), 30, 30, 1.0, 2.0) == pytest.approx(0.5)


def test_blaschke_prediction():
    pred = predicted_limit("blaschke", 0.5, 1.0, 0.3)
    assert pred == pytest.approx(geronimus_functions(-0.5, 0.3)[2])
    assert pred == pytest.approx(periodic_schur([-0.5], 0, 0.3), abs=1e-10)
    obs = observed_ratio("blaschke", Constant(0.5), 300, 300, 1.0, 0.3)
    assert obs == pytest.approx(pred, abs=1e-8)


def test_period_step_constant_doubled():
    pred = predicted_limit("period_step", (0.4, 0.4), 1.0, 2.0)
    assert pred == pytest.approx(g_a(2.0, 0.4) ** 2)


@pytest.mark.parametrize("z", [0.3, 2.0, -0.4 + 0.5j])
def test_periodic_predictions(z):
    seq = Periodic((0.3, 0.6j))
    for kind in ("popuc_step", "opuc_step", "star_step", "opuc_over_popuc", "blaschke", "period_step"):
        for n in (200, 201):
            obs = observed_ratio(kind, seq, n, n, cmath.exp(0.5j), z)
            pred = predicted_limit(kind, seq, cmath.exp(0.5j), z, n)
            assert obs == pytest.approx(pred, abs=1e-8), kind


@pytest.mark.parametrize("coeffs", [(0.3, 0.6j), (0.3, 0.6j, -0.2), (0.5,)])
def test_product_of_steps_is_g_delta(coeffs):
    for z in (0.3, 2.0, 0.5j):
        assert one_period_product(coeffs, 1.0, z) == pytest.approx(g_delta(discriminant(coeffs), z), rel=1e-10)


def test_ratio_bounds_hold():
    lo, hi = ratio_bounds(2.0, 2.0)
    for sched in (Constant(0.5), Periodic((0.3, 0.6j)), SampledFunction(power(1.0))):
        for th in np.linspace(0, 2 * math.pi, 9):
            for n in (10, 100):
                v = abs(observed_ratio("popuc_step", sched, n, n, 1.0, 2 * cmath.exp(1j * th)))
                assert lo < v < hi
    with pytest.raises(DomainError):
        ratio_bounds(1.0, 2.0)


def test_report_schema_and_trend():
    rep = convergence_report("popuc_step", SampledFunction(power(1.0)), 1.0, 2.0, (100, 200, 400, 800),
                             t=0.5, limit=Constant(0.5))
    assert rep["schema"] == 1 and rep["kind"] == "popuc_step"
    errs = [r["error"] for r in rep["rungs"]]
    assert errs[-1] < errs[0] and errs[-1] <= 5e-2
    assert [r["N"] for r in rep["rungs"]] == [200, 400, 800, 1600]
    with pytest.raises(UnsupportedVariantError):
        convergence_report("popuc_step", SampledFunction(power(1.0)), 1.0, 2.0, (10,))


def test_extended_precision_trend():
    e = mp_error_ladder("popuc_step", 0.5, 1.0, 2.0, (100, 800), dps=80)
    assert e[1] < e[0] < 1e-40
    e = mp_error_ladder("period_step", (0.3, 0.6j), 1.0, 0.3, (100, 800), dps=80)
    assert e[1] < e[0]


def test_errors():
    with pytest.raises(UnsupportedVariantError):
        observed_ratio("nope", Constant(0.1), 3, 3, 1.0, 2.0)
    with pytest.raises(DomainError):
        observed_ratio("popuc_step", Constant(0.1), 0, 3, 1.0, 2.0)
    with pytest.raises(DomainError):
        observed_ratio("opuc_step", Constant(0.1), 3, 3, 0.5, 2.0)
