import cmath

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from varopuc.errors import DomainError
from varopuc.schedules import Constant, Table
from varopuc.szego import (
    evaluate,
    evaluate_pair_at,
    evaluate_with_derivative,
    opuc,
    opuc_pair,
    pair_trajectory,
    popuc,
    popuc_on_circle_phase,
    reversed_poly,
)

disk = st.builds(lambda r, t: r * cmath.exp(1j * t), st.floats(0, 0.95), st.floats(0, 2 * np.pi))
unimodular = st.builds(lambda t: cmath.exp(1j * t), st.floats(0, 2 * np.pi))


def test_one_step():
    phi, star = opuc_pair([0.3 - 0.4j])
    np.testing.assert_allclose(phi, [-(0.3 + 0.4j), 1])
    np.testing.assert_allclose(star, [1, -(0.3 - 0.4j)])


def test_two_steps_against_symbolic_expansion():
    z, a0, a1 = sp.symbols("z a0 a1")
    b0, b1 = sp.symbols("b0 b1")  # stand-ins for conj(a0), conj(a1)
    phi1, star1 = z - b0, 1 - a0 * z
    phi2 = sp.Poly(sp.expand(z * phi1 - b1 * star1), z)
    vals = {a0: 0.2 + 0.5j, a1: -0.7 + 0.1j}
    vals.update({b0: np.conj(vals[a0]), b1: np.conj(vals[a1])})
    ref = [complex(c.subs(vals)) for c in reversed(phi2.all_coeffs())]
    np.testing.assert_allclose(opuc_pair([vals[a0], vals[a1]])[0], ref, atol=1e-15)


def test_free_case():
    np.testing.assert_array_equal(opuc(Constant(0), 5, 5), [0, 0, 0, 0, 0, 1])


def test_rogers_szego_coefficients():
    g = 0.5
    n = 12
    al = [(-1) ** k * g ** (k + 1) for k in range(n)]
    phi = opuc(Table({None: al}), n, 1)
    # sum_j (-1)^j g^j / prod_{i<=j} (1 - g^{2i}) z^{n-j}, Gaussian-binomial weighted
    ref = np.zeros(n + 1)
    for j in range(n + 1):
        num = np.prod([1 - g ** (2 * (n - i)) for i in range(j)])
        den = np.prod([1 - g ** (2 * (i + 1)) for i in range(j)])
        ref[n - j] = (-1) ** j * g**j * num / den
    np.testing.assert_allclose(phi.real, ref, atol=1e-14)


def test_popuc_small_cases():
    beta = 1j
    np.testing.assert_allclose(popuc(Constant(0.3), 1, 1, beta), [1j, 1])
    np.testing.assert_allclose(popuc(Constant(0), 2, 2, 1.0), [-1, 0, 1])
    # z (z - 0.5) + i (1 - 0.5 z)
    np.testing.assert_allclose(popuc(Constant(0.5), 2, 2, 1j), [1j, -0.5 - 0.5j, 1])


def test_popuc_rejects_non_unimodular():
    with pytest.raises(DomainError):
        popuc(Constant(0.1), 3, 3, 0.5)


@given(st.lists(disk, min_size=1, max_size=15))
def test_opuc_invariants(al):
    phi, star = opuc_pair(al)
    assert phi[-1] == 1
    assert phi[0] == pytest.approx(-np.conj(al[-1]), abs=1e-14)
    assert star[0] == 1
    np.testing.assert_allclose(star, reversed_poly(phi), atol=1e-14)


@given(st.lists(disk, min_size=0, max_size=15), unimodular)
def test_popuc_self_inversive(al, beta):
    p = popuc(Table({None: al + [0.0]}), len(al) + 1, 1, beta)
    assert p[0] == pytest.approx(-np.conj(beta), abs=1e-14)
    np.testing.assert_allclose(p, -np.conj(beta) * np.conj(p[::-1]), atol=1e-13)


def test_horner():
    assert evaluate(np.array([0, 0, 0, 0, 0, 1.0]), 2.0) == 32
    assert evaluate(np.array([-0.5, 1]), 0.5) == 0


def test_log_scaled_free_case():
    phi, star, logs = evaluate_pair_at(np.zeros(100), np.asarray(2.0 + 0j))
    ratio = complex(phi) / complex(star)
    assert ratio == pytest.approx(2.0**100, rel=1e-12)


def test_blaschke_at_origin_and_bound():
    al = np.array([0.3, -0.2j, 0.5 + 0.1j])
    phi, star, _ = evaluate_pair_at(al, np.asarray(0j))
    assert complex(phi) / complex(star) == pytest.approx(-np.conj(al[-1]))
    phi, star, _ = evaluate_pair_at(np.full(200, 0.5), np.asarray(0.3 + 0j))
    assert abs(complex(phi) / complex(star)) <= 1


@settings(max_examples=30)
@given(st.lists(disk, min_size=1, max_size=12), st.complex_numbers(max_magnitude=1.5))
def test_pointwise_matches_coefficients(al, z):
    phi, star = opuc_pair(al)
    p, q, logs = evaluate_pair_at(np.array(al), np.asarray(z))
    scale = np.exp(float(logs))
    assert complex(p) * scale == pytest.approx(evaluate(phi, z), abs=1e-11)
    assert complex(q) * scale == pytest.approx(evaluate(star, z), abs=1e-11)


def test_trajectory_and_derivative():
    al = np.array([0.3, -0.2j, 0.5 + 0.1j, 0.1])
    z = np.asarray(0.4 + 0.7j)
    phi, star, logs = pair_trajectory(al, z)
    for k in range(len(al) + 1):
        ref = evaluate(opuc_pair(al[:k])[0], complex(z)) if k else 1
        assert complex(phi[k]) * np.exp(logs[k]) == pytest.approx(ref, abs=1e-13)
    p, dp, _ = evaluate_with_derivative(al, np.array([complex(z)]))
    c = opuc_pair(al)[0]
    dc = np.arange(1, c.size) * c[1:]
    assert complex(dp[0] / p[0]) == pytest.approx(evaluate(dc, complex(z)) / evaluate(c, complex(z)), rel=1e-12)


def test_on_circle_phase_is_real_and_matches():
    al = np.array([0.3, -0.2j, 0.5 + 0.1j])
    beta = cmath.exp(0.4j)
    th = np.linspace(0, 2 * np.pi, 50)
    vals = popuc_on_circle_phase(al, beta, th)
    assert np.isrealobj(vals)
    poly = popuc(Table({None: list(al) + [0]}), 4, 1, beta)
    full = np.array([evaluate(poly, cmath.exp(1j * t)) for t in th])
    rotated = np.exp(1j * (0.5 * np.angle(-beta) - 2 * th)) * full
    np.testing.assert_allclose(rotated.imag, 0, atol=1e-13)
    # equal up to the pointwise log scale of the recurrence
    _, _, logs = evaluate_pair_at(al, np.exp(1j * th))
    np.testing.assert_allclose(vals * np.exp(logs), rotated.real, atol=1e-13)
