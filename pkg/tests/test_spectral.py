import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from varopuc.errors import DomainError, OnSpectrumError
from varopuc.spectral import (
    arc_angle,
    band_set,
    discriminant,
    g_a,
    g_delta,
    geronimus_functions,
    mass_point,
    on_arc,
    periodic_schur,
    periodic_stieltjes,
    reflected_sequence,
    sqrt_branch,
    transfer_matrix,
    two_periodic_edges,
)

# |alpha| below ~1e-154 underflows alpha^2, and f outside the disk is ~1/conj(alpha)
radius = st.one_of(st.just(0.0), st.floats(1e-6, 0.95))
disk = st.builds(lambda r, t: r * cmath.exp(1j * t), radius, st.floats(0, 2 * np.pi))
off_circle = st.builds(lambda r, t: r * cmath.exp(1j * t),
                       st.one_of(st.floats(0.01, 0.98), st.floats(1.02, 4.0)), st.floats(0, 2 * np.pi))


def test_arc_angle():
    assert arc_angle(0.0) == 0.0
    assert arc_angle(1.0) == pytest.approx(math.pi)
    assert arc_angle(0.5) == pytest.approx(math.pi / 3)
    assert on_arc(-1 + 0j, 0.5)
    assert not on_arc(1 + 0j, 0.5)


def test_sqrt_branch_values():
    assert sqrt_branch(0j, 0.7) == pytest.approx(1)
    assert sqrt_branch(3 + 0j, 1.0) == pytest.approx(4)
    v = sqrt_branch(2 + 0j, 0.5)
    assert v * v == pytest.approx(3)
    # continuity along the positive axis from 1 at z = 0
    assert v.real > 0


def test_g_a_special_cases():
    assert g_a(0j, 0.3) == pytest.approx(1)
    assert g_a(0.5 + 0j, 0.0) == pytest.approx(1)
    assert g_a(3 + 0j, 0.0) == pytest.approx(3)
    for z in (0.3j, 2 - 1j, -0.5):
        assert g_a(complex(z), 1.0) == pytest.approx(z + 1)


@given(off_circle, st.floats(0, 1))
def test_g_a_identities(z, a):
    G = g_a(z, a)
    assert abs((z - G) * (1 - G) - a * a * z) <= 1e-12 * (1 + abs(z) ** 2)
    Gi = g_a(1 / np.conj(z), a)
    assert abs(np.conj(Gi) - G / z) <= 1e-12 * max(1, abs(G / z))


def test_mass_point():
    assert mass_point(0.5) == pytest.approx(1)
    assert mass_point(0.1) == pytest.approx(1)
    assert mass_point(-0.1) is None
    m = mass_point(0.6 + 0.3j)
    assert abs(m) == pytest.approx(1)


def test_geronimus_special_cases():
    F, m, f = geronimus_functions(0, 0.5)
    assert (F, m, f) == (1, 0, 0)
    al = cmath.exp(0.7j)
    F, m, f = geronimus_functions(al, 2)
    assert m == pytest.approx(1 / (2 - np.conj(al)))
    assert f == pytest.approx(al)
    F, m, f = geronimus_functions(0.5, 0.3)
    assert F == pytest.approx(1 - 2 * 0.3 * m, abs=1e-12)
    assert f == pytest.approx(m / (0.3 * m - 1), abs=1e-12)
    with pytest.raises(OnSpectrumError):
        geronimus_functions(0.5, -1)
    with pytest.raises(OnSpectrumError):
        geronimus_functions(0.5, 1)


@settings(max_examples=60)
@given(disk, off_circle)
def test_geronimus_web(alpha, z):
    try:
        F, m, f = geronimus_functions(alpha, z)
        Fi, mi, fi = geronimus_functions(alpha, 1 / np.conj(z))
    except OnSpectrumError:
        return
    assert abs(F - (1 - 2 * z * m)) <= 1e-10 * max(1, abs(F))
    if alpha != 0:  # free case: f is 0 inside and infinite outside
        assert abs(np.conj(fi) * f - 1) <= 1e-10 * max(1, abs(f))
    if abs(z) < 1:
        assert abs(f) <= 1 + 1e-12


def test_transfer_matrix():
    np.testing.assert_allclose(transfer_matrix(0, 0.4j), [[0.4j, 0], [0, 1]])
    np.testing.assert_allclose(transfer_matrix(0.5, 1), np.array([[1, -0.5], [-0.5, 1]]) / math.sqrt(0.75))
    for al, z in ((0.3 - 0.2j, 0.7 + 1j), (0.9j, -2)):
        assert np.linalg.det(transfer_matrix(al, z)) == pytest.approx(z)


def test_discriminant_constant_doubled():
    a = 0.4
    d = discriminant([a])
    assert d.period == 2 and d.original_period == 1
    for z in (0.3 + 0.5j, 2.0, -1j):
        assert d(z) == pytest.approx((z + 1 / z + 2 * a * a) / (1 - a * a))
    assert discriminant([0.0, 0.0])(1.0) == pytest.approx(2)


def test_discriminant_reality_and_normalisation():
    d = discriminant([0.3, 0.6j, -0.2 + 0.1j])
    th = np.linspace(0, 2 * np.pi, 401)
    vals = d(np.exp(1j * th))
    assert np.max(np.abs(vals.imag)) <= 1e-10
    z = 1e-7
    assert z ** (d.period / 2) * d(z) == pytest.approx(1 / d.rho_product, rel=1e-6)
    h = 1e-6
    num = (d.on_circle(th + h) - d.on_circle(th - h)) / (2 * h)
    np.testing.assert_allclose(d.theta_derivative(th), num, atol=1e-6)


def test_bands_constant_is_geronimus_arc():
    arcs = band_set(discriminant([0.5]))
    assert len(arcs) == 1
    assert arcs[0][0] == pytest.approx(math.pi / 3, abs=1e-12)
    assert arcs[0][1] == pytest.approx(5 * math.pi / 3, abs=1e-12)


def test_bands_two_periodic_real_equal():
    a = 0.4
    tp, tm = two_periodic_edges(a, a)
    assert tp == pytest.approx(2 * math.asin(a))
    assert tm == pytest.approx(math.pi)


def test_bands_two_periodic_edges():
    tp, tm = two_periodic_edges(0.3, 0.6j)
    arcs = band_set(discriminant([0.3, 0.6j]))
    ref = [(tp, tm), (2 * math.pi - tm, 2 * math.pi - tp)]
    np.testing.assert_allclose(arcs, ref, atol=1e-10)


@settings(max_examples=25, deadline=None)
@given(st.lists(disk, min_size=1, max_size=5))
def test_band_count_and_disjointness(coeffs):
    d = discriminant(coeffs)
    arcs = band_set(d)
    assert 1 <= len(arcs) <= d.period
    for (l0, r0), (l1, r1) in zip(arcs, arcs[1:]):
        assert r0 <= l1 + 1e-9
    mids = [0.5 * (lo + hi) for lo, hi in arcs]
    assert np.all(np.abs(d.on_circle(np.array(mids))) <= 2 + 1e-9)


def test_g_delta():
    d = discriminant([0.0])
    assert g_delta(d, 3.0) == pytest.approx(9)
    assert g_delta(discriminant([0.3, 0.6j]), 1e-9) == pytest.approx(1, abs=1e-6)
    rng = np.random.default_rng(11)
    z = 2.5 * rng.random(100) * np.exp(2j * np.pi * rng.random(100))
    z = z[np.abs(np.abs(z) - 1) > 1e-3]
    for a in (0.2, 0.7):
        np.testing.assert_allclose(g_delta(discriminant([a]), z), g_a(z, a) ** 2, rtol=1e-12)
    with pytest.raises(OnSpectrumError):
        g_delta(discriminant([0.5]), -1)


def test_periodic_schur():
    assert periodic_schur([0.0], 0, 0.3) == pytest.approx(0)
    rng = np.random.default_rng(2)
    z = 0.95 * np.sqrt(rng.random(100)) * np.exp(2j * np.pi * rng.random(100))
    for al in (0.5, -0.3 + 0.6j):
        np.testing.assert_allclose(periodic_schur([al], 0, z), geronimus_functions(al, z)[2], atol=1e-10)
    seq = (0.3, 0.6j, -0.2)
    for j in range(3):
        assert periodic_schur(seq, j, 0) == pytest.approx(seq[j])


def test_periodic_schur_fixed_point():
    seq = (0.3, 0.6j)
    z = 0.4 - 0.3j
    f0 = periodic_schur(seq, 0, z)
    f1 = periodic_schur(seq, 1, z)
    # Schur step: f_j = (g + z f_{j+1}) / (1 + conj(g) z f_{j+1})
    g = seq[0]
    assert f0 == pytest.approx((g + z * f1) / (1 + np.conj(g) * z * f1), abs=1e-12)


def test_stieltjes_and_reflection():
    seq = reflected_sequence((0.3, 0.6j), 1.0)
    assert len(seq) == 2
    z = 0.2 + 0.1j
    f = periodic_schur(seq, 0, z)
    assert periodic_stieltjes(seq, 0, z) == pytest.approx(f / (f * z - 1))
    with pytest.raises(DomainError):
        arc_angle(1.5)
