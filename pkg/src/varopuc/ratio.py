"""Observed polynomial ratios and their predicted limits."""
from __future__ import annotations

import math

import mpmath
import numpy as np

from .errors import DomainError, NearZeroDenominatorError, UnsupportedVariantError
from .schedules import Constant, Periodic, coefficients
from .spectral import (
    discriminant,
    g_a,
    g_delta,
    geronimus_functions,
    periodic_schur,
    periodic_stieltjes,
    reflected_sequence,
)
from .szego import _check_beta, pair_trajectory

KINDS = ("popuc_step", "opuc_step", "star_step", "opuc_over_popuc", "blaschke", "period_step")
DENOMINATOR_FLOOR = 1e-250


class _Trajectory:
    """Scaled values of Phi_k, Phi_k* and Phi^(beta)_k at one point."""

    def __init__(self, alphas, z, beta):
        self.z = complex(z)
        self.beta = beta
        self.phi, self.star, self.logs = pair_trajectory(alphas, np.asarray(self.z))

    def opuc(self, k):
        return complex(self.phi[k]), float(self.logs[k])

    def reversed(self, k):
        return complex(self.star[k]), float(self.logs[k])

    def popuc(self, k):
        if k < 1:
            raise DomainError("paraorthogonal degree must be at least 1")
        v = self.z * self.phi[k - 1] - np.conj(self.beta) * self.star[k - 1]
        return complex(v), float(self.logs[k - 1])


def _divide(num, den):
    (a, la), (b, lb) = num, den
    if abs(b) < DENOMINATOR_FLOOR:
        raise NearZeroDenominatorError("denominator vanishes to working precision")
    return a / b * math.exp(la - lb)


def _period(schedule, p):
    if p is not None:
        return int(p)
    if isinstance(schedule, Periodic):
        return discriminant(schedule.values).period
    return 1


def observed_ratio(kind: str, schedule, n: int, N: int, beta, z, p: int | None = None) -> complex:
    """Finite-n ratio of the requested kind.

    popuc_step       Phi^b_{n+1} / Phi^b_n
    opuc_step        Phi_{n+1} / Phi_n
    star_step        Phi*_{n+1} / Phi*_n
    opuc_over_popuc  Phi_n / Phi^b_{n+1}
    blaschke         Phi_n / Phi*_n
    period_step      Phi^b_{n+p} / Phi^b_n
    """
    if kind not in KINDS:
        raise UnsupportedVariantError(f"unknown ratio kind {kind!r}")
    beta = _check_beta(beta)
    if n < 1 and kind in ("popuc_step", "period_step"):
        raise DomainError("paraorthogonal ratios need n >= 1")
    top = n + (_period(schedule, p) if kind == "period_step" else 1)
    tr = _Trajectory(coefficients(schedule, top, N), z, beta)
    if kind == "popuc_step":
        return _divide(tr.popuc(n + 1), tr.popuc(n))
    if kind == "opuc_step":
        return _divide(tr.opuc(n + 1), tr.opuc(n))
    if kind == "star_step":
        return _divide(tr.reversed(n + 1), tr.reversed(n))
    if kind == "opuc_over_popuc":
        return _divide(tr.opuc(n), tr.popuc(n + 1))
    if kind == "blaschke":
        return _divide(tr.opuc(n), tr.reversed(n))
    return _divide(tr.popuc(top), tr.popuc(n))


def predicted_limit(kind: str, limit, beta, z, n: int = 0) -> complex:
    """Limit of the ratio ``kind`` at z.

    ``limit`` is a constant coefficient (complex) or a tuple of periodic
    coefficients.  For periodic limits the prediction depends on the residue
    j = -n mod p of the index.
    """
    beta = _check_beta(beta)
    z = complex(z)
    if isinstance(limit, Constant):
        limit = limit.alpha
    if isinstance(limit, Periodic):
        limit = limit.values
    if isinstance(limit, (tuple, list)) and len(limit) == 1:
        limit = limit[0]
    if not isinstance(limit, (tuple, list)):
        alpha = complex(limit)
        a = abs(alpha)
        if kind in ("popuc_step", "opuc_step", "star_step"):
            return complex(g_a(z, a))
        if kind == "period_step":
            return complex(g_a(z, a))
        if kind == "opuc_over_popuc":
            return geronimus_functions(-alpha.conjugate() * beta, z)[1]
        if kind == "blaschke":
            return geronimus_functions(-alpha.conjugate(), z)[2]
        raise UnsupportedVariantError(f"unknown ratio kind {kind!r}")

    al = tuple(complex(c) for c in limit)
    p = len(al)
    if kind == "period_step":
        return complex(g_delta(discriminant(al), z))
    j = (-n) % p
    ref1 = reflected_sequence(al, 1.0)
    f1 = lambda jj: complex(periodic_schur(ref1, jj % p, z))
    if kind == "blaschke":
        return f1(j)
    if kind == "star_step":
        return 1.0 - z * al[(p - j) % p] * f1(j)
    if kind == "opuc_step":
        return z - al[(p - j) % p].conjugate() / f1(j)
    refb = reflected_sequence(al, beta)
    mb = lambda jj: complex(periodic_stieltjes(refb, jj % p, z))
    if kind == "opuc_over_popuc":
        return mb(j)
    if kind == "popuc_step":
        # chain Phi_{n+1}^b/Phi_n = 1/m^(j), Phi_n/Phi_{n-1} and Phi_{n-1}/Phi_n^b = m^(j+1)
        return mb(j + 1) / mb(j) * (z - al[(p - j - 1) % p].conjugate() / f1(j + 1))
    raise UnsupportedVariantError(f"unknown ratio kind {kind!r}")


def one_period_product(coeffs, beta, z) -> complex:
    """Product of the POPUC step predictions over one (even) discriminant period."""
    coeffs = tuple(complex(c) for c in coeffs)
    prod = 1.0 + 0j
    for n in range(discriminant(coeffs).period):
        prod *= predicted_limit("popuc_step", coeffs, beta, z, n)
    return prod


def ratio_bounds(r: float, R: float) -> tuple[float, float]:
    """Bounds (r-1)^2/(R+1) < |Phi^b_{n+1}/Phi^b_n| < (R+1)^2/(r-1) on 1 < r <= |z| <= R."""
    if not 1 < r <= R:
        raise DomainError("need 1 < r <= R")
    return (r - 1) ** 2 / (R + 1), (R + 1) ** 2 / (r - 1)


def denominator_for(n: int, t: float) -> int:
    """Smallest N >= 1 with n <= t N, up to rounding in n / t."""
    return max(1, math.ceil(n / t - 1e-9))


def convergence_report(kind: str, schedule, beta, z, ladder, t: float = 1.0, limit=None,
                       p: int | None = None) -> dict:
    """Observed against predicted ratios along a ladder of n with N = ceil(n / t)."""
    if limit is None:
        if isinstance(schedule, (Constant, Periodic)):
            limit = schedule
        else:
            raise UnsupportedVariantError("supply the limit for varying schedules")
    rungs = []
    prev = None
    violations = []
    for n in ladder:
        N = denominator_for(n, t)
        obs = observed_ratio(kind, schedule, n, N, beta, z, p)
        pred = predicted_limit(kind, limit, beta, z, n)
        err = abs(obs - pred)
        rungs.append({"n": int(n), "N": N, "observed": [obs.real, obs.imag],
                      "predicted": [pred.real, pred.imag], "error": err})
        if prev is not None and err > 2 * prev:
            violations.append(int(n))
        prev = err
    z = complex(z)
    return {"schema": 1, "kind": kind, "z": [z.real, z.imag], "rungs": rungs,
            "monotone_violations": violations}


# ---------------------------------------------------------------------------
# extended precision route
#
# Constant and periodic sequences converge geometrically, so double precision
# reaches round-off long before the larger rungs of a ladder.  These helpers
# repeat the observed/predicted comparison with mpmath to resolve the trend.


def _mp_sqrt_branch(z, a):
    # (z + 1) sqrt(1 - 4 z (1 - a^2)/(z + 1)^2), principal root
    u = 4 * z * (1 - a * a) / ((z + 1) ** 2)
    return (z + 1) * mpmath.sqrt(1 - u)


def mp_g_a(z, a):
    z = mpmath.mpc(z)
    a = mpmath.mpf(a)
    return (z + 1 + _mp_sqrt_branch(z, a)) / 2


def mp_g_delta(coeffs, z):
    disc = discriminant(coeffs)
    z = mpmath.mpc(z)
    P = mpmath.eye(2)
    rho_prod = mpmath.mpf(1)
    for a in disc.coefficients:
        a = mpmath.mpc(a)
        rho = mpmath.sqrt(1 - abs(a) ** 2)
        rho_prod *= rho
        A = mpmath.matrix([[z, -mpmath.conj(a)], [-a * z, 1]]) / rho
        P = A * P
    T = P[0, 0] + P[1, 1]
    q = mpmath.sqrt(1 - 4 * z ** disc.period / (T * T))
    return rho_prod * T * (1 + q) / 2


def mp_observed_ratio(kind: str, coeffs_seq, n: int, beta, z, p: int = 1):
    """popuc_step or period_step ratio with the recurrence run in mpmath."""
    z = mpmath.mpc(z)
    cb = mpmath.conj(mpmath.mpc(beta))
    top = n + (p if kind == "period_step" else 1)
    phi = mpmath.mpc(1)
    star = mpmath.mpc(1)
    pop = {}
    for k in range(top):
        pop[k + 1] = z * phi - cb * star
        a = mpmath.mpc(coeffs_seq[k])
        phi, star = z * phi - mpmath.conj(a) * star, star - a * z * phi
    if kind == "popuc_step":
        return pop[n + 1] / pop[n]
    if kind == "period_step":
        return pop[top] / pop[n]
    raise UnsupportedVariantError("extended precision covers popuc_step and period_step")


def mp_error_ladder(kind: str, limit, beta, z, ladder, dps: int = 120) -> list:
    """|observed - predicted| along the ladder, computed with ``dps`` digits."""
    with mpmath.workdps(dps):
        if isinstance(limit, (tuple, list)):
            al = tuple(complex(c) for c in limit)
            pred = mp_g_delta(al, z) if kind == "period_step" else None
            per = discriminant(al).period
        else:
            al = (complex(limit),)
            pred = mp_g_a(z, abs(complex(limit)))
            per = 1
        if pred is None:
            raise UnsupportedVariantError("periodic extended-precision check covers period_step")
        out = []
        for n in ladder:
            seq = [al[k % len(al)] for k in range(n + per + 1)]
            obs = mp_observed_ratio(kind, seq, n, beta, z, per)
            out.append(float(abs(obs - pred)))
        return out
