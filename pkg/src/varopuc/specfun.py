"""Special functions used by the closed-form densities.

Gamma via the Lanczos approximation, the Gauss hypergeometric function on
[0, 1] by series plus the 1 - x connection formula, and the complete
elliptic integral of the first kind via the arithmetic-geometric mean.
"""
from __future__ import annotations

import math
from typing import NamedTuple

from .errors import DomainError, ToleranceNotMetError

# Lanczos coefficients for g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

SERIES_TERM_CAP = 10**6
SERIES_RTOL = 1e-16


class SpecialValue(NamedTuple):
    value: float
    achieved_tolerance: float


def _lanczos(x: float) -> float:
    # valid for x >= 0.5
    x -= 1.0
    acc = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        acc += _LANCZOS[i] / (x + i)
    t = x + _LANCZOS_G + 0.5
    # split the power so t^(x + 1/2) does not overflow before exp(-t) scales it
    half = t ** (0.5 * (x + 0.5))
    return math.sqrt(2 * math.pi) * half * math.exp(-t) * half * acc


def gamma(x: float) -> float:
    """Gamma function for real x > 0."""
    x = float(x)
    if not x > 0 or math.isinf(x):
        raise DomainError("gamma is implemented for finite x > 0")
    if x < 0.5:
        return _lanczos(x + 1.0) / x
    if x > 171.6:
        raise DomainError("gamma overflows for x > 171.6")
    return _lanczos(x)


def _gamma_signed(x: float) -> float:
    """Gamma at non-positive non-integers by upward recurrence."""
    if x > 0:
        return gamma(x)
    if x == math.floor(x):
        raise DomainError("gamma has a pole at non-positive integers")
    shift = 0
    denom = 1.0
    while x + shift <= 0:
        denom *= x + shift
        shift += 1
    return gamma(x + shift) / denom


def hyp2f1_series(a: float, b: float, c: float, x: float, terms: int) -> SpecialValue:
    """Partial sum of the defining power series with a fixed number of terms."""
    total = 1.0
    term = 1.0
    for k in range(terms):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * x
        total += term
    return SpecialValue(total, abs(term))


def _series(a, b, c, x, cap=SERIES_TERM_CAP):
    total = 1.0
    term = 1.0
    for k in range(cap):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * x
        total += term
        if term == 0.0:
            return total, 0.0
        if k > 2:
            # ratio of successive terms tends to x; bound the geometric tail
            ratio = abs((a + k + 1) * (b + k + 1) / ((c + k + 1) * (k + 2)) * x)
            if ratio < 1.0:
                tail = abs(term) * ratio / (1.0 - ratio)
                if tail <= SERIES_RTOL * abs(total):
                    return total, tail
    return None


def _is_integer(v: float) -> bool:
    return abs(v - round(v)) < 1e-14


def hyp2f1(a: float, b: float, c: float, x: float, full_output: bool = False):
    """Gauss hypergeometric function 2F1(a, b; c; x) for x in [0, 1].

    Near x = 1 with c - a - b not an integer the connection formula in 1 - x
    takes over once the direct series would need more than the term cap.
    """
    a, b, c, x = float(a), float(b), float(c), float(x)
    if not 0.0 <= x <= 1.0:
        raise DomainError("hyp2f1 is implemented for x in [0, 1]")
    if c <= 0 and _is_integer(c):
        raise DomainError("c must not be a non-positive integer")
    s = c - a - b
    if x == 1.0:
        if s <= 0:
            raise DomainError("2F1 diverges at x = 1 unless c - a - b > 0")
        val = _gamma_signed(c) * _gamma_signed(s) / (_gamma_signed(c - a) * _gamma_signed(c - b))
        return SpecialValue(val, 1e-15 * abs(val)) if full_output else val
    if x <= 0.9 or _is_integer(s):
        res = _series(a, b, c, x)
        if res is None:
            raise ToleranceNotMetError("2F1 series did not converge within the term cap")
        val, tail = res
    else:
        y = 1.0 - x
        r1 = _series(a, b, 1.0 - s, y)
        r2 = _series(c - a, c - b, s + 1.0, y)
        if r1 is None or r2 is None:
            raise ToleranceNotMetError("2F1 connection series did not converge")
        g1 = _gamma_signed(c) * _gamma_signed(s) / (_gamma_signed(c - a) * _gamma_signed(c - b))
        g2 = _gamma_signed(c) * _gamma_signed(-s) / (_gamma_signed(a) * _gamma_signed(b))
        val = g1 * r1[0] + y**s * g2 * r2[0]
        tail = abs(g1) * r1[1] + y**s * abs(g2) * r2[1]
    if full_output:
        return SpecialValue(val, tail + 1e-16 * abs(val))
    return val


def elliptic_k(k: float, kprime: float | None = None) -> float:
    """Complete elliptic integral of the first kind K(k), modulus convention.

    ``kprime = sqrt(1 - k^2)`` may be passed directly when k is close to 1.
    """
    k = float(k)
    if not 0.0 <= k < 1.0 and kprime is None:
        raise DomainError("elliptic_k needs 0 <= k < 1")
    if kprime is None:
        kprime = math.sqrt((1.0 - k) * (1.0 + k))
    elif not 0.0 < kprime <= 1.0:
        raise DomainError("complementary modulus must lie in (0, 1]")
    a, b = 1.0, float(kprime)
    for _ in range(64):
        if abs(a - b) <= 1e-16 * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return math.pi / (2.0 * a)
