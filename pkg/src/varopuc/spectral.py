"""Limit objects attached to constant and periodic coefficient sequences.

Constant modulus a: the arc Gamma_a = {e^{i theta}: theta_a <= theta <= 2pi - theta_a}
with theta_a = 2 arcsin a, the function G_a = (z + 1 + sqrt((z-1)^2 + 4 z a^2)) / 2
and the Geronimus Caratheodory/Stieltjes/Schur functions.  Periodic sequences:
the discriminant built from transfer matrices, its band set, G_Delta and the
fixed-point Schur function.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BranchSelectionError, DomainError, OnSpectrumError

SPECTRUM_TOL = 1e-12
SCHUR_TOL = 1e-9


def _check_modulus(a):
    if not 0.0 <= a <= 1.0:
        raise DomainError(f"modulus must lie in [0, 1], got {a!r}")


def arc_angle(a: float) -> float:
    """theta_a = 2 arcsin a."""
    _check_modulus(a)
    return 2.0 * math.asin(a)


def on_arc(z, a: float, tol: float = SPECTRUM_TOL):
    """Boolean mask of points lying on Gamma_a (within tol)."""
    z = np.asarray(z, dtype=complex)
    th = np.mod(np.angle(z), 2 * np.pi)
    ta = arc_angle(a)
    if a >= 1.0:
        return np.abs(z + 1) <= tol
    return (np.abs(np.abs(z) - 1) <= tol) & (th >= ta - tol) & (th <= 2 * np.pi - ta + tol)


def sqrt_branch(z, a: float):
    """Branch of sqrt((z-1)^2 + 4 z a^2) analytic off Gamma_a with value 1 at 0.

    Written as (z + 1) sqrt(1 - u) with u = 4 z (1 - a^2) / (z + 1)^2; the
    principal root then has its cut exactly on Gamma_a.  Points on the cut
    take the limit from inside the disk.
    """
    _check_modulus(a)
    z = np.asarray(z, dtype=complex)
    c2 = 1.0 - a * a
    zp1 = z + 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        u = 4.0 * z * c2 / (zp1 * zp1)
        out = zp1 * np.sqrt(1.0 - u)
    if a < 1.0:
        cut = on_arc(z, a, 1e-14)
        if np.any(cut):
            zi = z[cut] * (1.0 - 1e-7)
            ui = 4.0 * zi * c2 / (zi + 1.0) ** 2
            side = np.sign(np.sqrt(1.0 - ui).imag)
            side = np.where(side == 0, 1.0, side)
            mag = np.sqrt(np.clip(u[cut].real - 1.0, 0.0, None))
            out = np.array(out)
            out[cut] = zp1[cut] * 1j * side * mag
            # z = -1 itself: limit along the negative radius
            at_m1 = np.abs(z + 1.0) <= 1e-14
            out[at_m1] = 2.0 * math.sqrt(c2)
    return out if out.ndim else complex(out)


def g_a(z, a: float):
    """G_a(z) = (z + 1 + sqrt_branch(z, a)) / 2."""
    z = np.asarray(z, dtype=complex)
    out = 0.5 * (z + 1.0 + np.asarray(sqrt_branch(z, a)))
    return out if out.ndim else complex(out)


def mass_point(alpha: complex):
    """Location of the isolated mass of the Geronimus measure, or None."""
    alpha = complex(alpha)
    if abs(alpha + 0.5) > 0.5 and abs(alpha) < 1:
        return (1 + alpha.conjugate()) / (1 + alpha)
    return None


def geronimus_functions(alpha: complex, z):
    """Caratheodory F, Stieltjes m and Schur f of the constant-alpha measure.

    Returns ``(F, m, f)``.  For alpha = 0 outside the disk f is the point at
    infinity and is returned as complex infinity.
    """
    alpha = complex(alpha)
    a = abs(alpha)
    if a > 1 + 1e-15:
        raise DomainError("alpha must lie in the closed disk")
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    if a >= 1 - 1e-15:
        w = alpha.conjugate()
        if np.any(np.abs(z - w) <= SPECTRUM_TOL):
            raise OnSpectrumError("z is the support point of the measure")
        F = (w + z) / (w - z)
        m = 1.0 / (z - w)
        f = np.full(z.shape, alpha)
    elif a == 0.0:
        if np.any(np.abs(np.abs(z) - 1) <= SPECTRUM_TOL):
            raise OnSpectrumError("free case: the whole circle is the support")
        inside = np.abs(z) < 1
        F = np.where(inside, 1.0 + 0j, -1.0 + 0j)
        with np.errstate(divide="ignore"):
            m = np.where(inside, 0j, 1.0 / z)
        f = np.where(inside, 0j, complex(np.inf, 0.0))
    else:
        if np.any(on_arc(z, a)):
            raise OnSpectrumError("z lies on the arc supporting the measure")
        mp = mass_point(alpha)
        if mp is not None and np.any(np.abs(z - mp) <= SPECTRUM_TOL):
            raise OnSpectrumError("z is the isolated mass point")
        G = np.asarray(g_a(z, a))
        # 1/(G - z) = (G - 1)/(a^2 z); use whichever side does not cancel
        # (G is close to 1 inside the disk and close to z outside)
        with np.errstate(divide="ignore", invalid="ignore"):
            inv = np.where(np.abs(z) > 1, (G - 1) / (a * a * z), 1.0 / (G - z))
        f = alpha * inv
        m = (a * a * inv + alpha) / ((1 + alpha) * z - (1 + alpha.conjugate()))
        F = 1.0 - 2.0 * z * m
    if scalar:
        return complex(F[0]), complex(m[0]), complex(f[0])
    return F, m, f


def transfer_matrix(alpha: complex, z):
    """A(alpha, z) = rho^{-1} [[z, -conj(alpha)], [-alpha z, 1]]."""
    alpha = complex(alpha)
    if abs(alpha) >= 1:
        raise DomainError("transfer matrix needs |alpha| < 1")
    rho = math.sqrt(1 - abs(alpha) ** 2)
    z = complex(z)
    return np.array([[z, -alpha.conjugate()], [-alpha * z, 1.0]]) / rho


# ---------------------------------------------------------------------------
# periodic coefficients


@dataclass(frozen=True)
class Discriminant:
    """Discriminant of a periodic sequence, period doubled when odd."""

    coefficients: tuple
    original_period: int

    @property
    def period(self) -> int:
        return len(self.coefficients)

    @property
    def rho_product(self) -> float:
        return float(np.prod([math.sqrt(1 - abs(c) ** 2) for c in self.coefficients]))

    def _products(self, z, derivative=False):
        z = np.asarray(z, dtype=complex)
        one = np.ones_like(z)
        zero = np.zeros_like(z)
        p = [one, zero, zero, one]  # p00 p01 p10 p11
        dp = [zero, zero, zero, zero]
        for a in self.coefficients:
            rho = math.sqrt(1 - abs(a) ** 2)
            ca = complex(a).conjugate()
            a00, a01, a10, a11 = z / rho, -ca / rho, -a * z / rho, 1.0 / rho
            if derivative:
                d00, d10 = 1.0 / rho, -a / rho
                dp = [
                    d00 * p[0] + a00 * dp[0] + a01 * dp[2],
                    d00 * p[1] + a00 * dp[1] + a01 * dp[3],
                    d10 * p[0] + a10 * dp[0] + a11 * dp[2],
                    d10 * p[1] + a10 * dp[1] + a11 * dp[3],
                ]
            p = [
                a00 * p[0] + a01 * p[2],
                a00 * p[1] + a01 * p[3],
                a10 * p[0] + a11 * p[2],
                a10 * p[1] + a11 * p[3],
            ]
        return p, dp

    def trace(self, z):
        """Tr(A(alpha_{p-1}, z) ... A(alpha_0, z)), a polynomial in z."""
        p, _ = self._products(z)
        return p[0] + p[3]

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return self.trace(z) * z ** (-(self.period // 2))

    def derivative(self, z):
        """d Delta / d z."""
        z = np.asarray(z, dtype=complex)
        p, dp = self._products(z, derivative=True)
        h = self.period // 2
        T = p[0] + p[3]
        dT = dp[0] + dp[3]
        return -h * z ** (-h - 1) * T + z ** (-h) * dT

    def on_circle(self, theta):
        """Real values of Delta(e^{i theta})."""
        return np.real(self(np.exp(1j * np.asarray(theta, dtype=float))))

    def theta_derivative(self, theta):
        """d/d theta of Delta(e^{i theta}), real on the circle."""
        z = np.exp(1j * np.asarray(theta, dtype=float))
        return np.real(1j * z * self.derivative(z))


def discriminant(coeffs) -> Discriminant:
    coeffs = tuple(complex(c) for c in coeffs)
    if not coeffs:
        raise DomainError("need at least one coefficient")
    if any(abs(c) >= 1 for c in coeffs):
        raise DomainError("periodic coefficients must lie in the open disk")
    p = len(coeffs)
    return Discriminant(coeffs * 2 if p % 2 else coeffs, p)


BAND_CLASSIFY_TOL = 1e-9


def band_set(disc: Discriminant, resolution: float = math.pi / 1e4, edge_tol: float = 1e-12):
    """Arcs of Delta^{-1}([-2, 2]) as (theta_left, theta_right) pairs.

    theta_left lies in [0, 2 pi); an arc crossing theta = 0 has theta_right > 2 pi.
    Gaps closed up to BAND_CLASSIFY_TOL are treated as closed.
    """
    m = max(int(math.ceil(2 * math.pi / resolution)), 16)
    grid = 2 * math.pi * np.arange(m) / m
    vals = disc.on_circle(grid)
    inside = np.abs(vals) <= 2 + BAND_CLASSIFY_TOL
    if inside.all():
        return [(0.0, 2 * math.pi)]
    if not inside.any():
        return []

    def refine(lo, hi, in_at_lo):
        # root of |Delta| - 2 between lo and hi
        lo = np.asarray(lo, dtype=float)
        hi = np.asarray(hi, dtype=float)
        for _ in range(80):
            if np.max(hi - lo) <= edge_tol * 0.5:
                break
            mid = 0.5 * (lo + hi)
            ins = np.abs(disc.on_circle(mid)) <= 2
            move_lo = ins == in_at_lo
            lo = np.where(move_lo, mid, lo)
            hi = np.where(move_lo, hi, mid)
        return 0.5 * (lo + hi)

    # rotate so that index 0 is outside a band
    start = int(np.argmin(inside))
    order = (np.arange(m) + start) % m
    ins = inside[order]
    th = grid[order] + np.where(order < start, 2 * math.pi, 0.0)
    rises = np.nonzero(~ins[:-1] & ins[1:])[0]
    falls = np.nonzero(ins[:-1] & ~ins[1:])[0]
    if ins[-1]:
        falls = np.append(falls, m - 1)
    step = 2 * math.pi / m
    left = refine(th[rises], th[rises + 1], False)
    right_hi = np.where(falls == m - 1, th[falls] + step, th[np.minimum(falls + 1, m - 1)])
    right = refine(th[falls], right_hi, True)
    arcs = []
    for lft, rgt in zip(left, right):
        lft = float(lft)
        rgt = float(rgt)
        shift = math.floor(lft / (2 * math.pi)) * 2 * math.pi
        arcs.append((lft - shift, rgt - shift))
    arcs.sort()
    return arcs


def two_periodic_edges(alpha0: complex, alpha1: complex):
    """(theta_plus, theta_minus) band edges for a 2-periodic sequence.

    theta_pm = arccos(+-rho0 rho1 - Re(alpha0 conj(alpha1))); the bands are
    [theta_plus, theta_minus] and its mirror image.
    """
    alpha0, alpha1 = complex(alpha0), complex(alpha1)
    r = math.sqrt((1 - abs(alpha0) ** 2) * (1 - abs(alpha1) ** 2))
    re = (alpha0 * alpha1.conjugate()).real
    return math.acos(r - re), math.acos(-r - re)


def g_delta(disc: Discriminant, z):
    """G_Delta(z) = (z^{p/2}/2) prod(rho) (Delta + sqrt(Delta^2 - 4)), larger branch.

    Evaluated as (prod(rho)/2) T (1 + sqrt(1 - 4 z^p / T^2)) with T the trace,
    which is regular at z = 0 where G_Delta = 1.
    """
    z = np.asarray(z, dtype=complex)
    T = disc.trace(z)
    d = T * z ** (-(disc.period // 2)) if np.all(z != 0) else None
    if d is not None:
        bad = (np.abs(np.imag(d)) <= SPECTRUM_TOL * np.maximum(1, np.abs(d))) & (np.abs(d) <= 2 + 1e-12) \
            & (np.abs(np.abs(z) - 1) <= 1e-9)
        if np.any(bad):
            raise OnSpectrumError("z lies in the band set")
    q = np.sqrt(1.0 - 4.0 * z ** disc.period / (T * T))
    out = 0.5 * disc.rho_product * T * (1.0 + q)
    return out if out.ndim else complex(out)


def reflected_sequence(coeffs, beta: complex = 1.0) -> tuple:
    """(-conj(alpha_{p-1}) beta, ..., -conj(alpha_0) beta)."""
    beta = complex(beta)
    return tuple(-complex(c).conjugate() * beta for c in reversed(list(coeffs)))


def _schur_inside(seq, j, z):
    p = len(seq)
    one = np.ones_like(z)
    A, B, C, D = one, np.zeros_like(z), np.zeros_like(z), one
    for k in range(p):
        g = seq[(j + k) % p]
        cg = complex(g).conjugate()
        # right-multiply by [[z, g], [conj(g) z, 1]]
        A, B, C, D = A * z + B * cg * z, A * g + B, C * z + D * cg * z, C * g + D
    # fixed points of f -> (A f + B)/(C f + D): C f^2 + (D - A) f - B = 0
    b = D - A
    disc = np.sqrt(b * b + 4 * B * C)
    sgn = np.where((np.conj(b) * disc).real >= 0, 1.0, -1.0)
    q = -0.5 * (b + sgn * disc)
    with np.errstate(divide="ignore", invalid="ignore"):
        r1 = np.where(q != 0, -B / q, 0j)
        r2 = np.where(C != 0, q / C, complex(np.inf))
    pick = np.where(np.abs(r1) <= np.abs(r2), r1, r2)
    if np.any(~(np.abs(pick) <= 1 + SCHUR_TOL)):
        raise BranchSelectionError("no fixed point of modulus <= 1")
    return pick


def periodic_schur(coeffs, j: int, z):
    """Schur function of the periodic sequence stripped j times.

    Inside the disk it is the fixed point of modulus <= 1 of the composed
    Schur steps f -> (alpha_k + z f)/(1 + conj(alpha_k) z f); outside it is
    continued by f(z) = 1/conj(f(1/conj(z))).
    """
    seq = tuple(complex(c) for c in coeffs)
    if not seq:
        raise DomainError("need at least one coefficient")
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    r = np.abs(z)
    if np.any(np.abs(r - 1) <= 1e-14):
        raise DomainError("periodic Schur function is evaluated off the unit circle")
    out = np.empty_like(z)
    ins = r < 1
    if ins.any():
        out[ins] = _schur_inside(seq, j, z[ins])
    if (~ins).any():
        with np.errstate(divide="ignore"):
            out[~ins] = 1.0 / np.conj(_schur_inside(seq, j, 1.0 / np.conj(z[~ins])))
    return complex(out[0]) if scalar else out


def periodic_stieltjes(coeffs, j: int, z):
    """m = f / (f z - 1) for the stripped periodic Schur function f."""
    f = periodic_schur(coeffs, j, z)
    return f / (f * np.asarray(z) - 1.0)
