"""Measures on the unit circle: densities, distribution functions and comparisons.

Angles are measured in [0, 2 pi).  A density arc (l, r) may have r > 2 pi when
it wraps through theta = 0.
"""
from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate, optimize

from .errors import (
    DomainError,
    ProximityError,
    ToleranceNotMetError,
    UnsupportedVariantError,
)
from .spectral import Discriminant, arc_angle, band_set, g_a, two_periodic_edges
from .specfun import elliptic_k, gamma, hyp2f1

TWO_PI = 2.0 * math.pi
QUAD_EPSABS = 1e-13
QUAD_EPSREL = 1e-12
PROXIMITY = 1e-6


# ---------------------------------------------------------------------------
# measure containers


@dataclass
class Empirical:
    """Normalised counting measure of a finite point set."""

    points: np.ndarray

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=complex).ravel()
        if self.points.size == 0:
            raise DomainError("empirical measure needs at least one point")


@dataclass
class DensityCurve:
    density: Callable
    arcs: list
    point_masses: list = field(default_factory=list)
    breakpoints: list = field(default_factory=list)
    label: str = ""

    def __call__(self, theta):
        theta = np.mod(np.asarray(theta, dtype=float), TWO_PI)
        return self.density(theta)

    def segments(self):
        """Sub-intervals of [0, 2 pi] free of interior singular points."""
        pieces = []
        for lo, hi in self.arcs:
            if hi - lo >= TWO_PI - 1e-15:
                pieces.append((0.0, TWO_PI))
                continue
            if hi > TWO_PI:
                pieces.append((lo, TWO_PI))
                pieces.append((0.0, hi - TWO_PI))
            else:
                pieces.append((lo, hi))
        cuts = sorted(set(float(b) % TWO_PI for b in self.breakpoints))
        out = []
        for lo, hi in pieces:
            inner = [c for c in cuts if lo < c < hi]
            edges = [lo] + inner + [hi]
            out.extend((edges[i], edges[i + 1]) for i in range(len(edges) - 1)
                       if edges[i + 1] > edges[i])
        out.sort()
        return out

    def to_csv(self, path, thetas) -> None:
        thetas = np.asarray(thetas, dtype=float)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["theta", "density"])
            for th, d in zip(thetas, self(thetas)):
                w.writerow([repr(float(th)), repr(float(d))])


@dataclass
class BalayageMeasure:
    """Measure on the circle given by its moments c_k, k = 0..K."""

    moments_: np.ndarray

    @property
    def order(self) -> int:
        return self.moments_.size - 1

    def density(self, theta):
        """Fejer-weighted reconstruction, non-negative for positive measures."""
        theta = np.asarray(theta, dtype=float)
        K = self.order
        k = np.arange(1, K + 1)
        w = 1.0 - k / (K + 1.0)
        phase = np.exp(-1j * np.multiply.outer(theta, k))
        series = 1.0 + 2.0 * np.real(phase @ (w * self.moments_[1:]))
        return series / TWO_PI


# ---------------------------------------------------------------------------
# quadrature helpers


def _quad_segment(func, lo, hi, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL):
    """Integral of func over [lo, hi] after theta = lo + (hi - lo)(1 - cos u)/2.

    The substitution absorbs inverse square-root endpoint behaviour.
    """
    width = hi - lo
    if width <= 0:
        return 0.0, 0.0
    half = 0.5 * width

    def g(u):
        s = math.sin(0.5 * u)
        return func(lo + width * s * s) * half * math.sin(u)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.quad(g, 0.0, math.pi, epsabs=epsabs, epsrel=epsrel, limit=400)
    return val, err


def _integrate_curve(curve: DensityCurve, weight=None):
    total = 0.0
    err = 0.0
    if weight is None:
        def f(th):
            return float(curve.density(th % TWO_PI))
    else:
        def f(th):
            return float(curve.density(th % TWO_PI)) * weight(th)
    for lo, hi in curve.segments():
        v, e = _quad_segment(f, lo, hi)
        total += v
        err += e
    return total, err


def total_mass(measure) -> float:
    if isinstance(measure, DensityCurve):
        mass, _ = _integrate_curve(measure)
        return mass + sum(w for _, w in measure.point_masses)
    if isinstance(measure, Empirical):
        return 1.0
    if isinstance(measure, BalayageMeasure):
        return float(measure.moments_[0].real)
    raise UnsupportedVariantError(type(measure).__name__)


# ---------------------------------------------------------------------------
# distribution functions


class DistributionFunction:
    """theta -> mass of the closed arc from angle 0 to theta (right-continuous)."""

    def __init__(self, curve: DensityCurve):
        self.curve = curve
        self.segments = curve.segments()
        self._f = lambda th: float(curve.density(th % TWO_PI))
        cums = [0.0]
        for lo, hi in self.segments:
            cums.append(cums[-1] + _quad_segment(self._f, lo, hi)[0])
        self._cum = np.array(cums)
        self._masses = sorted((float(t) % TWO_PI, float(w)) for t, w in curve.point_masses)

    def _mass_upto(self, theta):
        return sum(w for t, w in self._masses if t <= theta)

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        flat = np.mod(theta.ravel(), TWO_PI)
        flat = np.where(theta.ravel() >= TWO_PI, TWO_PI, flat)
        order = np.argsort(flat)
        out = np.empty(flat.size)
        idx = 0
        last_seg, last_th, last_val = -1, 0.0, 0.0
        for pos in order:
            th = flat[pos]
            while idx < len(self.segments) and self.segments[idx][1] <= th:
                idx += 1
            if idx < len(self.segments) and self.segments[idx][0] < th:
                lo = self.segments[idx][0]
                if last_seg == idx:
                    val = last_val + _quad_segment(self._f, last_th, th)[0]
                else:
                    val = self._cum[idx] + _quad_segment(self._f, lo, th)[0]
                last_seg, last_th, last_val = idx, th, val
            else:
                val = self._cum[idx]
            out[pos] = val + self._mass_upto(th)
        out = out.reshape(theta.shape)
        return out if out.ndim else float(out)

    def to_csv(self, path, thetas) -> None:
        thetas = np.asarray(thetas, dtype=float)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["theta", "F"])
            for th, F in zip(thetas, self(thetas)):
                w.writerow([repr(float(th)), repr(float(F))])


def cdf(curve: DensityCurve) -> DistributionFunction:
    return DistributionFunction(curve)


def angles(points) -> np.ndarray:
    """Arguments in [0, 2 pi), warning when points are off the circle."""
    points = np.asarray(points, dtype=complex).ravel()
    if points.size and np.max(np.abs(np.abs(points) - 1)) > 1e-6:
        warnings.warn("points off the unit circle were projected radially", stacklevel=2)
    return np.mod(np.angle(points), TWO_PI)


def kolmogorov_distance(points, F) -> float:
    """sup |F_emp - F| over the circle cut at angle 0."""
    if isinstance(points, Empirical):
        points = points.points
    th = np.sort(angles(points))
    n = th.size
    if n == 0:
        raise DomainError("no points")
    Fv = np.asarray(F(th), dtype=float)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - Fv), np.max(Fv - (i - 1) / n)))


# ---------------------------------------------------------------------------
# moments and potentials


def moments(measure, k_max: int) -> np.ndarray:
    """c_k = integral of e^{i k theta}, k = 0..k_max."""
    ks = np.arange(k_max + 1)
    if isinstance(measure, Empirical):
        return np.mean(measure.points[None, :] ** ks[:, None], axis=1)
    if isinstance(measure, BalayageMeasure):
        if k_max > measure.order:
            raise DomainError("balayage moments known only up to its order")
        return measure.moments_[: k_max + 1].copy()
    if isinstance(measure, DensityCurve):
        out = np.empty(k_max + 1, dtype=complex)
        for k in ks:
            re, _ = _integrate_curve(measure, lambda th, k=k: math.cos(k * th))
            im, _ = _integrate_curve(measure, lambda th, k=k: math.sin(k * th))
            out[k] = re + 1j * im
            out[k] += sum(w * np.exp(1j * k * t) for t, w in measure.point_masses)
        return out
    raise UnsupportedVariantError(type(measure).__name__)


def _arc_distance(z: complex, curve: DensityCurve) -> float:
    th = math.atan2(z.imag, z.real) % TWO_PI
    best = math.inf
    for lo, hi in curve.segments():
        if lo <= th <= hi:
            best = min(best, abs(abs(z) - 1))
        else:
            best = min(best, abs(z - np.exp(1j * lo)), abs(z - np.exp(1j * hi)))
    for t, _ in curve.point_masses:
        best = min(best, abs(z - np.exp(1j * t)))
    return best


def log_potential(measure, z: complex) -> float:
    """U(z) = -integral of log|z - xi| d mu(xi)."""
    z = complex(z)
    if isinstance(measure, Empirical):
        d = np.abs(z - measure.points)
        if np.min(d) < PROXIMITY:
            raise ProximityError("evaluation point too close to a mass point")
        return float(-np.mean(np.log(d)))
    if isinstance(measure, DensityCurve):
        if _arc_distance(z, measure) < PROXIMITY:
            raise ProximityError("evaluation point too close to the support")
        val, _ = _integrate_curve(measure, lambda th: math.log(abs(z - complex(math.cos(th), math.sin(th)))))
        val += sum(w * math.log(abs(z - np.exp(1j * t))) for t, w in measure.point_masses)
        return -val
    if isinstance(measure, BalayageMeasure):
        r = abs(z)
        if abs(r - 1) < 1e-3:
            raise ProximityError("moment expansion of the potential needs |z| away from 1")
        k = np.arange(1, measure.order + 1)
        c = measure.moments_[1:]
        if r > 1:
            return float(-math.log(r) + np.real(np.sum(c / (k * z**k))))
        return float(np.real(np.sum(np.conj(c) * z**k / k)))
    raise UnsupportedVariantError(type(measure).__name__)


# ---------------------------------------------------------------------------
# balayage


def poisson_kernel(r: float, t):
    """(1 - r^2) / (1 - 2 r cos t + r^2)."""
    if not 0 <= r < 1:
        raise DomainError("Poisson kernel needs 0 <= r < 1")
    t = np.asarray(t, dtype=float)
    return (1 - r * r) / (1 - 2 * r * np.cos(t) + r * r)


def balayage(measure, K: int = 256) -> BalayageMeasure:
    """Sweep of a measure in the closed disk onto the circle.

    Sweeping preserves the moments c_k for k >= 0, so the result is the
    circle measure with c_k = mean(z_j^k).
    """
    if isinstance(measure, Empirical):
        pts = measure.points
    else:
        pts = np.asarray(measure, dtype=complex).ravel()
    if np.any(np.abs(pts) > 1 + 1e-12):
        raise DomainError("balayage onto the circle needs points in the closed disk")
    k = np.arange(K + 1)
    c = np.empty(K + 1, dtype=complex)
    powk = np.ones_like(pts)
    for j in k:
        c[j] = powk.mean()
        powk = powk * pts
    return BalayageMeasure(c)


# ---------------------------------------------------------------------------
# densities for constant and periodic coefficients


def nu_a(a: float) -> DensityCurve:
    """Equilibrium-type density on Gamma_a for constant coefficients of modulus a."""
    if not 0 <= a <= 1:
        raise DomainError("modulus must lie in [0, 1]")
    if a == 1:
        return DensityCurve(lambda th: np.zeros(np.shape(th)), [], [(math.pi, 1.0)], label="nu_1")
    ta = arc_angle(a)

    def dens(th):
        th = np.asarray(th, dtype=float)
        # sin^2(th/2) - a^2 factored so the root sits exactly at theta_a
        q = np.sin(0.5 * (th - ta)) * np.sin(0.5 * (th + ta))
        with np.errstate(invalid="ignore", divide="ignore"):
            val = np.sin(0.5 * th) / np.sqrt(q) / TWO_PI
        inside = (th > ta) & (th < TWO_PI - ta)
        return np.where(inside & (q > 0), val, 0.0)

    return DensityCurve(dens, [(ta, TWO_PI - ta)], label=f"nu_a(a={a})")


def two_periodic_density(alpha0: complex, alpha1: complex) -> DensityCurve:
    """Closed form of nu_Delta for period two."""
    tp, tm = two_periodic_edges(alpha0, alpha1)

    def dens(th):
        th = np.asarray(th, dtype=float)
        # cos(tp) - cos(th) and cos(th) - cos(tm) as sine products
        q1 = 2 * np.sin(0.5 * (th + tp)) * np.sin(0.5 * (th - tp))
        q2 = 2 * np.sin(0.5 * (tm + th)) * np.sin(0.5 * (tm - th))
        q = q1 * q2
        with np.errstate(invalid="ignore", divide="ignore"):
            val = np.abs(np.sin(th)) / np.sqrt(q) / TWO_PI
        return np.where(q > 0, val, 0.0)

    return DensityCurve(dens, [(tp, tm), (TWO_PI - tm, TWO_PI - tp)], label="nu_Delta(p=2)")


GAP_STEP = 2e-3


def nu_delta(disc: Discriminant) -> DensityCurve:
    """(1/(pi p)) |Delta'(theta)| / sqrt(4 - Delta^2) on the band set."""
    p = disc.period
    arcs = band_set(disc)

    def raw(th):
        d = disc.on_circle(th)
        dd = disc.theta_derivative(th)
        q = (2.0 - d) * (2.0 + d)
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(q > 0, np.abs(dd) / np.sqrt(q) / (math.pi * p), 0.0), q, dd

    def dens(th):
        th = np.asarray(th, dtype=float)
        val, q, dd = raw(th)
        # closed gaps are 0/0: Richardson-extrapolate symmetric averages from
        # h = 2e-3, far enough out that 4 - Delta^2 has not cancelled
        touch = (np.abs(q) < 1e-12) & (np.abs(dd) < 1e-5)
        if np.any(touch):
            h = GAP_STEP
            v1 = 0.5 * (raw(th + h)[0] + raw(th - h)[0])
            v2 = 0.5 * (raw(th + 2 * h)[0] + raw(th - 2 * h)[0])
            val = np.where(touch, (4 * v1 - v2) / 3, val)
        return val

    return DensityCurve(dens, arcs, label=f"nu_Delta(p={p})")


def rogers_szego_density(a: float, theta):
    """Wrapped Gaussian (1/sqrt(2 pi a)) sum_j exp(-(theta - 2 pi j)^2 / (2 a))."""
    if a <= 0:
        raise DomainError("variance must be positive")
    theta = np.mod(np.asarray(theta, dtype=float), TWO_PI)
    total = np.zeros_like(theta)
    jmax = int(math.ceil(math.sqrt(2 * a * 40) / TWO_PI)) + 2
    for j in range(-jmax, jmax + 2):
        total = total + np.exp(-np.square(theta - TWO_PI * j) / (2 * a))
    return total / math.sqrt(TWO_PI * a)


# ---------------------------------------------------------------------------
# varying coefficients: s-averages of the constant-modulus densities


def _profile_modulus(profile, s):
    return np.abs(np.asarray(profile(s), dtype=complex))


def _extreme_points(h, t, samples):
    s = np.linspace(0.0, t, samples)
    v = h(s)
    pts = set(s.tolist())
    for i in range(1, samples - 1):
        # strict sign change; extrema on a node or along a plateau are already in pts
        if (v[i] - v[i - 1]) * (v[i + 1] - v[i]) < 0:
            lo, hi = s[i - 1], s[i + 1]
            sign = 1.0 if v[i] <= v[i - 1] else -1.0
            res = optimize.minimize_scalar(lambda x: sign * float(h(x)), bounds=(lo, hi),
                                           method="bounded", options={"xatol": 1e-14})
            pts.add(float(res.x))
    return np.array(sorted(pts))


def _positive_intervals(h, t, samples=513):
    """Intervals of [0, t] where h > 0, endpoints refined by brentq."""
    s = _extreme_points(h, t, samples)
    v = h(s)
    pos = v > 0
    out = []
    start = 0.0 if pos[0] else None
    for i in range(1, s.size):
        if pos[i] != pos[i - 1]:
            root = s[i - 1] if v[i - 1] == 0 else s[i] if v[i] == 0 else \
                optimize.brentq(lambda x: float(h(x)), s[i - 1], s[i], xtol=1e-15, rtol=1e-15)
            if pos[i]:
                start = root
            else:
                out.append((start, root))
                start = None
    if start is not None:
        out.append((start, t))
    return out


def _s_average(num, h, t, samples=513):
    """(1/t) integral over {h > 0} of num / (2 pi sqrt(h(s))) ds."""
    total = 0.0
    err = 0.0
    for lo, hi in _positive_intervals(h, t, samples):
        val, e = _quad_segment(lambda s: num / (TWO_PI * math.sqrt(max(float(h(s)), 0.0)))
                               if h(s) > 0 else 0.0, lo, hi, epsabs=1e-14, epsrel=1e-13)
        total += val
        err += e
    return total / t, err / t


def sigma_t_numeric(profile, t: float, samples: int = 513, check_tol: float = 1e-8) -> DensityCurve:
    """Density of (1/t) integral_0^t nu_{alpha(s)} ds by direct s-quadrature.

    ``profile`` is a callable s -> alpha(s), or a pair of callables for a
    2-periodic profile (alpha_0(s), alpha_1(s)).
    """
    if t <= 0:
        raise DomainError("t must be positive")
    s_grid = np.linspace(0.0, t, 4 * samples + 1)
    periodic = isinstance(profile, (tuple, list))
    if periodic:
        if len(profile) != 2:
            raise UnsupportedVariantError("only 2-periodic profiles are supported")
        p0, p1 = profile

        def edges(s):
            a0 = np.asarray(p0(s), dtype=complex)
            a1 = np.asarray(p1(s), dtype=complex)
            r = np.sqrt((1 - np.abs(a0) ** 2) * (1 - np.abs(a1) ** 2))
            re = np.real(a0 * np.conj(a1))
            return np.cos(np.arccos(np.clip(r - re, -1, 1))), np.cos(np.arccos(np.clip(-r - re, -1, 1)))

        def dens_at(th):
            c = math.cos(th)

            def h(s):
                cp, cm = edges(s)
                return (cp - c) * (c - cm)

            return _s_average(abs(math.sin(th)), h, t, samples)

        cp, cm = edges(s_grid)
        lo_edge = float(np.arccos(np.clip(np.max(cp), -1, 1)))
        arcs = [(lo_edge, TWO_PI - lo_edge)]
        breaks = sorted({float(np.arccos(np.clip(v, -1, 1))) for v in (np.min(cp), np.max(cm))})
        breaks += [TWO_PI - b for b in breaks]
        masses = []
    else:
        mod = _profile_modulus(profile, s_grid)
        if np.any(mod > 1 + 1e-12):
            raise DomainError("profile leaves the closed disk")
        ones = mod >= 1 - 1e-12
        masses = []
        if np.count_nonzero(ones) >= 2:
            weight = float(np.mean(ones))
            warnings.warn("profile has |alpha| = 1 on a set of positive measure; mixed measure",
                          stacklevel=2)
            masses = [(math.pi, weight)]

        def dens_at(th):
            x = math.sin(0.5 * th)

            def h(s):
                return x * x - _profile_modulus(profile, s) ** 2

            return _s_average(x, h, t, samples)

        ext = _extreme_points(lambda s: _profile_modulus(profile, s), t, samples)
        vals = _profile_modulus(profile, ext)
        mn = float(min(1.0, np.min(vals)))
        lo_edge = 2 * math.asin(mn)
        arcs = [(lo_edge, TWO_PI - lo_edge)] if lo_edge > 0 else [(0.0, TWO_PI)]
        breaks = []
        for v in vals:
            if 0 < v < 1:
                b = 2 * math.asin(float(v))
                breaks += [b, TWO_PI - b]
        breaks.append(math.pi)

    def dens(th):
        th_arr = np.atleast_1d(np.asarray(th, dtype=float))
        out = np.empty(th_arr.shape)
        for i, v in enumerate(th_arr.ravel()):
            val, err = dens_at(float(v))
            if err > max(check_tol, check_tol * abs(val)):
                raise ToleranceNotMetError(f"s-quadrature error {err:.2e} at theta={v}", achieved=err)
            out.ravel()[i] = val
        return out if np.ndim(th) else float(out[0])

    return DensityCurve(dens, arcs, masses, breakpoints=breaks, label="sigma_t(numeric)")


def monotone_density(profile, t: float, theta, inverse=None, increasing=None):
    """Single-interval form of the s-average for a monotone modulus profile.

    For increasing |f| the s-range is [0, min(t, f^{-1}(sin(theta/2)))], for
    decreasing |f| it is [max(0, f^{-1}(sin(theta/2))), t].
    """
    fmod = lambda s: float(_profile_modulus(profile, s))
    s = np.linspace(0, t, 257)
    v = _profile_modulus(profile, s)
    dv = np.diff(v)
    if increasing is None:
        if np.all(dv >= -1e-15):
            increasing = True
        elif np.all(dv <= 1e-15):
            increasing = False
        else:
            raise DomainError("profile modulus is not monotone")
    x = abs(math.sin(0.5 * float(theta)))
    f0, ft = fmod(0.0), fmod(t)
    lowest = f0 if increasing else ft
    if x <= lowest:
        return 0.0

    def inv(level):
        if inverse is not None:
            return float(inverse(level))
        return optimize.brentq(lambda u: fmod(u) - level, 0.0, t, xtol=1e-15)

    if increasing:
        lo, hi = 0.0, (t if x >= ft else min(t, inv(x)))
    else:
        lo, hi = (0.0 if x >= f0 else max(0.0, inv(x))), t
    val, _ = _quad_segment(lambda u: x / math.sqrt(max(x * x - fmod(u) ** 2, 0.0)) if x > fmod(u) else 0.0,
                           lo, hi, epsabs=1e-14, epsrel=1e-13)
    return val / (TWO_PI * t)


# ---------------------------------------------------------------------------
# closed forms for the worked profiles


def _power_density(omega, t):
    tw = t**omega
    g_ratio = gamma((2 * omega + 1) / (2 * omega)) / gamma((omega + 1) / (2 * omega))
    a, b, c = 0.5, 1 / (2 * omega), (2 * omega + 1) / (2 * omega)

    def one(th):
        x = abs(math.sin(0.5 * th))
        if x > tw:
            if omega == 1:
                return x * math.asin(t / x) / (TWO_PI * t)
            return hyp2f1(a, b, c, min(1.0, tw * tw / (x * x))) / TWO_PI
        if omega == 1:
            return x / (4 * t)
        return g_ratio * x ** (1 / omega) / (2 * math.sqrt(math.pi) * t)

    return one


def sigma_closed(example: str, t: float = 1.0, **params) -> DensityCurve:
    """Closed-form zero densities for the worked profiles.

    ``power``: alpha = s^omega;  ``exp``: alpha = zeta^s;  ``sqrt``:
    alpha = sqrt(1 - s^2);  ``sine``: alpha = sin(pi s / t).
    """
    if t <= 0:
        raise DomainError("t must be positive")
    if example == "power":
        omega = float(params.get("omega", 1.0))
        if t > 1:
            raise DomainError("power profile leaves the disk for t > 1")
        one = _power_density(omega, t)
        tw = t**omega
        breaks = []
        if tw < 1:
            b = 2 * math.asin(tw)
            breaks = [b, TWO_PI - b]
        return DensityCurve(np.vectorize(one, otypes=[float]), [(0.0, TWO_PI)], breakpoints=breaks,
                            label=f"power(omega={omega}, t={t})")
    if example == "exp":
        zeta = float(params.get("zeta", 0.5))
        lz = math.log(zeta)
        zt = zeta**t
        lo = 2 * math.asin(zt)

        def dens(th):
            th = np.asarray(th, dtype=float)
            x = np.abs(np.sin(0.5 * th))
            with np.errstate(invalid="ignore"):
                val = (1 - np.log(x + np.sqrt(np.clip(x * x - zt * zt, 0, None))) / (lz * t)) / TWO_PI
            return np.where(x > zt, val, 0.0)

        return DensityCurve(dens, [(lo, TWO_PI - lo)], label=f"exp(zeta={zeta}, t={t})")
    if example == "sqrt":
        if t > 1:
            raise DomainError("sqrt profile is defined for t <= 1")
        lo = 2 * math.asin(math.sqrt(1 - t * t))

        def dens(th):
            th = np.asarray(th, dtype=float)
            x = np.abs(np.sin(0.5 * th))
            c = np.abs(np.cos(0.5 * th))
            with np.errstate(invalid="ignore", divide="ignore"):
                val = x / (TWO_PI * t) * (np.log(t + np.sqrt(np.clip(t * t - c * c, 0, None))) - np.log(c))
            return np.where(c < t, val, 0.0)

        return DensityCurve(dens, [(lo, TWO_PI - lo)], breakpoints=[math.pi], label=f"sqrt(t={t})")
    if example == "sine":
        def one(th):
            x = abs(math.sin(0.5 * th))
            # |cos(th/2)| is the complementary modulus; clamp at the log singularity
            kp = max(abs(math.cos(0.5 * th)), 1e-300)
            return x * elliptic_k(min(x, 1.0 - 1e-16), kp) / math.pi**2

        return DensityCurve(np.vectorize(one, otypes=[float]), [(0.0, TWO_PI)], breakpoints=[math.pi],
                            label=f"sine(t={t})")
    raise UnsupportedVariantError(f"no closed form for {example!r}")


def sigma_t_log_potential(profile, t: float, z: complex) -> float:
    """-(1/t) integral_0^t log|G_{|alpha(s)|}(z)| ds."""
    z = complex(z)
    if abs(abs(z) - 1) < PROXIMITY:
        raise ProximityError("potential via G_a needs z off the circle")

    def g(s):
        a = min(1.0, float(_profile_modulus(profile, s)))
        return math.log(abs(g_a(z, a)))

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, _ = integrate.quad(g, 0.0, t, epsabs=1e-13, epsrel=1e-12, limit=200)
    return -val / t
