"""Zeros of paraorthogonal and orthogonal polynomials."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .cmv import build_cutoff
from .errors import ClusteringError, ConvergenceError, DomainError
from .schedules import coefficients
from .szego import _check_beta, evaluate_with_derivative, popuc_on_circle_phase

TWO_PI = 2.0 * math.pi
MAX_GRID = 1 << 20
ANGLE_TOL = 1e-13
CLUSTER_RADIUS = 1e-6
# grid offset as a fraction of the spacing; keeps symmetric zeros off the grid
GRID_OFFSET = 0.3819660112501051


@dataclass
class ZeroSet:
    zeros: np.ndarray
    residual: float
    method: str
    clustered: bool = False

    def __len__(self):
        return self.zeros.size

    def to_csv(self, path, residuals=None) -> None:
        z = self.zeros
        res = np.full(z.size, self.residual) if residuals is None else residuals
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["re", "im", "modulus", "arg", "residual"])
            for v, r in zip(z, res):
                w.writerow([repr(float(v.real)), repr(float(v.imag)), repr(float(abs(v))),
                            repr(float(np.angle(v))), repr(float(r))])


def _sign_changes(values):
    s = np.sign(values)
    return np.nonzero(s[:-1] * s[1:] < 0)[0]


def popuc_zeros_phase_from(alphas_prev, beta) -> ZeroSet:
    """Zeros of z Phi_{n-1} - conj(beta) Phi_{n-1}* by sign changes on the circle.

    The rotated polynomial is real on the circle; its sign changes on an
    offset grid of 8n points (doubled until n changes are found) bracket the
    zeros, which are then bisected to ANGLE_TOL.
    """
    beta = _check_beta(beta)
    alphas_prev = np.asarray(alphas_prev, dtype=complex)
    n = alphas_prev.size + 1
    m = 8 * n
    while True:
        step = TWO_PI / m
        grid = step * (np.arange(m + 1) + GRID_OFFSET)
        vals = popuc_on_circle_phase(alphas_prev, beta, grid)
        exact = np.nonzero(vals[:-1] == 0)[0]
        idx = _sign_changes(vals)
        if idx.size + exact.size >= n:
            break
        if m >= MAX_GRID:
            raise ConvergenceError(f"found {idx.size + exact.size} of {n} sign changes",
                                   partial=np.exp(1j * grid[idx]))
        m *= 2
    lo = grid[idx]
    hi = grid[idx + 1]
    flo = np.sign(vals[idx])
    while np.max(hi - lo, initial=0.0) > ANGLE_TOL:
        mid = 0.5 * (lo + hi)
        fm = np.sign(popuc_on_circle_phase(alphas_prev, beta, mid))
        same = fm == flo
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
        done = fm == 0
        lo = np.where(done, mid, lo)
        hi = np.where(done, mid, hi)
    theta = np.concatenate((0.5 * (lo + hi), grid[exact]))
    theta = np.sort(np.mod(theta, TWO_PI))[:n]
    # each zero is certified inside its final bracket
    resid = float(np.max(hi - lo, initial=0.0))
    return ZeroSet(np.exp(1j * theta), resid, "phase")


def popuc_zeros_phase(schedule, n: int, N: int, beta) -> ZeroSet:
    if n < 1:
        raise DomainError("degree must be at least 1")
    return popuc_zeros_phase_from(coefficients(schedule, n - 1, N), beta)


def popuc_zeros_eig(schedule, n: int, N: int, beta) -> ZeroSet:
    """Eigenvalues of the unitary cut-off matrix C_n(alpha_0..alpha_{n-2}, beta)."""
    beta = _check_beta(beta)
    if n < 1:
        raise DomainError("degree must be at least 1")
    C = build_cutoff(coefficients(schedule, n - 1, N), beta).dense
    ev = np.linalg.eigvals(C)
    ev = ev[np.argsort(np.mod(np.angle(ev), TWO_PI))]
    return ZeroSet(ev, float(np.max(np.abs(np.abs(ev) - 1))), "eig")


def matching_distance(a, b) -> float:
    """Largest distance under the optimal one-to-one matching of two point sets."""
    a = np.asarray(a.zeros if isinstance(a, ZeroSet) else a, dtype=complex)
    b = np.asarray(b.zeros if isinstance(b, ZeroSet) else b, dtype=complex)
    if a.size != b.size:
        raise DomainError("point sets differ in size")
    cost = np.abs(a[:, None] - b[None, :])
    r, c = linear_sum_assignment(cost)
    return float(np.max(cost[r, c]))


def _golden_start(n, radius):
    k = np.arange(n)
    golden = math.pi * (3.0 - math.sqrt(5.0))
    return radius * np.exp(1j * (golden * k + 0.25))


def opuc_zeros_from(alphas, max_sweeps: int = 500, tol: float = 1e-13) -> ZeroSet:
    """Aberth-Ehrlich iteration for the zeros of Phi_n.

    Phi_n and Phi_n' are evaluated pointwise by the recurrence rather than from
    the coefficient vector, which overflows and loses accuracy for large n.
    """
    alphas = np.asarray(alphas, dtype=complex)
    n = alphas.size
    if n == 0:
        return ZeroSet(np.zeros(0, dtype=complex), 0.0, "aberth")
    radius = abs(alphas[-1]) ** (1.0 / n)
    if radius < 1e-3:
        radius = 0.5
    z = _golden_start(n, radius)
    active = np.ones(n, dtype=bool)
    eye = np.eye(n, dtype=bool)
    for _ in range(max_sweeps):
        idx = np.nonzero(active)[0]
        p, dp, _ = evaluate_with_derivative(alphas, z[idx])
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = p / dp
            diff = z[idx, None] - z[None, :]
            diff[eye[idx]] = 1.0
            inv = 1.0 / diff
            inv[eye[idx]] = 0.0
            s = inv.sum(axis=1)
            w = newton / (1.0 - newton * s)
        w = np.where(np.isfinite(w), w, 0.0)
        z[idx] = z[idx] - w
        small = np.abs(w) <= tol * np.maximum(1.0, np.abs(z[idx]))
        active[idx[small]] = False
        if not active.any():
            break
    else:
        raise ConvergenceError(f"Aberth iteration left {int(active.sum())} roots unconverged",
                               partial=ZeroSet(z, math.nan, "aberth"))
    # one Newton polish step where it lowers the residual
    p, dp, q = evaluate_with_derivative(alphas, z)
    with np.errstate(divide="ignore", invalid="ignore"):
        trial = z - np.where(dp != 0, p / dp, 0.0)
    p2, _, q2 = evaluate_with_derivative(alphas, trial)
    r1 = np.abs(p) / np.abs(q)
    r2 = np.abs(p2) / np.abs(q2)
    better = r2 < r1
    z = np.where(better, trial, z)
    # size of the last Newton correction as an a-posteriori error estimate
    p, dp, _ = evaluate_with_derivative(alphas, z)
    with np.errstate(divide="ignore", invalid="ignore"):
        step = np.abs(np.where(dp != 0, p / dp, 0.0))
    resid = float(np.max(step))
    d = np.abs(z[:, None] - z[None, :]) + np.where(np.eye(n, dtype=bool), np.inf, 0.0)
    clustered = bool(n > 1 and np.min(d) < CLUSTER_RADIUS)
    order = np.lexsort((np.abs(z), np.mod(np.angle(z), TWO_PI)))
    return ZeroSet(z[order], resid, "aberth", clustered)


def opuc_zeros(schedule, n: int, N: int, max_sweeps: int = 500) -> ZeroSet:
    return opuc_zeros_from(coefficients(schedule, n, N), max_sweeps)


def opuc_zeros_eig(schedule, n: int, N: int) -> ZeroSet:
    """Eigenvalues of the cut-off matrix C_n(alpha_0..alpha_{n-1}); det(z - C_n) = Phi_n."""
    al = coefficients(schedule, n, N)
    C = build_cutoff(al[:-1], al[-1]).dense
    ev = np.linalg.eigvals(C)
    return ZeroSet(ev, math.nan, "eig")


def circle_proximity_profile(zeros, deltas) -> dict:
    """Fraction of zeros with modulus at most 1 - delta, per delta."""
    z = zeros.zeros if isinstance(zeros, ZeroSet) else np.asarray(zeros)
    r = np.abs(z)
    return {float(d): float(np.mean(r <= 1 - d)) for d in deltas}


def cluster_check(zs: ZeroSet, radius: float = CLUSTER_RADIUS) -> None:
    if zs.clustered:
        raise ClusteringError(f"zeros closer than {radius}", partial=zs)
