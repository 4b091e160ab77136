"""Monic orthogonal polynomials on the unit circle via the Szego recurrence.

Polynomials are stored as complex coefficient arrays in ascending order,
``c[k]`` multiplying ``z**k``.  The reversed polynomial of degree n is
``z**n * conj(P(1/conj(z)))``, i.e. the conjugated coefficient reversal.
"""
from __future__ import annotations

import numpy as np

from .errors import DegenerateEvaluationError, DomainError
from .schedules import coefficients

UNIMODULAR_TOL = 1e-12


def reversed_poly(coeffs: np.ndarray) -> np.ndarray:
    return np.conj(np.asarray(coeffs, dtype=complex)[::-1])


def advance(phi: np.ndarray, phi_star: np.ndarray, alpha: complex):
    """One recurrence step (Phi_n, Phi_n*) -> (Phi_{n+1}, Phi_{n+1}*)."""
    alpha = complex(alpha)
    if abs(alpha) > 1.0:
        raise DomainError("recurrence coefficient outside the closed disk")
    z_phi = np.concatenate(([0j], phi))
    star = np.concatenate((phi_star, [0j]))
    return z_phi - np.conj(alpha) * star, star - alpha * z_phi


def opuc_pair(alphas) -> tuple[np.ndarray, np.ndarray]:
    """(Phi_n, Phi_n*) for n = len(alphas)."""
    phi = np.ones(1, dtype=complex)
    star = np.ones(1, dtype=complex)
    for a in alphas:
        phi, star = advance(phi, star, a)
    return phi, star


def _check_beta(beta) -> complex:
    beta = complex(beta)
    if abs(abs(beta) - 1.0) > UNIMODULAR_TOL:
        raise DomainError(f"beta must be unimodular, |beta| = {abs(beta)!r}")
    return beta


def popuc_from(phi_prev: np.ndarray, star_prev: np.ndarray, beta: complex) -> np.ndarray:
    """z Phi_{n-1} - conj(beta) Phi_{n-1}*."""
    beta = _check_beta(beta)
    return np.concatenate(([0j], phi_prev)) - np.conj(beta) * np.concatenate((star_prev, [0j]))


def opuc(schedule, n: int, N: int) -> np.ndarray:
    if n < 0:
        raise DomainError("degree must be non-negative")
    return opuc_pair(coefficients(schedule, n, N))[0]


def popuc(schedule, n: int, N: int, beta: complex) -> np.ndarray:
    """Paraorthogonal polynomial of degree n >= 1 built from alpha_0..alpha_{n-2}."""
    if n < 1:
        raise DomainError("paraorthogonal degree must be at least 1")
    phi, star = opuc_pair(coefficients(schedule, n - 1, N))
    return popuc_from(phi, star, beta)


def evaluate(coeffs, z):
    """Horner evaluation of an ascending coefficient array."""
    coeffs = np.asarray(coeffs, dtype=complex)
    z = np.asarray(z, dtype=complex)
    out = np.zeros_like(z) + coeffs[-1]
    for c in coeffs[-2::-1]:
        out = out * z + c
    return out


# ---------------------------------------------------------------------------
# pointwise evaluation with a running positive scale


def evaluate_pair_at(alphas, z):
    """Evaluate (Phi_n(z), Phi_n*(z)) pointwise by running the recurrence.

    Returns ``(phi, star, log_scale)`` with the true values equal to
    ``phi * exp(log_scale)`` and ``star * exp(log_scale)``.  The scale is
    renormalised every step so that no overflow occurs for large n.
    """
    z = np.asarray(z, dtype=complex)
    phi = np.ones_like(z)
    star = np.ones_like(z)
    log_scale = np.zeros(z.shape)
    for a in alphas:
        ca = np.conj(a)
        phi, star = z * phi - ca * star, star - a * z * phi
        s = np.maximum(np.abs(phi), np.abs(star))
        if np.any(s == 0):
            raise DegenerateEvaluationError("both recurrence components vanished")
        phi = phi / s
        star = star / s
        log_scale = log_scale + np.log(s)
    return phi, star, log_scale


def pair_trajectory(alphas, z):
    """All normalised pairs along the recurrence.

    Returns arrays ``phi[k], star[k], log_scale[k]`` for k = 0..len(alphas).
    """
    z = np.asarray(z, dtype=complex)
    m = len(alphas)
    phi = np.empty((m + 1,) + z.shape, dtype=complex)
    star = np.empty_like(phi)
    logs = np.empty((m + 1,) + z.shape)
    p = np.ones_like(z)
    q = np.ones_like(z)
    ls = np.zeros(z.shape)
    phi[0], star[0], logs[0] = p, q, ls
    for k, a in enumerate(alphas):
        p, q = z * p - np.conj(a) * q, q - a * z * p
        s = np.maximum(np.abs(p), np.abs(q))
        if np.any(s == 0):
            raise DegenerateEvaluationError("both recurrence components vanished")
        p = p / s
        q = q / s
        ls = ls + np.log(s)
        phi[k + 1], star[k + 1], logs[k + 1] = p, q, ls
    return phi, star, logs


def evaluate_with_derivative(alphas, z):
    """Normalised (Phi_n, Phi_n', Phi_n*) at z; ratios are scale free."""
    z = np.asarray(z, dtype=complex)
    p = np.ones_like(z)
    q = np.ones_like(z)
    dp = np.zeros_like(z)
    dq = np.zeros_like(z)
    for a in alphas:
        ca = np.conj(a)
        p, q, dp, dq = (
            z * p - ca * q,
            q - a * z * p,
            p + z * dp - ca * dq,
            dq - a * p - a * z * dp,
        )
        s = np.maximum(np.maximum(np.abs(p), np.abs(q)), np.abs(dp))
        s = np.where(s == 0, 1.0, s)
        p, q, dp, dq = p / s, q / s, dp / s, dq / s
    return p, dp, q


def popuc_on_circle_phase(alphas_prev, beta, theta):
    """Real-valued rotated POPUC on the circle.

    For the degree n = len(alphas_prev) + 1 paraorthogonal polynomial this is
    Re(exp(i(phi/2 - n theta/2)) Phi_n(e^{i theta})) with phi = arg(-beta),
    up to a positive factor.  Its sign changes are the zeros.
    """
    beta = _check_beta(beta)
    theta = np.asarray(theta, dtype=float)
    n = len(alphas_prev) + 1
    z = np.exp(1j * theta)
    phi, star, _ = evaluate_pair_at(alphas_prev, z)
    val = z * phi - np.conj(beta) * star
    rot = np.exp(1j * (0.5 * np.angle(-beta) - 0.5 * n * theta))
    return (rot * val).real
