"""Cut-off CMV matrices and operations on them."""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse

from .errors import DomainError

MAX_CHARPOLY_ORDER = 64


@dataclass(frozen=True)
class CmvMatrix:
    """Dense n x n cut-off CMV matrix C_n(alpha_0, ..., alpha_{n-2}, terminator)."""

    dense: np.ndarray
    coefficients: tuple
    terminator: complex

    @property
    def order(self) -> int:
        return self.dense.shape[0]

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["row", "col", "re", "im"])
            rows, cols = np.nonzero(self.dense)
            for i, j in zip(rows, cols):
                v = self.dense[i, j]
                w.writerow([int(i), int(j), repr(float(v.real)), repr(float(v.imag))])


def _prepare(coeffs, terminator):
    alphas = np.asarray(list(coeffs) + [terminator], dtype=complex)
    if np.any(np.abs(alphas[:-1]) >= 1):
        raise DomainError("interior CMV coefficients must lie in the open disk")
    if abs(alphas[-1]) > 1 + 1e-14:
        raise DomainError("terminator must lie in the closed disk")
    rho = np.sqrt(np.clip(1.0 - np.abs(alphas) ** 2, 0.0, None))
    return alphas, rho


def build_cutoff(coeffs, terminator) -> CmvMatrix:
    """Assemble the cut-off matrix entry by entry.

    Even row 2k holds conj(a_{2k}) r_{2k-1}, -conj(a_{2k}) a_{2k-1},
    r_{2k} conj(a_{2k+1}), r_{2k} r_{2k+1} in columns 2k-1..2k+2; odd row 2k+1
    holds r_{2k} r_{2k-1}, -r_{2k} a_{2k-1}, -a_{2k} conj(a_{2k+1}),
    -a_{2k} r_{2k+1}.  The conventions a_{-1} = -1, r_{-1} = 0 fill row 0/1.
    """
    alphas, rho = _prepare(coeffs, terminator)
    n = alphas.size

    def a(j):
        return -1.0 + 0j if j < 0 else alphas[j]

    def r(j):
        return 0.0 if j < 0 else rho[j]

    C = np.zeros((n, n), dtype=complex)
    for i in range(n):
        k = i // 2
        if i % 2 == 0:
            entries = (
                (2 * k - 1, np.conj(a(2 * k)) * r(2 * k - 1)),
                (2 * k, -np.conj(a(2 * k)) * a(2 * k - 1)),
                (2 * k + 1, r(2 * k) * np.conj(a(2 * k + 1)) if 2 * k + 1 < n else 0),
                (2 * k + 2, r(2 * k) * r(2 * k + 1) if 2 * k + 2 < n else 0),
            )
        else:
            entries = (
                (2 * k - 1, r(2 * k) * r(2 * k - 1)),
                (2 * k, -r(2 * k) * a(2 * k - 1)),
                (2 * k + 1, -a(2 * k) * np.conj(a(2 * k + 1)) if 2 * k + 1 < n else 0),
                (2 * k + 2, -a(2 * k) * r(2 * k + 1) if 2 * k + 2 < n else 0),
            )
        for j, v in entries:
            if 0 <= j < n:
                C[i, j] = v
    return CmvMatrix(C, tuple(complex(c) for c in coeffs), complex(terminator))


def lm_factors(coeffs, terminator) -> tuple[np.ndarray, np.ndarray]:
    """Truncated L and M factors; their product is the cut-off matrix."""
    alphas, rho = _prepare(coeffs, terminator)
    n = alphas.size
    L = np.zeros((n, n), dtype=complex)
    M = np.zeros((n, n), dtype=complex)
    M[0, 0] = 1.0
    for j in range(n):
        target = L if j % 2 == 0 else M
        block = np.array([[np.conj(alphas[j]), rho[j]], [rho[j], -alphas[j]]])
        if j + 1 < n:
            target[j:j + 2, j:j + 2] = block
        else:
            target[j, j] = block[0, 0]
    return L, M


def charpoly(matrix) -> np.ndarray:
    """Ascending coefficients of det(z - C) via Hessenberg reduction."""
    A = matrix.dense if isinstance(matrix, CmvMatrix) else np.asarray(matrix, dtype=complex)
    n = A.shape[0]
    if n > MAX_CHARPOLY_ORDER:
        raise DomainError(f"characteristic polynomial limited to order {MAX_CHARPOLY_ORDER}")
    H = scipy.linalg.hessenberg(A)
    # p_k(z) = (z - h_kk) p_{k-1} - sum_{i<k} h_ik (prod_{j=i+1}^{k} h_{j,j-1}) p_{i-1}
    polys = [np.ones(1, dtype=complex)]
    for k in range(n):
        p = np.concatenate(([0j], polys[-1])) - H[k, k] * np.concatenate((polys[-1], [0j]))
        prod = 1.0 + 0j
        for i in range(k - 1, -1, -1):
            prod *= H[i + 1, i]
            if prod == 0:
                break
            term = H[i, k] * prod * polys[i]
            p[: term.size] -= term
        polys.append(p)
    return polys[-1]


def flip(n: int) -> np.ndarray:
    return np.fliplr(np.eye(n))


def reflection_defect(coeffs, beta: complex) -> float:
    """Max entrywise deviation in the reflection identity for the cut-off matrix.

    With Q the anti-diagonal flip, P = diag(1, beta, 1, beta, ...) and the
    reversed coefficients -conj(alpha_{n-2}) beta, ..., -conj(alpha_0) beta,
    Q C Q equals P C'^T P* for odd n and P* C' P for even n.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    n = coeffs.size + 1
    C = build_cutoff(coeffs, beta).dense
    rev = build_cutoff(-np.conj(coeffs[::-1]) * beta, beta).dense
    P = np.diag([1.0 if i % 2 == 0 else beta for i in range(n)]).astype(complex)
    Q = flip(n)
    lhs = Q @ C @ Q
    rhs = P @ rev.T @ P.conj().T if n % 2 else P.conj().T @ rev @ P
    return float(np.max(np.abs(lhs - rhs)))


def unitarity_defect(matrix) -> float:
    A = matrix.dense if isinstance(matrix, CmvMatrix) else np.asarray(matrix)
    return float(np.max(np.abs(A.conj().T @ A - np.eye(A.shape[0]))))


def trace_power_moments(matrix, k_max: int) -> np.ndarray:
    """(1/n) Tr(C^k) for k = 0..k_max using sparse banded products."""
    A = matrix.dense if isinstance(matrix, CmvMatrix) else matrix
    S = scipy.sparse.csr_matrix(A)
    n = S.shape[0]
    out = np.empty(k_max + 1, dtype=complex)
    out[0] = 1.0
    power_k = scipy.sparse.identity(n, dtype=complex, format="csr")
    for k in range(1, k_max + 1):
        power_k = power_k @ S
        out[k] = power_k.diagonal().sum() / n
    return out
