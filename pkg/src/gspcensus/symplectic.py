"""Matrices over F_l, the standard symplectic form, and classical group orders.

Matrices are ``numpy.int64`` arrays with entries reduced into ``[0, ell)``.
Batched routines take a stack of shape ``(N, n, n)``.

The fixed alternating form is ``J = [[0, I_g], [-I_g, 0]]`` so that
``<v, w> = v^T J w`` and ``A`` is a similitude with multiplier ``gamma``
exactly when ``A^T J A = gamma J``.
"""
from __future__ import annotations

from typing import Optional

import numpy as np

from .poly import Poly


def form_matrix(g: int, ell: int) -> np.ndarray:
    J = np.zeros((2 * g, 2 * g), dtype=np.int64)
    J[:g, g:] = np.eye(g, dtype=np.int64)
    J[g:, :g] = (-np.eye(g, dtype=np.int64)) % ell
    return J


def pairing(v: np.ndarray, w: np.ndarray, ell: int) -> int:
    g = len(v) // 2
    return int((v[:g] @ w[g:] - v[g:] @ w[:g]) % ell)


def coset_representative(g: int, ell: int, gamma: int) -> np.ndarray:
    """diag(I_g, gamma I_g), a similitude with multiplier gamma."""
    d = np.array([1] * g + [gamma % ell] * g, dtype=np.int64)
    return np.diag(d)


def similitude_multiplier(A, ell: int) -> Optional[int]:
    """Return gamma if A^T J A = gamma J with gamma nonzero, else None."""
    A = np.asarray(A, dtype=np.int64) % ell
    n = A.shape[0]
    if A.shape != (n, n) or n % 2:
        return None
    g = n // 2
    J = form_matrix(g, ell)
    G = (A.T @ J @ A) % ell
    gamma = int(G[0, g])
    if gamma == 0:
        return None
    if np.array_equal(G, (gamma * J) % ell):
        return gamma
    return None


def charpoly_batch(As: np.ndarray, ell: int) -> np.ndarray:
    """Characteristic polynomials det(xI - A) of a stack of matrices.

    Berkowitz's algorithm: only ring operations, so it is valid in every
    characteristic.  Returns shape ``(N, n + 1)``, lowest degree first.
    """
    As = np.asarray(As, dtype=np.int64) % ell
    N, n, _ = As.shape
    # p holds coefficients of the leading principal minor's charpoly, highest first
    p = np.ones((N, 1), dtype=np.int64)
    for r in range(n):
        a = As[:, r, r]
        R = As[:, r, :r]
        S = As[:, :r, r]
        Ar = As[:, :r, :r]
        col = np.empty((N, r + 2), dtype=np.int64)
        col[:, 0] = 1
        col[:, 1] = (-a) % ell
        v = S
        for k in range(r):
            col[:, k + 2] = (-np.einsum("ij,ij->i", R, v)) % ell
            v = np.einsum("ijk,ik->ij", Ar, v) % ell
        new = np.zeros((N, r + 2), dtype=np.int64)
        for j in range(r + 1):
            new[:, j:] += col[:, : r + 2 - j] * p[:, j : j + 1]
        p = new % ell
    return p[:, ::-1].copy()


def charpoly(A, ell: int) -> Poly:
    A = np.asarray(A, dtype=np.int64)
    c = charpoly_batch(A[None], ell)[0]
    return Poly(tuple(int(x) for x in c), ell)


def det_laplace(A, ell: int) -> int:
    """Determinant by cofactor expansion: no division anywhere."""
    M = [[int(x) % ell for x in row] for row in np.asarray(A)]

    def rec(rows: list[list[int]]) -> int:
        n = len(rows)
        if n == 0:
            return 1
        if n == 1:
            return rows[0][0]
        total = 0
        for j, a in enumerate(rows[0]):
            if a:
                minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
                sign = -1 if j % 2 else 1
                total += sign * a * rec(minor)
        return total % ell

    return rec(M) % ell


def sp_order(g: int, ell: int) -> int:
    """#Sp_2g(F_l) = l^(g^2) * prod_{j=1..g} (l^(2j) - 1); 1 for g = 0."""
    out = ell ** (g * g)
    for j in range(1, g + 1):
        out *= ell ** (2 * j) - 1
    return out


def gl_order(r: int, ell: int) -> int:
    out = 1
    for j in range(r):
        out *= ell**r - ell**j
    return out


def gsp_order(g: int, ell: int) -> int:
    return (ell - 1) * sp_order(g, ell)
