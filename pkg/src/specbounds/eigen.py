"""Dense symmetric eigensolver.

Two algorithms are provided:

* cyclic Jacobi rotations in round-robin (tournament) ordering, so that each
  round applies n/2 disjoint rotations at once with array operations;
* implicit-shift QL for matrices that are already tridiagonal (1-D
  finite-difference operators), which avoids the O(n^3) sweeps.

``method="lapack"`` defers to :func:`numpy.linalg.eigh` and exists for large
cross-checks only.
"""

from __future__ import annotations

import math

import numpy as np

from .core import EigenDecomposition
from .errors import CapacityError, NotSymmetricError

DEFAULT_ORDER_CAP = 4000
SYMMETRY_RTOL = 1e-12
MAX_JACOBI_SWEEPS = 60
MAX_QL_ITERATIONS = 60


def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Pairings for one Jacobi sweep; every index pair appears exactly once."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        p, q = [], []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a < n and b < n:
                p.append(min(a, b))
                q.append(max(a, b))
        rounds.append((np.array(p, dtype=int), np.array(q, dtype=int)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def jacobi_eigen(M: np.ndarray, *, tol: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi; returns unsorted eigenvalues and eigenvector columns."""
    A = np.array(M, dtype=float)
    n = A.shape[0]
    V = np.eye(n)
    if n == 1:
        return A.diagonal().copy(), V
    scale = np.linalg.norm(A)
    if scale == 0.0:
        return np.zeros(n), V
    if tol is None:
        tol = np.finfo(float).eps * scale
    rounds = _round_robin(n)
    for _ in range(MAX_JACOBI_SWEEPS):
        off = np.linalg.norm(A - np.diag(A.diagonal()))
        if off <= tol:
            break
        for P, Q in rounds:
            apq = A[P, Q]
            active = np.abs(apq) > 0.0
            if not np.any(active):
                continue
            P, Q, apq = P[active], Q[active], apq[active]
            app, aqq = A[P, P], A[Q, Q]
            theta = (aqq - app) / (2.0 * apq)
            t = np.sign(theta) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
            t[theta == 0.0] = 1.0
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            rows_p, rows_q = A[P, :].copy(), A[Q, :].copy()
            A[P, :] = c[:, None] * rows_p - s[:, None] * rows_q
            A[Q, :] = s[:, None] * rows_p + c[:, None] * rows_q
            cols_p, cols_q = A[:, P].copy(), A[:, Q].copy()
            A[:, P] = cols_p * c - cols_q * s
            A[:, Q] = cols_p * s + cols_q * c
            A[P, Q] = 0.0
            A[Q, P] = 0.0
            vp, vq = V[:, P].copy(), V[:, Q].copy()
            V[:, P] = vp * c - vq * s
            V[:, Q] = vp * s + vq * c
    else:
        raise RuntimeError("Jacobi iteration did not converge")
    return A.diagonal().copy(), V


def tridiagonal_ql(
    diag: np.ndarray, offdiag: np.ndarray, *, vectors: bool = True
) -> tuple[np.ndarray, np.ndarray | None]:
    """Implicit-shift QL on the symmetric tridiagonal matrix (diag, offdiag)."""
    d = np.array(diag, dtype=float)
    n = d.size
    e = np.zeros(n)
    e[: n - 1] = offdiag
    z = np.eye(n) if vectors else None
    eps = np.finfo(float).eps
    for l in range(n):
        iterations = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break
            iterations += 1
            if iterations > MAX_QL_ITERATIONS:
                raise RuntimeError("tridiagonal QL did not converge")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if z is not None:
                    f_col = z[:, i + 1].copy()
                    z[:, i + 1] = s * z[:, i] + c * f_col
                    z[:, i] = c * z[:, i] - s * f_col
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return d, z


def is_tridiagonal(M: np.ndarray) -> bool:
    n = M.shape[0]
    if n < 3:
        return True
    return not np.any(np.triu(M, 2)) and not np.any(np.tril(M, -2))


def _canonical_signs(V: np.ndarray) -> np.ndarray:
    """Flip columns so the first component of non-negligible size is positive."""
    V = V.copy()
    for k in range(V.shape[1]):
        col = V[:, k]
        big = np.nonzero(np.abs(col) > 1e-12)[0]
        if big.size and col[big[0]] < 0:
            V[:, k] = -col
    return V


def solve_symmetric_eigen(
    M, *, cap: int = DEFAULT_ORDER_CAP, method: str = "auto"
) -> EigenDecomposition:
    """Full eigen-decomposition of a real symmetric matrix, ascending.

    ``method`` is one of ``"auto"`` (QL when tridiagonal, Jacobi otherwise),
    ``"jacobi"``, ``"tridiagonal"`` or ``"lapack"``.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    n = M.shape[0]
    if n > cap:
        raise CapacityError(f"matrix order {n} exceeds cap {cap}")
    if n == 0:
        raise ValueError("empty matrix")
    norm = float(np.max(np.abs(M))) if M.size else 0.0
    asym = float(np.max(np.abs(M - M.T)))
    threshold = SYMMETRY_RTOL * max(norm, np.finfo(float).tiny)
    if asym > threshold:
        raise NotSymmetricError(asym, threshold)
    M = 0.5 * (M + M.T)

    if method == "auto":
        method = "tridiagonal" if is_tridiagonal(M) else "jacobi"
    if method == "jacobi":
        vals, vecs = jacobi_eigen(M)
    elif method == "tridiagonal":
        if not is_tridiagonal(M):
            raise ValueError("tridiagonal method requested for a non-tridiagonal matrix")
        vals, vecs = tridiagonal_ql(M.diagonal(), M.diagonal(1))
    elif method == "lapack":
        vals, vecs = np.linalg.eigh(M)
    else:
        raise ValueError(f"unknown method {method!r}")

    order = np.argsort(vals, kind="stable")
    return EigenDecomposition(vals[order], _canonical_signs(vecs[:, order]))


def symmetric_eigenvalues(M, *, cap: int = DEFAULT_ORDER_CAP) -> np.ndarray:
    """Eigenvalues only; skips eigenvector accumulation on the tridiagonal path."""
    M = np.asarray(M, dtype=float)
    if M.shape[0] <= cap and is_tridiagonal(M):
        asym = float(np.max(np.abs(M - M.T)))
        if asym > SYMMETRY_RTOL * max(float(np.max(np.abs(M))), np.finfo(float).tiny):
            raise NotSymmetricError(asym, SYMMETRY_RTOL * float(np.max(np.abs(M))))
        vals, _ = tridiagonal_ql(M.diagonal(), M.diagonal(1), vectors=False)
        return np.sort(vals)
    return solve_symmetric_eigen(M, cap=cap).eigenvalues
