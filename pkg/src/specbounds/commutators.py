"""Finite-dimensional trace identities for a pair (H, G).

All quantities are read off the eigen-decomposition H = V diag(lambda) V^T:

* ``c2_diag[j]  = <[G,[H,G]] phi_j, phi_j>``  (computed in the original basis)
* ``c1_norm2[j] = ||[H,G] phi_j||^2``          (computed in the original basis)
* ``G_jk = <G phi_j, phi_k>``                  (eigenbasis matrix elements)

so the sum rules below compare two independent evaluation routes. Sums go
through :func:`math.fsum` because verdicts sit at the roundoff level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .functions import FunctionSpec, check_derivative_concave
from .models import MatrixModel
from .reports import InequalityReport, default_rtol


@dataclass(frozen=True)
class CommutatorBundle:
    first: np.ndarray  # [H, G]
    second: np.ndarray  # [G, [H, G]]
    matrix_elements: np.ndarray  # V^T G V
    eigenvalues: np.ndarray
    c2_diag: np.ndarray = field(repr=False)
    c1_norm2: np.ndarray = field(repr=False)
    norm_H: float = 0.0
    norm_G: float = 0.0

    @property
    def order(self) -> int:
        return self.eigenvalues.size

    def eigenbasis_identity_error(self, V: np.ndarray) -> float:
        """max |(V^T [H,G] V)_jk - (lambda_j - lambda_k) G_jk|, relative to ||G|| ||H||."""
        lam = self.eigenvalues
        lhs = V.T @ self.first @ V
        rhs = (lam[:, None] - lam[None, :]) * self.matrix_elements
        return float(np.max(np.abs(lhs - rhs))) / max(self.norm_G * self.norm_H, 1e-300)


def commutator_bundle(model: MatrixModel) -> CommutatorBundle:
    """Commutators and eigenbasis matrix elements of ``model``; cached on the model."""
    cached = model.__dict__.get("_commutator_bundle")
    if cached is not None:
        return cached
    H, G = model.H, model.G
    dec = model.decomposition
    V, lam = dec.eigenvectors, dec.eigenvalues
    first = H @ G - G @ H
    second = G @ first - first @ G
    Gm = V.T @ G @ V
    Gm = 0.5 * (Gm + Gm.T)
    c2_diag = np.einsum("ij,ij->j", V, second @ V)
    c1_norm2 = np.sum((first @ V) ** 2, axis=0)
    bundle = CommutatorBundle(
        first=first, second=second, matrix_elements=Gm, eigenvalues=lam,
        c2_diag=c2_diag, c1_norm2=c1_norm2,
        norm_H=float(np.max(np.abs(lam))),
        norm_G=float(np.linalg.norm(G, 2)),
    )
    model.__dict__["_commutator_bundle"] = bundle
    return bundle


def trk_scale(model: MatrixModel) -> float:
    b = commutator_bundle(model)
    return max(b.norm_G**2 * b.norm_H, 1e-300)


def trk_residual(model: MatrixModel, j: int) -> float:
    """1/2 <[G,[H,G]] phi_j, phi_j> - sum_k (lambda_k - lambda_j) G_jk^2 (j is 0-based)."""
    b = commutator_bundle(model)
    lam = b.eigenvalues
    terms = (lam - lam[j]) * b.matrix_elements[j] ** 2
    return 0.5 * float(b.c2_diag[j]) - math.fsum(terms)


def trk_residuals(model: MatrixModel) -> np.ndarray:
    return np.array([trk_residual(model, j) for j in range(model.order)])


def _index_sets(order: int, J) -> tuple[np.ndarray, np.ndarray]:
    J = np.unique(np.asarray(list(J), dtype=int))
    if J.size == 0:
        raise ValueError("index set J must be nonempty")
    if J[0] < 0 or J[-1] >= order:
        raise IndexError(f"J must lie in 0..{order - 1}")
    mask = np.ones(order, dtype=bool)
    mask[J] = False
    return J, np.nonzero(mask)[0]


def quadratic_identity_parts(model: MatrixModel, J, z: float) -> tuple[float, float]:
    """Both sides of the quadratic trace identity for f(lambda) = (z - lambda)^2."""
    b = commutator_bundle(model)
    J, K = _index_sets(b.order, J)
    lam = b.eigenvalues
    wj = z - lam[J]
    lhs = math.fsum(wj**2 * b.c2_diag[J]) - math.fsum(2.0 * wj * b.c1_norm2[J])
    if K.size == 0:
        return lhs, 0.0
    lk = lam[K]
    G2 = b.matrix_elements[np.ix_(J, K)] ** 2
    terms = wj[:, None] * (z - lk)[None, :] * (lk[None, :] - lam[J][:, None]) * G2
    return lhs, 2.0 * math.fsum(terms.ravel())


def quadratic_identity_residual(model: MatrixModel, J, z: float) -> float:
    lhs, rhs = quadratic_identity_parts(model, J, z)
    return lhs - rhs


def quadratic_identity_scale(model: MatrixModel, z: float) -> float:
    b = commutator_bundle(model)
    return max(b.norm_G**2 * b.norm_H * (abs(z) + b.norm_H) ** 2, 1e-300)


def t1_scale(model: MatrixModel, f: FunctionSpec, samples: int = 257) -> float:
    """||G||^2 * spread * (max|f| + spread * max|f'|) over the spectral hull."""
    b = commutator_bundle(model)
    lo, hi = float(b.eigenvalues[0]), float(b.eigenvalues[-1])
    spread = hi - lo if hi > lo else max(b.norm_H, 1.0)
    grid = np.linspace(lo, hi, samples)
    fmax = float(np.max(np.abs(f(grid))))
    dmax = float(np.max(np.abs(f.d1(grid))))
    return max(b.norm_G**2 * spread * (fmax + spread * dmax), 1e-300)


def t1_parts(model: MatrixModel, J, f: FunctionSpec) -> tuple[float, float]:
    b = commutator_bundle(model)
    J, K = _index_sets(b.order, J)
    lam = b.eigenvalues
    fj, dj = f(lam[J]), f.d1(lam[J])
    lhs = 0.5 * (math.fsum(dj * b.c1_norm2[J]) + math.fsum(fj * b.c2_diag[J]))
    if K.size == 0:
        return lhs, 0.0
    gap = lam[K][None, :] - lam[J][:, None]
    G2 = b.matrix_elements[np.ix_(J, K)] ** 2
    terms = (fj[:, None] + 0.5 * dj[:, None] * gap) * gap * G2
    return lhs, math.fsum(terms.ravel())


def check_T1(model: MatrixModel, J, f: FunctionSpec, *, rtol: float | None = None) -> InequalityReport:
    """Master trace inequality for a function with concave derivative."""
    b = commutator_bundle(model)
    lo, hi = float(b.eigenvalues[0]), float(b.eigenvalues[-1])
    check_derivative_concave(f, lo, hi)
    lhs, rhs = t1_parts(model, J, f)
    rtol = default_rtol() if rtol is None else rtol
    return InequalityReport.build(
        "t1", lhs, rhs, tolerance=rtol * t1_scale(model, f),
        family=f.family_tag, J_size=len(set(J)), order=b.order,
    )


def chord_slope_residual(f: FunctionSpec, x: float, y: float) -> float:
    """(f(y) - f(x)) / (y - x) - (f'(x) + f'(y)) / 2; nonnegative when f' is concave."""
    if x == y:
        raise ValueError("chord slope needs x != y")
    quotient = (float(f(y)) - float(f(x))) / (y - x)
    return quotient - 0.5 * (float(f.d1(x)) + float(f.d1(y)))
