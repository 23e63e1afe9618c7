"""Model operators: exactly known spectra and finite-difference discretizations."""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field

import numpy as np
from scipy.special import comb, gamma as gamma_fn

from .core import CommutatorConstants, EigenDecomposition, Spectrum
from .eigen import DEFAULT_ORDER_CAP, _canonical_signs, solve_symmetric_eigen, tridiagonal_ql
from .errors import CapacityError, ConstantsRequired, ParameterRangeError

ENUMERATION_CAP = 50_000_000

# Relative error of the 3-point stencil eigenvalue, 1 - sinc^2(pi x / 2) with
# x = k h / L, is bounded by MESH_C * x^2 (sup attained as x -> 0).
MESH_C = math.pi**2 / 12.0


def unit_ball_volume(d: int) -> float:
    return math.pi ** (d / 2) / gamma_fn(d / 2 + 1)


def box_spectrum(sides, count: int) -> Spectrum:
    """The ``count`` smallest Dirichlet eigenvalues of a rectangular box."""
    sides = [float(L) for L in np.atleast_1d(sides)]
    d = len(sides)
    if not 1 <= d <= 3:
        raise ParameterRangeError(f"box dimension must be 1, 2 or 3, got {d}")
    if any(L <= 0 for L in sides):
        raise ParameterRangeError("box sides must be positive")
    if count < 1:
        raise ParameterRangeError("count must be >= 1")
    volume = math.prod(sides)
    # q = lambda / pi^2. Start from the Weyl level holding `count` states and
    # double until the enumeration is provably exhaustive.
    q_cap = 4.0 * (count / (unit_ball_volume(d) * volume)) ** (2.0 / d)
    q_cap = max(1.5 * q_cap, sum(1.0 / L**2 for L in sides))
    while True:
        m_max = [int(math.floor(L * math.sqrt(q_cap))) for L in sides]
        size = math.prod(max(m, 0) for m in m_max)
        if size > ENUMERATION_CAP:
            raise CapacityError(f"lattice enumeration of {size} points exceeds cap")
        if min(m_max) >= 1:
            axes = [(np.arange(1, m + 1) / L) ** 2 for m, L in zip(m_max, sides)]
            q = axes[0]
            for ax in axes[1:]:
                q = np.add.outer(q, ax).ravel()
            q = q[q <= q_cap]
            if q.size >= count:
                q = np.sort(q, kind="stable")[:count]
                break
        q_cap *= 2.0
    return Spectrum(
        values=math.pi**2 * q,
        dimension=d,
        volume=volume,
        label="box",
        constants=CommutatorConstants.dirichlet(d),
    )


def oscillator_spectrum(dimension: int, count: int) -> Spectrum:
    """Levels 2|n| + d of -Delta + |x|^2 on R^d, repeated by multiplicity."""
    if dimension < 1:
        raise ParameterRangeError("dimension must be >= 1")
    if count < 1:
        raise ParameterRangeError("count must be >= 1")
    values: list[float] = []
    k = 0
    while len(values) < count:
        mult = int(comb(k + dimension - 1, dimension - 1, exact=True))
        values.extend([2.0 * k + dimension] * min(mult, count - len(values)))
        k += 1
    return Spectrum(
        values=values,
        dimension=dimension,
        volume=None,
        label="oscillator",
        constants=CommutatorConstants(0.0, 4.0, 1.0),
    )


@dataclass
class MatrixModel:
    """A finite operator pair (H, G) with a lazily cached eigen-decomposition of H."""

    H: np.ndarray
    G: np.ndarray
    constants: CommutatorConstants | None = None
    mesh: float | None = None
    lengths: tuple[float, ...] | None = None
    label: str = "matrix"
    dimension: int | None = None
    _decomposition: EigenDecomposition | None = field(default=None, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def __post_init__(self):
        self.H = np.asarray(self.H, dtype=float)
        self.G = np.asarray(self.G, dtype=float)
        if self.H.shape != self.G.shape or self.H.ndim != 2 or self.H.shape[0] != self.H.shape[1]:
            raise ValueError(f"H {self.H.shape} and G {self.G.shape} must be square of equal order")
        for name, M in (("H", self.H), ("G", self.G)):
            scale = max(float(np.max(np.abs(M))), 1e-300)
            if np.max(np.abs(M - M.T)) > 1e-12 * scale:
                raise ValueError(f"{name} is not symmetric")
        self.H.setflags(write=False)
        self.G.setflags(write=False)

    @property
    def order(self) -> int:
        return self.H.shape[0]

    def _compute(self) -> EigenDecomposition:
        return solve_symmetric_eigen(self.H, cap=max(DEFAULT_ORDER_CAP, self.order))

    @property
    def decomposition(self) -> EigenDecomposition:
        if self._decomposition is None:
            with self._lock:
                if self._decomposition is None:
                    self._decomposition = self._compute()
        return self._decomposition

    def require_constants(self) -> CommutatorConstants:
        if self.constants is None:
            raise ConstantsRequired(f"model {self.label!r}")
        return self.constants

    def spectrum(self) -> Spectrum:
        return Spectrum(
            values=self.decomposition.eigenvalues,
            dimension=self.dimension,
            volume=None if self.lengths is None else math.prod(self.lengths),
            label=self.label,
            constants=self.constants,
            mesh=self.mesh,
        )

    def mesh_allowance(self, n: int) -> float:
        """Relative allowance C (n h / L_min)^2 for the first n eigenvalues."""
        if self.mesh is None or self.lengths is None:
            return 0.0
        return MESH_C * (n * self.mesh / min(self.lengths)) ** 2


class _KronSumModel(MatrixModel):
    """2-D grid model whose H is a Kronecker sum; decomposed from 1-D factors."""

    factors: tuple[tuple[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray]]

    def _compute(self) -> EigenDecomposition:
        (dx, ox), (dy, oy) = self.factors
        lx, vx = tridiagonal_ql(dx, ox)
        ly, vy = tridiagonal_ql(dy, oy)
        vals = np.add.outer(lx, ly).ravel()
        vecs = np.kron(vx, vy)
        order = np.argsort(vals, kind="stable")
        return EigenDecomposition(vals[order], _canonical_signs(vecs[:, order]))


def _laplacian_1d(N: int, h: float) -> tuple[np.ndarray, np.ndarray]:
    return np.full(N, 2.0 / h**2), np.full(N - 1, -1.0 / h**2)


def _tridiag(diag: np.ndarray, off: np.ndarray) -> np.ndarray:
    return np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)


def discretize_dirichlet(N, L=1.0) -> MatrixModel:
    """Finite-difference Dirichlet Laplacian on an interval or rectangle.

    ``N`` counts interior nodes per axis, so h = L / (N + 1). G is the first
    Cartesian coordinate of each node. Constants are the continuum values
    (0, 4/d, 1); use :meth:`MatrixModel.mesh_allowance` when checking laws.
    """
    Ns = [int(n) for n in np.atleast_1d(N)]
    Ls = [float(x) for x in np.broadcast_to(np.atleast_1d(L), (len(Ns),))]
    if len(Ns) not in (1, 2):
        raise ParameterRangeError("only 1-D and 2-D grids are supported")
    if min(Ns) < 3:
        raise ParameterRangeError("degenerate grid: need N >= 3 interior nodes per axis")
    if min(Ls) <= 0:
        raise ParameterRangeError("degenerate grid: lengths must be positive")
    hs = [Lk / (n + 1) for n, Lk in zip(Ns, Ls)]
    d = len(Ns)
    constants = CommutatorConstants.dirichlet(d)
    if d == 1:
        diag, off = _laplacian_1d(Ns[0], hs[0])
        x = hs[0] * np.arange(1, Ns[0] + 1)
        return MatrixModel(
            H=_tridiag(diag, off), G=np.diag(x), constants=constants,
            mesh=hs[0], lengths=tuple(Ls), label="fd-dirichlet", dimension=1,
        )
    (Nx, Ny), (hx, hy) = Ns, hs
    fx, fy = _laplacian_1d(Nx, hx), _laplacian_1d(Ny, hy)
    Tx, Ty = _tridiag(*fx), _tridiag(*fy)
    H = np.kron(Tx, np.eye(Ny)) + np.kron(np.eye(Nx), Ty)
    x = np.repeat(hx * np.arange(1, Nx + 1), Ny)
    model = _KronSumModel(
        H=H, G=np.diag(x), constants=constants, mesh=max(hx, hy),
        lengths=tuple(Ls), label="fd-dirichlet", dimension=2,
    )
    model.factors = (fx, fy)
    return model


def discretize_schrodinger_1d(
    potential, N: int, interval=(0.0, 1.0), constants: CommutatorConstants | None = None
) -> MatrixModel:
    """-d^2/dx^2 + V on an interval with Dirichlet ends.

    ``potential`` is either a callable evaluated at the interior nodes or an
    array of N samples. Constants are never inferred.
    """
    a, b = map(float, interval)
    if N < 3:
        raise ParameterRangeError("degenerate grid: need N >= 3 interior nodes")
    if not b > a:
        raise ParameterRangeError("interval must have positive length")
    h = (b - a) / (N + 1)
    x = a + h * np.arange(1, N + 1)
    V = np.asarray(potential(x) if callable(potential) else potential, dtype=float)
    V = np.broadcast_to(V, x.shape).astype(float)
    if not np.all(np.isfinite(V)):
        raise ValueError("potential samples must be finite")
    diag, off = _laplacian_1d(N, h)
    return MatrixModel(
        H=_tridiag(diag + V, off), G=np.diag(x), constants=constants,
        mesh=h, lengths=(b - a,), label="fd-schrodinger", dimension=1,
    )


def discrete_dirichlet_eigenvalues(N: int, L: float = 1.0) -> np.ndarray:
    """Closed form (4/h^2) sin^2(k pi h / 2L) of the 3-point stencil."""
    h = L / (N + 1)
    k = np.arange(1, N + 1)
    return 4.0 / h**2 * np.sin(k * math.pi * h / (2.0 * L)) ** 2


def random_model(order: int, rng: np.random.Generator, *, label: str = "matrix") -> MatrixModel:
    """Random symmetric pair with standard normal entries, for identity trials."""
    A = rng.standard_normal((order, order))
    B = rng.standard_normal((order, order))
    return MatrixModel(H=(A + A.T) / 2.0, G=(B + B.T) / 2.0, label=label)
