"""Core value types: spectra, commutator constants, eigen-decompositions.

Spectra are immutable: the eigenvalue array is stored read-only and every
transformation returns a new object.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import ConstantsRequired, ParameterRangeError, PositivityError

# Labels of spectra that contain *every* eigenvalue of a finite operator, as
# opposed to a prefix of an infinite spectrum.
COMPLETE_LABEL_PREFIXES = ("fd-", "matrix")


def _frozen_array(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class CommutatorConstants:
    """(alpha, beta, gamma) with gamma = [G,[H,G]]/2 and beta*H + alpha >= -[H,G]^2."""

    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        if not (self.beta > 0 and math.isfinite(self.beta)):
            raise ParameterRangeError(f"beta must be positive, got {self.beta}")
        if not (self.gamma > 0 and math.isfinite(self.gamma)):
            raise ParameterRangeError(f"gamma must be positive, got {self.gamma}")
        if not math.isfinite(self.alpha):
            raise ParameterRangeError(f"alpha must be finite, got {self.alpha}")

    @classmethod
    def dirichlet(cls, d: int) -> "CommutatorConstants":
        return cls(0.0, 4.0 / d, 1.0)

    @property
    def weyl_exponent(self) -> float:
        """2*gamma/beta, which plays the role of d/2 in the Laplacian case."""
        return 2.0 * self.gamma / self.beta

    def to_dict(self) -> dict:
        return {"alpha": self.alpha, "beta": self.beta, "gamma": self.gamma}


@dataclass(frozen=True)
class Spectrum:
    values: np.ndarray
    dimension: int | None = None
    volume: float | None = None
    label: str = ""
    constants: CommutatorConstants | None = None
    mesh: float | None = None

    def __post_init__(self):
        arr = _frozen_array(self.values)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("spectrum must be a nonempty 1-D list of eigenvalues")
        if not np.all(np.isfinite(arr)):
            raise ValueError("spectrum contains non-finite values")
        if np.any(np.diff(arr) < 0):
            k = int(np.argmax(np.diff(arr) < 0))
            raise ValueError(
                f"eigenvalues must be nondecreasing (index {k}: {arr[k]!r} > {arr[k + 1]!r})"
            )
        object.__setattr__(self, "values", arr)
        if self.dimension is not None and self.dimension < 1:
            raise ValueError("dimension must be a positive integer")
        if self.volume is not None and not self.volume > 0:
            raise ValueError("volume must be positive")

    def __eq__(self, other):
        if not isinstance(other, Spectrum):
            return NotImplemented
        return (np.array_equal(self.values, other.values) and self.dimension == other.dimension
                and self.volume == other.volume and self.label == other.label
                and self.constants == other.constants and self.mesh == other.mesh)

    __hash__ = None

    def __len__(self) -> int:
        return int(self.values.size)

    @property
    def is_complete(self) -> bool:
        return self.label.startswith(COMPLETE_LABEL_PREFIXES)

    def prefix(self, n: int) -> np.ndarray:
        if not 1 <= n <= len(self):
            raise ParameterRangeError(f"n={n} outside 1..{len(self)}")
        return self.values[:n]

    def require_positive(self, n: int | None = None, what: str = "this quantity") -> None:
        vals = self.values if n is None else self.prefix(n)
        if vals[0] <= 0:
            raise PositivityError(
                f"{what} needs strictly positive eigenvalues; lambda_1 = {vals[0]!r}"
            )

    def with_constants(self, c: CommutatorConstants | None) -> "Spectrum":
        return replace(self, constants=c)

    def to_dict(self) -> dict:
        out = {
            "label": self.label,
            "dimension": self.dimension,
            "volume": self.volume,
            "constants": None if self.constants is None else self.constants.to_dict(),
            "eigenvalues": [float(v) for v in self.values],
        }
        if self.mesh is not None:
            out["mesh"] = self.mesh
        return out

    @classmethod
    def from_dict(cls, payload: dict) -> "Spectrum":
        consts = payload.get("constants")
        return cls(
            values=payload["eigenvalues"],
            dimension=payload.get("dimension"),
            volume=payload.get("volume"),
            label=payload.get("label", ""),
            constants=None if consts is None else CommutatorConstants(**consts),
            mesh=payload.get("mesh"),
        )


def resolve_constants(s: Spectrum, c: CommutatorConstants | None, what: str) -> CommutatorConstants:
    if c is not None:
        return c
    if s.constants is not None:
        return s.constants
    raise ConstantsRequired(what)


def save_spectrum(s: Spectrum, path: str | Path) -> None:
    Path(path).write_text(json.dumps(s.to_dict(), indent=2) + "\n", encoding="utf-8")


def load_spectrum(path: str | Path) -> Spectrum:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    return Spectrum.from_dict(payload)


@dataclass(frozen=True)
class EigenDecomposition:
    """Ascending eigenvalues with orthonormal eigenvectors stored as columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "eigenvalues", _frozen_array(self.eigenvalues))
        vecs = np.array(self.eigenvectors, dtype=float)
        vecs.setflags(write=False)
        object.__setattr__(self, "eigenvectors", vecs)

    def residuals(self, M: np.ndarray) -> np.ndarray:
        """||M v_k - lambda_k v_k|| for every k."""
        V = self.eigenvectors
        return np.linalg.norm(M @ V - V * self.eigenvalues, axis=0)

    def orthogonality_error(self) -> float:
        V = self.eigenvectors
        return float(np.max(np.abs(V.T @ V - np.eye(V.shape[1]))))


def shift_spectrum(
    s: Spectrum, c: CommutatorConstants, eta: float
) -> tuple[Spectrum, CommutatorConstants]:
    """Replace H by H + eta: eigenvalues move by eta and alpha by -beta*eta."""
    shifted = replace(s, values=s.values + eta)
    new_c = CommutatorConstants(c.alpha - c.beta * eta, c.beta, c.gamma)
    if s.constants is not None:
        shifted = replace(shifted, constants=new_c)
    return shifted, new_c


def normalize_to_positive(
    s: Spectrum, c: CommutatorConstants
) -> tuple[Spectrum, CommutatorConstants, float]:
    """Shift so that lambda_1 sits at half the first positive spectral gap.

    Returns the shifted spectrum, the transformed constants and the shift eta
    (apply ``shift_spectrum(..., -eta)`` to undo).
    """
    vals = s.values
    gaps = np.diff(vals)
    positive = gaps[gaps > 0]
    if positive.size:
        target = 0.5 * float(positive[0])
    else:
        target = 0.5 * max(abs(float(vals[0])), 1.0)
    eta = target - float(vals[0])
    new_s, new_c = shift_spectrum(s, c, eta)
    return new_s, new_c, eta
