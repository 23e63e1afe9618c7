"""Semiclassical reference values and the summation-by-parts sharpness computation."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .core import CommutatorConstants, Spectrum
from .errors import IdentityMismatch, ParameterRangeError
from .functions import FunctionSpec
from .inequalities.moments import moment_mean_S
from .models import unit_ball_volume
from .reports import InequalityReport

ABEL_RTOL = 1e-9


def weyl_constant(d: int) -> float:
    """C_d = 4 pi^2 / omega_d^{2/d}."""
    if d < 1:
        raise ParameterRangeError("dimension must be >= 1")
    return 4.0 * math.pi**2 / unit_ball_volume(d) ** (2.0 / d)


@dataclass(frozen=True)
class WeylContext:
    dimension: int
    volume: float
    constant_Cd: float

    def __post_init__(self):
        if not self.constant_Cd > 0:
            raise ValueError("Weyl constant must be positive")
        if not self.volume > 0:
            raise ValueError("volume must be positive")

    @classmethod
    def standard(cls, dimension: int, volume: float) -> "WeylContext":
        return cls(dimension, float(volume), weyl_constant(dimension))

    @classmethod
    def from_spectrum(cls, s: Spectrum) -> "WeylContext":
        if s.dimension is None or s.volume is None:
            raise ParameterRangeError("Weyl context needs a spectrum with dimension and volume")
        return cls.standard(s.dimension, s.volume)


def weyl_estimate(n: int, ctx: WeylContext) -> float:
    """C_d (n / V)^{2/d}."""
    if n < 1:
        raise ParameterRangeError("n must be >= 1")
    return ctx.constant_Cd * (n / ctx.volume) ** (2.0 / ctx.dimension)


def counting_asymptote(lam: float, ctx: WeylContext) -> float:
    """C_d^{-d/2} V lam^{d/2}."""
    if not lam > 0:
        raise ParameterRangeError("lambda must be positive")
    d = ctx.dimension
    return ctx.constant_Cd ** (-d / 2) * ctx.volume * lam ** (d / 2)


def _require_cut(s: Spectrum, lam: float) -> None:
    if not s.is_complete and lam > float(s.values[-1]):
        raise ParameterRangeError(
            f"cut {lam:.6g} lies beyond the last listed eigenvalue {float(s.values[-1]):.6g}")


def exact_count(s: Spectrum, lam: float) -> int:
    """N(lam) = #{j : lam_j <= lam}; refuses cuts beyond a truncated list."""
    _require_cut(s, lam)
    return int(np.searchsorted(s.values, lam, side="right"))


def abel_identity(s: Spectrum, f: FunctionSpec, lam_cut: float) -> tuple[float, float]:
    """Both sides of sum_{j <= N(lam)} f(lam_j) = N(lam) f(lam) - int_{lo}^{lam} f'(t) N(t) dt.

    The integral runs from lo = min(0, lam_1); N is piecewise constant, so it
    is integrated with quad on each interval between consecutive eigenvalues.
    """
    N = exact_count(s, lam_cut)
    vals = s.values[:N]
    lhs = math.fsum(np.asarray(f(vals), dtype=float))
    breaks = np.concatenate([vals, [lam_cut]])
    integral_terms = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for k in range(1, N + 1):
            a, b = float(breaks[k - 1]), float(breaks[k])
            if b > a:
                piece, _ = integrate.quad(lambda t: float(f.d1(t)), a, b, epsabs=0.0, epsrel=1e-13)
                integral_terms.append(k * piece)
    rhs = N * float(f(lam_cut)) - math.fsum(integral_terms)
    return lhs, rhs


def _abel_scale(s: Spectrum, f: FunctionSpec, lam_cut: float, N: int) -> float:
    vals = s.values[:N]
    return max(math.fsum(np.abs(np.asarray(f(vals), dtype=float))) + N * abs(float(f(lam_cut))), 1e-300)


def check_abel_identity(s: Spectrum, f: FunctionSpec, lam_cut: float, *,
                        rtol: float = ABEL_RTOL) -> InequalityReport:
    """Abel summation identity as a two-sided check: lhs = |difference|, rhs = 0."""
    lhs, rhs = abel_identity(s, f, lam_cut)
    scale = _abel_scale(s, f, lam_cut, exact_count(s, lam_cut))
    return InequalityReport.build("abel", abs(lhs - rhs), 0.0, tolerance=rtol * scale,
                                  sum_side=lhs, integral_side=rhs, z=lam_cut)


def abel_residual(s: Spectrum, f: FunctionSpec, lambda_cut: float, ctx: WeylContext) -> float:
    """sum_{j <= N} [f(lam_j) + (2/d) lam_j f'(lam_j) - f(lam_N)] / (N f(lam_cut)).

    Confirms the Abel identity at the same cut first and raises
    :class:`IdentityMismatch` if it does not hold to 1e-9.
    """
    report = check_abel_identity(s, f, lambda_cut)
    if not report.passed:
        raise IdentityMismatch(f"Abel identity fails at cut {lambda_cut:.6g}: {report}")
    N = exact_count(s, lambda_cut)
    if N == 0:
        raise ParameterRangeError("no eigenvalue below the cut")
    vals = s.values[:N]
    d = ctx.dimension
    terms = np.asarray(f(vals), dtype=float) + (2.0 / d) * vals * np.asarray(f.d1(vals), dtype=float)
    numerator = math.fsum(terms) - N * float(f(vals[-1]))
    return numerator / (N * float(f(lambda_cut)))


def bly_diagnostic(s: Spectrum, n: int, ctx: WeylContext) -> InequalityReport:
    """Weyl leading term C_d (n/V)^{2/d} against S_n(1) with Dirichlet constants (diagnostic only)."""
    c = CommutatorConstants.dirichlet(ctx.dimension)
    return InequalityReport.build("bly-diagnostic", weyl_estimate(n, ctx), moment_mean_S(s, c, n, 1.0), n=n)
