"""Gap-refined moment laws and the general partial-sum inequality (partial and full-trace forms)."""

from __future__ import annotations

import math

import numpy as np

from ..core import CommutatorConstants, Spectrum, resolve_constants
from ..errors import HypothesisViolation, ParameterRangeError, PositivityError, TrustRegionError
from ..functions import FunctionSpec, check_hypotheses
from ..reports import InequalityReport, default_rtol
from ..tails import nonpositive_beyond
from .moments import (SweepTable, _cummean, geometric_bound_rhs, moment_mean_S, moment_root,
                      moment_root_table, validate_pq)


def gap_quantities(s: Spectrum, n: int, p: float) -> tuple[float, float]:
    """(gamma_n, Lambda_n(p)) with gamma_n = (lam_{n+1} - lam_n)/lam_n; Lambda may be inf."""
    if n + 1 > len(s):
        raise ParameterRangeError(f"gap at n={n} needs lambda_{n + 1}; spectrum has {len(s)} values")
    lam_n, lam_next = float(s.values[n - 1]), float(s.values[n])
    if lam_n <= 0:
        raise PositivityError(f"gap ratio needs lambda_n > 0, got {lam_n!r}")
    g = (lam_next - lam_n) / lam_n
    if g >= 1.0:
        return g, math.inf
    return g, lam_n * ((1.0 + (p - 1.0) * g) / (1.0 - g)) ** (1.0 / p)


def _gamma_table(lam_ext: np.ndarray) -> np.ndarray:
    return (lam_ext[1:] - lam_ext[:-1]) / lam_ext[:-1]


def _dirichlet_like(c: CommutatorConstants) -> None:
    if c.alpha != 0.0:
        raise ParameterRangeError("gap-refined laws need alpha = 0 (shift the spectrum first)")


def check_pln_bounds(s: Spectrum, c: CommutatorConstants | None, n: int, p: float, *,
                     rtol: float | None = None) -> tuple[InequalityReport, InequalityReport]:
    """The two gap-refined geometric-mean bounds with e^{2/d} read as e^{beta/2gamma}.

    pln-1: S_n(p) - (e^{beta/2gamma} G_n)^p <= lam_n^p (1 + p g/2 - e^{p g/2})
    pln-2: S_n(p)^{1/p} / (e^{beta/2gamma} G_n) <= (1 + p g/2)^{1/p} / e^{g/2}
    """
    if not 0 < p <= 3:
        raise ParameterRangeError(f"need 0 < p <= 3, got p={p}")
    c = resolve_constants(s, c, "pln bounds")
    _dirichlet_like(c)
    g, Lam = gap_quantities(s, n, p)
    lam_n = float(s.values[n - 1])
    # Both closed forms come from minimizers that must lie in [lam_n, Lambda_n(p)].
    for label, z in (("pln-1", lam_n * math.exp(g / 2)), ("pln-2", lam_n * (1 + p * g / 2) ** (1 / p))):
        if z > Lam * (1 + 1e-12):
            raise HypothesisViolation("H4'", (lam_n, z, Lam),
                                      f"{label} minimizer {z:.6g} exceeds Lambda_n(p) = {Lam:.6g}")
    eG = geometric_bound_rhs(s, c, n)  # e^{beta/2gamma} G_n when alpha = 0
    Sp = moment_mean_S(s, c, n, p)
    r1 = InequalityReport.build(
        "pln-1", Sp - eG**p, lam_n**p * (1.0 + p * g / 2 - math.exp(p * g / 2)),
        rtol=rtol, n=n, p=p, gap=g)
    r2 = InequalityReport.build(
        "pln-2", moment_root(s, c, n, p) / eG, (1.0 + p * g / 2) ** (1 / p) / math.exp(g / 2),
        rtol=rtol, n=n, p=p, gap=g)
    return r1, r2


def pln_tables(s: Spectrum, c: CommutatorConstants | None, n_max: int, p: float, *,
               rtol: float | None = None) -> tuple[SweepTable, SweepTable]:
    """Both gap bounds for n = 1..n_max (needs lam_{n_max + 1})."""
    c = resolve_constants(s, c, "pln bounds")
    _dirichlet_like(c)
    if n_max + 1 > len(s):
        raise ParameterRangeError(f"need lambda_{n_max + 1}")
    s.require_positive(n_max + 1, "pln bounds")
    rtol = default_rtol() if rtol is None else rtol
    lam_ext = s.values[: n_max + 1]
    lam = lam_ext[:-1]
    g = _gamma_table(lam_ext)
    eG = np.exp(c.beta / (2 * c.gamma) + _cummean(np.log(lam)))
    Sp = (1.0 + c.beta * p / (2 * c.gamma)) * _cummean(lam**p)
    root = moment_root_table(lam, c, p)
    with np.errstate(over="ignore"):
        t1 = SweepTable("pln-1", Sp - eG**p, lam**p * (1.0 + p * g / 2 - np.exp(p * g / 2)),
                        rtol, {"p": p})
    t2 = SweepTable("pln-2", root / eG, (1.0 + p * g / 2) ** (1 / p) / np.exp(g / 2), rtol, {"p": p})
    return t1, t2


def _refined_constants(s: Spectrum, d: int | None) -> CommutatorConstants:
    d = s.dimension if d is None else d
    if d is None:
        raise ParameterRangeError("dirichlet-refined needs the dimension d")
    return CommutatorConstants.dirichlet(d)


def check_dirichlet_refined(s: Spectrum, n: int, p: float, q: float, d: int | None = None, *,
                            rtol: float | None = None) -> InequalityReport:
    """S_n(p)^{1/p} / (1 + p g/2)^{1/p} <= S_n(q)^{1/q} / (1 + q g/2)^{1/q}, Dirichlet constants."""
    validate_pq(p, q)
    c = _refined_constants(s, d)
    g, _ = gap_quantities(s, n, p)
    lhs = moment_root(s, c, n, p) / (1.0 + p * g / 2) ** (1 / p)
    rhs = moment_root(s, c, n, q) / (1.0 + q * g / 2) ** (1 / q)
    return InequalityReport.build("dirichlet-refined", lhs, rhs, rtol=rtol, n=n, p=p, q=q, gap=g)


def dirichlet_refined_table(s: Spectrum, n_max: int, p: float, q: float, d: int | None = None, *,
                            rtol: float | None = None) -> SweepTable:
    validate_pq(p, q)
    c = _refined_constants(s, d)
    if n_max + 1 > len(s):
        raise ParameterRangeError(f"need lambda_{n_max + 1}")
    s.require_positive(n_max + 1, "dirichlet-refined")
    rtol = default_rtol() if rtol is None else rtol
    lam_ext = s.values[: n_max + 1]
    g = _gamma_table(lam_ext)
    lam = lam_ext[:-1]
    lhs = moment_root_table(lam, c, p) / (1.0 + p * g / 2) ** (1 / p)
    rhs = moment_root_table(lam, c, q) / (1.0 + q * g / 2) ** (1 / q)
    return SweepTable("dirichlet-refined", lhs, rhs, rtol, {"p": p, "q": q})


# -- general partial-sum inequality -------------------------------------------------


def _c2_summand(f: FunctionSpec, c: CommutatorConstants, lam):
    return f(lam) + (c.beta * lam + c.alpha) / (2 * c.gamma) * f.d1(lam)


def c2_boundary_condition(f: FunctionSpec, lam_n: float, lam_next: float) -> float:
    """f'(lam_n) + f''(lam_n)(lam_{n+1} - lam_n), required to be >= 0."""
    return float(f.d1(lam_n) + f.d2(lam_n) * (lam_next - lam_n))


def check_C2_general(s: Spectrum, c: CommutatorConstants | None, n: int, f: FunctionSpec, *,
                     mode: str = "partial", rtol: float | None = None,
                     allowance: float = 0.0) -> InequalityReport:
    """Partial-sum inequality for f in the trace-controllable class.

    ``mode="partial"``: (1/n) sum_{j<=n} (f + ((beta lam + alpha)/2gamma) f') <= f(lam_n) + f'(lam_n)(lam_{n+1} - lam_n)/2.
    ``mode="full"``: sum over the whole spectrum of the same summand <= 0. For a
    truncated list the summand must be certified nonpositive beyond the last
    listed eigenvalue, so the truncated sum is an upper bound of the full one.
    ``allowance`` widens the tolerance by allowance * max(|lhs|, |rhs|) (mesh error).
    """
    c = resolve_constants(s, c, "c2")
    rtol = default_rtol() if rtol is None else rtol
    if mode == "partial":
        if n + 1 > len(s):
            raise ParameterRangeError(f"partial-sum law at n={n} needs lambda_{n + 1}")
        lam = s.prefix(n)
        lam_n, lam_next = float(lam[-1]), float(s.values[n])
        hyp = check_hypotheses(f, (float(lam[0]), lam_n), lam_next if lam_next > lam_n else lam_n + 1.0)
        hyp.require(("h1", "h2", "h3"))
        if f.deriv2 is not None:
            bc = c2_boundary_condition(f, lam_n, lam_next)
            scale = max(abs(float(f.d1(lam_n))), abs(float(f.d2(lam_n)) * (lam_next - lam_n)), 1e-300)
            if bc < -1e-12 * scale:
                raise HypothesisViolation("H4'", (lam_n, lam_next), f"boundary condition value {bc:.6g}")
        elif lam_next > lam_n:
            hyp.require(("h4",))
        lhs = math.fsum(np.asarray(_c2_summand(f, c, lam), dtype=float)) / n
        rhs = float(f(lam_n)) + 0.5 * float(f.d1(lam_n)) * (lam_next - lam_n)
        context = {"n": n, "mode": mode, "family": f.family_tag}
    elif mode == "full":
        lam = s.values
        hyp = check_hypotheses(f, (float(lam[0]), float(lam[-1])), float(lam[-1]) + 1.0)
        hyp.require(("h1", "h2", "h3"))
        if not s.is_complete:
            ok, witness = nonpositive_beyond(lambda x: float(_c2_summand(f, c, x)), float(lam[-1]))
            if not ok:
                raise TrustRegionError(
                    f"summand is positive at lambda={witness:.6g} beyond the truncated list; "
                    "cannot certify the full trace", threshold=witness)
        lhs = math.fsum(np.asarray(_c2_summand(f, c, lam), dtype=float))
        rhs = 0.0
        context = {"n": len(s), "mode": mode, "family": f.family_tag}
    else:
        raise ParameterRangeError(f"mode must be 'partial' or 'full', got {mode!r}")
    scale = max(abs(lhs), abs(rhs), 1.0)
    return InequalityReport.build("c2", lhs, rhs, tolerance=(rtol + allowance) * scale, **context)
