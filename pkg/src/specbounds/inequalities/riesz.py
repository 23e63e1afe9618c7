"""Riesz means, weighted partition functions and the Weyl-sharp ratio bound.

Laws stated for alpha = 0 are applied to general constants through the shift
lam -> lam + alpha/beta, which moves alpha to zero.
"""

from __future__ import annotations

import math

import numpy as np

from ..core import CommutatorConstants, Spectrum, resolve_constants
from ..errors import ParameterRangeError, PositivityError, TrustRegionError
from ..functions import FunctionSpec, check_hypotheses
from ..reports import InequalityReport, MonotonicityReport, default_rtol
from ..tails import z_tail_ratio, z_trust_threshold

Z_TAIL_RTOL = 1e-11


def _grid(values) -> np.ndarray:
    grid = np.asarray(values, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ParameterRangeError("grid must be a nonempty 1-D list")
    if np.any(np.diff(grid) <= 0):
        raise ParameterRangeError("grid must be strictly increasing")
    return grid


def _validate_rho(rho: float, allow_subquadratic: bool) -> None:
    if rho < 1:
        raise ParameterRangeError(f"Riesz exponent rho={rho} < 1 is not supported")
    if rho < 2 and not allow_subquadratic:
        raise ParameterRangeError(
            f"rho={rho} < 2: (1 - lam)^rho has no concave derivative; "
            "pass allow_subquadratic=True to evaluate outside the verified range"
        )


def riesz_mean(s: Spectrum, z: float, rho: float, *, allow_subquadratic: bool = False) -> float:
    """R_rho(z) = sum_j (z - lam_j)_+^rho."""
    _validate_rho(rho, allow_subquadratic)
    u = z - s.values[s.values < z]
    return math.fsum(u**rho)


def riesz_ratio(s: Spectrum, c: CommutatorConstants, z: float, rho: float, *,
                allow_subquadratic: bool = False) -> float:
    """R_rho(z) / (z + alpha/beta)^{rho + 2gamma/beta}."""
    base = z + c.alpha / c.beta
    if base <= 0:
        raise ParameterRangeError(f"z={z} must exceed -alpha/beta={-c.alpha / c.beta}")
    return riesz_mean(s, z, rho, allow_subquadratic=allow_subquadratic) / base ** (rho + c.weyl_exponent)


def riesz_trust_ceiling(s: Spectrum) -> float:
    """Largest z at which a truncated list still determines R_rho(z) exactly."""
    return math.inf if s.is_complete else float(s.values[-1])


def check_riesz_monotone(s: Spectrum, c: CommutatorConstants | None, rho: float, z_grid, *,
                         allow_subquadratic: bool = False, rtol: float | None = None
                         ) -> MonotonicityReport:
    """R_rho(z) / z^{rho + 2gamma/beta} is nondecreasing in z."""
    c = resolve_constants(s, c, "riesz-monotone")
    _validate_rho(rho, allow_subquadratic)
    grid = _grid(z_grid)
    ceiling = riesz_trust_ceiling(s)
    if grid[-1] > ceiling:
        raise TrustRegionError(
            f"z={grid[-1]:.6g} lies beyond the last listed eigenvalue {ceiling:.6g}; "
            "the truncated spectrum would bias the Riesz mean", threshold=ceiling)
    values = [riesz_ratio(s, c, z, rho, allow_subquadratic=allow_subquadratic) for z in grid]
    context = {"rho": rho}
    if rho < 2:
        context["hypothesis_range"] = "outside verified range (rho < 2)"
    return MonotonicityReport.build("riesz-monotone", grid, values, "nondecreasing",
                                    rtol=rtol, **context)


def _require_riesz_profile(f: FunctionSpec) -> None:
    tol = 1e-10 * max(abs(float(f(0.0))), abs(float(f.d1(0.0))), 1.0)
    if abs(float(f(1.0))) > tol or abs(float(f.d1(1.0))) > tol:
        raise ParameterRangeError("generalized Riesz means need f(1) = f'(1) = 0")
    report = check_hypotheses(f, (0.0, 1.0), 2.0)
    report.require(("h1", "h2", "h3"))


def generalized_riesz_mean(s: Spectrum, f: FunctionSpec, t: float,
                           c: CommutatorConstants | None = None) -> float:
    """R_f(t) = sum_j f(t lam_j) theta(1 - t lam_j), eigenvalues shifted by alpha/beta when c is given."""
    shift = 0.0 if c is None else c.alpha / c.beta
    x = t * (s.values + shift)
    x = x[x < 1.0]
    return math.fsum(np.asarray(f(x), dtype=float))


def check_generalized_riesz_monotone(s: Spectrum, c: CommutatorConstants | None, f: FunctionSpec,
                                     t_grid, *, rtol: float | None = None) -> MonotonicityReport:
    """t^{2gamma/beta} R_f(t) is nonincreasing in t."""
    c = resolve_constants(s, c, "generalized Riesz mean")
    _require_riesz_profile(f)
    grid = _grid(t_grid)
    shift = c.alpha / c.beta
    if not s.is_complete:
        floor = 1.0 / (float(s.values[-1]) + shift)
        if grid[0] < floor:
            raise TrustRegionError(
                f"t={grid[0]:.6g} is below 1/(lam_max + alpha/beta) = {floor:.6g}", threshold=floor)
    values = [t**c.weyl_exponent * generalized_riesz_mean(s, f, t, c) for t in grid]
    return MonotonicityReport.build("riesz-generalized", grid, values, "nonincreasing",
                                    rtol=rtol, family=f.family_tag)


# -- weighted partition function ---------------------------------------------------


def _z_shift(s: Spectrum, c: CommutatorConstants, p: float) -> float:
    shift = c.alpha / c.beta
    if p < 0:
        raise ParameterRangeError(f"need p >= 0, got {p}")
    if p > 0 and float(s.values[0]) + shift <= 0:
        raise PositivityError("Z_p with p > 0 needs lam_j + alpha/beta > 0")
    return shift


def _z_head(s: Spectrum, p: float, shift: float, t: float) -> float:
    logs = -t * s.values
    if p > 0:
        logs = logs - p * np.log(s.values + shift)
    return math.fsum(np.exp(logs))


def _require_z_trust(s: Spectrum, p: float, shift: float, t: float, tail_rtol: float) -> None:
    if s.is_complete:
        return
    if z_tail_ratio(s, p, shift, t) > tail_rtol:
        threshold = z_trust_threshold(s, p, shift, tail_rtol)
        raise TrustRegionError(
            f"t={t:.6g} is too small: the truncated tail of Z_p exceeds {tail_rtol:g} "
            f"relative; need t >= {threshold:.6g}", threshold=threshold)


def weighted_partition_Z(s: Spectrum, c: CommutatorConstants | None, p: float, t: float, *,
                         tail_rtol: float = Z_TAIL_RTOL) -> float:
    """Z_p(t) = sum_j (lam_j + alpha/beta)^{-p} exp(-t lam_j)."""
    c = resolve_constants(s, c, "Z_p")
    if not t > 0:
        raise ParameterRangeError(f"need t > 0, got {t}")
    shift = _z_shift(s, c, p)
    _require_z_trust(s, p, shift, t, tail_rtol)
    return _z_head(s, p, shift, t)


def z_composite(s: Spectrum, c: CommutatorConstants, p: float, t: float, *,
                tail_rtol: float = Z_TAIL_RTOL) -> float:
    """Z_p(t) t^{2gamma/beta - p} exp(-(alpha/beta) t)."""
    Z = weighted_partition_Z(s, c, p, t, tail_rtol=tail_rtol)
    return Z * t ** (c.weyl_exponent - p) * math.exp(-c.alpha / c.beta * t)


def check_Z_monotone(s: Spectrum, c: CommutatorConstants | None, p: float, t_grid, *,
                     tail_rtol: float = Z_TAIL_RTOL, rtol: float | None = None) -> MonotonicityReport:
    """t -> Z_p(t) t^{2gamma/beta - p} e^{-(alpha/beta) t} is nonincreasing.

    The relative tail of a truncated list shrinks as t grows, so trust is
    certified once at the smallest grid point.
    """
    c = resolve_constants(s, c, "zp-monotone")
    grid = _grid(t_grid)
    if grid[0] <= 0:
        raise ParameterRangeError("t-grid must be positive")
    shift = _z_shift(s, c, p)
    _require_z_trust(s, p, shift, float(grid[0]), tail_rtol)
    k = c.weyl_exponent - p
    values = [_z_head(s, p, shift, t) * t**k * math.exp(-shift * t) for t in grid]
    return MonotonicityReport.build("zp-monotone", grid, values, "nonincreasing",
                                    rtol=rtol, p=p)


def z_decade_ratios(s: Spectrum, c: CommutatorConstants | None, p: float, t_grid, *,
                    tail_rtol: float = Z_TAIL_RTOL) -> tuple[np.ndarray, np.ndarray]:
    """Z_p(t/10) / Z_p(t) for every grid point t whose tenth is still on the grid's range."""
    c = resolve_constants(s, c, "zp divergence")
    grid = _grid(t_grid)
    shift = _z_shift(s, c, p)
    _require_z_trust(s, p, shift, float(grid[0]), tail_rtol)
    ts = grid[grid >= 10.0 * grid[0] * (1 - 1e-12)]
    ratios = np.array([_z_head(s, p, shift, t / 10.0) / _z_head(s, p, shift, t) for t in ts])
    return ts, ratios


def check_Z_divergence(s: Spectrum, c: CommutatorConstants | None, p: float, t_grid, *,
                       factor: float = 2.0, tail_decades: float = 1.0,
                       tail_rtol: float = Z_TAIL_RTOL) -> InequalityReport:
    """Blow-up trend for p < 2gamma/beta: Z_p(t/10) >= factor * Z_p(t) on the small-t end.

    The tail of the grid is the first ``tail_decades`` decades above 10 t_min.
    The report compares ``factor`` (lhs) against the smallest observed ratio (rhs).
    """
    c = resolve_constants(s, c, "zp divergence")
    if not p < c.weyl_exponent:
        raise ParameterRangeError(f"divergence needs p < 2gamma/beta = {c.weyl_exponent}")
    ts, ratios = z_decade_ratios(s, c, p, t_grid, tail_rtol=tail_rtol)
    if ts.size == 0:
        raise ParameterRangeError("t-grid spans less than one decade")
    window = ts <= ts[0] * 10.0**tail_decades * (1 + 1e-12)
    worst = float(np.min(ratios[window]))
    return InequalityReport.build("zp-divergence", factor, worst, rtol=0.0, p=p,
                                  t=float(ts[window][int(np.argmin(ratios[window]))]))


def log_t_grid(s: Spectrum, *, points: int = 200, decades: float = 4.0) -> np.ndarray:
    """Logarithmic grid from 10/lam_1 down ``decades`` decades (ascending)."""
    lam1 = float(s.values[0])
    if lam1 <= 0:
        raise PositivityError("log_t_grid needs lam_1 > 0")
    t_hi = 10.0 / lam1
    return np.logspace(math.log10(t_hi) - decades, math.log10(t_hi), points)


def trusted_t_grid(s: Spectrum, c: CommutatorConstants | None, p: float, *, points: int = 200,
                   decades: float = 4.0, tail_rtol: float = Z_TAIL_RTOL) -> np.ndarray:
    """:func:`log_t_grid`, with its lower end raised to the trust threshold when needed.

    The point count is kept, so a clipped grid is denser rather than shorter.
    """
    grid = log_t_grid(s, points=points, decades=decades)
    if s.is_complete:
        return grid
    c = resolve_constants(s, c, "Z_p grid")
    floor = z_trust_threshold(s, p, _z_shift(s, c, p), tail_rtol) * 1.01
    if floor <= grid[0]:
        return grid
    if floor >= grid[-1]:
        raise TrustRegionError(f"trust threshold {floor:.6g} lies above the whole grid", threshold=floor)
    return np.geomspace(floor, grid[-1], points)


# -- ratio bound -------------------------------------------------------------------


def ratio_bound_constant(c: CommutatorConstants) -> float:
    """2 (beta + gamma)^{1 + beta/2gamma} / (beta (beta + 2gamma)^{beta/2gamma})."""
    e = c.beta / (2 * c.gamma)
    return 2.0 * (c.beta + c.gamma) ** (1 + e) / (c.beta * (c.beta + 2 * c.gamma) ** e)


def ratio_threshold(c: CommutatorConstants, k: int) -> float:
    return (1.0 + c.weyl_exponent) * k


def check_ratio_bound(s: Spectrum, c: CommutatorConstants | None, n: int, k: int, *,
                      rtol: float | None = None) -> InequalityReport:
    """mean_n / mean_k <= K (n/k)^{beta/2gamma} for n >= (1 + 2gamma/beta) k."""
    c = resolve_constants(s, c, "ratio-bound")
    if k < 1:
        raise ParameterRangeError("need k >= 1")
    threshold = ratio_threshold(c, k)
    if n < threshold * (1 - 1e-12):
        raise ParameterRangeError(f"ratio bound needs n >= (1 + 2gamma/beta) k = {threshold:.6g}; got n={n}")
    shift = c.alpha / c.beta
    mean_n = math.fsum(s.prefix(n)) / n + shift
    mean_k = math.fsum(s.prefix(k)) / k + shift
    if mean_k <= 0:
        raise PositivityError("ratio bound needs a positive (shifted) mean of the first k eigenvalues")
    rhs = ratio_bound_constant(c) * (n / k) ** (c.beta / (2 * c.gamma))
    return InequalityReport.build("ratio-bound", mean_n / mean_k, rhs, rtol=rtol, n=n, k=k)


def ratio_bound_sweep(s: Spectrum, c: CommutatorConstants | None, n_max: int, *,
                      rtol: float | None = None) -> tuple[int, InequalityReport | None]:
    """Every valid (n, k) with n <= n_max; returns (pairs checked, tightest report)."""
    c = resolve_constants(s, c, "ratio-bound")
    rtol = default_rtol() if rtol is None else rtol
    shift = c.alpha / c.beta
    lam = s.prefix(n_max)
    means = np.cumsum(lam) / np.arange(1, n_max + 1) + shift
    K = ratio_bound_constant(c)
    e = c.beta / (2 * c.gamma)
    checked, worst, worst_rel = 0, None, -math.inf
    for k in range(1, n_max + 1):
        n0 = math.ceil(ratio_threshold(c, k) * (1 - 1e-12))
        if n0 > n_max:
            break
        ns = np.arange(n0, n_max + 1)
        lhs = means[ns - 1] / means[k - 1]
        rhs = K * (ns / k) ** e
        tol = rtol * np.maximum(np.maximum(np.abs(lhs), np.abs(rhs)), 1.0)
        rel = (lhs - rhs) / tol
        checked += ns.size
        i = int(np.argmax(rel))
        if rel[i] > worst_rel:
            worst_rel = float(rel[i])
            worst = InequalityReport("ratio-bound", float(lhs[i]), float(rhs[i]), float(tol[i]),
                                     {"n": int(ns[i]), "k": k})
    return checked, worst
