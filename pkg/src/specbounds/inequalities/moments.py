"""Moment means S_n(r), geometric means, the Yang-type cap and the F_n machinery."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from ..core import CommutatorConstants, Spectrum, resolve_constants
from ..errors import IdentityMismatch, ParameterRangeError, PositivityError
from ..reports import InequalityReport, default_rtol


def validate_pq(p: float, q: float) -> None:
    """Admissible exponents: p > q > 0, q <= min(1, p), p + q <= 3."""
    if not q > 0:
        raise ParameterRangeError(f"need q > 0, got q={q}")
    if not p > q:
        raise ParameterRangeError(f"need p > q, got p={p}, q={q}")
    if q > min(1.0, p):
        raise ParameterRangeError(f"need q <= min(1, p), got q={q}")
    if p + q > 3.0:
        raise ParameterRangeError(f"need p + q <= 3, got p + q = {p + q}")


def _needs_positive(c: CommutatorConstants, r: float) -> bool:
    return c.alpha != 0.0 or r < 1.0 or r != math.floor(r)


def _prefix(s: Spectrum, n: int, c: CommutatorConstants, r: float, what: str) -> np.ndarray:
    lam = s.prefix(n)
    if _needs_positive(c, r) and lam[0] <= 0:
        raise PositivityError(f"{what} with r={r} needs positive eigenvalues; lambda_1 = {lam[0]!r}")
    return lam


def moment_mean_S(s: Spectrum, c: CommutatorConstants | None, n: int, r: float) -> float:
    """S_n(r) = (1 + beta r / 2gamma) mean(lam^r) + (alpha r / 2gamma) mean(lam^{r-1})."""
    c = resolve_constants(s, c, "moment_mean_S")
    if not r > 0:
        raise ParameterRangeError(f"need r > 0, got {r}")
    lam = _prefix(s, n, c, r, "S_n(r)")
    value = (1.0 + c.beta * r / (2 * c.gamma)) * math.fsum(lam**r) / n
    if c.alpha != 0.0:
        value += c.alpha * r / (2 * c.gamma) * math.fsum(lam ** (r - 1)) / n
    return value


def moment_root(s: Spectrum, c: CommutatorConstants | None, n: int, r: float) -> float:
    """S_n(r)^{1/r}, evaluated through log1p/expm1 so that r -> 0 stays accurate."""
    c = resolve_constants(s, c, "moment_root")
    if not r > 0:
        raise ParameterRangeError(f"need r > 0, got {r}")
    lam = s.prefix(n)
    s.require_positive(n, "S_n(r)^{1/r}")
    m = math.fsum(np.expm1(r * np.log(lam))) / n
    delta = m + c.beta * r / (2 * c.gamma) * (1.0 + m)
    if c.alpha != 0.0:
        delta += c.alpha * r / (2 * c.gamma) * math.fsum(lam ** (r - 1)) / n
    if delta <= -1.0:
        raise PositivityError(f"S_n({r}) is nonpositive")
    return math.exp(math.log1p(delta) / r)


def geometric_mean(s: Spectrum, n: int) -> float:
    lam = s.prefix(n)
    s.require_positive(n, "geometric mean")
    return math.exp(math.fsum(np.log(lam)) / n)


def geometric_bound_rhs(s: Spectrum, c: CommutatorConstants, n: int) -> float:
    """e^{beta/2gamma} G_n exp((alpha/2gamma) mean(1/lam))."""
    log_rhs = c.beta / (2 * c.gamma) + math.fsum(np.log(s.prefix(n))) / n
    if c.alpha != 0.0:
        log_rhs += c.alpha / (2 * c.gamma) * math.fsum(1.0 / s.prefix(n)) / n
    s.require_positive(n, "geometric mean bound")
    return math.exp(log_rhs)


def check_moment_order(s: Spectrum, c: CommutatorConstants | None, n: int, p: float, q: float,
                       *, rtol: float | None = None) -> InequalityReport:
    """S_n(p)^{1/p} <= S_n(q)^{1/q}."""
    validate_pq(p, q)
    c = resolve_constants(s, c, "moment-order")
    return InequalityReport.build("moment-order", moment_root(s, c, n, p), moment_root(s, c, n, q),
                                  rtol=rtol, n=n, p=p, q=q)


def check_geometric_bound(s: Spectrum, c: CommutatorConstants | None, n: int, p: float,
                          *, rtol: float | None = None) -> InequalityReport:
    """S_n(p)^{1/p} <= e^{beta/2gamma} G_n exp((alpha/2gamma) mean(1/lam)), 0 < p <= 3."""
    if not 0 < p <= 3:
        raise ParameterRangeError(f"need 0 < p <= 3, got p={p}")
    c = resolve_constants(s, c, "geometric-mean")
    return InequalityReport.build("geometric-mean", moment_root(s, c, n, p),
                                  geometric_bound_rhs(s, c, n), rtol=rtol, n=n, p=p)


# -- vectorized forms over all prefixes n = 1..n_max ------------------------------


def _cummean(x: np.ndarray) -> np.ndarray:
    # Terms are of one sign in every use below, so plain cumsum is well conditioned.
    return np.cumsum(x) / np.arange(1, x.size + 1)


def moment_root_table(lam: np.ndarray, c: CommutatorConstants, r: float) -> np.ndarray:
    """S_n(r)^{1/r} for every n, sharing the log1p evaluation of :func:`moment_root`."""
    m = _cummean(np.expm1(r * np.log(lam)))
    delta = m + c.beta * r / (2 * c.gamma) * (1.0 + m)
    if c.alpha != 0.0:
        delta = delta + c.alpha * r / (2 * c.gamma) * _cummean(lam ** (r - 1))
    return np.exp(np.log1p(delta) / r)


def geometric_bound_table(lam: np.ndarray, c: CommutatorConstants) -> np.ndarray:
    log_rhs = c.beta / (2 * c.gamma) + _cummean(np.log(lam))
    if c.alpha != 0.0:
        log_rhs = log_rhs + c.alpha / (2 * c.gamma) * _cummean(1.0 / lam)
    return np.exp(log_rhs)


@dataclass(frozen=True)
class SweepTable:
    """lhs <= rhs over n = 1..len; verdicts use the same tolerance rule as single reports."""

    law: str
    lhs: np.ndarray
    rhs: np.ndarray
    rtol: float
    context: dict

    @property
    def n(self) -> np.ndarray:
        return np.arange(1, self.lhs.size + 1)

    @property
    def tolerance(self) -> np.ndarray:
        return self.rtol * np.maximum(np.maximum(np.abs(self.lhs), np.abs(self.rhs)), 1.0)

    @property
    def slack(self) -> np.ndarray:
        return self.rhs - self.lhs

    @property
    def passed_mask(self) -> np.ndarray:
        return self.slack >= -self.tolerance

    @property
    def passed(self) -> bool:
        return bool(np.all(self.passed_mask))

    def report(self, n: int) -> InequalityReport:
        i = n - 1
        return InequalityReport(self.law, float(self.lhs[i]), float(self.rhs[i]),
                                float(self.tolerance[i]), dict(self.context, n=n))

    def reports(self) -> list[InequalityReport]:
        return [self.report(int(k)) for k in self.n]

    def worst(self) -> InequalityReport:
        rel = self.slack / self.tolerance
        return self.report(int(np.argmin(rel)) + 1)


def moment_order_table(s: Spectrum, c: CommutatorConstants | None, n_max: int, p: float, q: float,
                       *, rtol: float | None = None) -> SweepTable:
    validate_pq(p, q)
    c = resolve_constants(s, c, "moment-order")
    lam = s.prefix(n_max)
    s.require_positive(n_max, "moment-order")
    rtol = default_rtol() if rtol is None else rtol
    return SweepTable("moment-order", moment_root_table(lam, c, p), moment_root_table(lam, c, q),
                      rtol, {"p": p, "q": q})


def geometric_bound_table_check(s: Spectrum, c: CommutatorConstants | None, n_max: int, p: float,
                                *, rtol: float | None = None) -> SweepTable:
    if not 0 < p <= 3:
        raise ParameterRangeError(f"need 0 < p <= 3, got p={p}")
    c = resolve_constants(s, c, "geometric-mean")
    lam = s.prefix(n_max)
    s.require_positive(n_max, "geometric-mean")
    rtol = default_rtol() if rtol is None else rtol
    return SweepTable("geometric-mean", moment_root_table(lam, c, p), geometric_bound_table(lam, c),
                      rtol, {"p": p})


# -- Yang-type cap ---------------------------------------------------------------


def yang_type_cap(s: Spectrum, c: CommutatorConstants | None, n: int) -> float:
    """Largest root of P(z) = sum_{j<=n} [(z - lam_j)^2 - b_j (z - lam_j)], b_j = (beta lam_j + alpha)/gamma.

    With m = mean(lam), v = mean((lam - m)^2) and B = mean(b), P/n = w^2 - B w + (1 + beta/gamma) v
    for w = z - m, which avoids forming the large coefficients of the expanded quadratic.
    """
    c = resolve_constants(s, c, "yang-cap")
    lam = s.prefix(n)
    m = math.fsum(lam) / n
    v = math.fsum((lam - m) ** 2) / n
    B = (c.beta * m + c.alpha) / c.gamma
    disc = 0.25 * B * B - (1.0 + c.beta / c.gamma) * v
    if disc < 0:
        raise IdentityMismatch(
            f"negative discriminant {disc!r} in the cap polynomial at n={n}; "
            "the spectrum is inconsistent with the constants"
        )
    return m + 0.5 * B + math.sqrt(disc)


def yang_cap_table(s: Spectrum, c: CommutatorConstants | None, n_max: int) -> np.ndarray:
    c = resolve_constants(s, c, "yang-cap")
    return np.array([yang_type_cap(s, c, n) for n in range(1, n_max + 1)])


def check_yang_cap(s: Spectrum, c: CommutatorConstants | None, n: int, *,
                   rtol: float | None = None) -> InequalityReport:
    """lam_{n+1} <= yang_type_cap(s, c, n)."""
    if n + 1 > len(s):
        raise ParameterRangeError(f"yang-cap check at n={n} needs lambda_{n + 1}")
    cap = yang_type_cap(s, c, n)
    return InequalityReport.build("yang-cap", float(s.values[n]), cap, rtol=rtol, n=n)


# -- F_n(z) for the moment family --------------------------------------------------


def moment_F(s: Spectrum, c: CommutatorConstants | None, n: int, p: float, q: float, z: float) -> float:
    """F_n(z) = n(p - q) z^p - n p S_n(q) z^{p-q} + n q S_n(p)."""
    c = resolve_constants(s, c, "F_n")
    Sp, Sq = moment_mean_S(s, c, n, p), moment_mean_S(s, c, n, q)
    return n * ((p - q) * z**p - p * Sq * z ** (p - q) + q * Sp)


def moment_F_minimum(s: Spectrum, c: CommutatorConstants | None, n: int, p: float, q: float
                     ) -> tuple[float, float]:
    """Closed-form minimizer z* = S_n(q)^{1/q} and F_n(z*) = n q (S_n(p) - z*^p)."""
    validate_pq(p, q)
    c = resolve_constants(s, c, "F_n")
    z_star = moment_root(s, c, n, q)
    return z_star, n * q * (moment_mean_S(s, c, n, p) - z_star**p)


def moment_F_minimum_golden(s: Spectrum, c: CommutatorConstants | None, n: int, p: float, q: float,
                            *, xtol: float = 1e-12) -> tuple[float, float]:
    """Numerical minimizer of F_n on (0, inf) by golden-section search (cross-check oracle)."""
    validate_pq(p, q)
    c = resolve_constants(s, c, "F_n")
    scale = float(s.values[n - 1])

    def F(u):
        return moment_F(s, c, n, p, q, u * scale) / scale**p

    res = optimize.minimize_scalar(F, bracket=(0.25, 1.0, 16.0), method="golden",
                                   options={"xtol": xtol})
    z = float(res.x) * scale
    return z, moment_F(s, c, n, p, q, z)
