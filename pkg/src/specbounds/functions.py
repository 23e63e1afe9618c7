"""Candidate trace-controllable functions and sampled checks of their hypotheses.

On the hull of the chosen eigenvalues, with a shift point a beyond it:

* H1: f >= 0
* H2: f' <= 0
* H3: f' is concave
* H4: g_f(x) = 2 f(x) + f'(x)(a - x) is nondecreasing
* H4': f'(x) + f''(x)(a - x) >= 0 at the top of the hull (the boundary form of H4)
* H5: tr f(H) is finite (see :mod:`specbounds.tails`)

Verdicts are sampling-based: a pass means no violation was found on the grid
(plus random refinement where margins are smallest), not a certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import HypothesisViolation, ParameterRangeError
from .reports import InequalityReport

Fn = Callable[[np.ndarray], np.ndarray]

DERIVATIVE_CHECK_POINTS = 64
DERIVATIVE_RTOL = 1e-6
DEFAULT_SAMPLES = 512


def _window(domain: tuple[float, float]) -> tuple[float, float]:
    """Finite sampling window inside a possibly unbounded domain."""
    lo, hi = domain
    if math.isinf(lo) and math.isinf(hi):
        return -10.0, 10.0
    if math.isinf(lo):
        return hi - 10.0 * max(1.0, abs(hi)), hi
    if math.isinf(hi):
        return lo, lo + 10.0 * max(1.0, abs(lo))
    return lo, hi


def _five_point(fun: Fn, x: np.ndarray, h: np.ndarray) -> np.ndarray:
    return (8.0 * (fun(x + h) - fun(x - h)) - (fun(x + 2 * h) - fun(x - 2 * h))) / (12.0 * h)


@dataclass(frozen=True)
class FunctionSpec:
    """A C^1 function with analytic derivatives on a closed interval."""

    eval: Fn
    deriv1: Fn
    deriv2: Fn | None = None
    deriv3: Fn | None = None
    domain: tuple[float, float] = (-math.inf, math.inf)
    family_tag: str = "custom"
    params: dict = field(default_factory=dict)
    check: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        lo, hi = map(float, self.domain)
        if not lo <= hi:
            raise ValueError(f"empty domain {self.domain}")
        object.__setattr__(self, "domain", (lo, hi))
        if self.check:
            self.self_check()

    def __call__(self, x):
        return self.eval(np.asarray(x, dtype=float))

    def d1(self, x):
        return self.deriv1(np.asarray(x, dtype=float))

    def d2(self, x):
        if self.deriv2 is None:
            raise ValueError(f"{self.family_tag}: second derivative not available")
        return self.deriv2(np.asarray(x, dtype=float))

    def d3(self, x):
        if self.deriv3 is None:
            raise ValueError(f"{self.family_tag}: third derivative not available")
        return self.deriv3(np.asarray(x, dtype=float))

    def self_check(self, points: int = DERIVATIVE_CHECK_POINTS, seed: int = 0) -> None:
        """Compare each supplied derivative with a finite difference of the previous one."""
        lo, hi = _window(self.domain)
        if hi - lo <= 0:
            return
        rng = np.random.default_rng(seed)
        x = rng.uniform(lo + 0.05 * (hi - lo), hi - 0.05 * (hi - lo), points)
        h = 1e-3 * np.minimum(np.minimum(x - lo, hi - x), hi - lo) / 2.0
        chain = [("f'", self.eval, self.deriv1), ("f''", self.deriv1, self.deriv2),
                 ("f'''", self.deriv2, self.deriv3)]
        for name, base, deriv in chain:
            if deriv is None:
                break
            exact = deriv(x)
            approx = _five_point(base, x, h)
            # floor: a derivative that vanishes identically is judged against
            # the size of the function it differentiates
            floor = max(float(np.mean(np.abs(exact))),
                        float(np.mean(np.abs(base(x)))) / (hi - lo), 1e-300)
            scale = np.maximum(np.abs(exact), floor)
            err = np.abs(approx - exact) / scale
            if np.max(err) > DERIVATIVE_RTOL:
                k = int(np.argmax(err))
                raise ValueError(
                    f"{self.family_tag}: supplied {name} disagrees with finite differences "
                    f"at x={x[k]:.6g} (analytic {exact[k]:.6g}, numeric {approx[k]:.6g})"
                )

    def covers(self, lo: float, hi: float) -> bool:
        return self.domain[0] <= lo and hi <= self.domain[1]

    def require_covers(self, lo: float, hi: float) -> None:
        if not self.covers(lo, hi):
            raise ParameterRangeError(
                f"{self.family_tag} is defined on {self.domain}, not on [{lo:.6g}, {hi:.6g}]"
            )

    def shifted(self, eta: float) -> "FunctionSpec":
        """x -> f(x - eta), the companion of shifting the spectrum by eta."""
        sh = lambda g: None if g is None else (lambda x: g(x - eta))
        return FunctionSpec(sh(self.eval), sh(self.deriv1), sh(self.deriv2), sh(self.deriv3),
                            (self.domain[0] + eta, self.domain[1] + eta),
                            self.family_tag, {**self.params, "shift": eta}, check=False)

    def rescaled(self, t: float) -> "FunctionSpec":
        """x -> f(t x) for t > 0."""
        if not t > 0:
            raise ParameterRangeError("rescaling factor must be positive")
        sc = lambda g, k: None if g is None else (lambda x: t**k * g(t * x))
        return FunctionSpec(sc(self.eval, 0), sc(self.deriv1, 1), sc(self.deriv2, 2),
                            sc(self.deriv3, 3), (self.domain[0] / t, self.domain[1] / t),
                            self.family_tag, {**self.params, "scale": t}, check=False)

    def product(self, other: "FunctionSpec") -> "FunctionSpec":
        f, g = self, other
        d2 = d3 = None
        if f.deriv2 is not None and g.deriv2 is not None:
            d2 = lambda x: f.d2(x) * g(x) + 2 * f.d1(x) * g.d1(x) + f(x) * g.d2(x)
            if f.deriv3 is not None and g.deriv3 is not None:
                d3 = lambda x: (f.d3(x) * g(x) + 3 * f.d2(x) * g.d1(x)
                                + 3 * f.d1(x) * g.d2(x) + f(x) * g.d3(x))
        lo = max(f.domain[0], g.domain[0])
        hi = min(f.domain[1], g.domain[1])
        return FunctionSpec(lambda x: f(x) * g(x), lambda x: f.d1(x) * g(x) + f(x) * g.d1(x),
                            d2, d3, (lo, hi), f"{f.family_tag}*{g.family_tag}", check=False)


def _exp(t: float, domain) -> FunctionSpec:
    if not t > 0:
        raise ParameterRangeError("exp family needs t > 0")
    e = lambda x: np.exp(-t * x)
    return FunctionSpec(e, lambda x: -t * e(x), lambda x: t**2 * e(x), lambda x: -t**3 * e(x),
                        domain or (-math.inf, math.inf), "exp", {"t": t})


def _power(z: float, p: float, domain) -> FunctionSpec:
    if not p >= 2:
        raise ParameterRangeError("power family needs p >= 2 (f' concave)")

    def term(x, k, coeff):
        u = np.maximum(z - x, 0.0)
        if coeff == 0.0:
            return np.zeros_like(u)
        with np.errstate(divide="ignore", invalid="ignore"):
            return coeff * np.where(u > 0, u ** (p - k), 0.0 if p > k else (1.0 if p == k else np.inf))

    return FunctionSpec(
        lambda x: term(x, 0, 1.0),
        lambda x: term(x, 1, -p),
        lambda x: term(x, 2, p * (p - 1)),
        lambda x: term(x, 3, -p * (p - 1) * (p - 2)),
        domain or (0.0, z), "power", {"z": z, "p": p},
    )


def _moment(z: float, p: float, q: float, domain) -> FunctionSpec:
    if not z > 0:
        raise ParameterRangeError("moment family needs z > 0")
    if not (p > q > 0):
        raise ParameterRangeError("moment family needs p > q > 0")
    if not q <= min(1.0, p):
        raise ParameterRangeError("moment family needs q <= min(1, p)")
    if not p + q <= 3:
        raise ParameterRangeError("moment family needs p + q <= 3")
    w = z ** (p - q)
    return FunctionSpec(
        lambda x: q * x**p - p * x**q * w + (p - q) * z**p,
        lambda x: p * q * (x ** (p - 1) - x ** (q - 1) * w),
        lambda x: p * q * x ** (q - 2) * ((p - 1) * x ** (p - q) - (q - 1) * w),
        lambda x: p * q * x ** (q - 3) * ((p - 1) * (p - 2) * x ** (p - q) - (q - 1) * (q - 2) * w),
        domain or (0.0, z), "moment", {"z": z, "p": p, "q": q},
    )


def _log_moment(z: float, p: float, domain) -> FunctionSpec:
    if not z > 0:
        raise ParameterRangeError("log family needs z > 0")
    if not 0 < p <= 3:
        raise ParameterRangeError("log family needs 0 < p <= 3")
    zp = z**p
    return FunctionSpec(
        lambda x: x**p - p * zp * np.log(x) + p * zp * math.log(z) - zp,
        lambda x: p * x ** (p - 1) - p * zp / x,
        lambda x: p * (p - 1) * x ** (p - 2) + p * zp / x**2,
        lambda x: p * (p - 1) * (p - 2) * x ** (p - 3) - 2 * p * zp / x**3,
        domain or (0.0, z), "log", {"z": z, "p": p},
    )


def _quadratic(a: float, b: float, c: float, domain) -> FunctionSpec:
    return FunctionSpec(
        lambda x: a * x**2 + b * x + c,
        lambda x: 2 * a * x + b,
        lambda x: 2 * a + 0.0 * x,
        lambda x: 0.0 * x,
        domain or (-math.inf, math.inf), "quad", {"a": a, "b": b, "c": c},
    )


FAMILIES = {
    "exp": (_exp, ("t",)),
    "power": (_power, ("z", "p")),
    "moment": (_moment, ("z", "p", "q")),
    "log": (_log_moment, ("z", "p")),
    "quad": (_quadratic, ("a", "b", "c")),
}
_ALIASES = {"log_moment": "log", "quadratic": "quad"}


def make_family(kind: str, *, domain: tuple[float, float] | None = None, **params) -> FunctionSpec:
    """Build one of the standard families with analytic derivatives.

    ``exp`` (t): exp(-t x); ``power`` (z, p): (z - x)_+^p; ``moment`` (z, p, q):
    q x^p - p x^q z^(p-q) + (p-q) z^p; ``log`` (z, p): x^p - p z^p ln x + p z^p ln z - z^p;
    ``quad`` (a, b, c).
    """
    kind = _ALIASES.get(kind, kind)
    if kind not in FAMILIES:
        raise ParameterRangeError(f"unknown family {kind!r}; choose from {sorted(FAMILIES)}")
    builder, names = FAMILIES[kind]
    missing = [k for k in names if k not in params]
    extra = [k for k in params if k not in names]
    if missing or extra:
        raise ParameterRangeError(f"family {kind} takes {names}; missing {missing}, unexpected {extra}")
    return builder(*(float(params[k]) for k in names), domain)


def parse_family(descriptor: str, *, domain=None) -> FunctionSpec:
    """Parse ``"exp:t=1.0"`` style descriptors."""
    kind, _, rest = descriptor.partition(":")
    params = {}
    for item in filter(None, rest.split(",")):
        key, sep, value = item.partition("=")
        if not sep:
            raise ParameterRangeError(f"bad family parameter {item!r} in {descriptor!r}")
        params[key.strip()] = float(value)
    return make_family(kind.strip(), domain=domain, **params)


@dataclass(frozen=True)
class HypothesisVerdict:
    passed: bool
    witness: tuple | None = None
    value: float | None = None

    def __bool__(self) -> bool:
        return self.passed


@dataclass(frozen=True)
class HypothesisReport:
    h1: HypothesisVerdict
    h2: HypothesisVerdict
    h3: HypothesisVerdict
    h4: HypothesisVerdict
    h4_prime: HypothesisVerdict | None
    a_used: float
    hull: tuple[float, float]
    h3_direct: HypothesisVerdict | None = None

    def first_failure(self, items=("h1", "h2", "h3", "h4")) -> tuple[str, HypothesisVerdict] | None:
        for name in items:
            v = getattr(self, name)
            if v is not None and not v.passed:
                return name.upper().replace("_PRIME", "'"), v
        return None

    def require(self, items=("h1", "h2", "h3", "h4")) -> None:
        failure = self.first_failure(items)
        if failure is not None:
            name, v = failure
            raise HypothesisViolation(name, v.witness, f"value {v.value:.6g}")


def _refine_points(grid: np.ndarray, margin: np.ndarray, rng: np.random.Generator,
                   cells: int = 4, per_cell: int = 16) -> np.ndarray:
    """Random extra points in the grid cells where the margin is smallest."""
    if grid.size < 2:
        return grid
    idx = np.argsort(margin)[:cells]
    extra = []
    for i in idx:
        j = min(i, grid.size - 2)
        extra.append(rng.uniform(grid[j], grid[j + 1], per_cell))
    for i in idx:
        j = max(i - 1, 0)
        extra.append(rng.uniform(grid[j], grid[j + 1], per_cell))
    return np.concatenate(extra)


def _sign_check(fun: Fn, grid: np.ndarray, sign: float, tol: float,
                rng: np.random.Generator) -> HypothesisVerdict:
    margin = sign * fun(grid)
    pts = np.concatenate([grid, _refine_points(grid, margin, rng)])
    margin = sign * fun(pts)
    k = int(np.argmin(margin))
    if margin[k] < -tol:
        return HypothesisVerdict(False, (float(pts[k]),), float(sign * margin[k]))
    return HypothesisVerdict(True)


def _midpoint_concavity(fun: Fn, grid: np.ndarray, tol: float) -> HypothesisVerdict:
    n = grid.size
    worst, witness = 0.0, None
    for stride in (1, 8, 64):
        if 2 * stride >= n:
            break
        x, m, y = grid[: n - 2 * stride], grid[stride: n - stride], grid[2 * stride:]
        gap = fun(m) - 0.5 * (fun(x) + fun(y))
        k = int(np.argmin(gap))
        if gap[k] < worst:
            worst, witness = float(gap[k]), (float(x[k]), float(m[k]), float(y[k]))
    if worst < -tol:
        return HypothesisVerdict(False, witness, worst)
    return HypothesisVerdict(True)


def check_hypotheses(f: FunctionSpec, J_hull: tuple[float, float], a: float, *,
                     samples: int = DEFAULT_SAMPLES, seed: int = 0) -> HypothesisReport:
    """Sample H1-H4 (and H4' when f'' is known) on the interval ``J_hull``."""
    lo, hi = map(float, J_hull)
    if not lo <= hi:
        raise ValueError("J_hull must be an interval lo <= hi")
    if not a > hi:
        raise ParameterRangeError(f"shift point a={a} must exceed sup(J)={hi}")
    f.require_covers(lo, hi)
    rng = np.random.default_rng(seed)
    grid = np.linspace(lo, hi, samples) if hi > lo else np.array([lo])

    fv, dv = f(grid), f.d1(grid)
    f_scale = max(float(np.max(np.abs(fv))), 1e-300)
    d_scale = max(float(np.max(np.abs(dv))), 1e-300)
    h1 = _sign_check(f, grid, 1.0, 1e-12 * f_scale, rng)
    h2 = _sign_check(f.d1, grid, -1.0, 1e-12 * d_scale, rng)
    h3 = _midpoint_concavity(f.d1, grid, 1e-10 * d_scale)
    g = lambda x: 2.0 * f(x) + f.d1(x) * (a - x)
    gv = g(grid)
    # scale from the terms of g, since g itself may cancel to zero
    g_scale = max(float(np.max(np.abs(2.0 * fv) + np.abs(dv * (a - grid)))), 1e-300)
    steps = np.diff(gv)
    if steps.size and np.min(steps) < -1e-10 * g_scale:
        k = int(np.argmin(steps))
        h4 = HypothesisVerdict(False, (float(grid[k]), float(grid[k + 1])), float(steps[k]))
    else:
        h4 = HypothesisVerdict(True)

    h4p = h3d = None
    if f.deriv2 is not None:
        val = float(f.d1(hi) + f.d2(hi) * (a - hi))
        scale = max(abs(float(f.d1(hi))), abs(float(f.d2(hi) * (a - hi))), 1e-300)
        h4p = HypothesisVerdict(val >= -1e-12 * scale, None if val >= -1e-12 * scale else (hi,), val)
    if f.deriv3 is not None:
        d3 = f.d3(grid)
        d3_scale = max(float(np.max(np.abs(d3))), 1e-300)
        h3d = _sign_check(f.d3, grid, -1.0, 1e-12 * d3_scale, rng)
    return HypothesisReport(h1, h2, h3, h4, h4p, float(a), (lo, hi), h3d)


def check_derivative_concave(f: FunctionSpec, lo: float, hi: float, *,
                             samples: int = DEFAULT_SAMPLES) -> None:
    """H3 alone; raises naming the witness triple on failure."""
    f.require_covers(lo, hi)
    grid = np.linspace(lo, hi, samples) if hi > lo else np.array([lo])
    scale = max(float(np.max(np.abs(f.d1(grid)))), 1e-300)
    verdict = _midpoint_concavity(f.d1, grid, 1e-10 * scale)
    if not verdict.passed:
        raise HypothesisViolation("H3", verdict.witness, "f' is not concave")


def adaptive_simpson(fun: Callable[[float], float], a: float, b: float, *,
                     rtol: float = 1e-10, max_depth: int = 60) -> float:
    """Adaptive Simpson quadrature with Richardson correction."""
    if a == b:
        return 0.0

    def simpson(fa, fm, fb, lo, hi):
        return (hi - lo) / 6.0 * (fa + 4.0 * fm + fb)

    fa, fb, fm = fun(a), fun(b), fun(0.5 * (a + b))
    whole = simpson(fa, fm, fb, a, b)
    scale = abs(whole) + 1e-300
    total = 0.0
    stack = [(a, b, fa, fm, fb, whole, 0)]
    while stack:
        lo, hi, flo, fmid, fhi, est, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        fl, fr = fun(0.5 * (lo + mid)), fun(0.5 * (mid + hi))
        left = simpson(flo, fl, fmid, lo, mid)
        right = simpson(fmid, fr, fhi, mid, hi)
        delta = left + right - est
        if depth >= max_depth or abs(delta) <= 15.0 * rtol * scale * (hi - lo) / (b - a):
            total += left + right + delta / 15.0
        else:
            stack.append((lo, mid, flo, fl, fmid, left, depth + 1))
            stack.append((mid, hi, fmid, fr, fhi, right, depth + 1))
    return total


def concavity_transform(h: FunctionSpec, x: np.ndarray, *, rtol: float = 1e-10) -> np.ndarray:
    """x h(x) - 2 int_0^x h(s) ds evaluated on an increasing grid."""
    x = np.asarray(x, dtype=float)
    scalar = lambda s: float(h(s))
    pieces = [adaptive_simpson(scalar, lo, hi, rtol=rtol)
              for lo, hi in zip(np.concatenate([[0.0], x[:-1]]), x)]
    integral = np.cumsum(pieces)
    return x * h(x) - 2.0 * integral


def concavity_transform_check(h: FunctionSpec, x0: float, *, samples: int = 257,
                              rtol: float = 1e-9) -> InequalityReport:
    """Midpoint-concavity of x h(x) - 2 int_0^x h on (0, x0), given h concave there."""
    grid = np.linspace(0.0, x0, samples + 2)[1:-1]
    scale = max(float(np.max(np.abs(h(grid)))), 1e-300)
    pre = _midpoint_concavity(h, grid, 1e-10 * scale)
    if not pre.passed:
        raise HypothesisViolation("concavity of h", pre.witness, "h must be concave on (0, x0)")
    phi = concavity_transform(h, grid)
    phi_scale = max(float(np.max(np.abs(phi))), float(x0 * scale))
    worst = 0.0
    for stride in (1, 8, 32):
        if 2 * stride >= phi.size:
            break
        gap = 0.5 * (phi[: -2 * stride] + phi[2 * stride:]) - phi[stride:-stride]
        worst = max(worst, float(np.max(gap)))
    return InequalityReport.build("concavity-transform", worst, 0.0,
                                  tolerance=rtol * phi_scale, x0=x0)
