"""Command-line front end.

Exit status: 0 when every verdict passes, 2 when any law fails (failing
reports are printed), 1 on usage or configuration errors.
"""

from __future__ import annotations

import argparse
import itertools
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import commutators as comm
from . import inequalities as ineq
from . import weyl
from .core import CommutatorConstants, Spectrum, load_spectrum, save_spectrum
from .errors import IdentityMismatch, SpecBoundsError
from .functions import parse_family
from .models import (MESH_C, MatrixModel, box_spectrum, discretize_dirichlet,
                     discretize_schrodinger_1d, oscillator_spectrum, random_model)
from .reports import (InequalityReport, MonotonicityReport, default_rtol, reports_from_json,
                      reports_to_csv, reports_to_json)

LAWS = ("moment-order", "geometric-mean", "yang-cap", "riesz-monotone", "zp-monotone",
        "ratio-bound", "pln-1", "pln-2", "dirichlet-refined", "c2", "t1", "trk", "c1",
        "abel", "weyl")
MATRIX_LAWS = ("t1", "trk", "c1")
MODELS = ("box", "oscillator", "fd-dirichlet", "fd-schrodinger")

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- parsing helpers ---------------------------------------------------------------


def parse_grid(text: str, *, integer: bool = False) -> list:
    """``"1..100"`` (step 1), ``"0.2..1.0:0.2"``, ``"1,2,5"`` or a single value."""
    cast = int if integer else float
    out: list = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo_s, _, rest = part.partition("..")
            hi_s, _, step_s = rest.partition(":")
            lo, hi = float(lo_s), float(hi_s)
            step = float(step_s) if step_s else 1.0
            if step <= 0 or hi < lo:
                raise UsageError(f"bad grid range {part!r}")
            count = int(math.floor((hi - lo) / step + 1e-9)) + 1
            values = [lo + i * step for i in range(count)]
            if integer and any(v != int(v) for v in values):
                raise UsageError(f"grid {part!r} must be integral")
            out.extend(cast(round(v, 12)) for v in values)
        elif part:
            value = float(part)
            if integer and value != int(value):
                raise UsageError(f"{part!r} must be an integer")
            out.append(cast(value))
    if not out:
        raise UsageError(f"empty grid {text!r}")
    return out


def auto_q(p: float) -> float:
    """Midpoint of the admissible q range (0, min(1, p, 3 - p)]."""
    return 0.5 * min(1.0, p, 3.0 - p)


def _constants(text: str | None) -> CommutatorConstants | None:
    if text is None:
        return None
    try:
        alpha, beta, gamma = (float(x) for x in text.split(","))
    except ValueError as exc:
        raise UsageError(f"--constants expects alpha,beta,gamma, got {text!r}") from exc
    return CommutatorConstants(alpha, beta, gamma)


def _potential(expr: str):
    code = compile(expr, "<potential>", "eval")
    return lambda x: eval(code, {"__builtins__": {}, "np": np, "pi": math.pi}, {"x": x})


def build_source(args) -> tuple[Spectrum, MatrixModel | None]:
    """Spectrum (and matrix model when available) from a model descriptor or a file."""
    if (args.model is None) == (args.spectrum is None):
        raise UsageError("give exactly one of --model or --spectrum")
    if args.spectrum is not None:
        s = load_spectrum(args.spectrum)
        c = _constants(args.constants)
        return (s.with_constants(c) if c is not None else s), None
    count = args.count
    if args.model == "box":
        s = box_spectrum(parse_grid(args.sides), count)
        model = None
    elif args.model == "oscillator":
        s = oscillator_spectrum(args.dimension, count)
        model = None
    elif args.model == "fd-dirichlet":
        N = parse_grid(args.N, integer=True)
        L = parse_grid(args.L) if args.L else [1.0] * len(N)
        model = discretize_dirichlet(N if len(N) > 1 else N[0], L if len(L) > 1 else L[0])
        s = model.spectrum()
    else:
        N = parse_grid(args.N, integer=True)[0]
        model = discretize_schrodinger_1d(_potential(args.potential), N, tuple(args.interval),
                                          constants=_constants(args.constants))
        s = model.spectrum()
    c = _constants(args.constants)
    if c is not None:
        s = s.with_constants(c)
        if model is not None:
            model.constants = c
    return s, model


def mesh_allowance(s: Spectrum, n: int) -> float:
    """Relative allowance C (n h / L)^2 for discretized spectra, L = V^{1/d}."""
    if s.mesh is None or s.volume is None or not s.dimension:
        return 0.0
    return MESH_C * (n * s.mesh / s.volume ** (1.0 / s.dimension)) ** 2


# -- law dispatch ------------------------------------------------------------------


def _need(value, flag: str):
    if value is None:
        raise UsageError(f"this law needs {flag}")
    return value


def _family(args, domain=None):
    return parse_family(_need(args.family, "--family"), domain=domain)


def _index_set(text: str | None, order: int) -> list[int]:
    if text is None:
        return list(range(max(1, order // 4)))
    return parse_grid(text, integer=True)


def _z_grid(args, s: Spectrum) -> np.ndarray:
    if args.z_grid:
        return np.array(parse_grid(args.z_grid))
    hi = float(s.values[-1]) if not s.is_complete else 4.0 * float(s.values[-1])
    lo = float(s.values[0])
    return np.linspace(lo + (hi - lo) / 200, hi, 200)


def _t_grid(args, s: Spectrum, p: float) -> np.ndarray:
    """Explicit grid, or 200 log-spaced points from 10/lam_1 down four decades,
    clipped to the range where the truncated tail is certified."""
    if args.t_grid:
        return np.array(parse_grid(args.t_grid))
    if s.constants is None:
        return ineq.log_t_grid(s)
    return ineq.trusted_t_grid(s, None, p)


def evaluate(law: str, s: Spectrum, model: MatrixModel | None, point: dict, args) -> list:
    """Reports for one law at one parameter point."""
    n, p, q = point.get("n"), point.get("p"), point.get("q")
    rtol = default_rtol() if args.rtol is None else args.rtol
    if s.mesh is not None:
        rtol += mesh_allowance(s, (n or len(s)) + 1)
    c = None  # constants travel on the spectrum (see build_source)
    if law == "moment-order":
        return [ineq.check_moment_order(s, c, _need(n, "--n"), _need(p, "--p"), _need(q, "--q"), rtol=rtol)]
    if law == "geometric-mean":
        return [ineq.check_geometric_bound(s, c, _need(n, "--n"), _need(p, "--p"), rtol=rtol)]
    if law == "yang-cap":
        return [ineq.check_yang_cap(s, c, _need(n, "--n"), rtol=rtol)]
    if law == "riesz-monotone":
        return [ineq.check_riesz_monotone(s, c, args.rho, _z_grid(args, s),
                                          allow_subquadratic=args.allow_subquadratic, rtol=rtol)]
    if law == "zp-monotone":
        return [ineq.check_Z_monotone(s, c, _need(p, "--p"), _t_grid(args, s, _need(p, "--p")), rtol=rtol)]
    if law == "ratio-bound":
        return [ineq.check_ratio_bound(s, c, _need(n, "--n"), _need(point.get("k"), "--k"), rtol=rtol)]
    if law in ("pln-1", "pln-2"):
        r1, r2 = ineq.check_pln_bounds(s, c, _need(n, "--n"), _need(p, "--p"), rtol=rtol)
        return [r1 if law == "pln-1" else r2]
    if law == "dirichlet-refined":
        return [ineq.check_dirichlet_refined(s, _need(n, "--n"), _need(p, "--p"), _need(q, "--q"),
                                             rtol=rtol)]
    if law == "c2":
        mode = args.mode
        return [ineq.check_C2_general(s, c, n or len(s), _family(args), mode=mode, rtol=rtol)]
    if law == "abel":
        cut = point.get("z") or float(s.values[-1])
        return [weyl.check_abel_identity(s, _family(args), cut)]
    if law == "weyl":
        ctx = weyl.WeylContext.from_spectrum(s)
        cut = point.get("z") or float(s.values[-1])
        exact = weyl.exact_count(s, cut)
        ratio = weyl.counting_asymptote(cut, ctx) / exact
        return [InequalityReport.build("weyl", abs(ratio - 1.0), args.weyl_tol, rtol=0.0,
                                       z=cut, n=exact)]
    if model is None:
        raise UsageError(f"law {law} needs a matrix model (fd-dirichlet or fd-schrodinger)")
    if law == "trk":
        scale = comm.trk_scale(model)
        rt = default_rtol() if args.rtol is None else args.rtol
        js = [n - 1] if n else range(model.order)
        return [InequalityReport.build("trk", abs(comm.trk_residual(model, j)), 0.0,
                                       tolerance=rt * scale, n=j + 1) for j in js]
    J = _index_set(args.J, model.order)
    if law == "c1":
        z = point.get("z") or 0.0
        rt = 1e-8 if args.rtol is None else args.rtol
        res = comm.quadratic_identity_residual(model, J, z)
        return [InequalityReport.build("c1", abs(res), 0.0,
                                       tolerance=rt * comm.quadratic_identity_scale(model, z), z=z)]
    lam = model.decomposition.eigenvalues
    return [comm.check_T1(model, J, _family(args, domain=(float(lam[0]), float(lam[-1]))),
                          rtol=default_rtol() if args.rtol is None else args.rtol)]


def _points(args, sweep: bool) -> list[dict]:
    axes = {}
    for key, integer in (("n", True), ("p", False), ("k", True), ("z", False)):
        raw = getattr(args, key)
        if raw is not None:
            values = parse_grid(raw, integer=integer)
            if not sweep and len(values) > 1:
                raise UsageError(f"verify takes single values; use sweep for --{key} grids")
            axes[key] = values
    points = [dict(zip(axes, combo)) for combo in itertools.product(*axes.values())] or [{}]
    if args.q is not None:
        for pt in points:
            if args.q == "auto":
                pt["q"] = auto_q(_need(pt.get("p"), "--p"))
            else:
                qs = parse_grid(args.q)
                if len(qs) > 1:
                    raise UsageError("--q takes a single value or 'auto'")
                pt["q"] = qs[0]
    return points


# -- output ------------------------------------------------------------------------


def write_plot(path: str, reports) -> None:
    lines = []
    for r in reports:
        if isinstance(r, MonotonicityReport):
            lines.append(f"# {r.law} {r.direction}")
            lines.extend(f"{x!r}\t{y!r}" for x, y in r.series())
            lines.append("")
    Path(path).write_text("\n".join(lines), encoding="utf-8")


def _emit(reports, args, *, verbose: bool) -> int:
    if getattr(args, "json", None):
        _write(args.json, reports_to_json(reports) + "\n")
    if getattr(args, "csv", None):
        _write(args.csv, reports_to_csv(reports))
    if getattr(args, "plot", None):
        write_plot(args.plot, reports)
    failed = [r for r in reports if not r.passed]
    for r in (reports if verbose else failed):
        print(r)
    print(f"{len(reports) - len(failed)}/{len(reports)} passed")
    return EXIT_FAIL if failed else EXIT_OK


def _write(target: str, text: str) -> None:
    if target == "-":
        sys.stdout.write(text)
    else:
        Path(target).write_text(text, encoding="utf-8")


# -- commands ----------------------------------------------------------------------


def cmd_gen(args) -> int:
    s, _ = build_source(args)
    if not args.out:
        raise UsageError("gen needs --out")
    save_spectrum(s, args.out)
    print(f"wrote {len(s)} eigenvalues ({s.label}) to {args.out}")
    return EXIT_OK


def _run_points(args, sweep: bool) -> int:
    if args.law not in LAWS:
        raise UsageError(f"unknown law {args.law!r}; choose from {', '.join(LAWS)}")
    s, model = build_source(args)
    points = _points(args, sweep)
    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        chunks = list(pool.map(lambda pt: evaluate(args.law, s, model, pt, args), points))
    reports = [r for chunk in chunks for r in chunk]
    return _emit(reports, args, verbose=not sweep)


def cmd_verify(args) -> int:
    return _run_points(args, sweep=False)


def cmd_sweep(args) -> int:
    return _run_points(args, sweep=True)


def cmd_identities(args) -> int:
    if args.law not in MATRIX_LAWS:
        raise UsageError(f"identities runs {', '.join(MATRIX_LAWS)}; got {args.law!r}")
    rng = np.random.default_rng(args.seed)
    family = args.family or "exp:t=1.0"
    reports = []
    for trial in range(args.trials):
        model = random_model(int(rng.integers(2, args.order + 1)), rng)
        order = model.order
        J = sorted(rng.choice(order, size=int(rng.integers(1, order + 1)), replace=False).tolist())
        if args.law == "trk":
            scale = comm.trk_scale(model)
            worst = max(abs(comm.trk_residual(model, j)) for j in range(order))
            reports.append(InequalityReport.build("trk", worst, 0.0, tolerance=1e-9 * scale,
                                                  n=order, trial=trial))
        elif args.law == "c1":
            z = float(rng.normal(scale=3.0))
            res = comm.quadratic_identity_residual(model, J, z)
            reports.append(InequalityReport.build(
                "c1", abs(res), 0.0, tolerance=1e-8 * comm.quadratic_identity_scale(model, z),
                n=order, z=z, trial=trial))
        else:
            lam = model.decomposition.eigenvalues
            f = parse_family(family, domain=(float(lam[0]), float(lam[-1])))
            r = comm.check_T1(model, J, f)
            reports.append(InequalityReport(r.law, r.lhs, r.rhs, r.tolerance,
                                            dict(r.context, trial=trial)))
    return _emit(reports, args, verbose=False)


def cmd_report(args) -> int:
    reports = reports_from_json(Path(args.input).read_text(encoding="utf-8"))
    return _emit(reports, args, verbose=args.verbose)


def _add_source(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("input (exactly one of --model / --spectrum)")
    g.add_argument("--model", choices=MODELS)
    g.add_argument("--spectrum", help="Spectrum JSON file")
    g.add_argument("--sides", default="1", help="box side lengths, e.g. 1 or 1,2")
    g.add_argument("--count", type=int, default=200, help="number of eigenvalues (box, oscillator)")
    g.add_argument("--dimension", type=int, default=1, help="oscillator dimension")
    g.add_argument("--N", default="99", help="interior nodes per axis (fd models), e.g. 99 or 20,20")
    g.add_argument("--L", default=None, help="lengths per axis (fd-dirichlet)")
    g.add_argument("--potential", default="0*x", help="V(x) as a numpy expression in x")
    g.add_argument("--interval", type=float, nargs=2, default=(0.0, 1.0))
    g.add_argument("--constants", help="alpha,beta,gamma (required for fd-schrodinger laws)")


def _add_outputs(p: argparse.ArgumentParser) -> None:
    p.add_argument("--json", help="write reports as JSON ('-' for stdout)")
    p.add_argument("--csv", help="write reports as CSV ('-' for stdout)")
    p.add_argument("--plot", help="write monotonicity series as tab-separated x/y data")


def _add_law_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--law", required=True, help="law identifier: " + ", ".join(LAWS))
    p.add_argument("--n")
    p.add_argument("--p")
    p.add_argument("--q", help="value or 'auto'")
    p.add_argument("--k")
    p.add_argument("--z", help="z parameter or lambda cut")
    p.add_argument("--rho", type=float, default=2.0)
    p.add_argument("--allow-subquadratic", action="store_true",
                   help="admit Riesz exponents 1 <= rho < 2 (outside the verified range)")
    p.add_argument("--z-grid")
    p.add_argument("--t-grid")
    p.add_argument("--family", help="function family, e.g. exp:t=1.0")
    p.add_argument("--mode", choices=("partial", "full"), default="partial")
    p.add_argument("--J", help="0-based index set for matrix laws, e.g. 0..4")
    p.add_argument("--weyl-tol", type=float, default=0.05)
    p.add_argument("--rtol", type=float, default=None,
                   help="relative tolerance (default from SPECBOUNDS_RTOL or 1e-9)")
    p.add_argument("--jobs", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="specbounds", description="Check universal eigenvalue inequalities.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="generate a model spectrum as JSON")
    _add_source(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    for name, func, help_text in (("verify", cmd_verify, "run one law at one parameter point"),
                                  ("sweep", cmd_sweep, "run one law over parameter grids")):
        p = sub.add_parser(name, help=help_text)
        _add_source(p)
        _add_law_params(p)
        _add_outputs(p)
        p.set_defaults(func=func)

    p = sub.add_parser("identities", help="randomized trials of the matrix trace identities")
    p.add_argument("--law", required=True, choices=MATRIX_LAWS)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--order", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--family", help="function family for t1 (default exp:t=1.0)")
    _add_outputs(p)
    p.set_defaults(func=cmd_identities)

    p = sub.add_parser("report", help="summarize or convert a saved report file")
    p.add_argument("--input", required=True)
    p.add_argument("--verbose", action="store_true")
    _add_outputs(p)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except IdentityMismatch as exc:
        print(f"identity failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (UsageError, SpecBoundsError, ValueError, OSError) as exc:
        print(f"specbounds: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
