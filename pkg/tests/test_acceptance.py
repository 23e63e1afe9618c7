"""Acceptance criteria, each at its stated tolerance.

Every test prints one ``criterion N ...: PASS|FAIL`` line (visible without -s)
and then asserts the same verdict.
"""

import math

import numpy as np
import pytest

from specbounds.commutators import (check_T1, quadratic_identity_parts, quadratic_identity_scale,
                                    t1_scale, trk_residuals, trk_scale)
from specbounds.functions import make_family
from specbounds.inequalities import (check_dirichlet_refined, check_geometric_bound,
                                     check_moment_order, check_pln_bounds, check_riesz_monotone,
                                     check_Z_divergence, check_Z_monotone,
                                     dirichlet_refined_table, geometric_bound_table_check,
                                     geometric_mean, moment_order_table, moment_root, pln_tables,
                                     ratio_bound_sweep, trusted_t_grid, yang_cap_table,
                                     yang_type_cap)
from specbounds.models import (box_spectrum, discrete_dirichlet_eigenvalues, discretize_dirichlet,
                               oscillator_spectrum, random_model)
from specbounds.weyl import (WeylContext, abel_residual, check_abel_identity, counting_asymptote,
                             exact_count)
from specbounds.core import Spectrum

PI2 = math.pi**2


@pytest.fixture
def announce(capsys):
    def _announce(number, title, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {number} {title}: {'PASS' if ok else 'FAIL'} ({detail})")
        assert ok, detail
    return _announce


@pytest.fixture(scope="module")
def spectra():
    return {
        "box d=1": box_spectrum([1.0], 600),
        "box d=2": box_spectrum([1.0, 1.0], 600),
        "box d=3": box_spectrum([1.0, 1.0, 1.0], 600),
        "oscillator d=1": oscillator_spectrum(1, 600),
        "oscillator d=2": oscillator_spectrum(2, 600),
    }


def admissible_pq_grid():
    """20 x 20 grid: q = i/21, p from q to 3 - q (the p + q <= 3 edge included exactly)."""
    pairs = []
    for i in range(1, 21):
        q = i / 21
        for k in range(1, 21):
            p = 3.0 - q if k == 20 else q + (3.0 - 2.0 * q) * k / 20
            pairs.append((p, q))
    return pairs


def test_criterion_01_trk_sum_rule(announce):
    rng = np.random.default_rng(1)
    worst, normalized = 0.0, []
    for _ in range(1000):
        m = random_model(int(rng.integers(2, 41)), rng)
        res = trk_residuals(m) / trk_scale(m)
        worst = max(worst, float(np.max(np.abs(res))))
        normalized.extend(res.tolist())
    mean = float(np.mean(normalized))
    ok = worst <= 1e-9 and abs(mean) <= 1e-11
    announce(1, "TRK sum rule", ok, f"max residual/scale {worst:.2e}, mean {mean:.2e}")


def test_criterion_02_quadratic_identity(announce):
    rng = np.random.default_rng(2)
    worst, worst_full = 0.0, 0.0
    for trial in range(500):
        m = random_model(int(rng.integers(2, 31)), rng)
        order = m.order
        if trial % 10 == 0:
            J = list(range(order))
        else:
            J = rng.choice(order, size=int(rng.integers(1, order + 1)), replace=False).tolist()
        z = float(rng.normal(scale=3.0))
        lhs, rhs = quadratic_identity_parts(m, J, z)
        rel = abs(lhs - rhs) / quadratic_identity_scale(m, z)
        worst = max(worst, rel)
        if len(J) == order:
            assert rhs == 0.0
            worst_full = max(worst_full, rel)
    ok = worst <= 1e-8
    announce(2, "quadratic trace identity", ok,
             f"max residual/scale {worst:.2e}, full-J max |LHS|/scale {worst_full:.2e}")


def test_criterion_03_master_inequality(announce):
    rng = np.random.default_rng(3)
    worst = math.inf
    worst_quad = 0.0
    counts = {"exp": 0, "power": 0, "quad": 0}
    for trial in range(1000):
        m = random_model(int(rng.integers(2, 31)), rng)
        lam = m.decomposition.eigenvalues
        lo, hi = float(lam[0]), float(lam[-1])
        spread = max(hi - lo, 1e-3)
        J = rng.choice(m.order, size=int(rng.integers(1, m.order + 1)), replace=False).tolist()
        kind = ("exp", "power", "quad")[trial % 3]
        if kind == "exp":
            f = make_family("exp", t=float(rng.uniform(0.1, 3.0)) / spread, domain=(lo, hi))
        elif kind == "power":
            z = hi + float(rng.uniform(0.0, 1.0)) * spread
            f = make_family("power", z=z, p=float(rng.uniform(2.0, 4.0)), domain=(lo, hi))
        else:
            a, b, c = rng.normal(size=3)
            f = make_family("quad", a=float(a), b=float(b), c=float(c), domain=(lo, hi))
        counts[kind] += 1
        rep = check_T1(m, J, f, rtol=1e-9)
        rel = rep.slack / t1_scale(m, f)
        worst = min(worst, rel)
        if kind == "quad":
            worst_quad = max(worst_quad, abs(rel))
    ok = worst >= -1e-9 and worst_quad <= 1e-8
    announce(3, "master inequality", ok,
             f"min slack/scale {worst:.2e}, quadratic max |slack|/scale {worst_quad:.2e}, trials {counts}")


def test_criterion_04_yang_cap(announce, spectra):
    failures, tightest = [], math.inf
    for name, s in spectra.items():
        caps = yang_cap_table(s, None, 200)
        nxt = s.values[1:201]
        tol = 1e-9 * np.maximum(np.abs(caps), 1.0)
        bad = np.nonzero(caps - nxt < -tol)[0]
        failures += [(name, int(i) + 1) for i in bad]
        tightest = min(tightest, float(np.min((caps - nxt) / caps)))
    interval = spectra["box d=1"]
    cap1 = yang_type_cap(interval, None, 1)
    rel = abs(cap1 - 5 * PI2) / (5 * PI2)
    ratio = float(interval.values[1]) / cap1
    ok = not failures and rel <= 1e-12 and abs(ratio - 0.8) <= 1e-12
    announce(4, "Yang-type cap", ok,
             f"{len(failures)} failures over n<=200 on 5 spectra, min relative margin {tightest:.3e}; "
             f"interval cap/5pi^2 - 1 = {rel:.1e}, lambda_2/cap = {ratio:.15f}")


def test_criterion_05_moment_means(announce, spectra):
    pairs = admissible_pq_grid()
    assert len(pairs) == 400
    failures, checked = [], 0
    for name, s in spectra.items():
        for p, q in pairs:
            table = moment_order_table(s, None, 500, p, q)
            checked += table.lhs.size
            if not table.passed:
                failures.append((name, p, q, table.worst()))
    geo_failures, geo_checked = [], 0
    for name, s in spectra.items():
        for p in np.linspace(3.0 / 60, 3.0, 60):
            table = geometric_bound_table_check(s, None, 500, float(p))
            geo_checked += table.lhs.size
            if not table.passed:
                geo_failures.append((name, p, table.worst()))
    worst_limit = 0.0
    for s in spectra.values():
        c = s.constants
        for n in (1, 10, 100, 500):
            limit = math.exp(c.beta / (2 * c.gamma)) * geometric_mean(s, n)
            worst_limit = max(worst_limit, abs(moment_root(s, None, n, 1e-4) / limit - 1))
    ok = not failures and not geo_failures and worst_limit <= 1e-3
    announce(5, "moment-mean suite", ok,
             f"moment-order {checked} checks, {len(failures)} failing; geometric mean {geo_checked} "
             f"checks, {len(geo_failures)} failing; q=1e-4 limit max rel error {worst_limit:.2e}")


def test_criterion_06_riesz_monotone(announce, spectra):
    results = []
    for name in ("box d=1", "box d=2"):
        s = spectra[name]
        lo, hi = float(s.values[0]), float(s.values[-1])
        grid = np.linspace(lo, hi, 201)[1:]
        for rho in (2.0, 2.5, 3.0):
            rep = check_riesz_monotone(s, None, rho, grid, rtol=1e-9)
            results.append((name, rho, rep))
    ok = all(r.passed for *_, r in results) and all(r.grid.size == 200 for *_, r in results)
    worst = max(r.max_violation / r.tolerance * 1e-9 for *_, r in results)
    announce(6, "Riesz-mean monotonicity", ok,
             f"{len(results)} grids of 200 points, max adjacent decrease/scale {worst:.2e}")


def test_criterion_07_partition_function(announce):
    cases = {
        "box d=1": box_spectrum([1.0], 2000),
        "box d=2": box_spectrum([1.0, 1.0], 2000),
        "oscillator d=1": oscillator_spectrum(1, 2000),
    }
    mono, div = [], []
    for name, s in cases.items():
        d = s.dimension
        kappa = s.constants.weyl_exponent
        for p in (0.0, d / 4, d / 2):
            grid = trusted_t_grid(s, None, p)
            assert grid.size == 200
            mono.append((name, p, check_Z_monotone(s, None, p, grid, rtol=1e-9)))
            if p < kappa:
                div.append((name, p, check_Z_divergence(s, None, p, grid, factor=2.0)))
    ok = all(r.passed for *_, r in mono) and all(r.passed for *_, r in div)
    ratios = ", ".join(f"{n} p={p:g}: {r.rhs:.3f}" for n, p, r in div)
    announce(7, "weighted partition function", ok,
             f"{sum(r.passed for *_, r in mono)}/{len(mono)} monotone; min decade ratios {ratios}")


def test_criterion_08_dirichlet_refinements(announce):
    cases = {"box d=1": box_spectrum([1.0], 400), "box d=2": box_spectrum([1.0, 1.0], 400)}
    pairs = admissible_pq_grid()[::7]
    p_grid = np.linspace(0.05, 3.0, 40)
    failures, checked, mismatches, zero_gaps = [], 0, 0, 0
    for name, s in cases.items():
        for p in p_grid:
            t1, t2 = pln_tables(s, None, 200, float(p))
            checked += 2 * t1.lhs.size
            for t in (t1, t2):
                if not t.passed:
                    failures.append((name, t.law, p, t.worst()))
            geo = geometric_bound_table_check(s, None, 200, float(p))
            zero = s.values[1:201] == s.values[:200]
            zero_gaps += int(np.sum(zero))
            mismatches += int(np.sum(t1.passed_mask[zero] != geo.passed_mask[zero]))
            mismatches += int(np.sum(t2.passed_mask[zero] != geo.passed_mask[zero]))
            for n in np.nonzero(zero)[0][:3] + 1:
                r1, r2 = check_pln_bounds(s, None, int(n), float(p))
                g = check_geometric_bound(s, None, int(n), float(p))
                mismatches += int(r1.passed != g.passed) + int(r2.passed != g.passed)
        for p, q in pairs:
            table = dirichlet_refined_table(s, 200, p, q)
            checked += table.lhs.size
            if not table.passed:
                failures.append((name, "dirichlet-refined", p, q, table.worst()))
            plain = moment_order_table(s, None, 200, p, q)
            zero = s.values[1:201] == s.values[:200]
            same = (np.array_equal(table.lhs[zero], plain.lhs[zero])
                    and np.array_equal(table.rhs[zero], plain.rhs[zero])
                    and np.array_equal(table.passed_mask[zero], plain.passed_mask[zero]))
            mismatches += int(not same)
            for n in np.nonzero(zero)[0][:3] + 1:
                a = check_dirichlet_refined(s, int(n), p, q)
                b = check_moment_order(s, None, int(n), p, q)
                mismatches += int(not (a.lhs == b.lhs and a.rhs == b.rhs and a.passed == b.passed))
    ok = not failures and mismatches == 0 and zero_gaps > 0
    announce(8, "gap-refined Dirichlet laws", ok,
             f"{checked} checks, {len(failures)} failing; {zero_gaps} zero-gap cases, "
             f"{mismatches} verdict mismatches against the unrefined laws")


def test_criterion_09_ratio_bound(announce):
    total, worst_rel, failures = 0, math.inf, 0
    for sides in ([1.0], [1.0, 1.0], [1.0, 1.0, 1.0]):
        s = box_spectrum(sides, 300)
        count, worst = ratio_bound_sweep(s, None, 300, rtol=1e-9)
        total += count
        failures += int(not worst.passed)
        worst_rel = min(worst_rel, worst.slack / worst.rhs)
    ok = failures == 0 and total > 0
    announce(9, "ratio bound", ok, f"{total} (n, k) pairs, tightest relative slack {worst_rel:.3e}")


def test_criterion_10_weyl_and_abel(announce):
    rng = np.random.default_rng(10)
    abel_ok = True
    for sides in ([1.0], [1.0, 1.0]):
        s = box_spectrum(sides, 3000)
        for cut_frac in (0.3, 0.7, 1.0):
            cut = float(s.values[-1]) * cut_frac
            abel_ok &= check_abel_identity(s, make_family("exp", t=3.0 / cut), cut, rtol=1e-9).passed
    for _ in range(50):
        vals = np.sort(rng.uniform(-5, 50, int(rng.integers(1, 60))))
        a, b, c = rng.normal(size=3)
        f = make_family("quad", a=float(a), b=float(b), c=float(c))
        abel_ok &= check_abel_identity(Spectrum(vals, label="fd-random"), f,
                                       float(vals[-1]) + 1.0, rtol=1e-9).passed
    ratios = {}
    for sides, tol in (([1.0], 1e-3), ([1.0, 1.0], 5e-2)):
        s = box_spectrum(sides, 12000)
        ctx = WeylContext.from_spectrum(s)
        lam = float(s.values[10000])
        ratios[len(sides)] = (counting_asymptote(lam, ctx) / exact_count(s, lam), tol,
                              exact_count(s, lam))
    count_ok = all(abs(r - 1) <= tol and n >= 10_000 for r, tol, n in ratios.values())
    trend = {}
    for sides in ([1.0], [1.0, 1.0]):
        s = box_spectrum(sides, 60000)
        ctx = WeylContext.from_spectrum(s)
        vals = [abs(abel_residual(s, make_family("exp", t=1.0 / cut), cut, ctx))
                for cut in (1e4, 4e4, 16e4)]
        trend[len(sides)] = [vals[0] / vals[1], vals[1] / vals[2]]
    trend_ok = all(min(v) >= 1.4 for v in trend.values())
    ok = abel_ok and count_ok and trend_ok
    announce(10, "Weyl and Abel", ok,
             f"Abel identity {'ok' if abel_ok else 'FAILED'}; counting ratios "
             + ", ".join(f"d={d}: {r:.5f} at N={n}" for d, (r, _, n) in ratios.items())
             + "; residual decrease factors "
             + ", ".join(f"d={d}: {v[0]:.2f}, {v[1]:.2f}" for d, v in trend.items()))


def test_criterion_11_discretization(announce):
    worst = 0.0
    for N in (50, 199, 400):
        lam = discretize_dirichlet(N, 1.0).spectrum().values
        exact = discrete_dirichlet_eigenvalues(N, 1.0)
        worst = max(worst, float(np.max(np.abs(lam - exact) / exact)))
    errors = []
    for n_cells in (50, 100, 200):
        lam = discretize_dirichlet(n_cells - 1, 1.0).spectrum().values[:5]
        errors.append(np.abs(lam - PI2 * np.arange(1, 6) ** 2))
    ratios = np.concatenate([errors[0] / errors[1], errors[1] / errors[2]])
    ok = worst <= 1e-10 and bool(np.all(np.abs(ratios - 4.0) <= 0.4))
    announce(11, "discretization fidelity", ok,
             f"max rel deviation from discrete closed form {worst:.2e}; "
             f"Richardson ratios {ratios.min():.4f}..{ratios.max():.4f}")
