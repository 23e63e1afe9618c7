"""Gain of the gap-refined laws over the plain geometric-mean bound.

For each n the gap ratio gamma_n is printed next to the pln-2 ratio and its
bound, and the Dirichlet-refined ordering is compared with the plain one.
"""

import argparse
from dataclasses import dataclass


from specbounds import box_spectrum
from specbounds.inequalities import dirichlet_refined_table, moment_order_table, pln_tables


@dataclass
class GapConfig:
    sides: tuple = (1.0, 1.0)
    n_max: int = 40
    p: float = 1.0
    q: float = 0.5


def run(cfg: GapConfig) -> None:
    s = box_spectrum(list(cfg.sides), cfg.n_max + 1)
    lam = s.values
    gaps = (lam[1:] - lam[:-1]) / lam[:-1]
    _, pln2 = pln_tables(s, None, cfg.n_max, cfg.p)
    refined = dirichlet_refined_table(s, cfg.n_max, cfg.p, cfg.q)
    plain = moment_order_table(s, None, cfg.n_max, cfg.p, cfg.q)
    print(f"{'n':>4s} {'gap':>8s} {'pln-2 lhs':>10s} {'pln-2 rhs':>10s} "
          f"{'refined rel slack':>18s} {'plain rel slack':>16s}")
    for n in range(1, cfg.n_max + 1):
        i = n - 1
        print(f"{n:4d} {gaps[i]:8.4f} {pln2.lhs[i]:10.5f} {pln2.rhs[i]:10.5f} "
              f"{refined.slack[i] / refined.rhs[i]:18.4e} {plain.slack[i] / plain.rhs[i]:16.4e}")
    print("all pass:", pln2.passed and refined.passed and plain.passed)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sides", type=float, nargs="+", default=list(GapConfig.sides))
    parser.add_argument("--n-max", type=int, default=GapConfig.n_max)
    parser.add_argument("--p", type=float, default=GapConfig.p)
    parser.add_argument("--q", type=float, default=GapConfig.q)
    args = parser.parse_args()
    run(GapConfig(tuple(args.sides), args.n_max, args.p, args.q))


if __name__ == "__main__":
    main()
