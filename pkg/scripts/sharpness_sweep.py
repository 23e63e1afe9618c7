"""How tight are the cap and ratio laws on model spectra?

Prints, for each spectrum, the relative margin of the Yang-type cap over
lambda_{n+1}, the ratio S_n(1) / (e^{beta/2gamma} G_n), and the tightest
ratio-bound pair up to n_max. Use ``--out`` to save the per-n series.
"""

import argparse
from dataclasses import dataclass

import numpy as np

from specbounds import box_spectrum, oscillator_spectrum
from specbounds.inequalities import (geometric_bound_table_check, ratio_bound_sweep,
                                     yang_cap_table)


@dataclass
class SweepConfig:
    n_max: int = 300
    count: int = 1000
    out: str | None = None


def model_spectra(count):
    return {
        "box-1": box_spectrum([1.0], count),
        "box-2": box_spectrum([1.0, 1.0], count),
        "box-3": box_spectrum([1.0, 1.0, 1.0], count),
        "osc-1": oscillator_spectrum(1, count),
        "osc-2": oscillator_spectrum(2, count),
    }


def run(cfg: SweepConfig) -> None:
    rows = []
    print(f"{'spectrum':8s} {'min cap margin':>15s} {'at n':>5s} {'max S/eG':>9s} {'ratio slack':>12s}")
    for name, s in model_spectra(cfg.count).items():
        caps = yang_cap_table(s, None, cfg.n_max)
        margin = caps / s.values[1:cfg.n_max + 1] - 1.0
        geo = geometric_bound_table_check(s, None, cfg.n_max, 1.0)
        _, worst = ratio_bound_sweep(s, None, cfg.n_max)
        k = int(np.argmin(margin))
        print(f"{name:8s} {margin[k]:15.4e} {k + 1:5d} {np.max(geo.lhs / geo.rhs):9.4f} "
              f"{worst.slack / worst.rhs:12.4e}")
        for n in range(1, cfg.n_max + 1):
            rows.append((name, n, margin[n - 1], geo.lhs[n - 1] / geo.rhs[n - 1]))
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write("spectrum\tn\tcap_margin\tS_over_eG\n")
            fh.writelines(f"{a}\t{b}\t{c!r}\t{d!r}\n" for a, b, c, d in rows)
        print(f"wrote {len(rows)} rows to {cfg.out}")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n-max", type=int, default=SweepConfig.n_max)
    parser.add_argument("--count", type=int, default=SweepConfig.count)
    parser.add_argument("--out")
    args = parser.parse_args()
    if args.count <= args.n_max:
        parser.error("--count must exceed --n-max")
    run(SweepConfig(args.n_max, args.count, args.out))


if __name__ == "__main__":
    main()
