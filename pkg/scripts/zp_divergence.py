"""Blow-up of the weighted partition function Z_p(t) as t -> 0.

For p below the critical exponent 2gamma/beta the ratio Z_p(t/10)/Z_p(t)
tends to 10^{kappa - p}, where kappa is the growth exponent of the
counting function (d/2 for a box, d for the oscillator). Preasymptotic
ratios on short grids can sit well above that limit.
"""

import argparse
from dataclasses import dataclass

from specbounds import box_spectrum, oscillator_spectrum
from specbounds.inequalities import trusted_t_grid, z_decade_ratios


@dataclass
class DivergenceConfig:
    count: int = 200_000
    decades: float = 8.0
    points: int = 9


def run(cfg: DivergenceConfig) -> None:
    cases = [("box-1", box_spectrum([1.0], cfg.count), 0.5),
             ("box-2", box_spectrum([1.0, 1.0], min(cfg.count, 100_000)), 1.0),
             ("osc-1", oscillator_spectrum(1, cfg.count), 1.0)]
    for name, s, growth in cases:
        kappa = s.constants.weyl_exponent
        for p in (0.0, kappa / 2):
            grid = trusted_t_grid(s, None, p, points=cfg.points, decades=cfg.decades)
            ts, ratios = z_decade_ratios(s, None, p, grid)
            limit = 10 ** (growth - p)
            series = "  ".join(f"t={t:.1e}:{r:.3f}" for t, r in zip(ts, ratios))
            print(f"{name} p={p:<5g} limit {limit:.3f} | {series}")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--count", type=int, default=DivergenceConfig.count)
    parser.add_argument("--decades", type=float, default=DivergenceConfig.decades)
    parser.add_argument("--points", type=int, default=DivergenceConfig.points)
    args = parser.parse_args()
    run(DivergenceConfig(args.count, args.decades, args.points))


if __name__ == "__main__":
    main()
