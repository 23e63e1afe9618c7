"""Normalized summation-by-parts residual and counting ratio on growing cuts."""

import argparse
from dataclasses import dataclass

from specbounds import box_spectrum
from specbounds.functions import make_family
from specbounds.weyl import WeylContext, abel_residual, counting_asymptote, exact_count


@dataclass
class AbelConfig:
    count: int = 120_000
    first_cut: float = 1e3
    steps: int = 6


def run(cfg: AbelConfig) -> None:
    for sides in ([1.0], [1.0, 1.0]):
        s = box_spectrum(sides, cfg.count)
        ctx = WeylContext.from_spectrum(s)
        print(f"box d={len(sides)}")
        previous = None
        cut = cfg.first_cut
        for _ in range(cfg.steps):
            if cut > s.values[-1]:
                break
            r = abel_residual(s, make_family("exp", t=1.0 / cut), cut, ctx)
            ratio = counting_asymptote(cut, ctx) / exact_count(s, cut)
            factor = "" if previous is None else f"  decrease x{abs(previous / r):.2f}"
            print(f"  cut {cut:10.0f}  N {exact_count(s, cut):7d}  residual {r:+.5e}  "
                  f"Weyl/N {ratio:.5f}{factor}")
            previous = r
            cut *= 4


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--count", type=int, default=AbelConfig.count)
    parser.add_argument("--first-cut", type=float, default=AbelConfig.first_cut)
    parser.add_argument("--steps", type=int, default=AbelConfig.steps)
    args = parser.parse_args()
    run(AbelConfig(args.count, args.first_cut, args.steps))


if __name__ == "__main__":
    main()
