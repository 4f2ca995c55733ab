#!/usr/bin/env python3
"""Tabulate which dyadic levels a grid resolves and what that costs.

A shell at level j is trusted when its support [2^{j-1}, 2^{j+1}] sits an
octave below the Nyquist edge, so the anti-alias roll-off never touches
it. This prints, per sample count, the Nyquist frequency, the largest
trusted level, and the memory of one complex field; the heavy experiment
suites take one extra octave of headroom on top of the trusted level,
which is why the mass and sharpness sweeps over j <= 7 run at 3840.
"""

import argparse

from pfio.dyadic import t_max_for_grid
from pfio.grid import ProductSpaceShape, make_grid


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--half-width", type=float, default=1.5)
    ap.add_argument("--dim", type=int, default=2)
    ap.add_argument("--samples", type=int, nargs="*",
                    default=[128, 256, 512, 768, 1920, 3840])
    args = ap.parse_args()

    shape = ProductSpaceShape((args.dim,))
    print(f"{'samples':>8} {'nyquist':>8} {'max j':>6} {'field MB':>9}")
    for m in args.samples:
        grid = make_grid(shape, m, args.half_width)
        mb = 16 * m ** args.dim / 2 ** 20
        print(f"{m:>8} {min(grid.nyquist):>8.1f} {t_max_for_grid(grid):>6} "
              f"{mb:>9.1f}")


if __name__ == "__main__":
    main()
