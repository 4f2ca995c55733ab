#!/usr/bin/env python3
"""Norm-ratio slopes across the Lebesgue exponent range, measured vs predicted.

For the half-wave factor on the plane with a symbol of order m, focusing
probes on the dyadic shell 2^j make ||Ff||_p / ||f||_p grow like
2^{j (m + 1/2 - 1/p)}: flat exactly at the admissible endpoint, decaying
inside, growing outside. The scan fits the measured slope per p and prints
it next to the prediction; sign changes bracket the endpoint.
"""

import argparse
from fractions import Fraction

import numpy as np

from pfio.experiments import admissible_p_interval, sharpness_experiment
from pfio.grid import ProductSpaceShape, make_grid
from pfio.operators import FioSpec
from pfio.phases import ProductPhase, half_wave_factor
from pfio.symbols import separable_symbol


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=1920,
                    help="per-axis grid count; 1920 resolves j <= 6")
    ap.add_argument("--order", type=float, default=-0.25)
    ap.add_argument("--p", type=float, nargs="*",
                    default=[2.0, 8.0 / 3.0, 4.0, 6.0, 8.0])
    ap.add_argument("--j", type=int, nargs="*", default=[3, 4, 5, 6])
    args = ap.parse_args()

    shape = ProductSpaceShape((2,))
    grid = make_grid(shape, args.samples, 1.5)
    spec = FioSpec(ProductPhase((half_wave_factor(2),)),
                   separable_symbol(shape, args.order, 1.25), grid)
    fits = sharpness_experiment(spec, tuple(args.p), tuple(args.j))

    lo, hi = admissible_p_interval(2.0 * args.order, 3, 1)
    print(f"admissible interval at twice the order: [{lo}, {hi}]")
    print(f"{'p':>6} {'measured':>9} {'predicted':>10} {'residual':>9}")
    for p in args.p:
        predicted = args.order + 0.5 - 1.0 / p
        fit = fits[p]
        print(f"{p:>6.3g} {fit.slope:>+9.3f} {predicted:>+10.3f} "
              f"{fit.residual:>9.4f}")


if __name__ == "__main__":
    main()
