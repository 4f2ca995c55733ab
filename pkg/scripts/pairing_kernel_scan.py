#!/usr/bin/env python3
"""Scan the pairing-kernel window parameters and tabulate the fitted decay.

The frequency-side pairing kernel inherits its off-diagonal decay from the
transform of the squared spatial window. A window with a finite smoothness
k has a power-law transform tail (order 2k + 3/2 for the squared radial
profile in the plane), so the log-log fit over dyadic bins approaches a
straight line only when the first bin already sits past the transform's
first oscillation; larger support radii push the oscillation scale down.
This scan is how the default window (k = 1, radius 1.45) was picked.
"""

import argparse
import itertools

import numpy as np

from pfio.experiments import omega_sharp_decay
from pfio.grid import ProductSpaceShape, make_grid
from pfio.operators import FioSpec
from pfio.phases import ProductPhase, half_wave_factor
from pfio.symbols import cone_localized_symbol


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=512)
    ap.add_argument("--r-max", type=float, default=32.0)
    ap.add_argument("--smoothness", type=int, nargs="*", default=[1, 2])
    ap.add_argument("--radius", type=float, nargs="*", default=[1.0, 1.25, 1.45])
    args = ap.parse_args()

    shape = ProductSpaceShape((2,))
    grid = make_grid(shape, args.samples, 1.5)
    axis = np.array([1.0, 0.0])
    r_values = np.geomspace(1.0, args.r_max, 200)

    print(f"{'k':>3} {'radius':>7} {'slope':>8} {'residual':>9}")
    for k, radius in itertools.product(args.smoothness, args.radius):
        sym = cone_localized_symbol(shape, 0.0, axis, 0.2, radius,
                                    x_smoothness=k)
        spec = FioSpec(ProductPhase((half_wave_factor(2),)), sym, grid)
        fit = omega_sharp_decay(spec, 48.0 * axis, axis, r_values)
        print(f"{k:>3} {radius:>7.2f} {fit.slope:>8.2f} {fit.residual:>9.3f}")


if __name__ == "__main__":
    main()
