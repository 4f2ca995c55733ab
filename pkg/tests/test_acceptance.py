"""Acceptance gate: nine desk-scale verification windows.

Each test prints exactly one summary line, criterion number first, then
PASS or FAIL with the measured quantities and the wall time against the
window's runtime cap. Tolerances are pinned in the asserts; grids are the
smallest that resolve the dyadic range each window sweeps.
"""

import itertools
import math
import time
from fractions import Fraction

import numpy as np

from pfio.angular import build_net, partition_check
from pfio.config import RunConfig, build_grid, build_phase, build_symbol
from pfio.dyadic import (DyadicTuple, check_hypothesis_H, delta_t,
                         enumerate_tuples, low_frequency_remainder,
                         partition_index_sets,
                         partition_satisfies_support_conditions, smooth_step)
from pfio.experiments import (EnsembleConfig, admissible_p_interval,
                              atom_image_bound, cancellation_ablation,
                              fractional_mapping_ratios, make_atom,
                              mapping_exponents, max_norm_ratio,
                              multiplier_kernel_decay, omega_sharp_decay,
                              probe_ensemble, random_band_limited,
                              sharpness_experiment, verify_kernel_lipschitz,
                              verify_kernel_mass, verify_tail_bound)
from pfio.grid import (ProductSpaceShape, forward_transform, lp_norm, make_grid)
from pfio.operators import FioSpec, apply_adjoint, apply_fio
from pfio.phases import ProductPhase, half_wave_factor, linear_factor
from pfio.symbols import (cone_localized_symbol, constant_symbol,
                          separable_symbol)


def _window(num, name, cap_s, started, ok, detail):
    elapsed = time.monotonic() - started
    in_time = elapsed < cap_s
    verdict = "PASS" if (ok and in_time) else "FAIL"
    print(f"[criterion {num}] {name}: {verdict} ({detail}) "
          f"[{elapsed:.1f}s / cap {cap_s:.0f}s]")
    assert ok, f"criterion {num} ({name}): {detail}"
    assert in_time, f"criterion {num} ({name}): {elapsed:.1f}s over {cap_s:.0f}s cap"


def test_criterion_1_decomposition_identities():
    t0 = time.monotonic()
    rng = np.random.default_rng(7)

    radii = np.concatenate([2.0 ** rng.uniform(-10, 10, 200), [1.0, 2.0, 4.0]])
    total = np.zeros_like(radii)
    for k in range(-14, 15):
        total += smooth_step(radii * 2.0 ** -k) - smooth_step(radii * 2.0 ** (1 - k))
    tel = float(np.max(np.abs(total - 1.0)))

    shape = ProductSpaceShape((1, 2))
    t_cap = 6
    probes = rng.uniform(-2.0 ** (t_cap - 1), 2.0 ** (t_cap - 1),
                         size=(10_000, shape.total))
    acc = low_frequency_remainder(shape, 0.0, t_cap, probes)
    for tup in enumerate_tuples(shape.n, t_cap, 0.0):
        acc = acc + delta_t(tup, shape, probes)
    rec = float(np.max(np.abs(acc - 1.0)))

    sph = max(partition_check(build_net(dim, level))
              for dim in (2, 3) for level in (2, 4, 6))

    ok = tel <= 1e-12 and rec <= 1e-9 and sph <= 1e-10
    _window(1, "decomposition identities", 60, t0, ok,
            f"telescoping {tel:.2e} <= 1e-12, reconstruction {rec:.2e} <= 1e-9, "
            f"sphere partition {sph:.2e} <= 1e-10")


def test_criterion_2_index_split_oracle():
    t0 = time.monotonic()
    checked = violations = 0
    for n in (1, 2, 3, 4):
        for q in (2.0, 3.0, 4.0):
            rho = 1.0 / q
            for t in itertools.product(range(1, 17), repeat=n):
                tup = DyadicTuple(t, rho)
                if not check_hypothesis_H(tup):
                    continue
                checked += 1
                try:
                    part = partition_index_sets(tup)
                except ValueError:
                    violations += 1
                    continue
                if not partition_satisfies_support_conditions(t, q, part.I, part.J):
                    violations += 1
    ok = checked > 0 and violations == 0
    _window(2, "index-split oracle equivalence", 60, t0, ok,
            f"{checked} tuples (n <= 4, t_i <= 16, q in {{2,3,4}}), "
            f"{violations} violations")


def test_criterion_3_transform_adjoint_core():
    t0 = time.monotonic()
    cfg = RunConfig()
    shape = ProductSpaceShape(cfg.space.dims)
    grid = make_grid(shape, 64, 1.5)
    spec = FioSpec(build_phase(cfg), build_symbol(cfg), grid)
    ident = FioSpec(ProductPhase(tuple(linear_factor(d) for d in shape.dims)),
                    constant_symbol(shape), grid)
    rng = np.random.default_rng(9)
    fields = random_band_limited(grid, count=20, seed=int(rng.integers(1 << 30)))
    worst_pl = worst_pair = 0.0
    for f in fields:
        fhat = forward_transform(f)
        worst_pl = max(worst_pl, abs(lp_norm(fhat, 2) - lp_norm(f, 2))
                       / max(lp_norm(f, 2), 1e-30))
        g = random_band_limited(grid, count=1, seed=int(rng.integers(1 << 30)))[0]
        lhs = np.vdot(g.values, apply_fio(spec, f).values) * grid.cell_volume
        rhs = np.vdot(apply_adjoint(spec, g).values, f.values) * grid.cell_volume
        worst_pair = max(worst_pair, abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-30))
    ident_err = max(
        float(np.max(np.abs(apply_fio(ident, f).values - f.values)))
        / max(float(np.max(np.abs(f.values))), 1e-30)
        for f in fields[:5])
    ok = worst_pl <= 1e-8 and worst_pair <= 1e-8 and ident_err <= 1e-8
    _window(3, "transform and adjoint core", 60, t0, ok,
            f"plancherel {worst_pl:.2e}, pairing {worst_pair:.2e}, "
            f"identity phase {ident_err:.2e}, all <= 1e-8 on 20 fields")


def test_criterion_4_pairing_kernel_decay():
    t0 = time.monotonic()
    shape = ProductSpaceShape((2,))
    grid = make_grid(shape, 512, 1.5)
    axis = np.array([1.0, 0.0])
    # order-0 cone symbol; the spatial window rolls off at a finite
    # smoothness so its transform tail is a clean power law
    sym = cone_localized_symbol(shape, 0.0, axis, 0.2, 1.45, x_smoothness=1)
    spec = FioSpec(ProductPhase((half_wave_factor(2),)), sym, grid)
    fit = omega_sharp_decay(spec, 48.0 * axis, axis, np.geomspace(1.0, 32.0, 200))
    ok = fit.slope <= -2.0 and fit.residual < 0.5
    _window(4, "pairing kernel decay", 300, t0, ok,
            f"slope {fit.slope:.2f} <= -2, residual {fit.residual:.3f} < 0.5 "
            f"over separations [1, 32]")


def test_criterion_5_kernel_mass_lipschitz_tail():
    t0 = time.monotonic()
    shape = ProductSpaceShape((2,))
    # j = 7 shells top out at 256, so the frequency window must stay fully
    # open through 256: 3840 samples on a half-width 1.5 box
    grid = make_grid(shape, 3840, 1.5)
    spec = FioSpec(ProductPhase((half_wave_factor(2),)),
                   separable_symbol(shape, -0.5, 1.25), grid)
    j_values = [3, 4, 5, 6, 7]

    mass = verify_kernel_mass(spec, [DyadicTuple((j,)) for j in j_values])
    spread = mass.spread

    lip = verify_kernel_lipschitz(spec, j_values[:-1], fractions=(0.25, 0.5))
    ratios = [r.ratio for r in lip]
    lip_spread = max(ratios) / min(ratios)

    tail = verify_tail_bound(spec, j_values, 0.125)
    slope = tail.fit.slope if tail.fit is not None else math.inf

    ok = spread <= 3.0 and lip_spread <= 2.0 and slope <= -0.75
    _window(5, "kernel mass, lipschitz, tail", 900, t0, ok,
            f"mass spread {spread:.2f} <= 3, lipschitz spread {lip_spread:.2f} "
            f"<= 2, tail slope {slope:.2f} <= -0.75 over j in {{3..7}}")


def test_criterion_6_atom_image_bounds():
    t0 = time.monotonic()
    shape = ProductSpaceShape((2,))
    grid = make_grid(shape, 768, 1.5)
    spec = FioSpec(ProductPhase((half_wave_factor(2),)),
                   separable_symbol(shape, -0.5, 1.25), grid)
    deltas = (0.25, 0.125, 0.0625, 0.03125)
    center = np.zeros(2)

    spreads = {}
    for orientation in ("forward", "dual"):
        totals = [atom_image_bound(spec, make_atom(grid, center, d), orientation).total
                  for d in deltas]
        spreads[orientation] = max(totals) / min(totals)

    ablations = []
    for d in deltas:
        kept, stripped = cancellation_ablation(spec, make_atom(grid, center, d))
        ablations.append(stripped / kept if kept > 0 else math.inf)

    ok = all(s <= 4.0 for s in spreads.values()) and all(a > 1.0 for a in ablations)
    _window(6, "atom image bounds", 600, t0, ok,
            f"image spread forward {spreads['forward']:.2f}, dual "
            f"{spreads['dual']:.2f}, both <= 4; ablation ratios >= "
            f"{min(ablations):.2f} > 1 over four dyadic radii")


def test_criterion_7_admissible_interval_and_sharpness():
    t0 = time.monotonic()
    lo, hi = admissible_p_interval(-0.5, 3, 1)
    interval_ok = (lo, hi) == (Fraction(4, 3), Fraction(4, 1))

    shape = ProductSpaceShape((2,))
    grid = make_grid(shape, 3840, 1.5)
    spec = FioSpec(ProductPhase((half_wave_factor(2),)),
                   separable_symbol(shape, -0.25, 1.25), grid)
    fits = sharpness_experiment(spec, (4.0, 8.0), (3, 4, 5, 6, 7))
    boundary = fits[4.0].slope
    outside = fits[8.0].slope

    ok = interval_ok and boundary <= 0.1 and outside >= 0.1
    _window(7, "admissible interval and sharpness", 600, t0, ok,
            f"interval [{lo}, {hi}] == [4/3, 4]; ratio slope {boundary:+.3f} "
            f"<= 0.1 at p=4, {outside:+.3f} >= 0.1 at p=8")


def test_criterion_8_fractional_mapping():
    t0 = time.monotonic()
    shape = ProductSpaceShape((2,))
    grid = make_grid(shape, 256, 1.5)
    order = -0.4
    spec = FioSpec(ProductPhase((half_wave_factor(2),)),
                   separable_symbol(shape, order, 1.25), grid)
    p, q = mapping_exponents(order, 2)
    exponents_ok = (p, q) == (Fraction(10, 7), Fraction(10, 3))

    atoms = [make_atom(grid, np.zeros(2), d)
             for d in (0.25, 0.125, 0.0625, 0.03125)
             if d >= 4.0 * max(grid.spacing)]
    trips = fractional_mapping_ratios(spec, atoms, float(p), float(q))
    spread_p2 = max(t[1] for t in trips) / min(t[1] for t in trips)
    spread_2q = max(t[2] for t in trips) / min(t[2] for t in trips)

    bess = multiplier_kernel_decay(grid, order)
    slope_cap = -(2 + order) + 0.5
    ok = (exponents_ok and spread_p2 <= 4.0 and spread_2q <= 4.0
          and bess.slope <= slope_cap)
    _window(8, "fractional mapping ratios", 300, t0, ok,
            f"exponents ({p}, {q}); ratio spreads {spread_p2:.2f}, "
            f"{spread_2q:.2f} <= 4; multiplier slope {bess.slope:.2f} "
            f"<= {slope_cap:.2f}")


def test_criterion_9_pdo_norm_stability():
    t0 = time.monotonic()
    shape = ProductSpaceShape((1, 1))
    p_values = (4.0 / 3.0, 2.0, 4.0)
    per_p = {p: [] for p in p_values}
    for samples in (96, 192):
        grid = make_grid(shape, samples, 1.5)
        spec = FioSpec(ProductPhase((half_wave_factor(1), half_wave_factor(1))),
                       separable_symbol(shape, 0.0, 1.25), grid)
        probes = probe_ensemble(grid, EnsembleConfig())
        for p in p_values:
            best, _ = max_norm_ratio(spec, p, probes)
            per_p[p].append(best)
    drifts = {p: max(v) / min(v) for p, v in per_p.items()}
    ok = all(d <= 2.0 for d in drifts.values())
    _window(9, "translation-block norm stability", 300, t0, ok,
            "refinement drift " + ", ".join(
                f"{d:.2f} at p={p:.3g}" for p, d in drifts.items()) + ", all <= 2")
