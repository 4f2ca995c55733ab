"""Estimate-side experiment helpers: atoms, fits, norms, exponents."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pfio.grid import ProductSpaceShape, forward_transform, lp_norm, make_grid
from pfio.phases import ProductPhase, half_wave_factor, linear_factor
from pfio.symbols import constant_symbol, separable_symbol
from pfio.dyadic import DyadicTuple
from pfio.operators import FioSpec, apply_fio
from pfio.experiments import (admissible_p_interval, atom_ensemble, ball_volume,
                              cancellation_ablation, delta_probe, dyadic_sup_envelope,
                              empirical_operator_norm, fit_decay, focusing_probe,
                              make_atom, mapping_exponents, max_norm_ratio,
                              multiplier_kernel_decay, power_iteration_norm,
                              probe_ensemble, random_band_limited,
                              sharpness_experiment, verify_kernel_lipschitz,
                              verify_kernel_mass, verify_tail_bound)


def test_fit_decay_recovers_exact_line():
    x = np.array([0.0, 1.0, 2.0, 3.0])
    rep = fit_decay(x, -1.5 * x + 0.25)
    assert rep.slope == pytest.approx(-1.5)
    assert rep.intercept == pytest.approx(0.25)
    assert rep.residual == pytest.approx(0.0, abs=1e-12)


def test_dyadic_sup_envelope_bins_by_octave():
    r = np.array([1.0, 1.5, 2.0, 3.0, 4.0, 7.9])
    mags = np.array([1.0, 3.0, 2.0, 1.0, 5.0, 4.0])
    centers, sups = dyadic_sup_envelope(r, mags)
    np.testing.assert_allclose(centers, [2**0.5, 2**1.5, 2**2.5])
    np.testing.assert_allclose(sups, [3.0, 2.0, 5.0])


def test_ball_volume_dims():
    assert ball_volume(1, 2.0) == pytest.approx(4.0)
    assert ball_volume(2, 1.0) == pytest.approx(np.pi)
    assert ball_volume(3, 1.0) == pytest.approx(4 * np.pi / 3)


def test_atom_mean_zero_and_size_normalization():
    grid = make_grid(ProductSpaceShape((2,)), 128, 1.0)
    atom = make_atom(grid, np.zeros(2), 0.25)
    total = np.sum(atom.field.values) * grid.cell_volume
    assert abs(total) <= 1e-12
    peak = np.max(np.abs(atom.field.values))
    assert peak * ball_volume(2, 0.25) == pytest.approx(1.0, rel=1e-10)
    assert atom.radius == 0.25


def test_atom_rejects_unresolvable_radius():
    grid = make_grid(ProductSpaceShape((2,)), 32, 1.0)
    with pytest.raises(ValueError):
        make_atom(grid, np.zeros(2), 2.0 * max(grid.spacing))


def test_atom_norm_scaling():
    # ||a||_p <= |B|^{1/p - 1} for size-normalized atoms, tight at the peak
    grid = make_grid(ProductSpaceShape((2,)), 128, 1.0)
    atom = make_atom(grid, np.zeros(2), 0.25)
    vol = ball_volume(2, 0.25)
    for p in (1.0, 2.0, 4.0):
        assert atom.norm(p) <= vol ** (1 / p - 1) * 1.05


def test_atom_ensemble_has_dyadic_radii():
    grid = make_grid(ProductSpaceShape((2,)), 128, 1.0)
    atoms = atom_ensemble(grid, count=8, seed=3)
    assert len(atoms) == 8
    radii = sorted({a.radius for a in atoms})
    for a, b in zip(radii, radii[1:]):
        assert b / a == pytest.approx(2.0)


def test_probe_ensemble_mixes_kinds():
    grid = make_grid(ProductSpaceShape((2,)), 64, 1.0)
    probes = probe_ensemble(grid)
    assert len(probes) == 32
    assert all(p.grid is grid for p in probes)


def test_delta_probe_unit_mass():
    grid = make_grid(ProductSpaceShape((2,)), 32, 1.0)
    p = delta_probe(grid, (4, 5))
    assert np.sum(p.values) * grid.cell_volume == pytest.approx(1.0)


def test_power_iteration_monotone_history():
    shape = ProductSpaceShape((2,))
    grid = make_grid(shape, 48, 1.0)
    spec = FioSpec(ProductPhase((half_wave_factor(2),)),
                   separable_symbol(shape, -0.5, 0.8), grid)
    est = power_iteration_norm(spec, iterations=25)
    assert est.method == "power_iteration"
    assert all(b >= a - 1e-12 for a, b in zip(est.history, est.history[1:]))
    assert est.value > 0


def test_power_iteration_certifies_lower_bound():
    # identity phase, constant symbol: the operator is the band-limit projector
    shape = ProductSpaceShape((2,))
    grid = make_grid(shape, 48, 1.0)
    spec = FioSpec(ProductPhase((linear_factor(2),)), constant_symbol(shape), grid)
    est = power_iteration_norm(spec, iterations=30)
    assert est.value <= 1.0 + 1e-9
    assert est.value >= 0.98


@settings(max_examples=10, deadline=None)
@given(st.integers(min_value=0, max_value=2**31 - 1))
def test_power_iteration_monotone_property(seed):
    shape = ProductSpaceShape((1,))
    grid = make_grid(shape, 64, 1.0)
    spec = FioSpec(ProductPhase((half_wave_factor(1),)),
                   separable_symbol(shape, -0.25, 0.8), grid)
    est = power_iteration_norm(spec, iterations=12, seed=seed)
    assert all(b >= a - 1e-12 for a, b in zip(est.history, est.history[1:]))


def test_empirical_norm_p2_at_least_best_probe():
    shape = ProductSpaceShape((2,))
    grid = make_grid(shape, 48, 1.0)
    spec = FioSpec(ProductPhase((half_wave_factor(2),)),
                   separable_symbol(shape, -0.5, 0.8), grid)
    probes = random_band_limited(grid, count=4, seed=2)
    best, ratios = max_norm_ratio(spec, 2.0, probes)
    assert best == pytest.approx(max(ratios))
    est = empirical_operator_norm(spec, 2.0)
    assert est.method == "power_iteration"
    assert est.value > 0


def test_admissible_interval_frozen_values():
    lo, hi = admissible_p_interval(-0.5, 3, 1)
    assert (lo, hi) == (Fraction(4, 3), Fraction(4, 1))
    lo, hi = admissible_p_interval(-0.25, 2, 1)
    assert (lo, hi) == (Fraction(4, 3), Fraction(4, 1))
    lo, hi = admissible_p_interval(0, 2, 1)
    assert (lo, hi) == (Fraction(2, 1), Fraction(2, 1))


def test_admissible_interval_rejects_out_of_range_order():
    with pytest.raises(ValueError):
        admissible_p_interval(-2.0, 3, 1)


def test_mapping_exponents_frozen_values():
    p, q = mapping_exponents(-0.4, 2)
    assert (p, q) == (Fraction(10, 7), Fraction(10, 3))
    p, q = mapping_exponents(-0.5, 2)
    assert (p, q) == (Fraction(4, 3), Fraction(4, 1))


def test_exponents_are_exact_fractions_not_floats():
    p, q = mapping_exponents(-0.4, 2)
    assert isinstance(p, Fraction) and isinstance(q, Fraction)
    assert 1 / float(p) + 1 / float(q) == pytest.approx(1.0)


def test_focusing_probe_is_shell_supported():
    shape = ProductSpaceShape((2,))
    grid = make_grid(shape, 256, 1.0)
    spec = FioSpec(ProductPhase((half_wave_factor(2),)),
                   separable_symbol(shape, -0.25, 0.8), grid)
    f = focusing_probe(spec, 4)
    fhat = forward_transform(f)
    r = np.linalg.norm(grid.points("frequency"), axis=-1)
    off_shell = np.abs(fhat.values)[(r < 2.0**3) | (r > 2.0**5)]
    assert np.max(off_shell) <= 1e-10 * np.max(np.abs(fhat.values))


def test_focusing_probe_refocuses_at_center():
    # the modulation cancels the phase offset: |Ff| peaks at the origin
    shape = ProductSpaceShape((2,))
    grid = make_grid(shape, 256, 1.0)
    spec = FioSpec(ProductPhase((half_wave_factor(2),)),
                   separable_symbol(shape, -0.25, 0.8), grid)
    f = focusing_probe(spec, 4)
    g = apply_fio(spec, f)
    peak = np.unravel_index(np.argmax(np.abs(g.values)), g.values.shape)
    x_peak = grid.points()[peak]
    assert np.linalg.norm(x_peak) <= 3.0 * max(grid.spacing)


def test_sharpness_slopes_match_theory_small_grid():
    shape = ProductSpaceShape((2,))
    grid = make_grid(shape, 512, 1.5)
    m = -0.25
    spec = FioSpec(ProductPhase((half_wave_factor(2),)),
                   separable_symbol(shape, m, 1.25), grid)
    fits = sharpness_experiment(spec, (4.0,), (3, 4, 5))
    # ratio slope m + 1/2 - 1/p = 0 at p = 4
    assert abs(fits[4.0].slope) <= 0.05


def test_kernel_mass_spread_small_grid():
    shape = ProductSpaceShape((2,))
    grid = make_grid(shape, 512, 1.5)
    spec = FioSpec(ProductPhase((half_wave_factor(2),)),
                   separable_symbol(shape, -0.5, 1.25), grid)
    tuples = [DyadicTuple((j,), 0.0) for j in (3, 4, 5)]
    rep = verify_kernel_mass(spec, tuples)
    assert rep.spread <= 3.0


def test_kernel_lipschitz_window_small_grid():
    shape = ProductSpaceShape((2,))
    grid = make_grid(shape, 512, 1.5)
    spec = FioSpec(ProductPhase((half_wave_factor(2),)),
                   separable_symbol(shape, -0.5, 1.25), grid)
    rows = verify_kernel_lipschitz(spec, [3, 4], fractions=(0.25,))
    ratios = [r.ratio for r in rows]
    assert len(ratios) == 2
    assert max(ratios) / min(ratios) <= 2.0


def test_tail_bound_skips_unreachable_levels():
    shape = ProductSpaceShape((2,))
    grid = make_grid(shape, 512, 1.5)
    spec = FioSpec(ProductPhase((half_wave_factor(2),)),
                   separable_symbol(shape, -0.5, 1.25), grid)
    rep = verify_tail_bound(spec, [2, 3, 4, 5], 0.125)
    skipped_j = [j for j, _ in rep.skipped]
    assert 2 in skipped_j  # 2^2 <= 1/delta: precondition fails
    assert all(j > 3 for j in rep.j_values)  # measured rows satisfy 2^j > 8


def test_cancellation_ablation_increases_low_modes():
    shape = ProductSpaceShape((2,))
    grid = make_grid(shape, 256, 1.0)
    spec = FioSpec(ProductPhase((half_wave_factor(2),)),
                   separable_symbol(shape, -0.5, 0.8), grid)
    atom = make_atom(grid, np.zeros(2), 0.125)
    mass_atom, mass_abs = cancellation_ablation(spec, atom)
    assert mass_abs > mass_atom


def test_multiplier_kernel_decay_slope():
    grid = make_grid(ProductSpaceShape((2,)), 256, 1.0)
    rep = multiplier_kernel_decay(grid, -0.4)
    # bound -(N + m) + 0.5 = -1.1 for N = 2, m = -0.4
    assert rep.slope <= -1.1
