"""Spherical nets, angular cutoffs, and the influence region."""

import numpy as np
import pytest

from pfio.grid import ProductSpaceShape, make_grid
from pfio.phases import ProductPhase, half_wave_factor, linear_factor
from pfio.spheres import circle_points, fibonacci_points, unit_directions
from pfio.angular import (InfluenceRegion, adapted_frame, axis_cutoff, build_net,
                          chi_cutoff, chi_derivative_fit, cone_multiplier,
                          corrected_phase, net_covering_radius, net_min_spacing,
                          partition_check, region_of_influence)


def test_circle_points_unit_and_count():
    pts = circle_points(12)
    assert pts.shape == (12, 2)
    np.testing.assert_allclose(np.linalg.norm(pts, axis=1), 1.0, atol=1e-14)


def test_fibonacci_points_cover_both_hemispheres():
    pts = fibonacci_points(200)
    np.testing.assert_allclose(np.linalg.norm(pts, axis=1), 1.0, atol=1e-12)
    assert pts[:, 2].min() < -0.9 and pts[:, 2].max() > 0.9


def test_unit_directions_dim_1():
    pts = unit_directions(1, 7)
    assert sorted(pts.ravel().tolist()) == [-1.0, 1.0]


def test_net_spacing_tracks_level():
    # spacing ~ 2^{-s/2}: the ratio to that scale stays near one
    for s in (2, 4, 6):
        net = build_net(2, s)
        assert net.level == s
        ratio = net_min_spacing(net) / 2.0 ** (-s / 2.0)
        assert 0.5 <= ratio <= 2.0


def test_net_covers_sphere():
    for dim in (2, 3):
        net = build_net(dim, 4)
        cover = net_covering_radius(net) / 2.0 ** (-4 / 2.0)
        assert cover <= 1.0


def test_partition_of_unity_on_sphere():
    for dim in (2, 3):
        for s in (2, 5):
            assert partition_check(build_net(dim, s)) <= 1e-10


def test_chi_cutoff_localizes_to_cap():
    net = build_net(2, 4)
    omega = net.points[3]
    # on its own center the cutoff dominates; far caps contribute nothing
    xi = omega * 8.0
    assert chi_cutoff(net, 3, xi[None])[0] > 0.2
    far = np.argmax(np.linalg.norm(net.points - (-omega), axis=1) < 0.3)
    assert chi_cutoff(net, int(far), xi[None])[0] == 0.0


def test_chi_derivative_constants_bounded():
    fit = chi_derivative_fit(build_net(2, 4))
    assert all(np.isfinite(v) for v in fit.values())
    assert max(fit.values()) <= 100.0


def test_axis_cutoff_support():
    shape = ProductSpaceShape((1, 2))
    xi = np.array([[0.1, 5.0, 0.0],   # first block small: active
                   [3.0, 0.2, 0.1],   # second block small: active
                   [3.0, 5.0, 0.0]])  # all blocks large: identically zero
    psi = axis_cutoff(shape, xi)
    assert psi[0] > 0 and psi[1] > 0
    assert psi[2] == 0.0


def test_cone_multiplier_sums_to_one_with_complement():
    shape = ProductSpaceShape((2,))
    net = build_net(2, 3)
    rng = np.random.default_rng(4)
    xi = rng.normal(size=(100, 2)) * 8.0
    acc = np.zeros(100)
    for nu in range(net.count):
        acc += cone_multiplier(shape, {0: net}, {0: nu}, xi)
    acc += cone_multiplier(shape, {}, {}, xi, complement=True)
    np.testing.assert_allclose(acc, 1.0, atol=1e-10)


def test_adapted_frame_is_orthonormal():
    rng = np.random.default_rng(9)
    for _ in range(5):
        v = rng.normal(size=3)
        F = adapted_frame(v / np.linalg.norm(v))
        np.testing.assert_allclose(F @ F.T, np.eye(3), atol=1e-12)
        np.testing.assert_allclose(F[0], v / np.linalg.norm(v), atol=1e-12)


def test_corrected_phase_vanishes_for_linear_factor():
    # linear phases have no curvature: the corrected phase is exactly zero
    f = linear_factor(2)
    omega = np.array([1.0, 0.0])
    x = np.random.default_rng(3).normal(size=(10, 2))
    xi = np.abs(np.random.default_rng(4).normal(size=(10, 2))) + 0.5
    out = corrected_phase(f, x, xi, omega)
    np.testing.assert_allclose(out, 0.0, atol=1e-12)


def test_region_of_influence_contains_wavefront():
    shape = ProductSpaceShape((2,))
    grid = make_grid(shape, 64, 1.5)
    phase = ProductPhase((half_wave_factor(2),))
    region, indicator, measure = region_of_influence(grid, phase, np.zeros(2), 0.25)
    assert isinstance(region, InfluenceRegion)
    assert measure > 0
    # the half-wave front from the origin passes through |x| = 1
    pts = grid.points().reshape(-1, 2)
    ind = indicator.ravel()
    front = np.abs(np.linalg.norm(pts, axis=1) - 1.0) < 0.05
    assert ind[front].mean() > 0.9


def test_region_of_influence_linear_phase_is_small_ball():
    shape = ProductSpaceShape((2,))
    grid = make_grid(shape, 64, 1.5)
    phase = ProductPhase((linear_factor(2),))
    _, indicator, _ = region_of_influence(grid, phase, np.zeros(2), 0.125)
    pts = grid.points().reshape(-1, 2)
    covered = pts[indicator.ravel()]
    # identity propagation: a ball of radius C_R 2^{-s/2} at the coarsest level
    assert np.linalg.norm(covered, axis=1).max() <= 4.0 * 2.0 ** (-3 / 2.0) + 0.05
