"""Symbol constructors and the finite-difference class checks."""

import numpy as np
import pytest

from pfio.grid import ProductSpaceShape
from pfio.symbols import (bump_profile, cone_localized_symbol, constant_symbol,
                          oscillating_violator, product_symbol, separable_symbol,
                          spline_profile, spline_window_amplitude,
                          verify_class_membership, verify_marcinkiewicz,
                          window_amplitude)


def test_bump_profile_support_and_peak():
    assert bump_profile(0.0) == 1.0
    assert bump_profile(1.0) == 0.0
    assert bump_profile(2.5) == 0.0
    assert 0 < bump_profile(0.9) < bump_profile(0.5) < 1.0


def test_window_amplitude_blockwise_support():
    shape = ProductSpaceShape((1, 2))
    a = window_amplitude(shape, 1.0)
    assert a(np.zeros(3)) == pytest.approx(1.0)
    assert a(np.array([1.0, 0.0, 0.0])) == 0.0       # first block at the edge
    assert a(np.array([0.0, 0.8, 0.8])) == 0.0       # second block norm > 1
    assert a(np.array([0.5, 0.3, 0.3])) > 0.0


def test_spline_profile_matches_power():
    r = np.array([0.0, 0.5, 0.9, 1.0, 1.5])
    np.testing.assert_allclose(spline_profile(r, 2),
                               np.where(r < 1, (1 - r**2) ** 2, 0.0) ** 1, atol=1e-15)
    assert spline_profile(np.array([1.2]), 1)[0] == 0.0


def test_spline_window_support_matches_smooth_window():
    shape = ProductSpaceShape((2,))
    a = spline_window_amplitude(shape, 1.45, 1)
    x = np.array([[0.0, 0.0], [1.5, 0.0], [1.44, 0.0]])
    v = a(x)
    assert v[0] == 1.0
    assert v[1] == 0.0
    assert v[2] > 0.0


def test_separable_symbol_values():
    shape = ProductSpaceShape((2,))
    sym = separable_symbol(shape, -0.5, 1.0)
    x, xi = np.zeros(2), np.array([3.0, 4.0])
    assert sym.eval(x, xi) == pytest.approx((1 + 25.0) ** (-0.25))
    assert sym.separable
    assert sym.order == -0.5


def test_product_symbol_order_sums():
    shape = ProductSpaceShape((1, 2))
    sym = product_symbol(shape, (-0.25, -0.5), 1.0)
    assert sym.order == pytest.approx(-0.75)
    xi = np.array([2.0, 0.0, 3.0])
    expected = (1 + 4.0) ** (-0.125) * (1 + 9.0) ** (-0.25)
    assert sym.eval(np.zeros(3), xi) == pytest.approx(expected)


def test_symbol_rejects_positive_order():
    with pytest.raises(ValueError):
        separable_symbol(ProductSpaceShape((2,)), 0.3)


def test_constant_symbol_is_one_everywhere():
    sym = constant_symbol(ProductSpaceShape((1, 1)))
    rng = np.random.default_rng(1)
    pts = rng.normal(size=(20, 2))
    np.testing.assert_allclose(sym.eval(pts, pts * 8), 1.0, atol=0)


def test_cone_symbol_localizes_to_cone():
    shape = ProductSpaceShape((2,))
    axis = np.array([1.0, 0.0])
    sym = cone_localized_symbol(shape, 0.0, axis, 0.2, 1.25)
    on = sym.eval(np.zeros(2), 16.0 * axis)
    off = sym.eval(np.zeros(2), 16.0 * np.array([0.0, 1.0]))
    assert on > 0.5
    assert off == 0.0


def test_class_membership_standard_symbols_pass():
    for sym in (separable_symbol(ProductSpaceShape((2,)), -0.5, 1.25),
                product_symbol(ProductSpaceShape((1, 1)), (-0.25, -0.25), 1.0)):
        rep = verify_class_membership(sym)
        assert rep.passed, (rep.stability, max(rep.fitted.values()))


def test_class_membership_catches_violator():
    rep = verify_class_membership(oscillating_violator(ProductSpaceShape((2,))))
    assert not rep.passed


def test_marcinkiewicz_passes_for_product_symbol():
    sym = product_symbol(ProductSpaceShape((1, 1)), (-0.5, -0.25), 1.0)
    rep = verify_marcinkiewicz(sym)
    assert rep.passed
    assert max(rep.fitted.values()) <= rep.cap


def test_class_report_stability_under_probe_refinement():
    sym = separable_symbol(ProductSpaceShape((2,)), -0.25, 1.0)
    rep = verify_class_membership(sym)
    assert rep.stability <= 0.10
