"""Phase factors: homogeneity, nondegeneracy, shift structure."""

import numpy as np
import pytest

from pfio.phases import (ProductPhase, SingularFrequencyError, check_homogeneity,
                         check_nondegeneracy, eval_phase, half_wave_factor,
                         linear_factor, perturbed_factor, sample_singular_locus,
                         translation_factor, verify_cone_separation)


def test_linear_factor_values():
    f = linear_factor(2)
    x, xi = np.array([0.3, -0.2]), np.array([4.0, 1.0])
    assert f.eval(x, xi) == pytest.approx(x @ xi)
    np.testing.assert_allclose(f.grad_xi(x, xi), x)
    np.testing.assert_allclose(f.grad_x(x, xi), xi)


def test_translation_factor_shift():
    f = translation_factor(2, (0.5, -0.25))
    x, xi = np.array([0.3, 0.1]), np.array([2.0, 6.0])
    assert f.eval(x, xi) == pytest.approx((x - np.array([0.5, -0.25])) @ xi)
    assert f.is_shift_type
    np.testing.assert_allclose(f.shift, [0.5, -0.25])


def test_half_wave_factor_values():
    f = half_wave_factor(2)
    x, xi = np.array([0.1, 0.2]), np.array([3.0, 4.0])
    assert f.eval(x, xi) == pytest.approx(x @ xi + 5.0)
    # grad_xi = x + xi/|xi|
    np.testing.assert_allclose(f.grad_xi(x, xi), x + xi / 5.0)
    assert f.freq_offset(xi) == pytest.approx(5.0)
    assert half_wave_factor(2, sign=-1).eval(x, xi) == pytest.approx(x @ xi - 5.0)


def test_eval_phase_guards_singular_frequencies():
    phase = ProductPhase((half_wave_factor(2),))
    with pytest.raises(SingularFrequencyError):
        eval_phase(phase, np.zeros(2), np.zeros(2))


def test_homogeneity_holds_for_standard_factors():
    for f in (linear_factor(2), half_wave_factor(3), translation_factor(1, (0.2,)),
              perturbed_factor(2, epsilon=0.15)):
        rep = check_homogeneity(f)
        assert rep.passed, rep
        assert rep.max_violation <= rep.tolerance


def test_perturbed_factor_nondegenerate_but_not_shift_type():
    f = perturbed_factor(2, epsilon=0.15)
    assert check_nondegeneracy(f).passed
    assert not f.is_shift_type


def test_nondegeneracy_determinant_is_one_for_linear():
    rep = check_nondegeneracy(linear_factor(3))
    assert rep.min_abs_det == pytest.approx(1.0)
    assert rep.passed


def test_product_phase_splits_blocks():
    phase = ProductPhase((linear_factor(1), half_wave_factor(2)))
    x = np.array([0.5, 0.1, 0.2])
    xi = np.array([2.0, 3.0, 4.0])
    expected = 0.5 * 2.0 + (x[1:] @ xi[1:] + 5.0)
    assert eval_phase(phase, x, xi) == pytest.approx(expected)
    assert phase.shape.total == 3
    assert phase.is_shift_type
    np.testing.assert_allclose(phase.freq_offset(xi[None]), [5.0])


def test_shift_type_detection():
    assert ProductPhase((linear_factor(2),)).is_shift_type
    assert ProductPhase((half_wave_factor(2),)).is_shift_type
    assert not ProductPhase((perturbed_factor(2, 0.1),)).is_shift_type


def test_grad_x_equals_xi_for_shift_phases():
    phase = ProductPhase((half_wave_factor(2), translation_factor(1, (0.3,))))
    rng = np.random.default_rng(11)
    x = rng.normal(size=3)
    xi = rng.normal(size=3) * 8.0
    np.testing.assert_allclose(phase.grad_x(x, xi), xi, atol=1e-12)


def test_singular_locus_on_cone_axis_complement():
    phase = ProductPhase((half_wave_factor(2),))
    pts = sample_singular_locus(phase, np.zeros(2))
    # the half wave is singular only at xi = 0; sampled locus stays tiny
    assert pts.shape[1] == 2


def test_cone_separation_report():
    phase = ProductPhase((half_wave_factor(2),))
    rep = verify_cone_separation(phase, np.array([1.0, 0.0]))
    assert rep.passed
