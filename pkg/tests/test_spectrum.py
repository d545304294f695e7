"""Tests for the angle chain, its Jacobian and the ordered-spectrum region."""

import math

import numpy as np
import pytest

from qubitsep.exceptions import DomainError
from qubitsep.geometry.spectrum import (
    HALF_PI,
    NARROW_BOX_LOWER,
    EigenAngles,
    Spectrum,
    angle_jacobian,
    angle_region_measures,
    angles_from_spectra,
    chain_jacobians,
    chain_spectra,
    narrow_box_membership,
    ordered_membership,
    ordered_range_membership,
    spectrum_from_angles,
)
from qubitsep.sequences import HaltonStream, Scrambling, make_permutations


def _random_angles(count: int, dims: int, seed: int = 1) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.uniform(0.05, HALF_PI - 0.05, size=(count, dims))


def test_chain_spectra_lie_on_simplex():
    """Chain spectra are nonnegative and sum to 1 for every level count."""
    for dims in (1, 2, 3, 5):
        spectra = chain_spectra(_random_angles(200, dims))
        assert spectra.shape == (200, dims + 1)
        assert np.all(spectra >= 0)
        assert np.allclose(spectra.sum(axis=1), 1.0, atol=1e-14)


def test_chain_formula_for_two_qubits():
    """lambda_1 is the product of sines and lambda_4 = cos^2(theta_3)."""
    a = EigenAngles(0.3, 0.7, 1.1)
    s = spectrum_from_angles(a).values
    assert s[0] == pytest.approx((math.sin(0.3) * math.sin(0.7) * math.sin(1.1)) ** 2, rel=1e-14)
    assert s[1] == pytest.approx((math.cos(0.3) * math.sin(0.7) * math.sin(1.1)) ** 2, rel=1e-14)
    assert s[2] == pytest.approx((math.cos(0.7) * math.sin(1.1)) ** 2, rel=1e-14)
    assert s[3] == pytest.approx(math.cos(1.1) ** 2, rel=1e-14)


def test_angles_invert_the_chain():
    """angles_from_spectra recovers interior angles."""
    theta = _random_angles(100, 3)
    assert np.allclose(angles_from_spectra(chain_spectra(theta)), theta, atol=1e-10)


def test_jacobian_matches_finite_differences():
    """The closed-form Jacobian equals a central-difference determinant."""
    h = 1e-6
    for theta in _random_angles(5, 3, seed=7):
        columns = []
        for k in range(3):
            step = np.zeros(3)
            step[k] = h
            diff = chain_spectra(theta + step)[0, :3] - chain_spectra(theta - step)[0, :3]
            columns.append(diff / (2 * h))
        numeric = abs(np.linalg.det(np.column_stack(columns)))
        assert angle_jacobian(EigenAngles(*theta)) == pytest.approx(numeric, rel=1e-6)


def test_jacobian_integrates_to_simplex_volume():
    """The Jacobian over the angle box integrates to the simplex volume 1/(m-1)!."""
    n = 200
    grid = (np.arange(n) + 0.5) / n * HALF_PI
    t1, t2 = np.meshgrid(grid, grid, indexing="ij")
    theta = np.column_stack([t1.ravel(), t2.ravel()])
    integral = chain_jacobians(theta).sum() * (HALF_PI / n) ** 2
    assert integral == pytest.approx(0.5, rel=1e-4)


def test_angles_outside_box_rejected():
    """Angles beyond [0, pi/2] by more than 1e-15 raise DomainError."""
    with pytest.raises(DomainError):
        EigenAngles(-0.01, 0.2, 0.3)
    with pytest.raises(DomainError):
        EigenAngles(0.1, HALF_PI + 1e-9, 0.3)
    EigenAngles(0.0, HALF_PI, 0.5)


def test_spectrum_validation():
    """A spectrum must be nonnegative and sum to 1."""
    with pytest.raises(DomainError):
        Spectrum((0.5, 0.6, -0.1, 0.0))
    with pytest.raises(DomainError):
        Spectrum((0.5, 0.5, 0.5, 0.0))
    assert len(Spectrum((0.25,) * 4)) == 4


class TestOrderedRegion:
    """Angles whose spectra are sorted decreasingly."""

    def test_sorted_spectrum_is_inside(self):
        """A decreasing spectrum maps into the ordered region."""
        theta = angles_from_spectra(np.array([[0.4, 0.3, 0.2, 0.1]]))[0]
        assert ordered_range_membership(EigenAngles(*theta))

    def test_increasing_spectrum_is_outside(self):
        """An increasing spectrum does not."""
        theta = angles_from_spectra(np.array([[0.1, 0.2, 0.3, 0.4]]))[0]
        assert not ordered_range_membership(EigenAngles(*theta))

    def test_membership_agrees_with_sorting(self):
        """Membership is equivalent to lambda_1 >= ... >= lambda_4 away from ties."""
        theta = _random_angles(2000, 3, seed=3)
        spectra = chain_spectra(theta)
        expected = np.all(np.diff(spectra, axis=1) <= 0, axis=1)
        got = np.array([ordered_range_membership(EigenAngles(*t)) for t in theta])
        assert np.array_equal(got, expected)

    def test_region_measures(self):
        """QMC measures of the ordered region and the narrow box match their reference values."""
        stream = HaltonStream(make_permutations(Scrambling.SEEDED, 3, 42))
        measures = angle_region_measures(stream, 2**16)
        assert measures["box"] == pytest.approx(HALF_PI**3)
        assert measures["ordered_region"] == pytest.approx(0.0564221, rel=0.02)
        assert measures["narrow_box"] == pytest.approx(0.253106, rel=0.01)
        assert measures["ratio"] == pytest.approx(4.48593, rel=0.03)

    def test_narrow_box_puts_the_largest_eigenvalue_first(self):
        """Inside the narrow box lambda_1 dominates, but the other three are not always sorted."""
        lower = np.array(NARROW_BOX_LOWER)
        unit = HaltonStream(make_permutations(Scrambling.SEEDED, 3, 42)).block(1, 4096)
        theta = lower + unit * (HALF_PI - lower)
        assert narrow_box_membership(theta).all()
        spectra = chain_spectra(theta)
        assert np.all(spectra[:, 0] >= spectra[:, 1:].max(axis=1) - 1e-15)
        unsorted_tail = (spectra[:, 1] < spectra[:, 2]) | (spectra[:, 2] < spectra[:, 3])
        assert unsorted_tail.any()
        assert not ordered_membership(theta).all()
