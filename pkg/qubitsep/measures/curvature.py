"""Bures scalar curvature and the Levy-Gromov isoperimetric arithmetic."""

import math
from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel
from scipy.special import gamma

from qubitsep.exceptions import ConfigurationError, DomainError
from qubitsep.geometry.spectrum import Spectrum
from qubitsep.types import BoolArray, FloatArray, MaybeSingular, SingularValue

CURVATURE_SINGULAR_TOLERANCE = 1e-12
COMPARISON_DIMENSION = 15


@dataclass(frozen=True)
class ElementaryInvariants:
    """Elementary symmetric polynomials e_1..e_4 of a spectrum."""

    e1: float
    e2: float
    e3: float
    e4: float

    @classmethod
    def from_spectrum(cls, s: Spectrum) -> "ElementaryInvariants":
        e = elementary_invariants(s.as_array()[None, :])[0]
        return cls(e1=float(e[0]), e2=float(e[1]), e3=float(e[2]), e4=float(e[3]))


def elementary_invariants(spectra: FloatArray) -> FloatArray:
    """(n, 4) spectra to (n, 4) invariants e_1..e_4."""
    l1, l2, l3, l4 = np.atleast_2d(spectra).T
    e1 = l1 + l2 + l3 + l4
    e2 = l1 * l2 + l1 * l3 + l1 * l4 + l2 * l3 + l2 * l4 + l3 * l4
    e3 = l1 * l2 * l3 + l1 * l2 * l4 + l1 * l3 * l4 + l2 * l3 * l4
    e4 = l1 * l2 * l3 * l4
    return np.stack([e1, e2, e3, e4], axis=1)


def scalar_curvatures(spectra: FloatArray) -> tuple[FloatArray, BoolArray]:
    """Vectorised curvature for (n, 4) spectra plus the mask of singular rows (value 0.0)."""
    e = elementary_invariants(spectra)
    e2, e3, e4 = e[:, 1], e[:, 2], e[:, 3]
    denom = e4 + e3**2 - e2 * e3
    numer = 63 * e4 + 35 * e3**2 - 43 * e2 * e3 - 7 * e3 - 3 * e2**2
    # two vanishing eigenvalues
    second_smallest = np.sort(np.atleast_2d(spectra), axis=1)[:, 1]
    singular = (second_smallest <= CURVATURE_SINGULAR_TOLERANCE) | (denom == 0)
    values = np.divide(6.0 * numer, denom, out=np.zeros_like(denom), where=~singular)
    return values, singular


def scalar_curvature(s: Spectrum) -> MaybeSingular:
    """S = 6(63e4 + 35e3^2 - 43e2e3 - 7e3 - 3e2^2)/(e4 + e3^2 - e2e3); unbounded near two zero eigenvalues."""
    if len(s) != 4:
        raise DomainError(f"Curvature is defined here for 4 eigenvalues, got {len(s)}")
    values, singular = scalar_curvatures(s.as_array()[None, :])
    if singular[0]:
        return SingularValue(reason="vanishing curvature denominator")
    return float(values[0])


def min_scalar_curvature(m: int) -> float:
    """(5m^2 - 4)(m^2 - 1)/2, attained at the maximally mixed state."""
    if m < 2:
        raise ConfigurationError(f"Level count must be at least 2, got {m}")
    return (5 * m * m - 4) * (m * m - 1) / 2


class BallGeometry(BaseModel):
    dimension: int
    radius: float
    volume: float
    area: float


def unit_ball_volume(d: int) -> float:
    return float(math.pi ** (d / 2) / gamma(d / 2 + 1))


def ball_geometry(d: int, r: float) -> BallGeometry:
    """Euclidean d-ball volume and boundary area at radius ``r``.

    Raises:
        DomainError: if d < 1 or r <= 0
    """
    if d < 1 or r <= 0:
        raise DomainError(f"Need d >= 1 and r > 0, got d={d}, r={r}")
    volume = unit_ball_volume(d) * r**d
    return BallGeometry(dimension=d, radius=r, volume=volume, area=d * volume / r)


def equivalent_ball(d: int, volume: float) -> BallGeometry:
    """The d-ball holding ``volume``; a zero volume gives the degenerate ball."""
    if d < 1 or volume < 0:
        raise DomainError(f"Need d >= 1 and volume >= 0, got d={d}, volume={volume}")
    unit = unit_ball_volume(d)
    radius = (volume / unit) ** (1.0 / d)
    area = d * unit * (volume / unit) ** ((d - 1) / d)
    return BallGeometry(dimension=d, radius=radius, volume=volume, area=area)


class IsoperimetricComparison(BaseModel):
    """Levy-Gromov comparison for curvature bound 1."""

    dimension: int
    alpha: float
    unit_ball_volume: float
    unit_sphere_area: float
    comparison_ball: BallGeometry
    s_alpha: float
    w: float
    ratio: float
    holds: bool
    total_ball: BallGeometry
    separable_ball: BallGeometry


def levy_gromov_comparison(
    v_sep: float, v_total: float, a_sep: float, d: int = COMPARISON_DIMENSION
) -> IsoperimetricComparison:
    """Compare A_sep/V_total with the boundary of a ball holding the separable fraction.

    alpha = v_sep/v_total; s(alpha) is the boundary area of the d-ball of
    volume alpha times the unit-ball volume, and w = s(alpha)/unit volume.
    The inequality holds when A_sep/V_total >= w.

    Raises:
        DomainError: unless 0 <= v_sep <= v_total, v_total > 0 and a_sep >= 0
    """
    if v_total <= 0 or v_sep < 0 or v_sep > v_total or a_sep < 0:
        raise DomainError(f"Need 0 <= V_sep <= V_total, V_total > 0, A_sep >= 0; got {v_sep}, {v_total}, {a_sep}")
    alpha = v_sep / v_total
    unit = unit_ball_volume(d)
    comparison = equivalent_ball(d, alpha * unit)
    w = comparison.area / unit
    ratio = a_sep / v_total
    return IsoperimetricComparison(
        dimension=d,
        alpha=alpha,
        unit_ball_volume=unit,
        unit_sphere_area=d * unit,
        comparison_ball=comparison,
        s_alpha=comparison.area,
        w=w,
        ratio=ratio,
        holds=ratio >= w,
        total_ball=equivalent_ball(d, v_total),
        separable_ball=equivalent_ball(d, v_sep),
    )
