"""Eigenvalue spectra from spherical angles.

An m-level spectrum is produced from m-1 angles in [0, pi/2] by the chain

    lambda_1     = sin^2(t_1) sin^2(t_2) ... sin^2(t_{m-1})
    lambda_{j+1} = cos^2(t_j) sin^2(t_{j+1}) ... sin^2(t_{m-1})

which reaches every point of the (m-1)-simplex from the box [0, pi/2]^(m-1).
For m = 4 the three angles are the EigenAngles of a two-qubit state.
"""

import math
from dataclasses import dataclass

import numpy as np

from qubitsep.exceptions import DomainError
from qubitsep.sequences.halton import HaltonStream
from qubitsep.types import BoolArray, FloatArray

HALF_PI = math.pi / 2
ANGLE_TOLERANCE = 1e-15
ORDER_TOLERANCE = 1e-12

# narrower box (theta_1, theta_2, theta_3 lower bounds); upper bounds are pi/2
NARROW_BOX_LOWER = (math.pi / 4, math.acos(1 / math.sqrt(3)), math.pi / 3)


def check_angles(theta: FloatArray) -> FloatArray:
    """Validate angles against [0, pi/2] and clip the endpoint tolerance away.

    Raises:
        DomainError: if any angle lies outside [0, pi/2] by more than 1e-15
    """
    theta = np.asarray(theta, dtype=np.float64)
    if not np.all(np.isfinite(theta)):
        raise DomainError("Angles must be finite")
    if theta.size and (theta.min() < -ANGLE_TOLERANCE or theta.max() > HALF_PI + ANGLE_TOLERANCE):
        raise DomainError(f"Angles must lie in [0, pi/2], got range [{theta.min()}, {theta.max()}]")
    return np.clip(theta, 0.0, HALF_PI)


@dataclass(frozen=True)
class EigenAngles:
    """The three spherical angles of a two-qubit spectrum."""

    theta1: float
    theta2: float
    theta3: float

    def __post_init__(self):
        check_angles(np.array(self.as_tuple()))

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.theta1, self.theta2, self.theta3)

    def as_array(self) -> FloatArray:
        return check_angles(np.array(self.as_tuple()))


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues of a density matrix, in chain order (not sorted)."""

    values: tuple[float, ...]

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64)
        if np.any(arr < -1e-12) or np.any(arr > 1 + 1e-12):
            raise DomainError(f"Eigenvalues must lie in [0, 1], got {self.values}")
        if abs(arr.sum() - 1.0) > 1e-12:
            raise DomainError(f"Eigenvalues must sum to 1, got {arr.sum()!r}")

    def as_array(self) -> FloatArray:
        return np.asarray(self.values, dtype=np.float64)

    def __len__(self) -> int:
        return len(self.values)


def chain_spectra(theta: FloatArray) -> FloatArray:
    """Spectra for a (n, m-1) array of angles, returned as (n, m)."""
    theta = np.atleast_2d(theta)
    sin2 = np.sin(theta) ** 2
    cos2 = np.cos(theta) ** 2
    n, k = theta.shape
    out = np.empty((n, k + 1), dtype=np.float64)
    tail = np.ones(n)
    for j in range(k - 1, -1, -1):
        out[:, j + 1] = cos2[:, j] * tail
        tail = tail * sin2[:, j]
    out[:, 0] = tail
    return out


def chain_jacobians(theta: FloatArray) -> FloatArray:
    """|det d(lambda_1..lambda_{m-1})/d(theta)| for a (n, m-1) array of angles.

    With s_k = sin^2(theta_k) the chain is a stick-breaking map whose Jacobian
    in s is prod_k s_k^(k-1); ds_k/dtheta_k = sin(2 theta_k).
    """
    theta = np.atleast_2d(theta)
    sin2 = np.sin(theta) ** 2
    powers = np.arange(theta.shape[1], dtype=np.float64)
    return np.abs(np.prod(np.sin(2 * theta) * sin2**powers, axis=1))


def angles_from_spectra(spectra: FloatArray) -> FloatArray:
    """Invert the chain: (n, m) spectra to (n, m-1) angles.

    cos^2(theta_j) = lambda_{j+1} / (lambda_1 + ... + lambda_{j+1}); an empty
    partial sum maps to theta_j = pi/2.
    """
    spectra = np.clip(np.atleast_2d(spectra), 0.0, None)
    partial = np.cumsum(spectra, axis=1)
    numer = spectra[:, 1:]
    denom = partial[:, 1:]
    ratio = np.divide(numer, denom, out=np.zeros_like(numer), where=denom > 0)
    return np.arccos(np.sqrt(np.clip(ratio, 0.0, 1.0)))


def ordered_membership(theta: FloatArray) -> BoolArray:
    """Vectorised ordered-region test for (n, 3) angles."""
    theta = np.atleast_2d(theta)
    t1, t2, t3 = theta[:, 0], theta[:, 1], theta[:, 2]
    return (
        (t1 >= math.pi / 4 - ORDER_TOLERANCE)
        & (t2 >= _arccot_cos(t1) - ORDER_TOLERANCE)
        & (t3 >= _arccot_cos(t2) - ORDER_TOLERANCE)
        & np.all(theta <= HALF_PI + ANGLE_TOLERANCE, axis=1)
    )


def narrow_box_membership(theta: FloatArray) -> BoolArray:
    """Vectorised test for the box with lower corner NARROW_BOX_LOWER."""
    theta = np.atleast_2d(theta)
    return np.all(theta >= np.array(NARROW_BOX_LOWER) - ORDER_TOLERANCE, axis=1)


def _arccot_cos(x: FloatArray) -> FloatArray:
    return HALF_PI - np.arctan(np.cos(x))


def spectrum_from_angles(a: EigenAngles) -> Spectrum:
    """The eigenvalue 4-vector of ``a``."""
    values = chain_spectra(a.as_array()[None, :])[0]
    return Spectrum(values=tuple(float(v) for v in values))


def angle_jacobian(a: EigenAngles) -> float:
    """|det d(lambda_1, lambda_2, lambda_3)/d(theta_1, theta_2, theta_3)| at ``a``."""
    return float(chain_jacobians(a.as_array()[None, :])[0])


def ordered_range_membership(a: EigenAngles) -> bool:
    """True iff ``a`` lies in the region whose spectra are sorted decreasingly."""
    return bool(ordered_membership(a.as_array()[None, :])[0])


def angle_region_measures(stream: HaltonStream, samples: int) -> dict[str, float]:
    """Lebesgue measures of the ordered region and of the narrow box, by QMC over [0, pi/2]^3.

    ``stream`` must have dimension 3.
    """
    box = HALF_PI**3
    ordered = 0
    narrow = 0
    for points in stream.stream(samples, chunk=65536):
        theta = points * HALF_PI
        ordered += int(ordered_membership(theta).sum())
        narrow += int(narrow_box_membership(theta).sum())
    ordered_measure = box * ordered / samples
    narrow_measure = box * narrow / samples
    return {
        "ordered_region": ordered_measure,
        "narrow_box": narrow_measure,
        "ratio": narrow_measure / ordered_measure if ordered_measure else float("nan"),
        "box": box,
    }
