"""Eigenvector frames from twelve unit-interval coordinates.

The frame is built column by column. Column 1 is a uniform point of complex
projective 3-space: squared moduli are a uniform simplex point (Beta
stick-breaking of three coordinates) and three relative phases are uniform.
Column 2 is a uniform unit vector in the orthogonal complement (2 moduli + 2
phase coordinates), column 3 likewise in the remaining plane (1 + 1), and
column 4 completes the frame. Complements come from complex Householder
reflections, so

    U = H1 . diag(1, H2) . diag(1, 1, H3)

Uniform coordinates therefore induce the Haar measure on frames modulo
column phases, which is the measure the truncated Haar volume pi^6/96
normalises.
"""

from dataclasses import dataclass

import numpy as np

from qubitsep.exceptions import DomainError
from qubitsep.types import ComplexArray, FloatArray

UNITARY_COORDS = 12
UNITARITY_TOLERANCE = 1e-10
# reflector target this close to e1 is treated as e1 itself
PIVOT_TOLERANCE = 1e-14


@dataclass(frozen=True)
class UnitaryCoords:
    """Twelve coordinates in the open unit interval."""

    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) != UNITARY_COORDS:
            raise DomainError(f"Expected {UNITARY_COORDS} coordinates, got {len(self.values)}")
        check_unitary_coords(np.asarray(self.values, dtype=np.float64)[None, :])


@dataclass(frozen=True)
class CosetUnitary:
    """A 4x4 unitary eigenvector frame."""

    matrix: ComplexArray

    def __post_init__(self):
        m = np.asarray(self.matrix)
        if m.shape != (4, 4):
            raise DomainError(f"Expected a 4x4 matrix, got shape {m.shape}")
        if np.max(np.abs(m.conj().T @ m - np.eye(4))) > UNITARITY_TOLERANCE:
            raise DomainError("Matrix is not unitary to 1e-10")


def check_unitary_coords(u: FloatArray) -> None:
    """Raises DomainError unless every coordinate lies strictly inside (0, 1)."""
    if u.shape[-1] != UNITARY_COORDS:
        raise DomainError(f"Expected {UNITARY_COORDS} coordinates per point, got {u.shape[-1]}")
    if np.any(u <= 0.0) or np.any(u >= 1.0) or not np.all(np.isfinite(u)):
        raise DomainError("Unitary coordinates must lie strictly inside (0, 1)")


def uniform_simplex(u: FloatArray) -> FloatArray:
    """Map (n, k-1) uniforms to (n, k) uniform points of the (k-1)-simplex."""
    n, r = u.shape
    out = np.empty((n, r + 1), dtype=np.float64)
    remaining = np.ones(n)
    for j in range(r):
        keep = u[:, j] ** (1.0 / (r - j))
        out[:, j] = remaining * (1.0 - keep)
        remaining = remaining * keep
    out[:, r] = remaining
    return out


def unit_vectors(moduli: FloatArray, phases: FloatArray) -> ComplexArray:
    """Unit vectors in C^k with real first component from (k-1) moduli and (k-1) phase coordinates."""
    p = uniform_simplex(moduli)
    v = np.sqrt(p).astype(np.complex128)
    v[:, 1:] *= np.exp(2j * np.pi * phases)
    return v


def householder(v: ComplexArray) -> ComplexArray:
    """Unitary reflectors H with H e1 = v for unit vectors v (n, k) with real v[:, 0] >= 0."""
    n, k = v.shape
    w = -v
    w[:, 0] += 1.0
    norm2 = 2.0 * (1.0 - v[:, 0].real)
    coef = np.divide(2.0, norm2, out=np.zeros(n), where=norm2 > PIVOT_TOLERANCE)
    return np.eye(k, dtype=np.complex128)[None, :, :] - coef[:, None, None] * np.einsum("ni,nj->nij", w, w.conj())


def unitaries_from_coords(u: FloatArray) -> ComplexArray:
    """Frames for a (n, 12) array of coordinates, returned as (n, 4, 4)."""
    u = np.atleast_2d(np.asarray(u, dtype=np.float64))
    check_unitary_coords(u)
    n = u.shape[0]
    h1 = householder(unit_vectors(u[:, 0:3], u[:, 3:6]))
    h2 = householder(unit_vectors(u[:, 6:8], u[:, 8:10]))
    h3 = householder(unit_vectors(u[:, 10:11], u[:, 11:12]))
    b2 = np.tile(np.eye(4, dtype=np.complex128), (n, 1, 1))
    b2[:, 1:, 1:] = h2
    b3 = np.tile(np.eye(4, dtype=np.complex128), (n, 1, 1))
    b3[:, 2:, 2:] = h3
    return h1 @ b2 @ b3


def unitary_from_coords(u: UnitaryCoords) -> CosetUnitary:
    """The eigenvector frame of one coordinate vector."""
    return CosetUnitary(matrix=unitaries_from_coords(np.asarray(u.values)[None, :])[0])


def gaussian_haar_unitaries(rng: np.random.Generator, n: int, dim: int = 4) -> ComplexArray:
    """Pseudo-random Haar unitaries from QR of standard complex Gaussian matrices."""
    z = (rng.standard_normal((n, dim, dim)) + 1j * rng.standard_normal((n, dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=1, axis2=2)
    return q * (d / np.abs(d))[:, None, :]
