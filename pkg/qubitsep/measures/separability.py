"""Partial-transpose separability test, negativity and concurrence for two qubits.

For 4x4 states the partial transpose has at most one negative eigenvalue, so
the sign of its determinant decides separability. Determinants and Hermitian
spectra come from numpy's batched LAPACK routines.
"""

from dataclasses import dataclass

import numpy as np

from qubitsep.exceptions import NumericalFailure
from qubitsep.geometry.density import PSD_TOLERANCE, DensityMatrix
from qubitsep.types import BoolArray, ComplexArray, FloatArray

# |det PT| at or below this is a boundary hit, classified separable
DET_TIE_TOLERANCE = 1e-14

SIGMA_YY = np.array(
    [
        [0, 0, 0, -1],
        [0, 0, 1, 0],
        [0, 1, 0, 0],
        [-1, 0, 0, 0],
    ],
    dtype=np.complex128,
)


@dataclass(frozen=True)
class PartialTranspose:
    """rho^{T_B} with its spectrum (ascending) and determinant."""

    matrix: ComplexArray
    spectrum: tuple[float, float, float, float]
    determinant: float

    @property
    def negative_count(self) -> int:
        return sum(1 for value in self.spectrum if value < 0)


@dataclass(frozen=True)
class EntanglementMeasures:
    negativity: float
    concurrence: float


@dataclass(frozen=True)
class SeparabilityBatch:
    """Per-state results for a stack of density matrices."""

    determinants: FloatArray
    min_pt_eigenvalues: FloatArray
    negative_counts: FloatArray
    separable: BoolArray
    boundary_hits: BoolArray
    negativity: FloatArray
    negativity_undoubled: FloatArray
    concurrence: FloatArray


def partial_transposes(rho: ComplexArray) -> ComplexArray:
    """Transpose every 2x2 block of a (n, 4, 4) stack: rho[(a,b),(a',b')] -> [(a,b'),(a',b)]."""
    n = rho.shape[0]
    return rho.reshape(n, 2, 2, 2, 2).transpose(0, 1, 4, 3, 2).reshape(n, 4, 4)


def pt_determinants(rho: ComplexArray) -> FloatArray:
    """det(rho^{T_B}) for a (n, 4, 4) stack, computed by LU rather than from eigenvalues."""
    return np.linalg.det(partial_transposes(rho)).real


def concurrences(rho: ComplexArray) -> FloatArray:
    """Wootters concurrence for a (n, 4, 4) stack.

    With rho = A A^dagger, the square roots of the spectrum of
    rho (sy x sy) rho* (sy x sy) are the singular values of A^T (sy x sy) A.

    Raises:
        NumericalFailure: if some rho has an eigenvalue below -1e-10
    """
    w, v = np.linalg.eigh(rho)
    smallest = w[:, 0].min() if w.size else 0.0
    if smallest < -PSD_TOLERANCE:
        raise NumericalFailure(f"Concurrence needs a positive semidefinite state, found eigenvalue {smallest!r}")
    a = v * np.sqrt(np.clip(w, 0.0, None))[:, None, :]
    m = np.einsum("nji,jk,nkl->nil", a, SIGMA_YY, a)
    s = np.linalg.svd(m, compute_uv=False)
    return np.maximum(0.0, s[:, 0] - s[:, 1] - s[:, 2] - s[:, 3])


def classify_batch(rho: ComplexArray, with_concurrence: bool = True) -> SeparabilityBatch:
    """Separability verdicts and entanglement measures for a (n, 4, 4) stack."""
    pt = partial_transposes(rho)
    dets = np.linalg.det(pt).real
    spectra = np.linalg.eigvalsh(pt)
    lowest = spectra[:, 0]
    undoubled = np.maximum(0.0, -lowest)
    return SeparabilityBatch(
        determinants=dets,
        min_pt_eigenvalues=lowest,
        negative_counts=(spectra < 0).sum(axis=1).astype(np.float64),
        separable=dets >= -DET_TIE_TOLERANCE,
        boundary_hits=np.abs(dets) <= DET_TIE_TOLERANCE,
        negativity=2.0 * undoubled,
        negativity_undoubled=undoubled,
        concurrence=concurrences(rho) if with_concurrence else np.zeros_like(dets),
    )


def partial_transpose(rho: DensityMatrix) -> PartialTranspose:
    """Blockwise transpose of ``rho`` with its eigenvalues and determinant."""
    pt = partial_transposes(np.asarray(rho.matrix)[None, :, :])[0]
    spectrum = np.linalg.eigvalsh(pt)
    return PartialTranspose(
        matrix=pt,
        spectrum=tuple(float(x) for x in spectrum),  # type: ignore[arg-type]
        determinant=float(np.linalg.det(pt).real),
    )


def is_separable(rho: DensityMatrix) -> bool:
    """True iff det(rho^{T_B}) >= 0, ties within 1e-14 counting as separable."""
    return bool(partial_transpose(rho).determinant >= -DET_TIE_TOLERANCE)


def negativity(rho: DensityMatrix) -> float:
    """2 max(0, -lambda_min(rho^{T_B})); Bell states score 1."""
    return 2.0 * max(0.0, -partial_transpose(rho).spectrum[0])


def concurrence(rho: DensityMatrix) -> float:
    return float(concurrences(np.asarray(rho.matrix)[None, :, :])[0])


def entanglement_measures(rho: DensityMatrix) -> EntanglementMeasures:
    return EntanglementMeasures(negativity=negativity(rho), concurrence=concurrence(rho))
