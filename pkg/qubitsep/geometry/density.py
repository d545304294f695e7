"""Two-qubit density matrices assembled from an eigenvector frame and a spectrum."""

from dataclasses import dataclass

import numpy as np

from qubitsep.exceptions import DomainError
from qubitsep.geometry.spectrum import Spectrum
from qubitsep.geometry.unitary import CosetUnitary
from qubitsep.types import ComplexArray, FloatArray

HERMITIAN_TOLERANCE = 1e-12
TRACE_TOLERANCE = 1e-12
PSD_TOLERANCE = 1e-10


@dataclass(frozen=True)
class DensityMatrix:
    """A 4x4 Hermitian, unit-trace, positive-semidefinite matrix."""

    matrix: ComplexArray

    def __post_init__(self):
        rho = np.asarray(self.matrix, dtype=np.complex128)
        if rho.shape != (4, 4):
            raise DomainError(f"Expected a 4x4 density matrix, got shape {rho.shape}")
        if np.max(np.abs(rho - rho.conj().T)) > HERMITIAN_TOLERANCE:
            raise DomainError("Density matrix is not Hermitian to 1e-12")
        trace = np.trace(rho).real
        if abs(trace - 1.0) > TRACE_TOLERANCE:
            raise DomainError(f"Density matrix has trace {trace!r}, expected 1")
        smallest = np.linalg.eigvalsh(rho)[0]
        if smallest < -PSD_TOLERANCE:
            raise DomainError(f"Density matrix has eigenvalue {smallest!r} below -1e-10")
        object.__setattr__(self, "matrix", rho)

    @classmethod
    def from_pure(cls, psi: ComplexArray) -> "DensityMatrix":
        """The projector onto the normalised vector ``psi``."""
        psi = np.asarray(psi, dtype=np.complex128)
        psi = psi / np.linalg.norm(psi)
        return cls(matrix=np.outer(psi, psi.conj()))


def assemble_densities(unitaries: ComplexArray, spectra: FloatArray) -> ComplexArray:
    """rho = U diag(lambda) U^dagger for stacks (n, 4, 4) and (n, 4)."""
    rho = np.einsum("nij,nj,nkj->nik", unitaries, spectra, unitaries.conj())
    # exact Hermitian symmetry for the eigensolvers downstream
    return 0.5 * (rho + rho.conj().transpose(0, 2, 1))


def assemble_density(u: CosetUnitary, s: Spectrum) -> DensityMatrix:
    """The state with eigenvectors the columns of ``u`` and eigenvalues ``s``."""
    if len(s) != 4:
        raise DomainError(f"Two-qubit states need 4 eigenvalues, got {len(s)}")
    rho = assemble_densities(np.asarray(u.matrix)[None, :, :], s.as_array()[None, :])[0]
    return DensityMatrix(matrix=rho)
