"""Shared test fixtures for qubitsep tests."""

import numpy as np
import pytest

from qubitsep.estimation.models import RunConfig, RunType, build_config
from qubitsep.geometry.density import DensityMatrix, assemble_densities
from qubitsep.geometry.unitary import gaussian_haar_unitaries

BELL_PHI_PLUS = np.array([1.0, 0.0, 0.0, 1.0], dtype=np.complex128) / np.sqrt(2.0)


def werner_matrix(p: float) -> np.ndarray:
    """p |Phi+><Phi+| + (1 - p) I/4."""
    return p * np.outer(BELL_PHI_PLUS, BELL_PHI_PLUS.conj()) + (1.0 - p) * np.eye(4) / 4.0


def random_states(count: int, seed: int = 0) -> np.ndarray:
    """Full-rank states from Gaussian Haar frames and Dirichlet spectra, as a (count, 4, 4) stack."""
    rng = np.random.default_rng(seed)
    frames = gaussian_haar_unitaries(rng, count)
    spectra = rng.dirichlet(np.ones(4), size=count)
    return assemble_densities(frames, spectra)


@pytest.fixture
def bell_state() -> DensityMatrix:
    """The maximally entangled state |Phi+>."""
    return DensityMatrix.from_pure(BELL_PHI_PLUS)


@pytest.fixture
def maximally_mixed() -> DensityMatrix:
    """I/4."""
    return DensityMatrix(matrix=np.eye(4, dtype=np.complex128) / 4.0)


@pytest.fixture
def product_state() -> DensityMatrix:
    """The pure product state |00>."""
    return DensityMatrix.from_pure(np.array([1.0, 0.0, 0.0, 0.0]))


@pytest.fixture
def werner():
    """Factory for Werner states of mixing parameter p."""

    def _make(p: float) -> DensityMatrix:
        return DensityMatrix(matrix=werner_matrix(p))

    return _make


@pytest.fixture
def small_volume_config() -> RunConfig:
    """A 512-point volume run in 8 batches of 64-point blocks."""
    return build_config(run_type=RunType.VOLUME, samples=512, batches=8, block_size=64, chunk_size=128)


@pytest.fixture
def small_boundary_config() -> RunConfig:
    """A 256-point separable-boundary run on a coarse root grid."""
    return build_config(
        run_type=RunType.BOUNDARY_SEPARABLE, samples=256, batches=8, block_size=32, chunk_size=64, scan_cells=32
    )
