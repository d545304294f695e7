"""Tests for the partial-transpose criterion, negativity and concurrence."""

import numpy as np
import pytest

from qubitsep.exceptions import NumericalFailure
from qubitsep.geometry.density import DensityMatrix
from qubitsep.geometry.unitary import gaussian_haar_unitaries
from qubitsep.measures.separability import (
    classify_batch,
    concurrence,
    concurrences,
    entanglement_measures,
    is_separable,
    negativity,
    partial_transpose,
    partial_transposes,
)
from tests.conftest import random_states


def test_bell_state(bell_state):
    """|Phi+> is entangled with negativity and concurrence 1 and det PT = -1/16."""
    pt = partial_transpose(bell_state)
    assert pt.determinant == pytest.approx(-1 / 16, abs=1e-15)
    assert pt.spectrum == pytest.approx((-0.5, 0.5, 0.5, 0.5), abs=1e-15)
    assert pt.negative_count == 1
    assert not is_separable(bell_state)
    assert negativity(bell_state) == pytest.approx(1.0, abs=1e-14)
    assert concurrence(bell_state) == pytest.approx(1.0, abs=1e-6)


def test_maximally_mixed(maximally_mixed):
    """I/4 is separable with det PT = 1/256 and no entanglement."""
    assert partial_transpose(maximally_mixed).determinant == pytest.approx(1 / 256, rel=1e-14)
    assert is_separable(maximally_mixed)
    measures = entanglement_measures(maximally_mixed)
    assert measures.negativity == 0.0
    assert measures.concurrence == 0.0


def test_product_state_is_a_boundary_tie(product_state):
    """|00> has det PT = 0, which counts as separable."""
    batch = classify_batch(product_state.matrix[None, :, :])
    assert batch.boundary_hits[0]
    assert batch.separable[0]
    assert is_separable(product_state)


@pytest.mark.parametrize("p", [0.0, 0.2, 0.3, 0.4, 0.7, 1.0])
def test_werner_family(werner, p):
    """Werner states are entangled iff p > 1/3 with N = C = max(0, (3p - 1)/2)."""
    rho = werner(p)
    expected = max(0.0, (3 * p - 1) / 2)
    assert is_separable(rho) == (p <= 1 / 3)
    assert negativity(rho) == pytest.approx(expected, abs=1e-12)
    assert concurrence(rho) == pytest.approx(expected, abs=1e-6)


def test_partial_transpose_swaps_subsystem_b_indices():
    """rho^{T_B}[(a, b), (a', b')] = rho[(a, b'), (a', b)]."""
    rho = random_states(1, seed=11)[0]
    pt = partial_transposes(rho[None])[0]
    for a in range(2):
        for b in range(2):
            for a2 in range(2):
                for b2 in range(2):
                    assert pt[2 * a + b, 2 * a2 + b2] == rho[2 * a + b2, 2 * a2 + b]


class TestRandomStateProperties:
    """Properties checked over many random full-rank states."""

    def setup_method(self):
        """Ten thousand states from Haar frames and Dirichlet spectra."""
        self.rho = random_states(10_000, seed=3)
        self.batch = classify_batch(self.rho)

    def test_at_most_one_negative_pt_eigenvalue(self):
        """The partial transpose of a two-qubit state has at most one negative eigenvalue."""
        assert self.batch.negative_counts.max() <= 1

    def test_determinant_sign_matches_eigenvalue_sign(self):
        """det PT < 0 exactly when the smallest PT eigenvalue is negative."""
        clear = ~self.batch.boundary_hits
        assert np.array_equal((self.batch.determinants < 0)[clear], (self.batch.min_pt_eigenvalues < 0)[clear])

    def test_negativity_bounded_by_concurrence(self):
        """N <= C for every two-qubit state."""
        assert np.all(self.batch.negativity <= self.batch.concurrence + 1e-10)

    def test_undoubled_negativity(self):
        """The undoubled negativity is half the reported one."""
        assert np.array_equal(self.batch.negativity, 2.0 * self.batch.negativity_undoubled)

    def test_entanglement_vanishes_on_separable_states(self):
        """Separable states have zero negativity."""
        sep = self.batch.separable & ~self.batch.boundary_hits
        assert np.all(self.batch.negativity[sep] == 0.0)

    def test_local_unitary_invariance(self):
        """Local unitaries change neither the verdict nor the concurrence."""
        rng = np.random.default_rng(4)
        ua = gaussian_haar_unitaries(rng, len(self.rho), dim=2)
        ub = gaussian_haar_unitaries(rng, len(self.rho), dim=2)
        local = np.einsum("nij,nkl->nikjl", ua, ub).reshape(-1, 4, 4)
        rotated = local @ self.rho @ local.conj().transpose(0, 2, 1)
        other = classify_batch(rotated)
        clear = np.abs(self.batch.determinants) > 1e-12
        assert np.array_equal(other.separable[clear], self.batch.separable[clear])
        assert np.allclose(other.concurrence, self.batch.concurrence, atol=1e-8)


def test_concurrence_rejects_non_positive_input():
    """A matrix with an eigenvalue below -1e-10 is a numerical failure."""
    bad = np.diag([0.6, 0.6, 0.1, -0.3]).astype(np.complex128)
    with pytest.raises(NumericalFailure):
        concurrences(bad[None])


def test_single_state_api_matches_batch():
    """Scalar and batch entry points agree."""
    rho = DensityMatrix(matrix=random_states(1, seed=9)[0])
    batch = classify_batch(rho.matrix[None])
    assert concurrence(rho) == batch.concurrence[0]
    assert negativity(rho) == pytest.approx(batch.negativity[0], abs=1e-15)
    assert is_separable(rho) == bool(batch.separable[0])
