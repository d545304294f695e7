"""Tests for primes, digit permutations and scrambled Halton streams."""

import numpy as np
import pytest

from qubitsep.exceptions import ConfigurationError
from qubitsep.sequences import HaltonStream, Scrambling, halton_block, halton_point, make_permutations, radical_inverse
from qubitsep.sequences.halton import digit_count, radical_inverse_array
from qubitsep.sequences.permutations import faure_permutation, seeded_permutation
from qubitsep.sequences.primes import PRIMES, first_primes


def test_first_primes():
    """The table starts at 2 and covers a 15-dimensional stream."""
    assert first_primes(5) == (2, 3, 5, 7, 11)
    assert first_primes(15)[-1] == 47


def test_first_primes_rejects_large_dimension():
    """Asking for more bases than the table holds is a configuration error."""
    with pytest.raises(ConfigurationError):
        first_primes(len(PRIMES) + 1)
    with pytest.raises(ConfigurationError):
        first_primes(0)


def test_digit_count_keeps_exact_doubles():
    """base**digits never exceeds 2**53 and one more digit would."""
    for base in (2, 3, 5, 47):
        k = digit_count(base)
        assert base**k <= 2**53 < base ** (k + 1)


class TestRadicalInverse:
    """Plain and scrambled van der Corput values."""

    def test_plain_base_two(self):
        """Identity digits reproduce the binary van der Corput sequence."""
        ident = list(range(2))
        assert [radical_inverse(i, 2, ident) for i in (1, 2, 3, 4)] == [0.5, 0.25, 0.75, 0.125]

    def test_plain_base_three(self):
        """3 = '10' in base 3 maps to 1/9."""
        ident = list(range(3))
        assert radical_inverse(1, 3, ident) == pytest.approx(1 / 3, abs=1e-15)
        assert radical_inverse(3, 3, ident) == pytest.approx(1 / 9, abs=1e-15)

    def test_scrambled_values_stay_inside_unit_interval(self):
        """A permutation moving 0 fills the dropped digits but never reaches 1."""
        perm = np.array([2, 0, 1])
        values = radical_inverse_array(np.arange(1, 2000), 3, perm)
        assert np.all(values > 0.0)
        assert np.all(values < 1.0)

    def test_array_matches_scalar(self):
        """The vectorised and scalar paths agree exactly."""
        perm = faure_permutation(7)
        indices = np.array([1, 17, 343, 123456789])
        expected = [radical_inverse(int(i), 7, perm) for i in indices]
        assert radical_inverse_array(indices, 7, perm).tolist() == expected

    def test_digit_map_length_is_checked(self):
        """A digit map of the wrong length is rejected."""
        with pytest.raises(ConfigurationError):
            radical_inverse(5, 3, [0, 1])


class TestPermutations:
    """Faure and seeded permutation families."""

    def test_faure_base_five(self):
        """Faure's recursion gives (0, 3, 2, 1, 4) in base 5."""
        assert faure_permutation(5).tolist() == [0, 3, 2, 1, 4]

    def test_faure_permutations_are_bijections(self):
        """Every stored prime gets a bijection."""
        perms = make_permutations(Scrambling.FAURE, 15)
        for base, perm in zip(perms.bases, perms.permutations):
            assert sorted(perm.tolist()) == list(range(base))

    def test_seeded_permutations_depend_only_on_seed_and_base(self):
        """The same (seed, base) always yields the same permutation."""
        assert np.array_equal(seeded_permutation(42, 47), seeded_permutation(42, 47))
        assert not np.array_equal(seeded_permutation(42, 47), seeded_permutation(43, 47))

    def test_seeded_needs_seed(self):
        """Seeded scrambling without a seed is a configuration error."""
        with pytest.raises(ConfigurationError):
            make_permutations(Scrambling.SEEDED, 3, None)
        with pytest.raises(ConfigurationError):
            make_permutations(Scrambling.SEEDED, 3, 2**64)

    def test_describe_echoes_provenance(self):
        """Identity streams drop the seed from their description."""
        assert make_permutations(Scrambling.IDENTITY, 2, 7).describe() == {"scramble": "none", "seed": None}
        assert make_permutations(Scrambling.SEEDED, 2, 7).describe() == {"scramble": "seeded", "seed": 7}


class TestHaltonStream:
    """Random access and streaming over Halton points."""

    def setup_method(self):
        """A seeded 15-dimensional stream."""
        self.stream = HaltonStream(make_permutations(Scrambling.SEEDED, 15, 42))

    def test_random_access_matches_streaming(self):
        """Points streamed in chunks equal points fetched one by one."""
        streamed = np.vstack(list(self.stream.stream(50, chunk=7)))
        direct = np.array([halton_point(i, self.stream) for i in range(1, 51)])
        assert np.array_equal(streamed, direct)

    def test_blocks_are_position_independent(self):
        """A block computed from any start agrees with a larger block on the overlap."""
        big = halton_block(self.stream, 1, 300)
        assert np.array_equal(halton_block(self.stream, 101, 50), big[100:150])

    def test_points_lie_in_open_cube(self):
        """Every coordinate lies strictly inside (0, 1)."""
        points = self.stream.block(1, 4096)
        assert points.shape == (4096, 15)
        assert np.all((points > 0.0) & (points < 1.0))

    def test_coordinates_are_equidistributed(self):
        """Coordinate means are close to 1/2 after 4096 points."""
        means = self.stream.block(1, 4096).mean(axis=0)
        assert np.all(np.abs(means - 0.5) < 0.01)

    def test_start_index_zero_rejected(self):
        """Index 0 is never emitted."""
        with pytest.raises(ConfigurationError):
            HaltonStream(self.stream.perms, start_index=0)
        with pytest.raises(ConfigurationError):
            self.stream.block(0, 4)

    def test_skip_shifts_the_stream(self):
        """A stream starting at index 11 begins with the 11th point."""
        shifted = HaltonStream(self.stream.perms, start_index=11)
        first = next(shifted.stream(1))
        assert np.array_equal(first[0], self.stream.point(11))
