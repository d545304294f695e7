"""Tests for run configuration, hashing and report serialisation."""

import json
import re

import pytest

from qubitsep.estimation.models import (
    Estimate,
    EstimateReport,
    RunType,
    build_config,
    default_block_size,
    reference_delta,
    render_json,
)
from qubitsep.exceptions import ConfigurationError
from qubitsep.utils.hashing import canonical_json, config_hash


def test_default_block_size():
    """Largest power of two up to 1024 that leaves one block per batch."""
    assert default_block_size(10**6, 32) == 1024
    assert default_block_size(1000, 32) == 16
    assert default_block_size(100, 32) == 2
    assert default_block_size(32, 32) == 1


def test_block_size_divides_milestones():
    """Milestones off a multiple of 1024 shrink the derived block to a power of two dividing them."""
    assert default_block_size(65_000_000, 32, [10_000_000, 20_000_000]) == 128
    assert default_block_size(1000, 8, [1000]) == 64
    cfg = build_config(samples=65_000_000, milestones=[10_000_000, 20_000_000])
    assert cfg.block_size == 128
    assert cfg.chunk_size % cfg.block_size == 0


class TestRunConfig:
    """Validation and derived fields of RunConfig."""

    def test_defaults(self):
        """Desk-scale defaults with a resolved block size."""
        cfg = build_config()
        assert cfg.run_type is RunType.VOLUME
        assert cfg.samples == 1_000_000
        assert cfg.seed == 42
        assert cfg.batches == 32
        assert cfg.block_size == 1024
        assert cfg.dimension == 15
        assert cfg.roles == {"unitary": list(range(12)), "angles": [12, 13, 14]}

    def test_boundary_stream_has_fourteen_coordinates(self):
        """The separable-boundary stream leaves out theta_3."""
        assert build_config(run_type=RunType.BOUNDARY_SEPARABLE).dimension == 14
        assert build_config(run_type=RunType.HAAR_ORACLE).dimension == 0

    def test_samples_must_fill_batches(self):
        """Fewer samples than batches is rejected."""
        with pytest.raises(ConfigurationError):
            build_config(samples=10, batches=32)

    def test_chunk_must_align_to_blocks(self):
        """Chunks are whole numbers of reduction blocks."""
        with pytest.raises(ConfigurationError):
            build_config(chunk_size=1000)

    def test_block_size_is_a_power_of_two(self):
        """Block sizes outside the powers of two up to 1024 are rejected."""
        with pytest.raises(ConfigurationError):
            build_config(block_size=3)
        with pytest.raises(ConfigurationError):
            build_config(block_size=2048)

    def test_milestones_align_to_blocks(self):
        """A milestone must end on a block boundary or at the last sample."""
        with pytest.raises(ConfigurationError):
            build_config(milestones=[100])
        cfg = build_config(samples=10_000, batches=8, milestones=[1024, 10_000])
        assert cfg.milestones == [1024, 10_000]

    def test_seeded_scrambling_needs_a_seed(self):
        """seed=None is only valid without seeded scrambling."""
        with pytest.raises(ConfigurationError):
            build_config(seed=None)
        assert build_config(seed=None, scramble="faure").seed is None

    def test_seed_range(self):
        """Seeds are 64-bit unsigned integers."""
        with pytest.raises(ConfigurationError):
            build_config(seed=-1)

    def test_config_is_frozen(self):
        """A resolved configuration cannot be mutated."""
        cfg = build_config()
        with pytest.raises(ValueError):
            cfg.samples = 5  # type: ignore[misc]


class TestConfigHash:
    """The hash covers exactly the fields that change an index's contribution."""

    def test_hash_format(self):
        """Sixteen lowercase hex digits."""
        assert re.fullmatch(r"[0-9a-f]{16}", build_config().config_hash())

    def test_hash_ignores_layout_fields(self):
        """Samples, chunk size, workers and checkpoint path leave the hash unchanged."""
        a = build_config(samples=4096, block_size=64, chunk_size=128, workers=1)
        b = build_config(samples=8192, block_size=64, chunk_size=256, workers=4, checkpoint_path="x.json")
        assert a.config_hash() == b.config_hash()

    def test_hash_tracks_numeric_fields(self):
        """Seed, metric and block size change the hash."""
        base = build_config(block_size=64)
        assert base.config_hash() != build_config(block_size=64, seed=7).config_hash()
        assert base.config_hash() != build_config(block_size=64, metric="bures").config_hash()
        assert base.config_hash() != build_config(block_size=128).config_hash()

    def test_canonical_json_sorts_keys(self):
        """Key order does not affect the hash."""
        assert canonical_json({"b": 1, "a": 2}) == '{"a":2,"b":1}'
        assert config_hash({"b": 1, "a": 2}) == config_hash({"a": 2, "b": 1})


class TestReportJson:
    """Report serialisation."""

    def test_floats_carry_seventeen_digits(self):
        """0.1 is written with 17 significant digits."""
        assert render_json({"x": 0.1}) == '{\n  "x": 0.10000000000000001\n}'

    def test_non_finite_values(self):
        """NaN and infinities use the JSON extensions Python reads back."""
        text = render_json({"a": float("nan"), "b": float("inf"), "c": [1, True, None]})
        parsed = json.loads(text)
        assert parsed["b"] == float("inf")
        assert parsed["c"] == [1, True, None]

    def test_deterministic_json_drops_timing(self):
        """Two reports differing only in wall time serialise identically."""
        cfg = build_config(samples=1024, batches=8)
        reports = [
            EstimateReport(
                run_type=RunType.VOLUME,
                config=cfg.echo(),
                config_hash=cfg.config_hash(),
                estimates={"V_total": Estimate(value=5.6, batch_se=0.01)},
                wall_time_s=t,
            )
            for t in (1.0, 2.0)
        ]
        assert reports[0].deterministic_json() == reports[1].deterministic_json()
        assert reports[0].to_json() != reports[1].to_json()
        assert "wall_time_s" not in json.loads(reports[0].deterministic_json())

    def test_reference_delta(self):
        """Absolute and relative deltas against a reference value."""
        delta = reference_delta(1.1, 1.0)
        assert delta.delta == pytest.approx(0.1)
        assert delta.relative_delta == pytest.approx(0.1)
