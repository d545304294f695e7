"""Pydantic models for run configuration and estimate reports."""

import json
import math
from enum import Enum
from typing import Any, ClassVar, Iterable, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from qubitsep.exceptions import ConfigurationError
from qubitsep.measures.bures import MetricConvention
from qubitsep.sequences.permutations import SEED_LIMIT, Scrambling
from qubitsep.utils.hashing import config_hash

# reduction blocks never exceed this many indices
MAX_BLOCK_SIZE = 1024
UNITARY_DIMS = 12


class RunType(str, Enum):
    """Kind of estimation run."""

    VOLUME = "volume"
    BOUNDARY_TOTAL = "boundary-total"
    BOUNDARY_SEPARABLE = "boundary-separable"
    HAAR_ORACLE = "haar-oracle"
    SIMPLEX_CONSTANT = "simplex-constant"
    ANGLE_REGIONS = "angle-regions"


_ANGLE_DIMS = {
    RunType.VOLUME: 3,
    RunType.BOUNDARY_SEPARABLE: 2,
}


def default_block_size(samples: int, batches: int, milestones: Iterable[int] = ()) -> int:
    """Largest power of two <= 1024 leaving at least one block per batch and dividing every milestone.

    A milestone equal to ``samples`` needs no alignment.
    """
    size = MAX_BLOCK_SIZE
    while size > 1 and size * batches > samples:
        size //= 2
    for milestone in milestones:
        if milestone != samples:
            while size > 1 and milestone % size:
                size //= 2
    return size


class RunConfig(BaseModel):
    """Resolved configuration of a QMC run.

    Only the fields listed in ``HASHED_FIELDS`` change the contribution of an
    index, so only they enter the configuration hash.
    """

    model_config = ConfigDict(frozen=True)

    run_type: RunType = RunType.VOLUME
    samples: int = Field(default=1_000_000, ge=1)
    seed: Optional[int] = 42
    scramble: Scrambling = Scrambling.SEEDED
    metric: MetricConvention = MetricConvention.SD
    chunk_size: int = Field(default=65_536, ge=1)
    batches: int = Field(default=32, ge=2)
    skip: int = Field(default=0, ge=0)
    workers: int = Field(default=1, ge=1)
    scan_cells: int = Field(default=64, ge=2)
    block_size: Optional[int] = None  # resolved from samples and batches when omitted
    checkpoint_path: Optional[str] = None
    milestones: list[int] = Field(default_factory=list)

    HASHED_FIELDS: ClassVar[tuple[str, ...]] = ("run_type", "seed", "scramble", "metric", "batches", "skip", "scan_cells", "block_size")

    @field_validator("seed")
    @classmethod
    def _seed_in_range(cls, value: Optional[int]) -> Optional[int]:
        if value is not None and not 0 <= value < SEED_LIMIT:
            raise ValueError(f"seed must lie in [0, 2**64), got {value}")
        return value

    @field_validator("block_size")
    @classmethod
    def _block_is_power_of_two(cls, value: Optional[int]) -> Optional[int]:
        if value is not None and (value < 1 or value > MAX_BLOCK_SIZE or value & (value - 1)):
            raise ValueError(f"block_size must be a power of two in [1, {MAX_BLOCK_SIZE}], got {value}")
        return value

    @model_validator(mode="before")
    @classmethod
    def _resolve_block_size(cls, data: Any) -> Any:
        if isinstance(data, dict) and data.get("block_size") is None:
            samples = int(data.get("samples", cls.model_fields["samples"].default))
            batches = int(data.get("batches", cls.model_fields["batches"].default))
            milestones = [int(m) for m in data.get("milestones") or ()]
            data = {**data, "block_size": default_block_size(samples, batches, milestones)}
        return data

    @model_validator(mode="after")
    def _check_layout(self) -> "RunConfig":
        if self.samples < self.batches:
            raise ValueError(f"samples ({self.samples}) must be at least batches ({self.batches})")
        if self.block_size is None:
            raise ValueError("block_size was not resolved")
        if self.chunk_size % self.block_size:
            raise ValueError(f"chunk_size ({self.chunk_size}) must be a multiple of the reduction block ({self.block_size})")
        if math.ceil(self.samples / self.block_size) < self.batches:
            raise ValueError(f"{self.samples} samples in blocks of {self.block_size} do not fill {self.batches} batches")
        for milestone in self.milestones:
            if not 0 < milestone <= self.samples or (milestone % self.block_size and milestone != self.samples):
                raise ValueError(f"milestone {milestone} must lie in (0, samples] on a multiple of {self.block_size}")
        if self.scramble is Scrambling.SEEDED and self.seed is None:
            raise ValueError("seeded scrambling needs a seed")
        return self

    @property
    def dimension(self) -> int:
        """Stream dimension: 12 unitary coordinates plus the angle coordinates."""
        if self.run_type not in _ANGLE_DIMS:
            return 0
        return UNITARY_DIMS + _ANGLE_DIMS[self.run_type]

    @property
    def roles(self) -> dict[str, list[int]]:
        """Which stream coordinates feed the frame and which feed the angles."""
        if self.dimension == 0:
            return {}
        return {"unitary": list(range(UNITARY_DIMS)), "angles": list(range(UNITARY_DIMS, self.dimension))}

    def hashed_payload(self) -> dict[str, Any]:
        dump = self.model_dump(mode="json")
        return {name: dump[name] for name in self.HASHED_FIELDS}

    def config_hash(self) -> str:
        return config_hash(self.hashed_payload())

    def echo(self) -> dict[str, Any]:
        """The resolved configuration as embedded in reports."""
        dump = self.model_dump(mode="json")
        dump["dimension"] = self.dimension
        dump["roles"] = self.roles
        return dump


def build_config(**fields: Any) -> RunConfig:
    """RunConfig from keyword fields, turning validation failures into ConfigurationError."""
    try:
        return RunConfig(**fields)
    except ValidationError as exc:
        raise ConfigurationError(str(exc)) from exc


class Estimate(BaseModel):
    value: float
    batch_se: Optional[float] = None


class ReferenceDelta(BaseModel):
    value: float
    delta: float
    relative_delta: float


class EstimateReport(BaseModel):
    """Final estimates of a run.

    ``wall_time_s`` is the only field that differs between identical runs.
    """

    run_type: RunType
    config: dict[str, Any]
    config_hash: str
    estimates: dict[str, Estimate] = Field(default_factory=dict)
    reference: dict[str, ReferenceDelta] = Field(default_factory=dict)
    counts: dict[str, int] = Field(default_factory=dict)
    milestones: dict[str, dict[str, float]] = Field(default_factory=dict)
    wall_time_s: float = 0.0

    def value(self, name: str) -> float:
        return self.estimates[name].value

    def to_json(self) -> str:
        """JSON with every float written to 17 significant digits."""
        return render_json(self.model_dump(mode="json")) + "\n"

    def deterministic_json(self) -> str:
        """``to_json`` without the timing field."""
        payload = self.model_dump(mode="json")
        payload.pop("wall_time_s")
        return render_json(payload) + "\n"


def reference_delta(estimate: float, reference: float) -> ReferenceDelta:
    delta = estimate - reference
    return ReferenceDelta(value=reference, delta=delta, relative_delta=delta / reference if reference else math.inf)


def render_float(value: float) -> str:
    if math.isnan(value):
        return "NaN"
    if math.isinf(value):
        return "Infinity" if value > 0 else "-Infinity"
    return format(value, ".17g")


def render_json(value: Any, level: int = 0) -> str:
    """Indented JSON; floats carry 17 significant digits."""
    pad = "  " * (level + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {render_json(v, level + 1)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * level + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        return "[" + ", ".join(render_json(v, level + 1) for v in value) + "]"
    if isinstance(value, bool) or value is None:
        return json.dumps(value)
    if isinstance(value, float):
        return render_float(value)
    return json.dumps(value)
