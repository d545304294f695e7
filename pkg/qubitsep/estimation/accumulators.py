"""Order-independent running sums for QMC runs.

Indices are grouped into fixed blocks aligned to the first index of the run.
Each block keeps the correctly rounded (``math.fsum``) sum of every field, and
batch or prefix totals are exact sums of block sums. A block is always
evaluated inside one chunk, so the result never depends on chunk size, worker
count or the order in which partial states are merged.
"""

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from qubitsep.exceptions import ConfigurationError
from qubitsep.types import FloatArray


def block_sums(values: FloatArray, block_size: int) -> FloatArray:
    """Correctly rounded column sums of consecutive ``block_size`` rows of ``values``."""
    count, nfields = values.shape
    nblocks = -(-count // block_size)
    out = np.empty((nblocks, nfields), dtype=np.float64)
    for b in range(nblocks):
        rows = values[b * block_size : (b + 1) * block_size]
        for f in range(nfields):
            out[b, f] = math.fsum(rows[:, f])
    return out


@dataclass
class EstimatorState:
    """Block sums of the per-index fields of one run, keyed by block id.

    Block ``k`` covers run offsets ``[k*block_size, (k+1)*block_size)``; the
    field ``points`` counts the indices a block has seen, so a partial block
    is recognisable.
    """

    config_hash: str
    fields: tuple[str, ...]
    block_size: int
    blocks: dict[int, FloatArray] = field(default_factory=dict)

    def __post_init__(self):
        if "points" not in self.fields:
            raise ConfigurationError("EstimatorState needs a 'points' field")

    @property
    def points(self) -> int:
        return int(self.total("points"))

    def add_blocks(self, first_block: int, sums: FloatArray) -> None:
        """Record consecutive block sums starting at ``first_block``.

        Raises:
            ConfigurationError: if a block id is already present
        """
        for offset, row in enumerate(sums):
            block_id = first_block + offset
            if block_id in self.blocks:
                raise ConfigurationError(f"Block {block_id} was already accumulated")
            self.blocks[block_id] = np.array(row, dtype=np.float64)

    def column(self, name: str, block_ids: Optional[Iterable[int]] = None) -> list[float]:
        j = self.fields.index(name)
        ids = sorted(self.blocks) if block_ids is None else block_ids
        return [float(self.blocks[k][j]) for k in ids if k in self.blocks]

    def total(self, name: str, upto_block: Optional[int] = None) -> float:
        """Exact sum of a field over all blocks, or over blocks with id < ``upto_block``."""
        ids = [k for k in self.blocks if upto_block is None or k < upto_block]
        return math.fsum(self.column(name, ids))

    def batch_totals(self, name: str, batches: int) -> FloatArray:
        """Per-batch exact sums; batch b holds blocks [b*K//B, (b+1)*K//B) of the K present."""
        ids = sorted(self.blocks)
        nblocks = len(ids)
        if nblocks < batches:
            raise ConfigurationError(f"{nblocks} blocks cannot fill {batches} batches")
        edges = [b * nblocks // batches for b in range(batches + 1)]
        return np.array([math.fsum(self.column(name, ids[edges[b] : edges[b + 1]])) for b in range(batches)])

    def complete_prefix(self) -> int:
        """Number of leading run offsets covered by full blocks with no gap."""
        k = 0
        while k in self.blocks and self.blocks[k][self.fields.index("points")] == self.block_size:
            k += 1
        return k * self.block_size

    def drop_partial_tail(self) -> None:
        """Forget blocks beyond the complete prefix, so they can be evaluated again in full."""
        keep = self.complete_prefix() // self.block_size
        for k in [k for k in self.blocks if k >= keep]:
            del self.blocks[k]

    def copy(self) -> "EstimatorState":
        return EstimatorState(
            config_hash=self.config_hash,
            fields=self.fields,
            block_size=self.block_size,
            blocks={k: v.copy() for k, v in self.blocks.items()},
        )


def merge_states(a: EstimatorState, b: EstimatorState) -> EstimatorState:
    """Union of two states covering disjoint index ranges.

    Raises:
        ConfigurationError: on differing config hashes, fields or block sizes, or overlapping blocks
    """
    if a.config_hash != b.config_hash:
        raise ConfigurationError(f"Cannot merge states of different runs ({a.config_hash} vs {b.config_hash})")
    if a.fields != b.fields or a.block_size != b.block_size:
        raise ConfigurationError("Cannot merge states with different fields or block sizes")
    overlap = set(a.blocks) & set(b.blocks)
    if overlap:
        raise ConfigurationError(f"States overlap in blocks {sorted(overlap)[:5]}")
    merged = a.copy()
    merged.blocks.update({k: v.copy() for k, v in b.blocks.items()})
    return merged


def batch_ratio_se(numer: FloatArray, denom: FloatArray) -> float:
    """Standard deviation of per-batch ratios over sqrt(batches)."""
    ratios = np.divide(numer, denom, out=np.zeros_like(numer), where=denom != 0)
    return float(np.std(ratios, ddof=1) / math.sqrt(len(ratios)))
