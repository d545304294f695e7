"""Index-range partitioning over a process pool.

Chunks are handed out in index order and their results come back in the same
order, whatever the number of workers.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator, Optional, Sequence, TypeVar

from qubitsep.estimation.models import RunConfig
from qubitsep.types import FloatArray

R = TypeVar("R")


@dataclass(frozen=True)
class ChunkTask:
    """Run offsets ``[offset, offset + count)`` of ``cfg``; offset is block aligned."""

    cfg: RunConfig
    offset: int
    count: int
    with_rows: bool = False


@dataclass(frozen=True)
class ChunkResult:
    first_block: int
    sums: FloatArray
    rows: Optional[FloatArray] = None


def partition(cfg: RunConfig, start: int, with_rows: bool = False) -> list[ChunkTask]:
    """Chunks covering offsets ``start..samples-1``; ``start`` must be block aligned."""
    return [
        ChunkTask(cfg=cfg, offset=offset, count=min(cfg.chunk_size, cfg.samples - offset), with_rows=with_rows)
        for offset in range(start, cfg.samples, cfg.chunk_size)
    ]


def run_chunks(fn: Callable[[ChunkTask], R], tasks: Sequence[ChunkTask], workers: int) -> Iterator[R]:
    """Yield ``fn(task)`` for every task, in task order."""
    if workers <= 1 or len(tasks) <= 1:
        for task in tasks:
            yield fn(task)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(fn, tasks)
