"""Tests for chunk partitioning and the worker pool."""

import pickle

import numpy as np
import pytest

from qubitsep.estimation.models import build_config
from qubitsep.estimation.parallel import ChunkTask, partition, run_chunks
from qubitsep.estimation.pipelines import evaluate_chunk
from qubitsep.exceptions import QuadratureError, SingularWeightError


def _offset_of(task: ChunkTask) -> int:
    return task.offset


def test_partition_covers_remaining_indices():
    """Chunks start at the resume point and the last one is short."""
    cfg = build_config(samples=1000, batches=4, block_size=64, chunk_size=256)
    tasks = partition(cfg, 128)
    assert [(t.offset, t.count) for t in tasks] == [(128, 256), (384, 256), (640, 256), (896, 104)]
    assert partition(cfg, 1000) == []


def test_results_come_back_in_task_order():
    """Two workers return results in the order the tasks were given."""
    cfg = build_config(samples=1024, batches=4, block_size=64, chunk_size=64)
    tasks = partition(cfg, 0)
    assert list(run_chunks(_offset_of, tasks, workers=2)) == [t.offset for t in tasks]


def test_chunk_results_do_not_depend_on_chunking():
    """One large chunk yields the same block sums as several small ones."""
    large = build_config(samples=256, batches=4, block_size=32, chunk_size=256)
    small = build_config(samples=256, batches=4, block_size=32, chunk_size=64)
    whole = evaluate_chunk(partition(large, 0)[0])
    pieces = [evaluate_chunk(task) for task in partition(small, 0)]
    assert whole.first_block == 0
    assert [p.first_block for p in pieces] == [0, 2, 4, 6]
    assert np.array_equal(whole.sums, np.vstack([p.sums for p in pieces]))


@pytest.mark.parametrize(
    "error",
    [SingularWeightError("singular", index=12), QuadratureError("no convergence", estimate=1.5, error=0.25)],
)
def test_errors_survive_pickling(error):
    """Errors raised in a worker keep their extra fields."""
    restored = pickle.loads(pickle.dumps(error))
    assert type(restored) is type(error)
    assert restored.details() == error.details()
    assert str(restored) == str(error)
