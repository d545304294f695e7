"""Checkpoint files: block sums written as exact hexadecimal floats."""

import json
import os
from pathlib import Path
from typing import Any

import numpy as np

from qubitsep.estimation.accumulators import EstimatorState
from qubitsep.estimation.models import RunConfig
from qubitsep.exceptions import CheckpointError
from qubitsep.utils.logging import logger

CHECKPOINT_VERSION = 1


def save_checkpoint(path: str | Path, cfg: RunConfig, state: EstimatorState) -> None:
    """Atomically write ``state`` to ``path``.

    Raises:
        CheckpointError: if the file cannot be written
    """
    path = Path(path)
    payload: dict[str, Any] = {
        "version": CHECKPOINT_VERSION,
        "config_hash": state.config_hash,
        "config": cfg.hashed_payload(),
        "block_size": state.block_size,
        "last_index": cfg.skip + state.complete_prefix(),
        "fields": list(state.fields),
        "blocks": {str(k): [float(x).hex() for x in state.blocks[k]] for k in sorted(state.blocks)},
    }
    tmp = path.with_name(path.name + ".tmp")
    try:
        tmp.write_text(json.dumps(payload), encoding="utf-8")
        os.replace(tmp, path)
    except OSError as exc:
        tmp.unlink(missing_ok=True)
        raise CheckpointError(f"Could not write checkpoint {path}: {exc}") from exc
    logger.info("checkpoint %s written at index %d", path, payload["last_index"])


def load_checkpoint(path: str | Path) -> tuple[dict[str, Any], EstimatorState]:
    """Read a checkpoint, returning its hashed config payload and state.

    Raises:
        CheckpointError: if the file is missing, corrupt or of another version
    """
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CheckpointError(f"Could not read checkpoint {path}: {exc}") from exc
    try:
        if payload["version"] != CHECKPOINT_VERSION:
            raise CheckpointError(f"Checkpoint {path} has version {payload['version']}, expected {CHECKPOINT_VERSION}")
        fields = tuple(payload["fields"])
        state = EstimatorState(
            config_hash=payload["config_hash"],
            fields=fields,
            block_size=int(payload["block_size"]),
            blocks={
                int(k): np.array([float.fromhex(x) for x in values], dtype=np.float64)
                for k, values in payload["blocks"].items()
            },
        )
        if any(len(v) != len(fields) for v in state.blocks.values()):
            raise CheckpointError(f"Checkpoint {path} has blocks of the wrong width")
        return payload["config"], state
    except (KeyError, TypeError, ValueError) as exc:
        raise CheckpointError(f"Checkpoint {path} is corrupt: {exc}") from exc


def resume(path: str | Path, cfg: RunConfig) -> tuple[RunConfig, EstimatorState]:
    """Load the state to continue ``cfg`` from ``path``.

    The reduction block size is taken from the checkpoint, so a run may be
    extended to more samples. A trailing partial block is dropped and
    evaluated again in full.

    Raises:
        CheckpointError: if the checkpoint belongs to a different configuration
    """
    saved_config, state = load_checkpoint(path)
    resumed = cfg.model_copy(update={"block_size": state.block_size})
    try:
        resumed = RunConfig(**resumed.model_dump())
    except ValueError as exc:
        raise CheckpointError(f"Checkpoint {path} cannot be extended to this run: {exc}") from exc
    if resumed.config_hash() != state.config_hash:
        raise CheckpointError(
            f"Checkpoint {path} was written by configuration {state.config_hash} ({saved_config}), "
            f"not {resumed.config_hash()}"
        )
    state.drop_partial_tail()
    if state.complete_prefix() > resumed.samples:
        raise CheckpointError(f"Checkpoint {path} already covers more than {resumed.samples} samples")
    logger.info("resuming %s from offset %d", path, state.complete_prefix())
    return resumed, state
