"""QMC estimation runs: configuration, deterministic reduction, checkpoints and reports."""

from .accumulators import EstimatorState, merge_states
from .checkpoint import load_checkpoint, resume, save_checkpoint
from .models import EstimateReport, RunConfig, RunType, build_config
from .pipelines import (
    ResolutionStudy,
    angle_region_report,
    find_boundary_roots,
    haar_oracle_run,
    root_resolution_study,
    separable_boundary_run,
    simplex_constant_report,
    total_boundary_area,
    volume_run,
)
from .sample_dump import SampleDump, read_dump
from .selftest import SelfTestReport, run_selftest

__all__ = [
    "EstimateReport",
    "EstimatorState",
    "ResolutionStudy",
    "RunConfig",
    "RunType",
    "SampleDump",
    "SelfTestReport",
    "angle_region_report",
    "build_config",
    "find_boundary_roots",
    "haar_oracle_run",
    "load_checkpoint",
    "merge_states",
    "read_dump",
    "resume",
    "root_resolution_study",
    "run_selftest",
    "save_checkpoint",
    "separable_boundary_run",
    "simplex_constant_report",
    "total_boundary_area",
    "volume_run",
]
