"""QMC estimation pipelines.

Each run maps stream indices to a fixed set of per-index fields, reduces
them into an ``EstimatorState`` chunk by chunk, and turns the exact totals
into an ``EstimateReport``:

- volume: 12 frame + 3 angle coordinates; weight = SD element x chain Jacobian
- boundary-separable: 12 frame + 2 angle coordinates; the third angle is
  scanned for zeros of det(rho^{T_B}) and every zero contributes the volume
  weight per unit of the rescaled third coordinate (dtheta_3/dt = pi/2),
  divided by pi
- haar-oracle: pseudo-random Haar frames and uniform angles, weighted as volume
"""

import math
import time
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from pydantic import BaseModel

from qubitsep.estimation.accumulators import EstimatorState, batch_ratio_se, block_sums
from qubitsep.estimation.checkpoint import resume, save_checkpoint
from qubitsep.estimation.models import (
    UNITARY_DIMS,
    Estimate,
    EstimateReport,
    RunConfig,
    RunType,
    build_config,
    reference_delta,
)
from qubitsep.estimation.parallel import ChunkResult, ChunkTask, partition, run_chunks
from qubitsep.estimation.sample_dump import SampleDump
from qubitsep.exceptions import ConfigurationError, SingularWeightError
from qubitsep.geometry.density import assemble_densities
from qubitsep.geometry.spectrum import HALF_PI, angle_region_measures, chain_jacobians, chain_spectra
from qubitsep.geometry.unitary import gaussian_haar_unitaries, unitaries_from_coords
from qubitsep.measures.bures import (
    SIMPLEX_LEVELS,
    MetricConvention,
    boundary_restricted_integral,
    conditional_densities,
    simplex_constant,
    simplex_constant_qmc,
)
from qubitsep.measures.constants import reference_constants
from qubitsep.measures.separability import classify_batch, partial_transposes
from qubitsep.sequences import HaltonStream, Scrambling, make_permutations
from qubitsep.types import ComplexArray, FloatArray, IntArray
from qubitsep.utils.hashing import config_hash
from qubitsep.utils.logging import logger

HAAR_TRUNCATED = math.pi**6 / 96
ROOT_TOLERANCE = 1e-10
# a root at t = theta_3 / (pi/2) adds w x dtheta_3/dt / pi
ROOT_WEIGHT = HALF_PI / math.pi
# sample points where det PT is a quartic in x = sin^2(theta_3)
_QUARTIC_NODES = np.linspace(0.0, 1.0, 5)
_QUARTIC_INVERSE = np.linalg.inv(np.vander(_QUARTIC_NODES, 5))

VOLUME_FIELDS = (
    "points",
    "w",
    "w_sep",
    "w_neg",
    "w_neg_undoubled",
    "w_conc",
    "separable",
    "boundary_hits",
    "multi_negative_pt",
    "sign_mismatch",
)
BOUNDARY_FIELDS = ("points", "contribution", "roots", "has_root")


def volume_scale(metric: MetricConvention) -> float:
    """Ratio of a 4-level volume in ``metric`` to its SD value."""
    return metric.scale_from_sd(4)


@lru_cache(maxsize=8)
def _stream(scramble: Scrambling, seed: Optional[int], dimension: int, skip: int) -> HaltonStream:
    return HaltonStream(make_permutations(scramble, dimension, seed), start_index=skip + 1)


def stream_for(cfg: RunConfig) -> HaltonStream:
    return _stream(cfg.scramble, cfg.seed, cfg.dimension, cfg.skip)


def _weights(theta: FloatArray, metric: MetricConvention, first_index: int) -> tuple[FloatArray, FloatArray]:
    """Spectra and volume weights for (n, 3) angles; raises on a singular element."""
    spectra = chain_spectra(theta)
    density, singular = conditional_densities(spectra, metric)
    if singular.any():
        index = first_index + int(np.argmax(singular))
        raise SingularWeightError(f"Conditional density is singular at index {index}", index=index)
    return spectra, density * chain_jacobians(theta)


def _volume_fields(
    u: FloatArray, theta: FloatArray, metric: MetricConvention, first_index: int, frames: Optional[ComplexArray] = None
) -> tuple[FloatArray, FloatArray, FloatArray, dict]:
    spectra, w = _weights(theta, metric, first_index)
    unitaries = unitaries_from_coords(u) if frames is None else frames
    result = classify_batch(assemble_densities(unitaries, spectra))
    clear = ~result.boundary_hits
    mismatch = clear & ((result.determinants < 0) != (result.min_pt_eigenvalues < 0))
    values = np.column_stack(
        [
            np.ones_like(w),
            w,
            w * result.separable,
            w * result.negativity,
            w * result.negativity_undoubled,
            w * result.concurrence,
            result.separable,
            result.boundary_hits,
            result.negative_counts > 1,
            mismatch,
        ]
    ).astype(np.float64)
    return values, spectra, w, {"separable": result.separable, "negativity": result.negativity, "concurrence": result.concurrence}


def _volume_chunk(task: ChunkTask) -> tuple[FloatArray, Optional[FloatArray]]:
    cfg = task.cfg
    first_index = cfg.skip + 1 + task.offset
    points = stream_for(cfg).block(first_index, task.count)
    u = points[:, :UNITARY_DIMS]
    theta = points[:, UNITARY_DIMS:] * HALF_PI
    values, spectra, w, measures = _volume_fields(u, theta, cfg.metric, first_index)
    rows = None
    if task.with_rows:
        index = np.arange(first_index, first_index + task.count, dtype=np.float64)
        rows = np.column_stack(
            [index, points, spectra, w, measures["separable"], measures["negativity"], measures["concurrence"]]
        )
    return values, rows


def _oracle_chunk(task: ChunkTask) -> tuple[FloatArray, Optional[FloatArray]]:
    cfg = task.cfg
    bs = cfg.block_size or 1
    parts = []
    for start in range(task.offset, task.offset + task.count, bs):
        count = min(bs, task.offset + task.count - start)
        rng = np.random.default_rng(np.random.SeedSequence([cfg.seed or 0, start // bs]))
        frames = gaussian_haar_unitaries(rng, count)
        theta = rng.random((count, 3)) * HALF_PI
        values, *_ = _volume_fields(np.empty((count, 0)), theta, cfg.metric, cfg.skip + 1 + start, frames=frames)
        parts.append(values)
    return np.vstack(parts), None


def _pt_quartics(u: FloatArray, theta12: FloatArray) -> FloatArray:
    """Coefficients (highest degree first) of det PT as a quartic in x = sin^2(theta_3).

    rho(theta_3) = x R_a + (1 - x) R_4, with R_a built from the theta_3 = pi/2
    spectrum and R_4 the projector on the fourth frame column.
    """
    n = u.shape[0]
    frames = unitaries_from_coords(u)
    top = chain_spectra(np.column_stack([theta12, np.full(n, HALF_PI)]))
    bottom = np.zeros_like(top)
    bottom[:, 3] = 1.0
    pt_top = partial_transposes(assemble_densities(frames, top))
    pt_bottom = partial_transposes(assemble_densities(frames, bottom))
    x = _QUARTIC_NODES[None, :, None, None]
    stacked = pt_bottom[:, None] + x * (pt_top - pt_bottom)[:, None]
    dets = np.linalg.det(stacked).real
    return dets @ _QUARTIC_INVERSE.T


def _eval_quartic(coeffs: FloatArray, t: FloatArray) -> FloatArray:
    x = np.sin(t * HALF_PI) ** 2
    out = np.zeros_like(x)
    for j in range(coeffs.shape[-1]):
        out = out * x + coeffs[..., j]
    return out


def boundary_roots(u: FloatArray, theta12: FloatArray, cells: int = 64) -> tuple[IntArray, FloatArray]:
    """All sign changes of g(t) = det PT(rho(theta_3 = t pi/2)) on [0, 1].

    A grid of ``cells`` uniform cells locates sign changes (g = 0 counts as
    nonnegative) and each is refined by bisection to |dt| <= 1e-10.
    Returns (point index, root t) pairs ordered by point then t.
    """
    coeffs = _pt_quartics(u, theta12)
    grid = np.linspace(0.0, 1.0, cells + 1)
    negative = _eval_quartic(coeffs[:, None, :], grid[None, :]) < 0
    point, cell = np.nonzero(negative[:, :-1] != negative[:, 1:])
    lo, hi = grid[cell], grid[cell + 1]
    lo_negative = negative[point, cell]
    own = coeffs[point]
    while point.size and np.max(hi - lo) > ROOT_TOLERANCE:
        mid = 0.5 * (lo + hi)
        same = (_eval_quartic(own, mid) < 0) == lo_negative
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    return point, 0.5 * (lo + hi)


def find_boundary_roots(fixed: FloatArray | tuple[float, ...], cells: int = 64) -> list[float]:
    """Roots t in (0, 1) for one point of 12 frame + 2 angle coordinates (angles in [0, 1) units)."""
    coords = np.asarray(fixed, dtype=np.float64)
    if coords.shape != (UNITARY_DIMS + 2,):
        raise ConfigurationError(f"Expected {UNITARY_DIMS + 2} coordinates, got shape {coords.shape}")
    _, roots = boundary_roots(coords[None, :UNITARY_DIMS], coords[None, UNITARY_DIMS:] * HALF_PI, cells)
    return [float(t) for t in roots]


def _boundary_chunk(task: ChunkTask) -> tuple[FloatArray, Optional[FloatArray]]:
    cfg = task.cfg
    first_index = cfg.skip + 1 + task.offset
    points = stream_for(cfg).block(first_index, task.count)
    theta12 = points[:, UNITARY_DIMS:] * HALF_PI
    point, roots = boundary_roots(points[:, :UNITARY_DIMS], theta12, cfg.scan_cells)
    theta = np.column_stack([theta12[point], roots * HALF_PI])
    density, singular = conditional_densities(chain_spectra(theta), cfg.metric)
    if singular.any():
        index = first_index + int(point[np.argmax(singular)])
        raise SingularWeightError(f"Conditional density is singular at a root of index {index}", index=index)
    w = density * chain_jacobians(theta)
    n = task.count
    per_point = np.bincount(point, weights=w * ROOT_WEIGHT, minlength=n)
    counts = np.bincount(point, minlength=n).astype(np.float64)
    values = np.column_stack([np.ones(n), per_point, counts, counts > 0]).astype(np.float64)
    return values, None


_EVALUATORS: dict[RunType, Callable[[ChunkTask], tuple[FloatArray, Optional[FloatArray]]]] = {
    RunType.VOLUME: _volume_chunk,
    RunType.BOUNDARY_SEPARABLE: _boundary_chunk,
    RunType.HAAR_ORACLE: _oracle_chunk,
}

_FIELDS = {
    RunType.VOLUME: VOLUME_FIELDS,
    RunType.BOUNDARY_SEPARABLE: BOUNDARY_FIELDS,
    RunType.HAAR_ORACLE: VOLUME_FIELDS,
}


def evaluate_chunk(task: ChunkTask) -> ChunkResult:
    """Block sums (and optional dump rows) of one chunk; runs inside worker processes."""
    values, rows = _EVALUATORS[task.cfg.run_type](task)
    bs = task.cfg.block_size or 1
    return ChunkResult(first_block=task.offset // bs, sums=block_sums(values, bs), rows=rows)


def accumulate(cfg: RunConfig, resume_run: bool = False, dump: Optional[SampleDump] = None) -> tuple[RunConfig, EstimatorState]:
    """Evaluate every index of ``cfg`` not yet in the checkpoint and return the final state.

    Raises:
        ConfigurationError: if ``resume_run`` is set without a checkpoint path
        CheckpointError: if the checkpoint cannot be read, matched or written
        SingularWeightError: if a sample hits a singular element
    """
    if cfg.run_type not in _EVALUATORS:
        raise ConfigurationError(f"{cfg.run_type.value} is not a sampling run")
    if resume_run:
        if not cfg.checkpoint_path:
            raise ConfigurationError("--resume needs --checkpoint")
        cfg, state = resume(cfg.checkpoint_path, cfg)
    else:
        state = EstimatorState(config_hash=cfg.config_hash(), fields=_FIELDS[cfg.run_type], block_size=cfg.block_size or 1)
    logger.info("run %s hash=%s config=%s", cfg.run_type.value, state.config_hash, cfg.echo())
    tasks = partition(cfg, state.complete_prefix(), with_rows=dump is not None)
    for task, result in zip(tasks, run_chunks(evaluate_chunk, tasks, cfg.workers)):
        state.add_blocks(result.first_block, result.sums)
        if dump is not None and result.rows is not None:
            dump.write_rows(result.rows)
        if cfg.checkpoint_path:
            save_checkpoint(cfg.checkpoint_path, cfg, state)
        logger.debug("chunk at offset %d (%d points) done", task.offset, task.count)
    return cfg, state


def _milestones(cfg: RunConfig, state: EstimatorState, estimator: Callable[[Callable[[str], float]], dict[str, float]]) -> dict[str, dict[str, float]]:
    bs = cfg.block_size or 1
    out = {}
    for milestone in sorted(set(cfg.milestones)):
        upto = -(-milestone // bs)
        out[str(milestone)] = estimator(lambda name, upto=upto: state.total(name, upto))
    return out


def _volume_values(total: Callable[[str], float]) -> dict[str, float]:
    points, w = total("points"), total("w")
    factor = HALF_PI**3 * HAAR_TRUNCATED
    return {
        "V_total": factor * w / points,
        "V_sep": factor * total("w_sep") / points,
        "P_sep": total("w_sep") / w,
        "mean_negativity": total("w_neg") / w,
        "mean_negativity_undoubled": total("w_neg_undoubled") / w,
        "mean_concurrence": total("w_conc") / w,
    }


def volume_report(cfg: RunConfig, state: EstimatorState, wall_time_s: float = 0.0) -> EstimateReport:
    """Estimates, batch errors and reference deltas of a volume or oracle run."""
    values = _volume_values(state.total)
    batch = {name: state.batch_totals(name, cfg.batches) for name in ("points", "w", "w_sep", "w_neg", "w_neg_undoubled", "w_conc")}
    factor = HALF_PI**3 * HAAR_TRUNCATED
    se = {
        "V_total": factor * batch_ratio_se(batch["w"], batch["points"]),
        "V_sep": factor * batch_ratio_se(batch["w_sep"], batch["points"]),
        "P_sep": batch_ratio_se(batch["w_sep"], batch["w"]),
        "mean_negativity": batch_ratio_se(batch["w_neg"], batch["w"]),
        "mean_negativity_undoubled": batch_ratio_se(batch["w_neg_undoubled"], batch["w"]),
        "mean_concurrence": batch_ratio_se(batch["w_conc"], batch["w"]),
    }
    constants = reference_constants()
    scale = volume_scale(cfg.metric)
    references = {
        "V_total": constants.value("V_total") * scale,
        "V_sep": constants.value("V_sep_conjecture") * scale,
        "P_sep": constants.value("P_sep_conjecture"),
        "mean_negativity": constants.value("mean_negativity"),
        "mean_negativity_undoubled": constants.value("mean_negativity"),
        "mean_concurrence": constants.value("mean_concurrence"),
    }
    counts = {
        "points": state.points,
        "separable_points": int(state.total("separable")),
        "boundary_hits": int(state.total("boundary_hits")),
        "multi_negative_pt": int(state.total("multi_negative_pt")),
        "sign_mismatch": int(state.total("sign_mismatch")),
    }
    if counts["boundary_hits"]:
        logger.warning("%d samples had |det PT| <= 1e-14 and were classified separable", counts["boundary_hits"])
    return EstimateReport(
        run_type=cfg.run_type,
        config=cfg.echo(),
        config_hash=state.config_hash,
        estimates={name: Estimate(value=v, batch_se=se[name]) for name, v in values.items()},
        reference={name: reference_delta(values[name], ref) for name, ref in references.items()},
        counts=counts,
        milestones=_milestones(cfg, state, _volume_values),
        wall_time_s=wall_time_s,
    )


def _boundary_values(total: Callable[[str], float]) -> dict[str, float]:
    points = total("points")
    return {
        "A_sep": HALF_PI**2 * HAAR_TRUNCATED * total("contribution") / points,
        "root_point_fraction": total("has_root") / points,
        "mean_root_count": total("roots") / points,
    }


def boundary_report(cfg: RunConfig, state: EstimatorState, wall_time_s: float = 0.0) -> EstimateReport:
    values = _boundary_values(state.total)
    batch = {name: state.batch_totals(name, cfg.batches) for name in BOUNDARY_FIELDS}
    se = {
        "A_sep": HALF_PI**2 * HAAR_TRUNCATED * batch_ratio_se(batch["contribution"], batch["points"]),
        "root_point_fraction": batch_ratio_se(batch["has_root"], batch["points"]),
        "mean_root_count": batch_ratio_se(batch["roots"], batch["points"]),
    }
    constants = reference_constants()
    scale = volume_scale(cfg.metric)
    reference = {
        "A_sep": reference_delta(values["A_sep"], constants.value("A_sep_estimate") * scale),
        "A_sep_candidate_175": reference_delta(values["A_sep"], constants.value("A_sep_candidate_175") * scale),
        "A_sep_candidate_548": reference_delta(values["A_sep"], constants.value("A_sep_candidate_548") * scale),
        "root_point_fraction": reference_delta(values["root_point_fraction"], constants.value("root_point_fraction")),
        "mean_root_count": reference_delta(values["mean_root_count"], constants.value("mean_root_count")),
    }
    return EstimateReport(
        run_type=cfg.run_type,
        config=cfg.echo(),
        config_hash=state.config_hash,
        estimates={name: Estimate(value=v, batch_se=se[name]) for name, v in values.items()},
        reference=reference,
        counts={
            "points": state.points,
            "points_with_roots": int(state.total("has_root")),
            "roots_total": int(state.total("roots")),
        },
        milestones=_milestones(cfg, state, _boundary_values),
        wall_time_s=wall_time_s,
    )


def _expect(cfg: RunConfig, run_type: RunType) -> None:
    if cfg.run_type is not run_type:
        raise ConfigurationError(f"Expected a {run_type.value} configuration, got {cfg.run_type.value}")


def volume_run(cfg: RunConfig, resume_run: bool = False, dump: Optional[SampleDump] = None) -> EstimateReport:
    """Volume, separable volume, separability probability and mean entanglement."""
    _expect(cfg, RunType.VOLUME)
    started = time.perf_counter()
    cfg, state = accumulate(cfg, resume_run=resume_run, dump=dump)
    return volume_report(cfg, state, time.perf_counter() - started)


def haar_oracle_run(cfg: RunConfig, resume_run: bool = False) -> EstimateReport:
    """The volume estimators with pseudo-random Haar frames and uniform pseudo-random angles."""
    _expect(cfg, RunType.HAAR_ORACLE)
    started = time.perf_counter()
    cfg, state = accumulate(cfg, resume_run=resume_run)
    return volume_report(cfg, state, time.perf_counter() - started)


def separable_boundary_run(cfg: RunConfig, resume_run: bool = False) -> EstimateReport:
    """Area of the separable/entangled boundary from the roots of det PT along theta_3."""
    _expect(cfg, RunType.BOUNDARY_SEPARABLE)
    started = time.perf_counter()
    cfg, state = accumulate(cfg, resume_run=resume_run)
    return boundary_report(cfg, state, time.perf_counter() - started)


def total_boundary_area(metric: MetricConvention = MetricConvention.SD) -> EstimateReport:
    """4 x restricted integral (m = 4) x pi^6/96, against 142 pi^7/12285."""
    started = time.perf_counter()
    restricted = boundary_restricted_integral(4, metric)
    area = 4 * restricted * HAAR_TRUNCATED
    constants = reference_constants()
    scale = volume_scale(metric)
    config = {"run_type": RunType.BOUNDARY_TOTAL.value, "metric": metric.value, "multiplicity": 4}
    return EstimateReport(
        run_type=RunType.BOUNDARY_TOTAL,
        config=config,
        config_hash=config_hash(config),
        estimates={"A_total": Estimate(value=area), "restricted_integral": Estimate(value=restricted)},
        reference={
            "A_total": reference_delta(area, constants.value("A_total") * scale),
            "restricted_integral": reference_delta(restricted, constants.value("restricted_integral_m4") * scale),
        },
        wall_time_s=time.perf_counter() - started,
    )


class ResolutionStudy(BaseModel):
    """A_sep at several scan resolutions on one stream."""

    reference_cells: int
    a_sep: dict[str, float]
    max_relative_change: float
    reports: dict[str, EstimateReport]


def root_resolution_study(cfg: RunConfig, cells: tuple[int, ...] = (32, 64, 128), reference_cells: int = 64) -> ResolutionStudy:
    """Run the separable-boundary estimator at each grid resolution."""
    _expect(cfg, RunType.BOUNDARY_SEPARABLE)
    if reference_cells not in cells:
        cells = tuple(sorted(set(cells) | {reference_cells}))
    reports = {
        str(c): separable_boundary_run(build_config(**{**cfg.model_dump(), "scan_cells": c, "checkpoint_path": None}))
        for c in cells
    }
    a_sep = {key: report.value("A_sep") for key, report in reports.items()}
    base = a_sep[str(reference_cells)]
    change = max(abs(v - base) / abs(base) for v in a_sep.values()) if base else math.inf
    return ResolutionStudy(reference_cells=reference_cells, a_sep=a_sep, max_relative_change=change, reports=reports)


def angle_region_report(samples: int, seed: Optional[int] = 42, scramble: Scrambling = Scrambling.SEEDED) -> EstimateReport:
    """Lebesgue measures of the ordered-spectrum region and the narrower box by QMC over [0, pi/2]^3."""
    started = time.perf_counter()
    stream = HaltonStream(make_permutations(scramble, 3, seed))
    measures = angle_region_measures(stream, samples)
    config = {"run_type": RunType.ANGLE_REGIONS.value, "samples": samples, "seed": seed, "scramble": scramble.value}
    box = measures["box"]
    narrow_exact = (math.pi / 4) * (HALF_PI - math.acos(1 / math.sqrt(3))) * (math.pi / 6)
    return EstimateReport(
        run_type=RunType.ANGLE_REGIONS,
        config=config,
        config_hash=config_hash(config),
        estimates={name: Estimate(value=value) for name, value in measures.items()},
        reference={
            "ordered_region": reference_delta(measures["ordered_region"], 0.0564221),
            "narrow_box": reference_delta(measures["narrow_box"], narrow_exact),
            "ratio": reference_delta(measures["ratio"], 4.48593),
            "box": reference_delta(box, HALF_PI**3),
        },
        counts={"points": samples},
        wall_time_s=time.perf_counter() - started,
    )


def simplex_constant_report(
    m: int,
    metric: MetricConvention = MetricConvention.SD,
    samples: int = 1_000_000,
    seed: Optional[int] = 42,
    scramble: Scrambling = Scrambling.SEEDED,
    batches: int = 32,
) -> EstimateReport:
    """D_m by product Gauss quadrature for m <= 5, by QMC with a batch error beyond."""
    started = time.perf_counter()
    constants = reference_constants()
    config: dict = {"run_type": RunType.SIMPLEX_CONSTANT.value, "m": m, "metric": metric.value}
    if m in SIMPLEX_LEVELS:
        estimate = Estimate(value=simplex_constant(m, metric))
    else:
        if seed is None:
            raise ConfigurationError("QMC simplex constants need a seed")
        config.update({"samples": samples, "seed": seed, "scramble": scramble.value, "batches": batches})
        qmc = simplex_constant_qmc(m, samples, seed=seed, scramble=scramble, batches=batches, convention=metric)
        estimate = Estimate(value=qmc.value, batch_se=qmc.batch_se)
    name = f"D_{m}"
    reference = {}
    if name in constants.names():
        reference[name] = reference_delta(estimate.value, constants.value(name) * metric.scale_from_sd(m))
    return EstimateReport(
        run_type=RunType.SIMPLEX_CONSTANT,
        config=config,
        config_hash=config_hash(config),
        estimates={name: estimate},
        reference=reference,
        wall_time_s=time.perf_counter() - started,
    )
