"""
Main module for running qubitsep experiments from the command line.

Every subcommand prints one report to standard output (JSON by default).
Diagnostics go to standard error. Exit status is 0 on success, 2 for usage
and configuration errors, 1 for numerical and checkpoint failures and for a
failing selftest.
"""

import argparse
import csv
import json
import sys
from typing import Any, Callable, Optional, Sequence

import numpy as np
from pydantic import BaseModel

from qubitsep.estimation.models import EstimateReport, RunType, build_config, render_float, render_json
from qubitsep.estimation.pipelines import (
    angle_region_report,
    haar_oracle_run,
    root_resolution_study,
    separable_boundary_run,
    simplex_constant_report,
    total_boundary_area,
    volume_run,
)
from qubitsep.estimation.sample_dump import SampleDump
from qubitsep.estimation.selftest import SelfTestReport, run_selftest
from qubitsep.exceptions import CheckpointError, ConfigurationError, DomainError, NumericalFailure, QubitSepError
from qubitsep.geometry.density import DensityMatrix
from qubitsep.geometry.spectrum import Spectrum
from qubitsep.measures.bures import MetricConvention
from qubitsep.measures.constants import reference_constants
from qubitsep.measures.curvature import levy_gromov_comparison, min_scalar_curvature, scalar_curvature
from qubitsep.measures.separability import DET_TIE_TOLERANCE, entanglement_measures, partial_transpose
from qubitsep.sequences.permutations import Scrambling
from qubitsep.types import is_singular

DEFAULT_SAMPLES = 1_000_000

# CLI flag -> RunConfig field
_RUN_FLAGS = {
    "samples": "samples",
    "seed": "seed",
    "scramble": "scramble",
    "skip": "skip",
    "chunks": "chunk_size",
    "workers": "workers",
    "batches": "batches",
    "metric": "metric",
    "checkpoint": "checkpoint_path",
    "milestones": "milestones",
    "block_size": "block_size",
}

Payload = BaseModel | dict[str, Any]


def parse_complex(text: str) -> complex:
    """Parse one matrix entry written as ``a+bi`` (``i`` or ``j`` accepted)."""
    cleaned = text.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(cleaned)
    except ValueError as exc:
        raise ConfigurationError(f"Cannot parse matrix entry {text!r}") from exc


def parse_density(text: str) -> DensityMatrix:
    """A density matrix from 16 comma-separated entries in row-major order."""
    entries = [parse_complex(part) for part in text.split(",")]
    if len(entries) != 16:
        raise ConfigurationError(f"Expected 16 matrix entries, got {len(entries)}")
    return DensityMatrix(matrix=np.array(entries, dtype=np.complex128).reshape(4, 4))


def _run_fields(args: argparse.Namespace) -> dict[str, Any]:
    return {field: getattr(args, flag) for flag, field in _RUN_FLAGS.items() if getattr(args, flag, None) is not None}


def cmd_constants(args: argparse.Namespace) -> Payload:
    constants = reference_constants()
    return {name: constants.lookup(name).model_dump(mode="json") for name in constants.names()}


def cmd_volume(args: argparse.Namespace) -> Payload:
    cfg = build_config(run_type=RunType.VOLUME, **_run_fields(args))
    if args.dump_samples:
        with SampleDump(args.dump_samples) as dump:
            return volume_run(cfg, resume_run=args.resume, dump=dump)
    return volume_run(cfg, resume_run=args.resume)


def cmd_oracle(args: argparse.Namespace) -> Payload:
    cfg = build_config(run_type=RunType.HAAR_ORACLE, **_run_fields(args))
    return haar_oracle_run(cfg, resume_run=args.resume)


def cmd_boundary_total(args: argparse.Namespace) -> Payload:
    return total_boundary_area(MetricConvention(args.metric or MetricConvention.SD.value))


def cmd_boundary_separable(args: argparse.Namespace) -> Payload:
    fields = _run_fields(args)
    cells = args.scan_cells or []
    if len(cells) > 1:
        if args.resume or args.checkpoint:
            raise ConfigurationError("a resolution study (several --scan-cells) does not checkpoint")
        cfg = build_config(run_type=RunType.BOUNDARY_SEPARABLE, **fields)
        return root_resolution_study(cfg, cells=tuple(cells))
    if cells:
        fields["scan_cells"] = cells[0]
    cfg = build_config(run_type=RunType.BOUNDARY_SEPARABLE, **fields)
    return separable_boundary_run(cfg, resume_run=args.resume)


def cmd_simplex_constant(args: argparse.Namespace) -> Payload:
    return simplex_constant_report(
        args.m,
        metric=MetricConvention(args.metric or MetricConvention.SD.value),
        samples=args.samples or DEFAULT_SAMPLES,
        seed=42 if args.seed is None else args.seed,
        scramble=Scrambling(args.scramble or Scrambling.SEEDED.value),
        batches=args.batches or 32,
    )


def cmd_regions(args: argparse.Namespace) -> Payload:
    return angle_region_report(
        args.samples or DEFAULT_SAMPLES,
        seed=42 if args.seed is None else args.seed,
        scramble=Scrambling(args.scramble or Scrambling.SEEDED.value),
    )


def cmd_classify(args: argparse.Namespace) -> Payload:
    rho = parse_density(args.matrix)
    pt = partial_transpose(rho)
    measures = entanglement_measures(rho)
    return {
        "verdict": "separable" if pt.determinant >= -DET_TIE_TOLERANCE else "entangled",
        "det_pt": pt.determinant,
        "boundary_hit": abs(pt.determinant) <= DET_TIE_TOLERANCE,
        "pt_spectrum": list(pt.spectrum),
        "negativity": measures.negativity,
        "negativity_undoubled": measures.negativity / 2,
        "concurrence": measures.concurrence,
    }


def cmd_curvature(args: argparse.Namespace) -> Payload:
    spectrum = Spectrum(tuple(args.eigenvalues))
    value = scalar_curvature(spectrum)
    minimum = min_scalar_curvature(4)
    if is_singular(value):
        return {"eigenvalues": list(spectrum.values), "scalar_curvature": None, "singular": value.reason, "minimum": minimum}
    return {
        "eigenvalues": list(spectrum.values),
        "scalar_curvature": value,
        "singular": None,
        "minimum": minimum,
        "excess": value - minimum,
    }


def cmd_isoperimetric(args: argparse.Namespace) -> Payload:
    values = args.values
    if not values:
        constants = reference_constants()
        values = [constants.value("V_sep_conjecture"), constants.value("V_total"), constants.value("A_sep_estimate")]
    elif len(values) != 3:
        raise ConfigurationError(f"isoperimetric takes V_sep V_total A_sep, got {len(values)} values")
    comparison = levy_gromov_comparison(*values)
    payload = comparison.model_dump(mode="json")
    payload["verdict"] = "holds" if comparison.holds else "fails"
    return payload


def cmd_selftest(args: argparse.Namespace) -> Payload:
    return run_selftest()


def emit(payload: Payload, output: str = "json") -> None:
    """Write ``payload`` to standard output."""
    if output == "csv":
        if not isinstance(payload, EstimateReport):
            raise ConfigurationError("--output csv is only available for single estimation reports")
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(["name", "value", "batch_se", "reference", "delta", "relative_delta"])
        for name, estimate in payload.estimates.items():
            ref = payload.reference.get(name)
            row = [estimate.value, estimate.batch_se] + ([ref.value, ref.delta, ref.relative_delta] if ref else [None] * 3)
            writer.writerow([name] + ["" if x is None else render_float(x) for x in row])
        return
    if isinstance(payload, EstimateReport):
        sys.stdout.write(payload.to_json())
        return
    data = payload.model_dump(mode="json") if isinstance(payload, BaseModel) else payload
    sys.stdout.write(render_json(data) + "\n")


def _add_stream_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--samples", type=int, help="number of QMC points")
    parser.add_argument("--seed", type=int, help="scrambling seed (default 42)")
    parser.add_argument("--scramble", choices=[s.value for s in Scrambling], help="digit scrambling (default seeded)")
    parser.add_argument("--batches", type=int, help="batches for the error estimate (default 32)")
    parser.add_argument("--metric", choices=[m.value for m in MetricConvention], help="volume normalisation (default sd)")


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    _add_stream_flags(parser)
    parser.add_argument("--skip", type=int, help="leading stream indices to skip")
    parser.add_argument("--chunks", type=int, help="indices per chunk (default 65536)")
    parser.add_argument("--workers", type=int, help="worker processes (default 1)")
    parser.add_argument("--checkpoint", help="checkpoint file written after every chunk")
    parser.add_argument("--resume", action="store_true", help="continue from --checkpoint")
    parser.add_argument("--milestones", type=int, nargs="+", help="also report estimates after these sample counts")
    parser.add_argument("--block-size", type=int, help="reduction block, a power of two up to 1024 (default: derived)")
    parser.add_argument("--output", choices=["json", "csv"], default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qubitsep-experiments",
        description="Estimate two-qubit SD/Bures volumes, separability probability and boundary areas",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, handler: Callable[[argparse.Namespace], Payload], help_text: str) -> argparse.ArgumentParser:
        command = sub.add_parser(name, help=help_text)
        command.set_defaults(handler=handler)
        return command

    add("constants", cmd_constants, "print the reference constants")

    volume = add("volume", cmd_volume, "volume, separable volume, P_sep and mean entanglement")
    _add_run_flags(volume)
    volume.add_argument("--dump-samples", help="CSV file receiving one row per sample")

    _add_run_flags(add("oracle", cmd_oracle, "volume estimators with pseudo-random Haar frames"))

    boundary_total = add("boundary-total", cmd_boundary_total, "SD area of the boundary of the state space")
    boundary_total.add_argument("--metric", choices=[m.value for m in MetricConvention])
    boundary_total.add_argument("--output", choices=["json", "csv"], default="json")

    boundary_separable = add("boundary-separable", cmd_boundary_separable, "area of the separable/entangled boundary")
    _add_run_flags(boundary_separable)
    boundary_separable.add_argument(
        "--scan-cells", type=int, nargs="+", help="root-scan grid cells; several values run a resolution study"
    )

    simplex = add("simplex-constant", cmd_simplex_constant, "D_m, the volume element integrated over the simplex")
    simplex.add_argument("--m", type=int, required=True, help="number of levels (2..8; QMC from 6)")
    _add_stream_flags(simplex)
    simplex.add_argument("--output", choices=["json", "csv"], default="json")

    regions = add("regions", cmd_regions, "Lebesgue measures of the ordered-spectrum angle region")
    _add_stream_flags(regions)
    regions.add_argument("--output", choices=["json", "csv"], default="json")

    classify = add("classify", cmd_classify, "separability verdict and entanglement of one density matrix")
    classify.add_argument("matrix", help="16 comma-separated entries a+bi, row-major")

    curvature = add("curvature", cmd_curvature, "scalar curvature of the SD metric at a spectrum")
    curvature.add_argument("eigenvalues", type=float, nargs=4)

    isoperimetric = add("isoperimetric", cmd_isoperimetric, "Levy-Gromov comparison and equivalent balls")
    isoperimetric.add_argument("values", type=float, nargs="*", metavar="V", help="V_sep V_total A_sep")

    add("selftest", cmd_selftest, "check the exact constants")
    return parser


def _diagnose(exc: QubitSepError) -> None:
    print(json.dumps({"error": type(exc).__name__, "message": str(exc), **exc.details()}), file=sys.stderr)


def main(argv: Optional[Sequence[str]] = None) -> None:
    """Main entry point for running experiments."""
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload = args.handler(args)
        emit(payload, getattr(args, "output", "json"))
    except (ConfigurationError, DomainError) as exc:
        _diagnose(exc)
        sys.exit(2)
    except (NumericalFailure, CheckpointError) as exc:
        _diagnose(exc)
        sys.exit(1)
    if isinstance(payload, SelfTestReport) and not payload.passed:
        sys.exit(1)


if __name__ == "__main__":
    main()
