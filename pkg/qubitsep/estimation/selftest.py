"""Exact-constant checks run by the ``selftest`` subcommand."""

import math
from typing import Callable

from pydantic import BaseModel

from qubitsep.geometry.spectrum import Spectrum
from qubitsep.measures.bures import boundary_restricted_integral, simplex_constant
from qubitsep.measures.constants import reference_constants
from qubitsep.measures.curvature import (
    equivalent_ball,
    levy_gromov_comparison,
    min_scalar_curvature,
    scalar_curvature,
    unit_ball_volume,
)
from qubitsep.utils.logging import logger


class SelfTestCheck(BaseModel):
    name: str
    value: float
    expected: float
    tolerance: float
    relative: bool
    passed: bool


class SelfTestReport(BaseModel):
    passed: bool
    checks: list[SelfTestCheck]


def _check(name: str, compute: Callable[[], float], expected: float, tolerance: float, relative: bool = True) -> SelfTestCheck:
    value = float(compute())
    error = abs(value - expected) / abs(expected) if relative else abs(value - expected)
    check = SelfTestCheck(
        name=name, value=value, expected=expected, tolerance=tolerance, relative=relative, passed=error <= tolerance
    )
    logger.info("selftest %s: %r (expected %r) %s", name, value, expected, "ok" if check.passed else "FAILED")
    return check


def run_selftest() -> SelfTestReport:
    """Quadrature constants, the restricted integral, curvature minimum and ball arithmetic."""
    constants = reference_constants()
    checks = [_check(f"D_{m}", lambda m=m: simplex_constant(m, rtol=1e-7), constants.value(f"D_{m}"), 1e-6) for m in range(2, 6)]
    restricted = boundary_restricted_integral(4)
    checks.append(_check("restricted_integral_m4", lambda: restricted, 0.871513859457, 1e-9, relative=False))
    checks.append(_check("A_total", lambda: 4 * restricted * math.pi**6 / 96, constants.value("A_total"), 1e-8))
    checks.append(_check("scalar_curvature_maximally_mixed", lambda: float(scalar_curvature(Spectrum((0.25,) * 4))), 570.0, 1e-12))
    checks.append(_check("min_scalar_curvature_m4", lambda: min_scalar_curvature(4), 570.0, 0.0))
    checks.append(_check("unit_ball_volume_d15", lambda: unit_ball_volume(15), constants.value("unit_ball_volume_d15"), 1e-12))
    total_ball = equivalent_ball(15, constants.value("V_total"))
    separable_ball = equivalent_ball(15, constants.value("V_sep_conjecture"))
    checks.append(_check("radius_V_total", lambda: total_ball.radius, 1.19682, 1e-5))
    checks.append(_check("area_V_total", lambda: total_ball.area, 70.7865, 1e-5))
    checks.append(_check("radius_V_sep", lambda: separable_ball.radius, 1.00583, 1e-5))
    checks.append(_check("area_V_sep", lambda: separable_ball.area, 6.20661, 1e-5))
    comparison = levy_gromov_comparison(constants.value("V_sep_conjecture"), constants.value("V_total"), 1.75414)
    checks.append(_check("levy_gromov_w", lambda: comparison.w, 1.31521, 5e-5))
    checks.append(_check("levy_gromov_ratio", lambda: comparison.ratio, 0.310581, 5e-5))
    return SelfTestReport(passed=all(c.passed for c in checks) and not comparison.holds, checks=checks)
