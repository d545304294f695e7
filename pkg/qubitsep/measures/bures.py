"""Conditional SD/Bures volume element over the eigenvalue simplex.

For an m-level spectrum the SD element is

    prod_{i<j} 4 (l_i - l_j)^2 / (l_i + l_j)  /  sqrt(prod_i l_i)

and the Bures element drops the factor 4 from every pair. Simplex integrals
are taken in the angle chain coordinates of ``qubitsep.geometry.spectrum`` so
that the domain is the box [0, pi/2]^(m-1); the chain Jacobian cancels the
inverse square root and the integrand stays bounded.
"""

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.special import roots_legendre

from qubitsep.exceptions import ConfigurationError, DomainError, QuadratureError
from qubitsep.geometry.spectrum import HALF_PI, chain_jacobians, chain_spectra
from qubitsep.sequences import HaltonStream, Scrambling, make_permutations
from qubitsep.types import BoolArray, FloatArray, MaybeSingular, SingularValue
from qubitsep.utils.logging import logger

SIMPLEX_LEVELS = range(2, 6)
RESTRICTED_LEVELS = range(2, 7)
QMC_LEVELS = range(2, 9)
SUM_TOLERANCE = 1e-12

# per-axis Gauss-Legendre orders, each about 1.5x the previous
GAUSS_ORDERS = (16, 24, 36, 54, 81, 122, 183, 274, 411, 617, 925, 1388, 2082, 3123)
# largest tensor grid evaluated
GAUSS_POINT_BUDGET = 2**26
_GAUSS_CHUNK = 2**18


class MetricConvention(str, Enum):
    """Normalisation of the volume element."""

    SD = "sd"
    BURES = "bures"

    @property
    def pair_factor(self) -> float:
        return 4.0 if self is MetricConvention.SD else 1.0

    def scale_from_sd(self, levels: int) -> float:
        """Factor turning an SD element for ``levels`` eigenvalues into this convention."""
        if self is MetricConvention.SD:
            return 1.0
        return 4.0 ** (-levels * (levels - 1) // 2)


def conditional_densities(
    spectra: FloatArray, convention: MetricConvention = MetricConvention.SD
) -> tuple[FloatArray, BoolArray]:
    """Vectorised element for (n, m) spectra.

    Returns the values and a mask of singular rows (some eigenvalue is 0).
    Singular rows hold 0.0 in the value array; callers decide what a
    singular row means for them.
    """
    spectra = np.atleast_2d(np.asarray(spectra, dtype=np.float64))
    n, m = spectra.shape
    upper_i, upper_j = np.triu_indices(m, 1)
    left, right = spectra[:, upper_i], spectra[:, upper_j]
    denom = left + right
    pairs = np.divide((left - right) ** 2, denom, out=np.zeros_like(denom), where=denom > 0)
    numerator = np.prod(convention.pair_factor * pairs, axis=1)
    volume = np.prod(spectra, axis=1)
    singular = volume <= 0.0
    values = np.zeros(n)
    regular = ~singular
    values[regular] = numerator[regular] / np.sqrt(volume[regular])
    return values, singular


def conditional_density(
    spectrum: FloatArray | tuple[float, ...], convention: MetricConvention = MetricConvention.SD
) -> MaybeSingular:
    """The element at one spectrum, or ``SingularValue`` when an eigenvalue vanishes.

    Raises:
        DomainError: for negative eigenvalues or a sum away from 1
    """
    values = np.asarray(spectrum, dtype=np.float64)
    if np.any(values < 0):
        raise DomainError(f"Eigenvalues must be nonnegative, got {tuple(values)}")
    if abs(values.sum() - 1.0) > SUM_TOLERANCE:
        raise DomainError(f"Eigenvalues must sum to 1, got {values.sum()!r}")
    density, singular = conditional_densities(values[None, :], convention)
    if singular[0]:
        return SingularValue(reason="zero eigenvalue")
    return float(density[0])


def restricted_densities(spectra: FloatArray, convention: MetricConvention = MetricConvention.SD) -> FloatArray:
    """Element with one extra eigenvalue pinned to 0, for (n, k) spectra of the other k.

    Each pair with the vanishing eigenvalue contributes 4 l_i (SD), and the
    vanishing eigenvalue leaves the square-root product, so the element is
    pair_factor^k prod(l) times the k-level element.
    """
    values, _ = conditional_densities(spectra, convention)
    k = spectra.shape[1]
    return (convention.pair_factor**k) * np.prod(spectra, axis=1) * values


def boundary_angle_elements(theta: FloatArray, convention: MetricConvention = MetricConvention.SD) -> FloatArray:
    """Limit of element x chain Jacobian as the first angle goes to 0, for (n, m-2) remaining angles.

    The first eigenvalue vanishes like sin^2(t_1) times the first entry of the
    reduced chain, so sin(2 t_1) / sqrt(lambda_1) leaves a factor 2 sqrt(l_1)
    next to the restricted element and the reduced chain Jacobian.
    """
    theta = np.atleast_2d(theta)
    spectra = chain_spectra(theta)
    return 2.0 * np.sqrt(spectra[:, 0]) * restricted_densities(spectra, convention) * chain_jacobians(theta)


def _box_integrand(density: Callable[[FloatArray], FloatArray]) -> Callable[[FloatArray], FloatArray]:
    def integrand(theta: FloatArray) -> FloatArray:
        return density(chain_spectra(theta)) * chain_jacobians(theta)

    return integrand


@lru_cache(maxsize=None)
def _legendre_rule(order: int) -> tuple[FloatArray, FloatArray]:
    nodes, weights = roots_legendre(order)
    return (nodes + 1.0) * (HALF_PI / 2), weights * (HALF_PI / 2)


def product_gauss(integrand: Callable[[FloatArray], FloatArray], dims: int, order: int) -> float:
    """Tensor Gauss-Legendre rule of ``order`` nodes per axis over [0, pi/2]^dims."""
    nodes, weights = _legendre_rule(order)
    size = order**dims
    partial = []
    for start in range(0, size, _GAUSS_CHUNK):
        digits = np.unravel_index(np.arange(start, min(size, start + _GAUSS_CHUNK)), (order,) * dims)
        theta = np.column_stack([nodes[d] for d in digits])
        weight = np.prod(np.column_stack([weights[d] for d in digits]), axis=1)
        partial.append(math.fsum(integrand(theta) * weight))
    return math.fsum(partial)


def _integrate_box(integrand: Callable[[FloatArray], FloatArray], dims: int, rtol: float, label: str) -> float:
    """Product Gauss rules of growing order until two successive estimates agree to ``rtol``.

    Integrands must be bounded on the box; kinks are allowed on its edges.
    """
    orders = [order for order in GAUSS_ORDERS if order**dims <= GAUSS_POINT_BUDGET]
    previous = product_gauss(integrand, dims, orders[0])
    change = math.inf
    for order in orders[1:]:
        estimate = product_gauss(integrand, dims, order)
        change = abs(estimate - previous)
        logger.debug("%s: order=%d estimate=%r change=%r", label, order, estimate, change)
        if change <= rtol * abs(estimate):
            return estimate
        previous = estimate
    raise QuadratureError(f"{label} did not converge to rtol={rtol}", estimate=previous, error=change)


def simplex_constant(m: int, convention: MetricConvention = MetricConvention.SD, rtol: float = 1e-8) -> float:
    """D_m: the element integrated over the (m-1)-simplex by product Gauss rules.

    Raises:
        ConfigurationError: for m outside 2..5 (use ``simplex_constant_qmc`` beyond)
        QuadratureError: if the rules stop agreeing to ``rtol`` within the point budget
    """
    if m not in SIMPLEX_LEVELS:
        raise ConfigurationError(f"simplex_constant supports m in 2..5, got {m}")
    integrand = _box_integrand(lambda spectra: conditional_densities(spectra, convention)[0])
    return _integrate_box(integrand, m - 1, rtol, f"D_{m}")


def boundary_restricted_integral(m: int, convention: MetricConvention = MetricConvention.SD, rtol: float = 1e-10) -> float:
    """The first-angle limit of the m-level integrand, integrated over the remaining m-2 angles.

    Raises:
        ConfigurationError: for m outside 2..6
        QuadratureError: if the rules stop agreeing to ``rtol`` within the point budget
    """
    if m not in RESTRICTED_LEVELS:
        raise ConfigurationError(f"boundary_restricted_integral supports m in 2..6, got {m}")
    if m == 2:
        # no angles remain: the reduced spectrum is (1,)
        return float(2.0 * restricted_densities(np.ones((1, 1)), convention)[0])
    return _integrate_box(lambda theta: boundary_angle_elements(theta, convention), m - 2, rtol, f"restricted_{m}")


@dataclass(frozen=True)
class QmcEstimate:
    """A QMC mean with its batch dispersion."""

    value: float
    batch_se: float
    samples: int


def simplex_constant_qmc(
    m: int,
    samples: int,
    seed: int = 42,
    scramble: Scrambling = Scrambling.SEEDED,
    batches: int = 32,
    convention: MetricConvention = MetricConvention.SD,
) -> QmcEstimate:
    """D_m by quasi-Monte Carlo over the angle box, for levels beyond the product Gauss rules."""
    if m not in QMC_LEVELS:
        raise ConfigurationError(f"simplex_constant_qmc supports m in 2..8, got {m}")
    if samples < batches:
        raise ConfigurationError(f"Need at least {batches} samples, got {samples}")
    stream = HaltonStream(make_permutations(scramble, m - 1, seed))
    box = HALF_PI ** (m - 1)
    integrand = _box_integrand(lambda spectra: conditional_densities(spectra, convention)[0])
    edges = [b * samples // batches for b in range(batches + 1)]
    means = np.empty(batches)
    for b in range(batches):
        total = 0.0
        start = edges[b]
        while start < edges[b + 1]:
            count = min(65536, edges[b + 1] - start)
            total += math.fsum(integrand(stream.block(stream.start_index + start, count) * HALF_PI))
            start += count
        means[b] = box * total / (edges[b + 1] - edges[b])
    weights = np.diff(edges) / samples
    value = float(np.dot(weights, means))
    batch_se = float(np.std(means, ddof=1) / math.sqrt(batches))
    return QmcEstimate(value=value, batch_se=batch_se, samples=samples)
