"""Volume elements, separability criteria, curvature and reference constants."""

from .bures import (
    MetricConvention,
    QmcEstimate,
    boundary_angle_elements,
    boundary_restricted_integral,
    conditional_densities,
    conditional_density,
    product_gauss,
    restricted_densities,
    simplex_constant,
    simplex_constant_qmc,
)
from .constants import ReferenceConstant, ReferenceConstants, reference_constants
from .curvature import (
    BallGeometry,
    ElementaryInvariants,
    IsoperimetricComparison,
    ball_geometry,
    equivalent_ball,
    levy_gromov_comparison,
    min_scalar_curvature,
    scalar_curvature,
)
from .separability import (
    EntanglementMeasures,
    PartialTranspose,
    classify_batch,
    concurrence,
    entanglement_measures,
    is_separable,
    negativity,
    partial_transpose,
)

__all__ = [
    "BallGeometry",
    "ElementaryInvariants",
    "EntanglementMeasures",
    "IsoperimetricComparison",
    "MetricConvention",
    "PartialTranspose",
    "QmcEstimate",
    "ReferenceConstant",
    "ReferenceConstants",
    "ball_geometry",
    "boundary_angle_elements",
    "boundary_restricted_integral",
    "classify_batch",
    "concurrence",
    "conditional_densities",
    "conditional_density",
    "entanglement_measures",
    "equivalent_ball",
    "is_separable",
    "levy_gromov_comparison",
    "min_scalar_curvature",
    "negativity",
    "partial_transpose",
    "product_gauss",
    "reference_constants",
    "restricted_densities",
    "scalar_curvature",
    "simplex_constant",
    "simplex_constant_qmc",
]
