"""Coordinate charts from the unit hypercube to two-qubit density matrices."""

from .density import DensityMatrix, assemble_densities, assemble_density
from .spectrum import (
    EigenAngles,
    Spectrum,
    angle_jacobian,
    angle_region_measures,
    angles_from_spectra,
    chain_jacobians,
    chain_spectra,
    ordered_range_membership,
    spectrum_from_angles,
)
from .unitary import CosetUnitary, UnitaryCoords, gaussian_haar_unitaries, unitaries_from_coords, unitary_from_coords

__all__ = [
    "CosetUnitary",
    "DensityMatrix",
    "EigenAngles",
    "Spectrum",
    "UnitaryCoords",
    "angle_jacobian",
    "angle_region_measures",
    "angles_from_spectra",
    "assemble_densities",
    "assemble_density",
    "chain_jacobians",
    "chain_spectra",
    "gaussian_haar_unitaries",
    "ordered_range_membership",
    "spectrum_from_angles",
    "unitaries_from_coords",
    "unitary_from_coords",
]
