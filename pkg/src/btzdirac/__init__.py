"""Dirac field on BTZ black holes: geometry, radial system, spectral checks, level crossing."""

from .geometry import BTZParams, HorizonData, horizon_radii, tortoise, tortoise_inverse
from .dirac_radial import ModeParams, potential_eigenvalues, potential_eigenvalues_hbar
from .klein_gordon import hj_potentials, kg_eigenvalues
from .level_crossing import GridOptions, kg_verify_no_crossing, verify_no_crossing
from .errors import BTZError, NumericalError, ValidationError

__version__ = "0.1.0"

__all__ = [
    "BTZParams",
    "HorizonData",
    "ModeParams",
    "GridOptions",
    "horizon_radii",
    "tortoise",
    "tortoise_inverse",
    "potential_eigenvalues",
    "potential_eigenvalues_hbar",
    "kg_eigenvalues",
    "hj_potentials",
    "verify_no_crossing",
    "kg_verify_no_crossing",
    "BTZError",
    "ValidationError",
    "NumericalError",
]
