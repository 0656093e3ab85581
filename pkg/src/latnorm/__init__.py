"""Digital convex sets in Z^2: recognition, lattice diameter and unimodular
normalisation to an almost 4-connected set."""

from .connectivity import Connectivity, ConnectivityClass, classify, classify_convex
from .diameter import DiameterResult, lattice_diameter_bruteforce, lattice_diameter_fast
from .errors import LatnormError
from .lattice import AffineMap, apply_map, convex_hull, is_digital_convex
from .normalize import NormalizationTrace, to_almost_4_connected

__version__ = "0.1.0"

__all__ = [
    "AffineMap",
    "Connectivity",
    "ConnectivityClass",
    "DiameterResult",
    "LatnormError",
    "NormalizationTrace",
    "apply_map",
    "classify",
    "classify_convex",
    "convex_hull",
    "is_digital_convex",
    "lattice_diameter_bruteforce",
    "lattice_diameter_fast",
    "to_almost_4_connected",
]
