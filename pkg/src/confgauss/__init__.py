"""Conformal Gauss map calculus on surface patches.

Moebius/SO(4,1) transport, sphere congruences in the de Sitter quadric,
Willmore conserved quantities, the Bryant functional, and the sign
criterion classifying patches as conformally CMC in R^3, S^3 or H^3.

The classifier entry points live in ``confgauss.classify``; the surface
catalog in ``confgauss.zoo``.
"""

from .classify import ClassificationReport, classify_data
from .congruence import conformal_gauss_map, transform_immersion
from .grid import ChartGrid, FundamentalData, fundamental_data
from .lorentz import classify_vector, lorentz_product
from .zoo import list_surfaces, make_surface, sample

__version__ = "0.1.0"

__all__ = [
    "ClassificationReport",
    "classify_data",
    "conformal_gauss_map",
    "transform_immersion",
    "ChartGrid",
    "FundamentalData",
    "fundamental_data",
    "classify_vector",
    "lorentz_product",
    "make_surface",
    "sample",
    "list_surfaces",
    "__version__",
]
