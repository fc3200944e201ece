"""Weighted Delaunay tessellations of decorated hyperbolic surfaces.

Every vertex of a triangulated surface carries a type (cone point, cusp
or flare, where a flare is a boundary geodesic) and a cycle whose size is
set by a positive weight.  The flip algorithm turns any triangulation into
the weighted Delaunay one.  Dual complexes, weight-space cones and orbit
hull checks live in their own modules on top of it.
"""

from .errors import DecHypError
from .flipper import flip_edge, flip_to_delaunay, tessellation_signature, voronoi_dual
from .kernels import BACKEND
from .minkcore import CONE, CUSP, FLARE
from .surface import (
    DecoratedSurface,
    delaunay_report,
    load_surface,
    parse_surface,
    validate_surface,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CONE",
    "CUSP",
    "FLARE",
    "DecHypError",
    "DecoratedSurface",
    "delaunay_report",
    "flip_edge",
    "flip_to_delaunay",
    "load_surface",
    "parse_surface",
    "tessellation_signature",
    "validate_surface",
    "voronoi_dual",
]
