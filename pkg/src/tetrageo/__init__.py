"""Intrinsic geometry of tetrahedra and doubly covered convex polygons:
exact geodesics by unfolding, cut loci via the star unfolding, local and
global maxima of distance functions, and Alexandrov-style folding of glued
planar polygons."""

from . import errors
from .core import (
    CanonicalClass,
    FlatDouble,
    Tetra,
    canonicalize,
    cayley_menger_embed,
    cone_angle,
    random_tetra,
    tetra_from_vertices,
)

__all__ = [
    "errors",
    "CanonicalClass",
    "FlatDouble",
    "Tetra",
    "canonicalize",
    "cayley_menger_embed",
    "cone_angle",
    "random_tetra",
    "tetra_from_vertices",
]

__version__ = "0.1.0"
