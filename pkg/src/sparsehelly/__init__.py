"""Sparse vertex selection for polytopes and quantitative Helly subset selection."""

from .core import (
    AffineMap,
    DegenerateInput,
    Ellipsoid,
    EmptyInterior,
    GeometryError,
    Halfspace,
    HPolytope,
    OriginNotInterior,
    Unbounded,
    VPolytope,
    apply_affine,
    negate,
    set_tolerance,
)
from .helly import HellyReport, helly_subset
from .john import max_inscribed_ellipsoid, to_john_position
from .sparse_select import SelectionCertificate, SimplexMode, sparse_approx, verify_certificate

__all__ = [
    "AffineMap", "DegenerateInput", "Ellipsoid", "EmptyInterior", "GeometryError", "Halfspace",
    "HPolytope", "HellyReport", "OriginNotInterior", "SelectionCertificate", "SimplexMode",
    "Unbounded", "VPolytope", "apply_affine", "helly_subset", "max_inscribed_ellipsoid", "negate",
    "set_tolerance", "sparse_approx", "to_john_position", "verify_certificate",
]
__version__ = "0.1.0"
