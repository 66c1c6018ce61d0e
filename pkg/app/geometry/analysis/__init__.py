"""
Implicit equations, singular loci, classification and degree
"""

from app.geometry.analysis.types import (
    Classification,
    CoarseType,
    CurveDescriptor,
    CurveKind,
    DEGREE_TABLE,
    SingularLocus,
    Subtype,
    TracedCurve,
)
from app.geometry.analysis.implicit import ImplicitSurface, implicitize_patch, implicitize_slice
from app.geometry.analysis.quartics import (
    BicircularQuartic,
    CanonicalForm,
    bq_canonicalize,
    count_components,
    fit_planar_quartic,
    focal_parameters,
    focal_points,
)
from app.geometry.analysis.singular import singular_locus
from app.geometry.analysis.degree import degree
from app.geometry.analysis.classify import classify
from app.geometry.analysis.checks import discriminant_region, involution_check

__all__ = [
    "Classification",
    "CoarseType",
    "CurveDescriptor",
    "CurveKind",
    "DEGREE_TABLE",
    "SingularLocus",
    "Subtype",
    "TracedCurve",
    "ImplicitSurface",
    "implicitize_patch",
    "implicitize_slice",
    "BicircularQuartic",
    "CanonicalForm",
    "bq_canonicalize",
    "count_components",
    "fit_planar_quartic",
    "focal_parameters",
    "focal_points",
    "singular_locus",
    "degree",
    "classify",
    "discriminant_region",
    "involution_check",
]
