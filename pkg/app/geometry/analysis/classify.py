"""
Mobius classification of DC systems

The decision uses only Mobius invariant data: the root structure of the
three spherical polynomials, collapsed slices, how members of a spherical
family meet, and which of the common points of the symmetry M-spheres are
singular.
"""

import logging
from dataclasses import replace
from typing import Dict, List, Optional, Sequence

import numpy as np

from app.core.config import settings
from app.core.errors import DegenerateError, InvalidParameter, NumericalError, UnclassifiableNumerically
from app.core.tolerance import Tolerance, resolve
from app.geometry.analysis.checks import slice_carrier
from app.geometry.analysis.degree import degree as compute_degree
from app.geometry.analysis.singular import (
    MASK_CELLS,
    PointSlice,
    periodic_gap,
    check_nondegenerate,
    near_locus,
    point_slices,
    singular_locus,
)
from app.geometry.analysis.types import (
    Classification,
    CoarseType,
    CurveDescriptor,
    CurveKind,
    SingularLocus,
    Subtype,
)
from app.geometry.construct import classify_patch
from app.geometry.qb import DIRECTIONS, DCCube, QuadraticRoots, RootKind, slice_patch, spherical_polys
from app.geometry.quat import MSphere

logger = logging.getLogger(__name__)

# Generic members of a spherical family
_FAMILY_VALUES = (0.3, 1.7)
_TANGENT_TOL = 1e-6
# Parameter cells between a collapsed slice and a curve still counted as passing through it
_THROUGH_CELLS = 2.0 * MASK_CELLS + 1.0

_SPHERICAL_SINGULARITIES: Dict[Subtype, List[CurveDescriptor]] = {
    Subtype.S1: [CurveDescriptor(CurveKind.LINE, confidence=0.5)] * 2,
    Subtype.S2: [CurveDescriptor(CurveKind.LINE, confidence=0.5)] * 2,
    Subtype.S3: [
        CurveDescriptor(CurveKind.LINE, multiplicity=2, confidence=0.5),
        CurveDescriptor(CurveKind.CIRCLE, confidence=0.5),
        CurveDescriptor(CurveKind.CIRCLE, confidence=0.5),
    ],
    Subtype.S4: [
        CurveDescriptor(CurveKind.LINE, multiplicity=2, confidence=0.5),
        CurveDescriptor(CurveKind.CIRCLE, multiplicity=2, confidence=0.5),
    ],
}


def _root_parameters(roots: Dict[int, QuadraticRoots]) -> Dict[str, float]:
    params: Dict[str, float] = {}
    for direction, r in roots.items():
        name = DIRECTIONS[direction]
        params[f"sigma_{name}_discriminant"] = float(r.discriminant)
        for k, value in enumerate(r.values()):
            params[f"sigma_{name}_root{k}"] = float(value)
    return params


def _spherical_subtype(D: DCCube, directions: Sequence[int], notes: List[str]) -> Subtype:
    relations = {}
    for direction in directions:
        first = slice_carrier(D, direction, _FAMILY_VALUES[0])
        second = slice_carrier(D, direction, _FAMILY_VALUES[1])
        product = abs(first.inversive_product(second))
        if abs(product - 1.0) <= _TANGENT_TOL:
            relations[direction] = "tangent"
        elif product < 1.0:
            relations[direction] = "intersecting"
        else:
            relations[direction] = "disjoint"
        notes.append(f"spherical family {DIRECTIONS[direction]}: {relations[direction]}")
    if "disjoint" in relations.values():
        return Subtype.S1
    axial = [d for d, rel in relations.items() if rel == "intersecting"]
    if axial:
        meridian = slice_patch(D, axial[0], _FAMILY_VALUES[0])
        try:
            polar = classify_patch(meridian)
        except InvalidParameter as exc:
            raise UnclassifiableNumerically("meridian system has no recognizable poles", exc.context)
        notes.append(f"meridian system is {polar}")
        return Subtype.S3 if polar == "2-polar" else Subtype.S4
    return Subtype.S2


def _spherical_singularities(D: DCCube, subtype: Subtype, tol: Tolerance, resolution: int,
                             notes: List[str]) -> List[CurveDescriptor]:
    """Traced singular curves when they match the normal form, else the normal-form table.

    Multiplicities always come from the normal form.
    """
    table = _SPHERICAL_SINGULARITIES[subtype]
    try:
        traced = _descriptors(singular_locus(D, tol, resolution))
    except (DegenerateError, NumericalError) as exc:
        logger.warning("tracing the singular curves of a spherical system failed: %s", exc)
        traced = []
    expected = sorted(table, key=lambda d: d.kind.value)
    found = sorted(traced, key=lambda d: d.kind.value)
    if [d.kind for d in found] == [d.kind for d in expected]:
        for mine, reference in zip(found, expected):
            mine.multiplicity = reference.multiplicity
        notes.append("singular curves traced; multiplicities from the normal form")
        return traced
    notes.append(
        "traced singular curves ({}) differ from the normal form; reporting the normal form".format(
            ", ".join(d.describe() for d in traced) or "none"
        )
    )
    return [replace(d) for d in table]


def _through(locus: SingularLocus, collapsed: PointSlice, direction: int, resolution: int) -> bool:
    step = np.pi / resolution
    for curve in locus.by_direction(direction):
        gaps = periodic_gap(curve.parameters[:, collapsed.direction], collapsed.alpha)
        if np.min(gaps) <= _THROUGH_CELLS * step:
            return True
    return False


def _offset_subtype(locus: SingularLocus, collapsed: PointSlice, resolution: int) -> Subtype:
    others = [d for d in range(3) if d != collapsed.direction]
    through = sum(_through(locus, collapsed, d, resolution) for d in others)
    if through == 1:
        return Subtype.O1
    if through == 2:
        return Subtype.O2
    raise UnclassifiableNumerically(
        "singular curves through the collapsed slice do not match an offset system",
        {"curves_through_point": through},
    )


def _symmetry_spheres(D: DCCube, roots: Dict[int, QuadraticRoots]) -> List[MSphere]:
    return [slice_carrier(D, d, roots[d].roots[0]) for d in range(3)]


def _three_sphere_subtype(D: DCCube, roots: Dict[int, QuadraticRoots], locus: SingularLocus,
                          notes: List[str], tol: Tolerance) -> Subtype:
    spheres = _symmetry_spheres(D, roots)
    try:
        common = MSphere.common_points(*spheres, tol=tol)
    except InvalidParameter:
        common = []
    singular = [p for p in common if near_locus(locus, p)]
    notes.append(f"{len(common)} common points of the symmetry M-spheres, {len(singular)} singular")
    if len(common) == 2 and len(singular) == 2:
        return Subtype.A4
    if len(singular) == 1:
        return Subtype.A3
    directions = {c.descriptor.direction for c in locus.curves}
    if len(directions) == 3:
        return Subtype.A1
    if len(directions) == 2:
        return Subtype.A2
    raise UnclassifiableNumerically(
        "singular curves do not match a three-sphere system",
        {"directions_with_curves": sorted(directions)},
    )


def _descriptors(locus: SingularLocus) -> List[CurveDescriptor]:
    """Distinct descriptors by direction; chains of one curve share a descriptor."""
    seen: List[CurveDescriptor] = []
    for curve in locus.curves:
        if not any(curve.descriptor is d for d in seen):
            seen.append(curve.descriptor)
    return sorted(seen, key=lambda d: d.direction)


def classify(D: DCCube, tol: Optional[Tolerance] = None, with_degree: bool = False,
             resolution: Optional[int] = None, seed: Optional[int] = None) -> Classification:
    """Coarse type and subtype of the DC system of a cube."""
    tol = resolve(tol)
    resolution = resolution or settings.TRACE_RESOLUTION
    check_nondegenerate(D, tol)
    polys = spherical_polys(D)
    roots = {d: polys.roots(d, tol) for d in range(3)}
    notes: List[str] = []
    parameters = _root_parameters(roots)
    kinds = {d: r.kind for d, r in roots.items()}
    logger.info("spherical polynomial roots: %s", {DIRECTIONS[d]: k.value for d, k in kinds.items()})

    zero = [d for d, k in kinds.items() if k == RootKind.ZERO]
    if zero:
        subtype = _spherical_subtype(D, zero, notes)
        return Classification(
            coarse=CoarseType.SPHERICAL,
            subtype=subtype,
            parameters=parameters,
            singular=_spherical_singularities(D, subtype, tol, resolution, notes),
            notes=notes,
        )

    collapsed = point_slices(D, tol)
    locus = singular_locus(D, tol, resolution, masked=collapsed)
    if collapsed:
        point = collapsed[0]
        notes.append(f"{DIRECTIONS[point.direction]}-slice collapses to {point.point}")
        subtype = _offset_subtype(locus, point, resolution)
    elif any(k == RootKind.COMPLEX for k in kinds.values()):
        subtype = Subtype.B
    else:
        if any(k == RootKind.DOUBLE for k in kinds.values()):
            notes.append("double root without a collapsed slice")
        subtype = _three_sphere_subtype(D, roots, locus, notes, tol)

    result = Classification(
        coarse=subtype.coarse,
        subtype=subtype,
        parameters=parameters,
        singular=_descriptors(locus),
        notes=notes,
    )
    if with_degree:
        result.degree = compute_degree(D, tol=tol, seed=seed, locus=locus)
    logger.info("classified cube as %s", result.summary())
    return result
