"""
JSON reports of classification results and singular loci
"""

import json
import logging
from pathlib import Path
from typing import Optional, Union

import numpy as np

from app.core.tolerance import Tolerance, resolve
from app.geometry.analysis.types import Classification, CurveDescriptor, SingularLocus
from app.geometry.qb import DIRECTIONS, DCCube, spherical_polys
from app.schemas.report import (
    ClassificationReport,
    CurveDescriptorSchema,
    SingularCurveSchema,
    SingularLocusReport,
)

logger = logging.getLogger(__name__)


def descriptor_schema(descriptor: CurveDescriptor) -> CurveDescriptorSchema:
    d = descriptor.direction
    return CurveDescriptorSchema(
        kind=descriptor.kind.value,
        direction=DIRECTIONS[d] if d is not None else None,
        multiplicity=descriptor.multiplicity,
        components=descriptor.components,
        coefficients=dict(descriptor.coefficients),
        confidence=descriptor.confidence,
        description=descriptor.describe(),
    )


def sigma_table(D: DCCube) -> dict:
    """Coefficients (c0, c1, c2) of each spherical polynomial, keyed by direction."""
    return dict(zip(DIRECTIONS, spherical_polys(D).coefficients()))


def build_report(result: Classification, D: Optional[DCCube] = None,
                 source: Optional[str] = None, tol: Optional[Tolerance] = None,
                 seed: Optional[int] = None) -> ClassificationReport:
    tol = resolve(tol)
    return ClassificationReport(
        source=source,
        coarse=result.coarse.value,
        subtype=result.subtype.value if result.subtype else None,
        label=result.label,
        summary=result.summary(),
        parameters=dict(result.parameters),
        sigma=sigma_table(D) if D is not None else {},
        singular=[descriptor_schema(d) for d in result.singular],
        degree=result.degree,
        notes=list(result.notes),
        tolerance={"abs_tol": tol.abs_tol, "rel_tol": tol.rel_tol},
        seed=seed,
    )


def locus_report(L: SingularLocus) -> SingularLocusReport:
    curves = []
    for curve in L.curves:
        finite = np.all(np.isfinite(curve.polyline), axis=1)
        curves.append(SingularCurveSchema(
            direction=DIRECTIONS[curve.descriptor.direction],
            kind=curve.descriptor.kind.value,
            closed=curve.closed,
            carrier=list(curve.carrier.coefficients) if curve.carrier else None,
            carrier_plane=curve.carrier.plane if curve.carrier else None,
            coefficients=dict(curve.descriptor.coefficients),
            max_jacobian=curve.max_jacobian,
            polyline=curve.polyline[finite].tolist(),
        ))
    return SingularLocusReport(curves=curves, points=[str(p) for p in L.points])


def report_json(report: ClassificationReport) -> str:
    return json.dumps(report.model_dump(), indent=2) + "\n"


def write_report(report: ClassificationReport, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(report_json(report), encoding="utf-8")
    logger.info("wrote report %s", path)
    return path
