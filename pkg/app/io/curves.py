"""
Singular curves as polylines

Curves lying in a coordinate plane are re-traced from their fitted implicit
equation with marching squares (``skimage.measure.find_contours``); all other
curves keep the polyline of the parameter-space tracer. Polylines are written
as CSV with ``#`` metadata lines on top.
"""

import io
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Union

import numpy as np
import pandas as pd
from skimage import measure

from app.core.config import settings
from app.geometry.analysis.quartics import PLANES, QUARTIC_MONOMIALS, BicircularQuartic
from app.geometry.analysis.types import CurveDescriptor, CurveKind, SingularLocus, TracedCurve
from app.geometry.qb import DIRECTIONS

logger = logging.getLogger(__name__)

# Half-width of the drawing window for curves that reach infinity
DEFAULT_WINDOW = 10.0

COLUMNS = ["curve", "direction", "kind", "closed", "index", "x", "y", "z"]


@dataclass
class CurvePolyline:
    descriptor: CurveDescriptor
    points: np.ndarray
    closed: bool
    source: str
    plane: Optional[str] = None
    coefficients: Dict[str, float] = field(default_factory=dict)

    @property
    def direction(self) -> str:
        d = self.descriptor.direction
        return DIRECTIONS[d] if d is not None else ""


def _planar_quartic(curve: TracedCurve) -> Optional[BicircularQuartic]:
    carrier = curve.carrier
    coefficients = curve.descriptor.coefficients
    if carrier is None or carrier.plane is None or not coefficients:
        return None
    return BicircularQuartic(carrier.plane, [coefficients.get(m, 0.0) for m in QUARTIC_MONOMIALS])


def trace_planar_curve(quartic: BicircularQuartic, window: Optional[float] = None,
                       resolution: int = 400) -> List[np.ndarray]:
    """Zero set of a planar quartic inside a square window, as 3D polylines."""
    if window is None:
        bounded = quartic.kind == CurveKind.BICIRCULAR_QUARTIC
        window = quartic.window() if bounded else DEFAULT_WINDOW
    step = 2.0 * window / resolution
    # offsets keep symmetry axes off the grid lines
    p = np.linspace(-window, window, resolution + 1) + 1e-3 * step
    q = np.linspace(-window, window, resolution + 1) + 2e-3 * step
    P, Q = np.meshgrid(p, q, indexing="ij")
    values = quartic.evaluate(P, Q)
    i, j = PLANES[quartic.plane][0]
    polylines = []
    for contour in measure.find_contours(values, 0.0):
        pts = np.zeros((len(contour), 3))
        pts[:, i] = p[0] + contour[:, 0] * step
        pts[:, j] = q[0] + contour[:, 1] * step
        polylines.append(pts)
    return polylines


def curve_polylines(L: SingularLocus, resolution: Optional[int] = None,
                    window: Optional[float] = None) -> List[CurvePolyline]:
    """One or more polylines per singular curve of the locus."""
    resolution = resolution or 400
    out: List[CurvePolyline] = []
    traced = set()
    for curve in L.curves:
        quartic = _planar_quartic(curve)
        if quartic is not None:
            if id(curve.descriptor) in traced:
                continue
            contours = trace_planar_curve(quartic, window, resolution)
            if contours:
                traced.add(id(curve.descriptor))
                for pts in contours:
                    out.append(CurvePolyline(
                        descriptor=curve.descriptor,
                        points=pts,
                        closed=bool(np.allclose(pts[0], pts[-1])),
                        source="implicit",
                        plane=quartic.plane,
                        coefficients=quartic.to_dict(),
                    ))
                continue
        finite = np.all(np.isfinite(curve.polyline), axis=1)
        out.append(CurvePolyline(
            descriptor=curve.descriptor,
            points=curve.polyline[finite],
            closed=curve.closed,
            source="traced",
            plane=curve.carrier.plane if curve.carrier else None,
            coefficients=dict(curve.descriptor.coefficients),
        ))
    return out


def polylines_frame(polylines: List[CurvePolyline]) -> pd.DataFrame:
    frames = []
    for number, line in enumerate(polylines):
        frames.append(pd.DataFrame({
            "curve": number,
            "direction": line.direction,
            "kind": line.descriptor.kind.value,
            "closed": line.closed,
            "index": np.arange(len(line.points)),
            "x": line.points[:, 0],
            "y": line.points[:, 1],
            "z": line.points[:, 2],
        }))
    if not frames:
        return pd.DataFrame(columns=COLUMNS)
    return pd.concat(frames, ignore_index=True)[COLUMNS]


def polylines_csv(polylines: List[CurvePolyline], points: Optional[List[str]] = None) -> str:
    output = io.StringIO()
    output.write(f"# {settings.APP_NAME} singular curves\n")
    output.write(f"# Application Version: {settings.APP_VERSION}\n")
    output.write(f"# Total Curves: {len(polylines)}\n")
    for point in points or []:
        output.write(f"# Collapsed slice at: {point}\n")
    for number, line in enumerate(polylines):
        output.write(
            f"# Curve {number}: direction={line.direction} kind={line.descriptor.kind.value} "
            f"description={line.descriptor.describe()!r} closed={line.closed} "
            f"source={line.source} plane={line.plane or '-'}\n"
        )
        if line.coefficients:
            terms = ", ".join(f"{m}={v!r}" for m, v in line.coefficients.items())
            output.write(f"# Curve {number} coefficients: {terms}\n")
    output.write("#\n")
    polylines_frame(polylines).to_csv(output, index=False, float_format="%.17g")
    return output.getvalue()


def export_singular_curves(L: SingularLocus, path: Optional[Union[str, Path]] = None,
                           resolution: Optional[int] = None,
                           window: Optional[float] = None) -> List[CurvePolyline]:
    """Polylines of every singular curve; written as CSV when ``path`` is given."""
    polylines = curve_polylines(L, resolution, window)
    if path is not None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(polylines_csv(polylines, [str(p) for p in L.points]), encoding="utf-8")
        logger.info("wrote %d singular polylines to %s", len(polylines), path)
    return polylines


def read_singular_curves(path: Union[str, Path]) -> pd.DataFrame:
    return pd.read_csv(path, comment="#")
