"""
Quad meshes of cube slices, written as Wavefront OBJ text
"""

import io
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np

from app.core.config import settings
from app.core.errors import DegenerateSlice, InvalidParameter
from app.core.tolerance import Tolerance, resolve
from app.geometry.qb import (
    DIRECTIONS,
    DCCube,
    ParamLike,
    SliceKind,
    angle_chart,
    as_projective,
    direction_index,
    sample,
    slice_kind,
    slice_patch,
    sphere_image,
    to_points,
)

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


@dataclass
class SurfaceMesh:
    """Vertices on a (resolution + 1)^2 grid, quads indexed from 0."""

    vertices: np.ndarray
    faces: np.ndarray
    clipped: np.ndarray
    direction: int
    value: Tuple[float, float]
    clip_radius: float
    boundary: List[Edge] = field(default_factory=list)

    @property
    def kept_vertices(self) -> np.ndarray:
        return self.vertices[~self.clipped]

    def name(self) -> str:
        n, d = self.value
        label = f"{n / d:g}" if d != 0.0 else "inf"
        return f"slice_{DIRECTIONS[self.direction]}_{label}"

    def to_obj(self) -> str:
        output = io.StringIO()
        output.write(f"# {settings.APP_NAME} surface mesh\n")
        output.write(f"# Application Version: {settings.APP_VERSION}\n")
        output.write(f"# Slice: {DIRECTIONS[self.direction]} = {self.value[0]!r}:{self.value[1]!r}\n")
        output.write(f"# Clip radius: {self.clip_radius!r}\n")
        output.write(f"# Clipped vertices: {int(self.clipped.sum())}\n")
        output.write(f"o {self.name()}\n")
        for x, y, z in self.vertices:
            output.write(f"v {x!r} {y!r} {z!r}\n")
        for quad in self.faces:
            output.write("f " + " ".join(str(int(k) + 1) for k in quad) + "\n")
        if self.boundary:
            output.write("g clipped_boundary\n")
            for a, b in self.boundary:
                output.write(f"l {a + 1} {b + 1}\n")
        return output.getvalue()


def net_diameter(D: DCCube) -> float:
    """Largest distance between finite control points (1 when fewer than two are finite)."""
    pts, finite = to_points(D.u, D.w)
    pts = pts[finite]
    if len(pts) < 2:
        return 1.0
    diffs = pts[:, None, :] - pts[None, :, :]
    return max(float(np.max(np.linalg.norm(diffs, axis=-1))), 1e-12)


def parameter_grid(resolution: int, domain: str = "full") -> np.ndarray:
    """(num, den) pairs along one parameter.

    ``full`` walks the whole projective line by angle, closing up at the end;
    ``patch`` covers the Bezier range [0, 1].
    """
    if domain == "full":
        return angle_chart(np.linspace(0.0, np.pi, resolution + 1))
    if domain == "patch":
        x = np.linspace(0.0, 1.0, resolution + 1)
        return np.stack([x, np.ones_like(x)], axis=-1)
    raise InvalidParameter(f"unknown mesh domain {domain!r}", {"domains": ["full", "patch"]})


def _clip(xyz: np.ndarray, finite: np.ndarray, images: np.ndarray,
          radius: float) -> Tuple[np.ndarray, np.ndarray]:
    norms = np.linalg.norm(np.where(finite[:, None], xyz, 0.0), axis=1)
    clipped = ~finite | (norms > radius)
    out = np.where(finite[:, None], xyz, 0.0)
    # clipped vertices move radially onto the bounding sphere
    heading = images[:, :3]
    length = np.linalg.norm(heading, axis=1)
    safe = np.where(length > 0.0, length, 1.0)
    out[clipped] = radius * heading[clipped] / safe[clipped, None]
    return out, clipped


def _quads(resolution: int) -> np.ndarray:
    n = resolution + 1
    i, j = np.meshgrid(np.arange(resolution), np.arange(resolution), indexing="ij")
    base = (i * n + j).ravel()
    return np.stack([base, base + n, base + n + 1, base + 1], axis=1)


def _edges(quad: np.ndarray) -> List[Edge]:
    return [tuple(sorted((int(quad[k]), int(quad[(k + 1) % 4])))) for k in range(4)]


def surface_mesh(D: DCCube, direction: Union[int, str], value: ParamLike,
                 resolution: Optional[int] = None, domain: str = "full",
                 clip_radius: Optional[float] = None,
                 tol: Optional[Tolerance] = None) -> SurfaceMesh:
    """Quad mesh of the slice of D at one parameter value."""
    tol = resolve(tol)
    axis = direction_index(direction)
    pair = as_projective(value)
    kind = slice_kind(D, axis, pair, tol)
    if kind != SliceKind.SPHERE:
        raise DegenerateSlice(
            f"{DIRECTIONS[axis]}-slice at {pair} is a {kind.value}, not a surface",
            {"direction": DIRECTIONS[axis], "value": list(pair), "kind": kind.value},
        )
    resolution = resolution or settings.MESH_RESOLUTION
    if resolution < 1:
        raise InvalidParameter("mesh resolution must be positive")
    radius = clip_radius or settings.CLIP_RADIUS_FACTOR * net_diameter(D)

    grid = parameter_grid(resolution, domain)
    first, second = np.meshgrid(np.arange(resolution + 1), np.arange(resolution + 1), indexing="ij")
    patch = slice_patch(D, axis, pair)
    U, W = sample(patch, grid[first.ravel()], grid[second.ravel()])
    xyz, finite = to_points(U, W)
    vertices, clipped = _clip(xyz, finite, sphere_image(U, W), radius)

    quads = _quads(resolution)
    dropped = clipped[quads].any(axis=1)
    removed = {e for quad in quads[dropped] for e in _edges(quad)}
    boundary = sorted({e for quad in quads[~dropped] for e in _edges(quad)} & removed)
    logger.debug(
        "mesh of %s-slice: %d vertices, %d clipped, %d faces kept",
        DIRECTIONS[axis], len(vertices), int(clipped.sum()), int((~dropped).sum()),
    )
    return SurfaceMesh(
        vertices=vertices,
        faces=quads[~dropped],
        clipped=clipped,
        direction=axis,
        value=pair,
        clip_radius=float(radius),
        boundary=boundary,
    )


def export_surface_mesh(D: DCCube, direction: Union[int, str], value: ParamLike,
                        resolution: Optional[int] = None, path: Optional[Union[str, Path]] = None,
                        domain: str = "full", clip_radius: Optional[float] = None,
                        tol: Optional[Tolerance] = None) -> SurfaceMesh:
    """Mesh a slice and, when ``path`` is given, write it as OBJ."""
    mesh = surface_mesh(D, direction, value, resolution, domain, clip_radius, tol)
    if path is not None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(mesh.to_obj(), encoding="utf-8")
        logger.info("wrote mesh %s (%d faces)", path, len(mesh.faces))
    return mesh
