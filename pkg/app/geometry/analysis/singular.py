"""
Singular locus of a DC system

For a direction d the set where dF/dd vanishes is a union of whole d-lines,
so it is enough to fix one generic value of that parameter and find the
curve in the remaining parameter torus. On that torus

    g = J / |dF/de1 x dF/de2|

equals +-|dF/dd| (the partials are orthogonal) and changes sign across the
curve. Zero crossings of g are found by marching squares on a periodic angle
grid and refined by bisection. Crossings where g jumps, because one of the
other partials vanishes instead, keep a large |dF/dd| and are rejected.
Everything is measured in the chordal metric of the 3-sphere so poles need
no special treatment.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial import cKDTree

from app.core.config import settings
from app.core.errors import DegenerateCube
from app.core.tolerance import Tolerance, resolve
from app.geometry.analysis.quartics import QUARTIC_MONOMIALS, BicircularQuartic, fit_planar_quartic
from app.geometry.analysis.types import Carrier, CurveDescriptor, CurveKind, SingularLocus, TracedCurve
from app.geometry.qb import (
    DCCube,
    RootKind,
    SliceKind,
    angle_chart,
    chordal_jacobian,
    eval_cube,
    mpoint_sphere_image,
    sample,
    slice_kind,
    sphere_frame,
    sphere_image,
    spherical_polys,
    to_points,
)
from app.geometry.quat import MPoint, MSphere, Quaternion

logger = logging.getLogger(__name__)

# Fixed angle of the traced direction, away from 0, pi/4 and pi/2
_GENERIC_ALPHAS = (0.6180339887, 2.0943951024 + 0.1234)
_BISECTION_STEPS = 40
MASK_CELLS = 1.5


def periodic_gap(a: np.ndarray, b: float) -> np.ndarray:
    d = np.mod(np.asarray(a) - b, np.pi)
    return np.minimum(d, np.pi - d)


@dataclass
class PointSlice:
    """A parameter value whose whole slice collapses to one point."""

    direction: int
    alpha: float
    point: MPoint


def point_slices(D: DCCube, tol: Optional[Tolerance] = None) -> List[PointSlice]:
    """Real roots of the spherical polynomials whose slices are single points."""
    tol = resolve(tol)
    polys = spherical_polys(D)
    found = []
    for direction in range(3):
        roots = polys.roots(direction, tol)
        if roots.kind not in (RootKind.DISTINCT, RootKind.DOUBLE):
            continue
        for n, d in roots.roots:
            if slice_kind(D, direction, (n, d), tol) != SliceKind.POINT:
                continue
            alpha = float(np.mod(np.arctan2(n, d), np.pi))
            params = [0.37, 0.41, 0.43]
            params[direction] = (n, d)
            found.append(PointSlice(direction, alpha, eval_cube(D, *params, tol=tol)))
    return found


def check_nondegenerate(D: DCCube, tol: Optional[Tolerance] = None) -> None:
    tol = resolve(tol)
    # Offsets keep the grid off pi/2, where constant nets hit a base point
    grid = 0.1 + (np.arange(7) + 0.37) * (np.pi - 0.2) / 7
    a, b, c = np.meshgrid(grid, grid + 0.013, grid + 0.029, indexing="ij")
    with np.errstate(invalid="ignore", divide="ignore"):
        E, dE = sphere_frame(D, a, b, c)
        jac = np.abs(chordal_jacobian(E, dE))
    jac = jac[np.isfinite(jac)]
    if jac.size == 0 or np.max(jac) <= tol.sample:
        raise DegenerateCube("Jacobian vanishes on the whole parameter cube")


# Tracing

class _Field:
    """g and |dF/dd| on the torus of the two remaining directions."""

    def __init__(self, D: DCCube, direction: int, alpha: float):
        self.D = D
        self.direction = direction
        self.alpha = alpha
        self.others = [e for e in range(3) if e != direction]

    def alphas(self, a1: np.ndarray, a2: np.ndarray) -> List[np.ndarray]:
        out: List[np.ndarray] = [None, None, None]
        out[self.direction] = np.full_like(a1, self.alpha, dtype=float)
        out[self.others[0]] = a1
        out[self.others[1]] = a2
        return out

    def __call__(self, a1: np.ndarray, a2: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        E, dE = sphere_frame(self.D, *self.alphas(a1, a2))
        jac = chordal_jacobian(E, dE)
        x = dE[..., self.others[0], :]
        y = dE[..., self.others[1], :]
        area2 = np.sum(x * x, -1) * np.sum(y * y, -1) - np.sum(x * y, -1) ** 2
        area = np.sqrt(np.maximum(area2, 0.0))
        g = np.where(area > 1e-14, jac / np.where(area > 1e-14, area, 1.0), 0.0)
        speed = np.linalg.norm(dE[..., self.direction, :], axis=-1)
        return g, speed


def _bisect(field: _Field, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    g_lo, _ = field(lo[:, 0], lo[:, 1])
    positive = g_lo >= 0.0
    for _ in range(_BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        g_mid, _ = field(mid[:, 0], mid[:, 1])
        same = (g_mid >= 0.0) == positive
        lo = np.where(same[:, None], mid, lo)
        hi = np.where(same[:, None], hi, mid)
    return 0.5 * (lo + hi)


def _chains(adjacency: Dict[int, List[int]]) -> List[Tuple[List[int], bool]]:
    """Walk a graph of degree <= 2 into open and closed chains."""
    seen = set()
    chains = []
    starts = [n for n, nb in adjacency.items() if len(nb) == 1] + list(adjacency)
    for start in starts:
        if start in seen:
            continue
        chain = [start]
        seen.add(start)
        prev, node = None, start
        while True:
            nxt = [n for n in adjacency[node] if n != prev and n not in seen]
            if not nxt:
                break
            prev, node = node, nxt[0]
            chain.append(node)
            seen.add(node)
        closed = len(chain) > 2 and start in adjacency[chain[-1]]
        chains.append((chain, closed))
    return chains


def trace_direction(D: DCCube, direction: int, resolution: Optional[int] = None,
                    masked: Sequence[PointSlice] = (), tol: Optional[Tolerance] = None,
                    alpha: Optional[float] = None) -> List[Tuple[np.ndarray, bool]]:
    """Parameter chains (angle triples) of the curve where dF/d(direction) vanishes."""
    tol = resolve(tol)
    n = resolution or settings.TRACE_RESOLUTION
    if alpha is None:
        alpha = _GENERIC_ALPHAS[0]
        if any(m.direction == direction and periodic_gap(alpha, m.alpha) < 0.05 for m in masked):
            alpha = _GENERIC_ALPHAS[1]
    field = _Field(D, direction, alpha)
    step = np.pi / n
    grid = (np.arange(n) + 0.3183) * step
    A1, A2 = np.meshgrid(grid, grid, indexing="ij")
    g, speed = field(A1, A2)
    threshold = tol.sample * max(float(np.median(speed)), 1e-12)

    # cells next to collapsed parameter lines are skipped
    centers = grid + 0.5 * step
    cell_ok = np.ones((n, n), dtype=bool)
    for m in masked:
        if m.direction == direction:
            continue
        axis = field.others.index(m.direction)
        near = periodic_gap(centers, m.alpha) < MASK_CELLS * step
        if axis == 0:
            cell_ok[near, :] = False
        else:
            cell_ok[:, near] = False

    pos = g >= 0.0
    # edge ids: horizontal (i, j)-(i+1, j) -> i*n + j, vertical (i, j)-(i, j+1) -> n*n + i*n + j
    h_cross = pos != np.roll(pos, -1, axis=0)
    v_cross = pos != np.roll(pos, -1, axis=1)
    ii, jj = np.nonzero(h_cross)
    vi, vj = np.nonzero(v_cross)
    ids = np.concatenate([ii * n + jj, n * n + vi * n + vj])
    lo = np.concatenate([
        np.stack([grid[ii], grid[jj]], axis=1),
        np.stack([grid[vi], grid[vj]], axis=1),
    ])
    hi = lo + np.concatenate([
        np.tile([step, 0.0], (len(ii), 1)),
        np.tile([0.0, step], (len(vi), 1)),
    ])
    if len(ids) == 0:
        return []
    points = _bisect(field, lo, hi)
    _, final_speed = field(points[:, 0], points[:, 1])
    accepted = {int(k): p for k, p, s in zip(ids, points, final_speed) if s <= threshold}

    adjacency: Dict[int, List[int]] = {k: [] for k in accepted}

    def link(a: int, b: int) -> None:
        adjacency[a].append(b)
        adjacency[b].append(a)

    for i in range(n):
        for j in range(n):
            if not cell_ok[i, j]:
                continue
            i1, j1 = (i + 1) % n, (j + 1) % n
            bottom, top = i * n + j, i * n + j1
            left, right = n * n + i * n + j, n * n + i1 * n + j
            edges = [e for e in (bottom, right, top, left) if e in accepted]
            if len(edges) == 2:
                link(*edges)
            elif len(edges) == 4:
                center, _ = field(np.array([grid[i] + 0.5 * step]), np.array([grid[j] + 0.5 * step]))
                if (center[0] >= 0.0) == pos[i, j]:
                    link(bottom, right)
                    link(top, left)
                else:
                    link(bottom, left)
                    link(top, right)

    chains = []
    for chain, closed in _chains({k: v for k, v in adjacency.items() if v}):
        pts = np.array([accepted[k] for k in chain])
        triples = np.stack(field.alphas(pts[:, 0], pts[:, 1]), axis=1)
        chains.append((triples, closed))
    logger.debug("direction %d: %d crossings, %d chains", direction, len(accepted), len(chains))
    return chains


# From parameter chains to curves

def _images(D: DCCube, triples: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    U, W = sample(D, *(angle_chart(triples[:, m]) for m in range(3)))
    xyz, finite = to_points(U, W)
    return xyz, finite, sphere_image(U, W)


def _spacing(images: np.ndarray) -> float:
    if len(images) < 2:
        return 0.0
    return float(np.median(np.linalg.norm(np.diff(images, axis=0), axis=1)))


def _distinct_chains(chains: List[Tuple[np.ndarray, bool, np.ndarray]]) -> List[Tuple[np.ndarray, bool, np.ndarray]]:
    """Drop chains retracing the image of a longer chain (double covers of the curve)."""
    kept: List[Tuple[np.ndarray, bool, np.ndarray]] = []
    for chain in sorted(chains, key=lambda c: -len(c[0])):
        images = chain[2]
        if kept:
            ref = np.concatenate([k[2] for k in kept])
            spacing = max(_spacing(images), max(_spacing(k[2]) for k in kept))
            dist, _ = cKDTree(ref).query(images)
            if np.max(dist) <= 3.0 * spacing + 1e-9:
                continue
        kept.append(chain)
    return kept


def _coordinate_plane(sphere: MSphere, tol: float = 1e-6) -> Optional[str]:
    if not sphere.is_plane or abs(sphere.c) > tol:
        return None
    normal = np.abs(np.asarray(sphere.b))
    axis = int(np.argmax(normal))
    if np.sum(normal) - normal[axis] > tol:
        return None
    return "xyz"[axis]


def describe_curve(direction: int, points: np.ndarray, chains: int) -> Tuple[CurveDescriptor, Optional[Carrier], Optional[BicircularQuartic]]:
    """Carrier M-sphere and, on coordinate planes, the fitted planar curve."""
    finite = points[np.all(np.isfinite(points), axis=1)]
    finite = finite[np.linalg.norm(finite, axis=1) <= 1e3]
    if len(finite) < 9:
        return CurveDescriptor(CurveKind.CURVE, direction, components=chains, confidence=0.5), None, None
    sphere, residual, next_sv = MSphere.fit([Quaternion.from_vector(p) for p in finite])
    plane = _coordinate_plane(sphere) if residual <= 1e-6 else None
    carrier = Carrier(tuple(float(v) for v in sphere.vector), residual, plane)
    if plane is None and residual <= 1e-6 and next_sv <= 1e-6:
        # a pencil of carriers: generalized circle
        spread = np.linalg.svd(finite - finite.mean(axis=0), compute_uv=False)
        kind = CurveKind.LINE if spread[1] <= 1e-7 * spread[0] else CurveKind.CIRCLE
        return CurveDescriptor(kind, direction, components=chains), carrier, None
    if plane is None:
        confidence = 1.0 if residual <= 1e-6 else 0.5
        return CurveDescriptor(CurveKind.CURVE, direction, components=chains, confidence=confidence), carrier, None
    quartic = fit_planar_quartic(finite, plane)
    kind = quartic.kind
    components = quartic.components() if kind == CurveKind.BICIRCULAR_QUARTIC else chains
    descriptor = CurveDescriptor(
        kind,
        direction,
        components=components,
        coefficients={m: float(v) for m, v in zip(QUARTIC_MONOMIALS, quartic.normalized())},
        confidence=1.0 if quartic.residual <= 1e-6 else 0.5,
    )
    return descriptor, carrier, quartic


def _max_jacobian(D: DCCube, triples: np.ndarray) -> float:
    E, dE = sphere_frame(D, *(triples[:, m] for m in range(3)))
    return float(np.max(np.abs(chordal_jacobian(E, dE))))


def split_lines(D: DCCube, direction: int, quartic: BicircularQuartic, carrier: Optional[Carrier],
                triples: np.ndarray, confidence: float = 1.0) -> List[TracedCurve]:
    """One straight curve per line of a conic that splits, from the samples closest to it."""
    lines = quartic.lines()
    all_triples = triples
    xyz, finite, _ = _images(D, triples)
    # every line passes through infinity
    at_infinity = np.nonzero(~finite)[0]
    triples, xyz = triples[finite], xyz[finite]
    planar = quartic.plane_coordinates(xyz)
    if not lines or len(planar) == 0:
        return []
    normals = np.array([[-v[1], v[0]] for _, v in lines])
    offsets = np.array([n @ p for n, (p, _) in zip(normals, lines)])
    distance = np.abs(planar @ normals.T - offsets)
    owner = np.argmin(distance, axis=1)
    multiplicity = 2 if quartic.kind == CurveKind.DOUBLE_LINE else 1
    curves = []
    for k, (point, vector) in enumerate(lines):
        mine = np.nonzero(owner == k)[0]
        if len(mine) < 2:
            continue
        order = mine[np.argsort((planar[mine] - point) @ vector)]
        params = np.concatenate([triples[order], all_triples[at_infinity]])
        descriptor = CurveDescriptor(
            CurveKind.LINE,
            direction,
            multiplicity=multiplicity,
            components=1,
            coefficients={"p": float(normals[k][0]), "q": float(normals[k][1]), "1": float(-offsets[k])},
            confidence=confidence,
        )
        curves.append(TracedCurve(
            descriptor=descriptor,
            carrier=carrier,
            polyline=np.concatenate([xyz[order], np.full((len(at_infinity), 3), np.nan)]),
            parameters=params,
            closed=False,
            max_jacobian=_max_jacobian(D, params),
        ))
    return curves


def singular_locus(D: DCCube, tol: Optional[Tolerance] = None,
                   resolution: Optional[int] = None,
                   masked: Optional[Sequence[PointSlice]] = None) -> SingularLocus:
    """Singular curves per parameter direction plus points where a slice collapses."""
    tol = resolve(tol)
    check_nondegenerate(D, tol)
    if masked is None:
        masked = point_slices(D, tol)
    locus = SingularLocus(points=[m.point for m in masked])
    for direction in range(3):
        raw = []
        for triples, closed in trace_direction(D, direction, resolution, masked, tol):
            xyz, finite, images = _images(D, triples)
            if np.max(np.linalg.norm(images - images[0], axis=1)) <= tol.sample:
                continue
            raw.append((triples, closed, images))
        chains = _distinct_chains(raw)
        if not chains:
            continue
        all_xyz = np.concatenate([_images(D, c[0])[0] for c in chains])
        descriptor, carrier, quartic = describe_curve(direction, all_xyz, len(chains))
        if quartic is not None and descriptor.kind.splits:
            lines = split_lines(D, direction, quartic, carrier,
                                np.concatenate([c[0] for c in chains]), descriptor.confidence)
            if lines:
                locus.curves.extend(lines)
                continue
        for triples, closed, images in chains:
            xyz, _, _ = _images(D, triples)
            locus.curves.append(TracedCurve(
                descriptor=descriptor,
                carrier=carrier,
                polyline=xyz,
                parameters=triples,
                closed=closed,
                max_jacobian=_max_jacobian(D, triples),
            ))
    logger.info(
        "singular locus: %d curves in directions %s, %d collapsed slices",
        len(locus.curves), sorted({c.descriptor.direction for c in locus.curves}), len(masked),
    )
    return locus


def near_locus(locus: SingularLocus, p: MPoint, factor: float = 2.0) -> bool:
    """p lies within a few sample spacings of a traced singular curve (chordal metric)."""
    target = mpoint_sphere_image(p)
    for curve in locus.curves:
        images = _curve_images(curve)
        spacing = _spacing(images)
        if np.min(np.linalg.norm(images - target, axis=1)) <= factor * spacing + 1e-9:
            return True
    return False


def locus_distance(locus: SingularLocus, p: MPoint) -> float:
    """Chordal distance from p to the nearest traced curve sample or collapsed slice point."""
    target = mpoint_sphere_image(p)
    images = [_curve_images(curve) for curve in locus.curves]
    images += [mpoint_sphere_image(q)[None, :] for q in locus.points]
    if not images:
        return float("inf")
    return float(np.min(np.linalg.norm(np.concatenate(images) - target, axis=1)))


def _curve_images(curve: TracedCurve) -> np.ndarray:
    xyz = curve.polyline
    out = np.empty((len(xyz), 4))
    finite = np.all(np.isfinite(xyz), axis=1)
    n2 = np.sum(np.where(finite[:, None], xyz, 0.0) ** 2, axis=1)
    out[:, :3] = np.where(finite[:, None], 2.0 * np.nan_to_num(xyz), 0.0) / (n2 + 1.0)[:, None]
    out[:, 3] = np.where(finite, (n2 - 1.0) / (n2 + 1.0), 1.0)
    return out

