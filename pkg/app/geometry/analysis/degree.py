"""
Degree of a DC system: number of preimages of a regular point

A point p lies on the slice at parameter x in direction d exactly when the
slice determinant det[p w_i(x) - u_i(x)] vanishes; it is a binary quartic in
x. Real roots in two directions fix candidate pairs, the third parameter is
the null vector of the 4x2 system U - pW = 0, and surviving triples are
deduplicated on the projective parameter torus.
"""

import itertools
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import Polynomial

from app.core.config import settings
from app.core.errors import PointNearSingularity, SolverInconclusive
from app.core.tolerance import Tolerance, resolve
from app.geometry.analysis.singular import locus_distance, near_locus, singular_locus
from app.geometry.analysis.types import SingularLocus
from app.geometry.qb import (
    DCCube,
    angle_chart,
    chordal_jacobian,
    mpoint_sphere_image,
    sample,
    slice_patch,
    sphere_frame,
    sphere_image,
)
from app.geometry.quat import MPoint, Quaternion, is_infinite, qmul

logger = logging.getLogger(__name__)

Pair = Tuple[float, float]

_SAMPLE_ALPHAS = np.linspace(0.0, np.pi, 5, endpoint=False) + 0.1
_DEDUP = 1e-5
# Base points of the net satisfy U - pW = 0 for every p
_BASE_POINT = 1e-6
# Chordal gap kept between sample points and the traced singular locus
_LOCUS_GAP = 0.05


def slice_quartic(D: DCCube, direction: int, p: np.ndarray) -> Optional[np.ndarray]:
    """Coefficients c_k of sum c_k sin^k cos^(4-k); None when it vanishes identically."""
    rows, values = [], []
    for alpha in _SAMPLE_ALPHAS:
        sn, cs = np.sin(alpha), np.cos(alpha)
        patch = slice_patch(D, direction, (sn, cs))
        cols = qmul(p, patch.w) - patch.u
        values.append(float(np.linalg.det(cols.T)))
        rows.append([sn ** k * cs ** (4 - k) for k in range(5)])
    coef = np.linalg.solve(np.array(rows), np.array(values))
    if np.max(np.abs(coef)) <= 1e-12 * max(1.0, D.scale()) ** 4:
        return None
    return coef


def _real_roots(coef: np.ndarray) -> List[Pair]:
    """Real roots of the binary quartic, one chart for |tan| <= 1 and one for |cot| < 1."""
    big = float(np.max(np.abs(coef)))
    out: List[Pair] = []
    for chart, flipped in ((coef, False), (coef[::-1], True)):
        poly = Polynomial(chart).trim(tol=1e-13 * big)
        if poly.degree() < 1:
            continue
        for root in poly.roots():
            if abs(root.imag) > 1e-6 * (1.0 + abs(root.real)):
                continue
            x = float(root.real)
            if flipped and abs(x) < 1.0:
                out.append((1.0, x))
            elif not flipped and abs(x) <= 1.0:
                out.append((x, 1.0))
    return out


def _angle(pair: Pair) -> float:
    return float(np.mod(np.arctan2(pair[0], pair[1]), np.pi))


def _distinct(triples: List[np.ndarray]) -> List[np.ndarray]:
    kept: List[np.ndarray] = []
    for tri in triples:
        if all(np.max(np.minimum(np.abs(tri - k), np.pi - np.abs(tri - k))) > _DEDUP for k in kept):
            kept.append(tri)
    return kept


def _solve_third(D: DCCube, known: Sequence[Tuple[int, Pair]], unknown: int,
                 p: np.ndarray) -> Optional[Pair]:
    columns = []
    for pair in ((1.0, 0.0), (0.0, 1.0)):
        params: List[np.ndarray] = [None, None, None]
        for direction, value in known:
            params[direction] = np.array([value])
        params[unknown] = np.array([pair])
        U, W = sample(D, *params)
        columns.append((U - qmul(p, W))[0])
    mat = np.stack(columns, axis=1)
    _, sv, vt = np.linalg.svd(mat)
    if sv[0] <= 1e-12 * max(1.0, D.scale()):
        raise PointNearSingularity("a whole parameter line maps to the query point")
    if sv[1] > 1e-7 * sv[0]:
        return None
    n, d = vt[-1]
    return float(n), float(d)


def count_preimages(D: DCCube, p: MPoint, tol: Optional[Tolerance] = None) -> int:
    tol = resolve(tol)
    if is_infinite(p):
        raise PointNearSingularity("degree is evaluated at finite points")
    q = p.as_array()
    target = mpoint_sphere_image(p)
    quartics = {d: slice_quartic(D, d, q) for d in range(3)}
    for first, second in itertools.combinations(range(3), 2):
        if quartics[first] is None or quartics[second] is None:
            continue
        third = 3 - first - second
        found = []
        for a, b in itertools.product(_real_roots(quartics[first]), _real_roots(quartics[second])):
            c = _solve_third(D, [(first, a), (second, b)], third, q)
            if c is None:
                continue
            pairs: List[Pair] = [None, None, None]
            pairs[first], pairs[second], pairs[third] = a, b, c
            U, W = sample(D, *(np.array([pr]) for pr in pairs))
            if np.sqrt(np.sum(U * U) + np.sum(W * W)) <= _BASE_POINT * max(1.0, D.scale()):
                continue
            if not np.linalg.norm(sphere_image(U, W)[0] - target) <= tol.sample:
                continue
            found.append(np.array([_angle(pr) for pr in pairs]))
        return len(_distinct(found))
    raise SolverInconclusive("slice determinants vanish identically in two directions")


def _regular_points(D: DCCube, locus: SingularLocus, count: int,
                    rng: np.random.Generator) -> List[MPoint]:
    points: List[MPoint] = []
    for _ in range(200 * count):
        alphas = rng.uniform(0.0, np.pi, size=3)
        E, dE = sphere_frame(D, *alphas)
        if abs(float(chordal_jacobian(E, dE))) < 1e-3:
            continue
        U, W = sample(D, *(angle_chart(np.array([a])) for a in alphas))
        image = sphere_image(U, W)[0]
        if image[3] > 0.98:
            continue
        p = Quaternion.from_vector(image[:3] / (1.0 - image[3]))
        if near_locus(locus, p, factor=10.0) or locus_distance(locus, p) < _LOCUS_GAP:
            continue
        points.append(p)
        if len(points) == count:
            return points
    raise SolverInconclusive("no regular sample points found", {"found": len(points)})


def degree(D: DCCube, p: Optional[MPoint] = None, tol: Optional[Tolerance] = None,
           seed: Optional[int] = None, locus: Optional[SingularLocus] = None) -> int:
    """Number of preimages of a regular point, checked at several points when p is not given."""
    tol = resolve(tol)
    locus = locus if locus is not None else singular_locus(D, tol)
    if p is not None:
        if near_locus(locus, p, factor=10.0):
            raise PointNearSingularity("query point is close to the singular locus", {"point": str(p)})
        return count_preimages(D, p, tol)
    rng = np.random.default_rng(settings.SEED if seed is None else seed)
    points = _regular_points(D, locus, settings.DEGREE_POINTS, rng)
    counts = [count_preimages(D, q, tol) for q in points]
    logger.info("preimage counts %s", counts)
    if len(set(counts)) != 1:
        raise SolverInconclusive(
            "preimage counts differ between regular points",
            {"counts": counts, "points": [str(q) for q in points]},
        )
    return counts[0]
