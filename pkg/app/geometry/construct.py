"""
Builders for Dupin cyclide patches and cubes
"""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from app.core.errors import (
    CoincidentPoints,
    DegenerateArc,
    DegenerateTriangle,
    IncompatibleFaces,
    InvalidParameter,
    NonCollinearInput,
    NonConcyclicCorners,
    NonOrthogonalTangents,
)
from app.core.tolerance import Tolerance, resolve
from app.geometry.qb import (
    DCCube,
    DCPatch,
    HomogeneousPoint,
    angle_chart,
    farin_point,
    image_to_mpoint,
    proj_div,
    sample,
    sphere_image,
    to_points,
)
from app.geometry.quat import (
    INFINITY,
    I,
    J,
    ONE,
    ZERO,
    MPoint,
    Quaternion,
    SphereInversion,
    as_mpoint,
    chordal_distance,
    collinear,
    concyclic,
    inversion,
    is_infinite,
    points_equal,
    qmul,
)

logger = logging.getLogger(__name__)


def _tangent_pair(v1: Quaternion, v2: Quaternion, tol: Tolerance) -> Tuple[Quaternion, Quaternion]:
    v1 = as_mpoint(v1, tol)
    v2 = as_mpoint(v2, tol)
    n1, n2 = abs(v1), abs(v2)
    if n1 == 0.0 or n2 == 0.0:
        raise NonOrthogonalTangents("tangent vectors must be nonzero")
    if not tol.is_zero(float(v1.vector @ v2.vector) / (n1 * n2)):
        raise NonOrthogonalTangents(
            "corner tangents must be orthogonal",
            {"dot": float(v1.vector @ v2.vector)},
        )
    return v1, v2


def patch_weights_infinite(p1: MPoint, p2: MPoint, p3: MPoint,
                           v1: Quaternion, v2: Quaternion,
                           tol: Optional[Tolerance] = None) -> DCPatch:
    """Principal patch with the corner p0 at infinity."""
    tol = resolve(tol)
    points = [as_mpoint(p, tol) for p in (p1, p2, p3)]
    if any(is_infinite(p) for p in points):
        raise NonCollinearInput("only p0 may be infinite here")
    p1, p2, p3 = points
    if points_equal(p1, p2, tol):
        raise CoincidentPoints("p1 and p2 must differ")
    if not collinear(points, tol):
        raise NonCollinearInput("p1, p2, p3 must be collinear when p0 is infinite")
    v1, v2 = _tangent_pair(v1, v2, tol)
    v12 = (p1 - p2) * v1 * v2
    return DCPatch.from_points(
        [
            HomogeneousPoint(ONE, ZERO),
            HomogeneousPoint(-(p1 * v1), -v1),
            HomogeneousPoint(-(p2 * v2), -v2),
            HomogeneousPoint(p3 * v12, v12),
        ],
        tangents=(v1, v2),
    )


def patch_weights_finite(p0: MPoint, p1: MPoint, p2: MPoint, p3: MPoint,
                         v1: Quaternion, v2: Quaternion,
                         tol: Optional[Tolerance] = None) -> DCPatch:
    """Principal patch through four finite concyclic corners with tangents v1, v2 at p0."""
    tol = resolve(tol)
    points = [as_mpoint(p, tol) for p in (p0, p1, p2, p3)]
    if any(is_infinite(p) for p in points):
        raise InvalidParameter("corners must be finite, use patch_weights_infinite")
    p0, p1, p2, p3 = points
    for other in (p1, p2, p3):
        if points_equal(p0, other, tol):
            raise CoincidentPoints("corners must differ from p0")
    if not concyclic(p0, p1, p2, p3, tol):
        raise NonConcyclicCorners("corners must lie on a common M-circle")
    v1, v2 = _tangent_pair(v1, v2, tol)
    d1 = (p1 - p0).inverse()
    d2 = (p2 - p0).inverse()
    weights = [ONE, d1 * v1, d2 * v2, (p3 - p0).inverse() * (d1 - d2) * v1 * v2]
    return DCPatch.from_points(
        [HomogeneousPoint(p * w, w) for p, w in zip(points, weights)],
        tangents=(v1, v2),
    )


def bipolar_patch(a: float, tol: Optional[Tolerance] = None) -> DCPatch:
    """F(s, t) = (si + tj)(1 - a s t k)^-1; Cartesian at a = 0."""
    p3 = Quaternion.imag(1.0 + a, 1.0 - a, 0.0) * (1.0 / (1.0 + a * a))
    return patch_weights_finite(ZERO, I, J, p3, I, J, tol)


def one_polar_patch() -> DCPatch:
    """Inverse of the Cartesian grid; all coordinate circles meet at the origin."""
    return DCPatch(
        np.array([[0, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 0], [0, 1, 0, 0]], dtype=float),
        np.array([[1, 0, 0, 0], [1, 0, 0, 0], [1, 0, 0, 0], [1, 0, 0, 1]], dtype=float),
        tangents=(I, J),
    )


# Poles of 2-dimensional systems

_POLE_SAMPLES = 720


def _line_gap(patch: DCPatch, axis: int, alpha: np.ndarray) -> np.ndarray:
    """Chordal distance between the ends (0 and infinity) of the coordinate line at alpha."""
    fixed = angle_chart(alpha)
    zero = np.broadcast_to(np.array([0.0, 1.0]), fixed.shape)
    inf = np.broadcast_to(np.array([1.0, 0.0]), fixed.shape)
    if axis == 0:
        a = sphere_image(*sample(patch, fixed, zero))
        b = sphere_image(*sample(patch, fixed, inf))
    else:
        a = sphere_image(*sample(patch, zero, fixed))
        b = sphere_image(*sample(patch, inf, fixed))
    return np.linalg.norm(a - b, axis=-1)


def patch_poles(patch: DCPatch, tol: Optional[Tolerance] = None) -> List[MPoint]:
    """Points where a whole family of coordinate circles collapses."""
    tol = resolve(tol)
    step = np.pi / _POLE_SAMPLES
    alphas = np.arange(_POLE_SAMPLES) * step
    images: List[np.ndarray] = []
    for axis in (0, 1):
        gaps = _line_gap(patch, axis, alphas)
        prev = np.roll(gaps, 1)
        nxt = np.roll(gaps, -1)
        candidates = np.nonzero((gaps <= prev) & (gaps <= nxt) & (gaps < 0.1))[0]
        for idx in candidates:
            res = minimize_scalar(
                lambda a: float(_line_gap(patch, axis, np.array([a]))[0]),
                bounds=(alphas[idx] - step, alphas[idx] + step),
                method="bounded",
                options={"xatol": 1e-12},
            )
            if res.fun > tol.sample:
                continue
            fixed = angle_chart(np.array([res.x]))
            other = np.array([[0.0, 1.0]])
            args = (fixed, other) if axis == 0 else (other, fixed)
            image = sphere_image(*sample(patch, *args))[0]
            if all(np.linalg.norm(image - seen) > 1e3 * tol.sample for seen in images):
                images.append(image)
    return [image_to_mpoint(image) for image in images]


def classify_patch(patch: DCPatch, tol: Optional[Tolerance] = None) -> str:
    """'1-polar' or '2-polar'."""
    poles = patch_poles(patch, tol)
    if len(poles) == 1:
        return "1-polar"
    if len(poles) == 2:
        return "2-polar"
    raise InvalidParameter("patch is not a 2-dimensional DC system", {"poles": len(poles)})


# Miquel point and cube completion

def _side_parameter(x: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    ab = b - a
    return float((x - a) @ ab / (ab @ ab))


def miquel_point(p1: MPoint, p2: MPoint, p3: MPoint,
                 l1: float, l2: float, l3: float,
                 tol: Optional[Tolerance] = None) -> MPoint:
    """Common point of the three circles through a vertex and its adjacent side points.

    Side points are q1 = (1-l1) p2 + l1 p3, q2 = (1-l2) p3 + l2 p1 and
    q3 = (1-l3) p1 + l3 p2.
    """
    tol = resolve(tol)
    if any(is_infinite(p) for p in (p1, p2, p3)):
        raise DegenerateTriangle("triangle vertices must be finite")
    a, b, c = (p.vector for p in (p1, p2, p3))
    if collinear([p1, p2, p3], tol):
        raise DegenerateTriangle("triangle vertices are collinear")
    if min(abs(l) for l in (l1, l2, l3, 1.0 - l1, 1.0 - l2, 1.0 - l3)) <= tol.bound(1.0):
        raise DegenerateTriangle("side points must differ from the vertices")
    d1 = float((b - c) @ (b - c))
    d2 = float((c - a) @ (c - a))
    d3 = float((a - b) @ (a - b))
    m1, m2, m3 = 1.0 - l1, 1.0 - l2, 1.0 - l3
    alpha = np.array([
        -l1 * m1 * d1 * d1 + l1 * l2 * d1 * d2 + m1 * m3 * d1 * d3,
        m1 * m2 * d1 * d2 - l2 * m2 * d2 * d2 + l2 * l3 * d2 * d3,
        l1 * l3 * d1 * d3 + m2 * m3 * d2 * d3 - l3 * m3 * d3 * d3,
    ])
    total = float(alpha.sum())
    if tol.is_zero(total, scale=float(np.abs(alpha).max())):
        return INFINITY
    return Quaternion.from_vector((alpha[0] * a + alpha[1] * b + alpha[2] * c) / total)


def _anchor(h: HomogeneousPoint, tol: Tolerance) -> Quaternion:
    return h.u if tol.is_zero(abs(h.w), scale=abs(h.u)) else h.w


def _aligned(face: DCPatch, ref: Quaternion, tol: Tolerance) -> DCPatch:
    anchor = _anchor(face.entry(0), tol)
    return face.right_multiply(anchor.inverse() * ref)


def fourth_weight(a: HomogeneousPoint, b: HomogeneousPoint, c: HomogeneousPoint,
                  x: MPoint, tol: Optional[Tolerance] = None) -> HomogeneousPoint:
    """Control pair at corner x of the principal patch with corners a, b, c and finite points."""
    tol = resolve(tol)
    pa, pb, pc = (proj_div(h, tol) for h in (a, b, c))
    if any(is_infinite(p) for p in (pa, pb, pc, x)):
        raise InvalidParameter("fourth_weight needs finite corners")
    wa_inv = a.w.inverse()
    v1 = (pb - pa) * (b.w * wa_inv)
    v2 = (pc - pa) * (c.w * wa_inv)
    wx = (x - pa).inverse() * ((pb - pa).inverse() - (pc - pa).inverse()) * v1 * v2 * a.w
    return HomogeneousPoint(x * wx, wx)


_GENERIC_OFFSETS = (
    np.array([0.3137, -0.2718, 0.4142]),
    np.array([-0.5772, 0.6931, 0.1618]),
    np.array([0.7071, 0.1234, -0.8660]),
)


def _generic_center(points: Sequence[MPoint]) -> Tuple[Quaternion, float]:
    finite = np.array([p.vector for p in points if not is_infinite(p)])
    center = finite.mean(axis=0) if len(finite) else np.zeros(3)
    spread = float(np.max(np.linalg.norm(finite - center, axis=1))) if len(finite) else 1.0
    spread = max(spread, 1.0)
    best, best_gap = None, -1.0
    for offset in _GENERIC_OFFSETS:
        q = Quaternion.from_vector(center + spread * offset)
        gap = min(chordal_distance(q, p) for p in points)
        if gap > best_gap:
            best, best_gap = q, gap
    return best, spread * spread


def _complete_finite(entries: List[HomogeneousPoint], tol: Tolerance) -> HomogeneousPoint:
    points = [proj_div(h, tol) for h in entries]
    p0 = points[0]
    moved = [inversion(p0, 1.0, p) for p in points]
    q1, q2, q3, q4, q5, q6 = (m.vector for m in moved[1:7])
    l1 = _side_parameter(q6, q2, q4)
    l2 = _side_parameter(q5, q4, q1)
    l3 = _side_parameter(q3, q1, q2)
    m = miquel_point(moved[1], moved[2], moved[4], l1, l2, l3, tol)
    p7 = inversion(p0, 1.0, m)
    if is_infinite(p7):
        raise IncompatibleFaces("completed corner lands on the pole of the chart")
    return fourth_weight(entries[4], entries[5], entries[6], p7, tol)


def complete_cube(face_st: DCPatch, face_su: DCPatch, face_tu: DCPatch,
                  tol: Optional[Tolerance] = None) -> DCCube:
    """Unique cube with the given three faces at the corner p0.

    Face nets are indexed like cube faces: (s, t) entries 0,1,2,3, (s, u)
    entries 0,1,4,5 and (t, u) entries 0,2,4,6 of the cube.
    """
    tol = resolve(tol)
    ref = _anchor(face_st.entry(0), tol)
    st = face_st
    su = _aligned(face_su, ref, tol)
    tu = _aligned(face_tu, ref, tol)

    for name, left, right in (("s", (st, 1), (su, 1)), ("t", (st, 2), (tu, 1)), ("u", (su, 2), (tu, 2))):
        first, second = left[0], right[0]
        if not points_equal(proj_div(first.entry(0), tol), proj_div(second.entry(0), tol), tol):
            raise IncompatibleFaces("faces do not share the corner p0")
        try:
            f1 = farin_point(first.entry(0), first.entry(left[1]), tol)
            f2 = farin_point(second.entry(0), second.entry(right[1]), tol)
        except DegenerateArc as exc:
            raise IncompatibleFaces(f"edge {name} is degenerate: {exc}") from exc
        e1 = proj_div(first.entry(left[1]), tol)
        e2 = proj_div(second.entry(right[1]), tol)
        if not points_equal(e1, e2, _loose(tol)) or not points_equal(f1, f2, _loose(tol)):
            raise IncompatibleFaces(
                f"faces disagree on the {name}-edge at p0",
                {"farin": [str(f1), str(f2)]},
            )

    entries = [
        st.entry(0), st.entry(1), st.entry(2), st.entry(3),
        su.entry(2), su.entry(3), tu.entry(3),
    ]
    points = [proj_div(h, tol) for h in entries]
    if any(is_infinite(p) for p in points):
        center, r2 = _generic_center(points)
        inv = SphereInversion(center, r2)
        moved = []
        for h in entries:
            u, w = inv.apply_to_pairs(h.u.as_array(), h.w.as_array())
            moved.append(HomogeneousPoint(Quaternion.from_array(u), Quaternion.from_array(w)))
        last = _complete_finite(moved, tol)
        u, w = inv.apply_to_pairs(last.u.as_array(), last.w.as_array())
        # inverting twice scales the pair by -r2
        last = HomogeneousPoint(
            Quaternion.from_array(u / -r2), Quaternion.from_array(w / -r2)
        )
    else:
        last = _complete_finite(entries, tol)
    cube = DCCube.from_points(entries + [last])
    logger.debug("completed cube, p7 = %s", proj_div(last, tol))
    return cube


def _loose(tol: Tolerance) -> Tolerance:
    return Tolerance(abs_tol=tol.sample, rel_tol=tol.sample)


# Offset and axial constructions

def _normalized_with_tangents(patch: DCPatch, tol: Tolerance) -> Tuple[DCPatch, Quaternion, Quaternion]:
    if patch.tangents is not None:
        return patch, patch.tangents[0], patch.tangents[1]
    h0 = patch.entry(0)
    p0 = proj_div(h0, tol)
    if is_infinite(p0):
        net = patch.right_multiply(h0.u.inverse())
        v1, v2 = -net.entry(1).w, -net.entry(2).w
    else:
        net = patch.right_multiply(h0.w.inverse())
        points = net.control_points(tol)
        v1 = (points[1] - p0) * net.entry(1).w
        v2 = (points[2] - p0) * net.entry(2).w
    v1 = Quaternion(0.0, v1.x, v1.y, v1.z)
    v2 = Quaternion(0.0, v2.x, v2.y, v2.z)
    return net, v1, v2


def offset_cube(patch: DCPatch, d: float, tol: Optional[Tolerance] = None) -> DCCube:
    """Cube whose u = 1 face is the offset of the patch at signed distance d."""
    tol = resolve(tol)
    if d == 0.0:
        raise InvalidParameter("offset distance must be nonzero (d = 0 repeats the face)")
    net, v1, v2 = _normalized_with_tangents(patch, tol)
    normal = v1 * v2
    if normal.is_zero(tol):
        raise NonOrthogonalTangents("corner tangents are parallel")
    n0 = (normal * (1.0 / abs(normal))).as_array()
    u_far = net.u - d * qmul(net.w, n0)
    return DCCube(np.concatenate([net.u, u_far]), np.concatenate([net.w, net.w]))


def axial_cube(patch: DCPatch, n: Quaternion, tol: Optional[Tolerance] = None) -> DCCube:
    """Rotational cube: the u-parameter rotates the planar patch about the axis through 0 along n."""
    tol = resolve(tol)
    n = as_mpoint(n, tol)
    if n.is_zero(tol):
        raise InvalidParameter("axis direction must be nonzero")
    n = n * (1.0 / abs(n))
    grid = np.linspace(0.2, np.pi - 0.3, 4)
    a, b = np.meshgrid(grid, grid)
    pts, finite = to_points(*sample(patch, angle_chart(a.ravel()), angle_chart(b.ravel())))
    pts = pts[finite]
    axis = n.vector
    radial = pts - np.outer(pts @ axis, axis)
    if len(radial) >= 2:
        sv = np.linalg.svd(radial, compute_uv=False)
        scale = max(1.0, float(np.abs(radial).max()))
        if sv[1] > tol.sample * scale * len(radial):
            raise InvalidParameter("patch must lie in a plane containing the rotation axis")
    na = n.as_array()
    return DCCube(
        np.concatenate([patch.u, qmul(na, patch.u)]),
        np.concatenate([patch.w, qmul(na, patch.w)]),
    )
