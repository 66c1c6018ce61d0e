"""
Homogeneous quaternionic Bezier nets

A net stores control pairs (u_i, w_i) as numpy arrays of shape (n, 4). Patches
use the flat index i + 2j for the corner (i, j); cubes use i + 2j + 4k for the
corner (i, j, k) in (s, t, u). Parameters live on the projective line and are
handled as (num, den) pairs so that infinity is an ordinary parameter.
"""

import enum
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import Polynomial

from app.core.errors import (
    DegenerateArc,
    IndeterminatePoint,
    InvalidParameter,
    InvariantViolation,
    PoleEncountered,
    ZeroMultiplier,
    ZeroPair,
)
from app.core.tolerance import Tolerance, resolve
from app.geometry.quat import (
    INFINITY,
    MPoint,
    Quaternion,
    SphereInversion,
    as_quaternion,
    chordal_distance,
    is_infinite,
    points_equal,
    qconj,
    qinv,
    qmul,
    qnorm2,
    study,
)

logger = logging.getLogger(__name__)

ParamLike = Union[float, int, Tuple[float, float]]

DIRECTIONS = ("s", "t", "u")


def as_projective(value: ParamLike) -> Tuple[float, float]:
    """Parameter as a (num, den) pair; math.inf maps to (1, 0)."""
    if isinstance(value, (tuple, list, np.ndarray)):
        n, d = (float(v) for v in value)
        if n == 0.0 and d == 0.0:
            raise ZeroPair("projective parameter (0, 0)")
        return n, d
    value = float(value)
    if math.isinf(value):
        return 1.0, 0.0
    return value, 1.0


def direction_index(direction: Union[int, str]) -> int:
    if isinstance(direction, str):
        if direction not in DIRECTIONS:
            raise InvalidParameter(f"unknown direction {direction!r}")
        return DIRECTIONS.index(direction)
    if direction not in (0, 1, 2):
        raise InvalidParameter(f"unknown direction {direction!r}")
    return int(direction)


def angle_chart(alpha) -> np.ndarray:
    """(sin a, cos a) pairs; a in [0, pi) covers the projective line once."""
    alpha = np.asarray(alpha, dtype=float)
    return np.stack([np.sin(alpha), np.cos(alpha)], axis=-1)


def _angle_chart_derivative(alpha) -> np.ndarray:
    alpha = np.asarray(alpha, dtype=float)
    return np.stack([np.cos(alpha), -np.sin(alpha)], axis=-1)


def _bernstein(pairs: np.ndarray) -> np.ndarray:
    pairs = np.asarray(pairs, dtype=float)
    return np.stack([pairs[..., 1] - pairs[..., 0], pairs[..., 0]], axis=-1)


_LETTERS = "abc"


def _contract(grid: np.ndarray, bases: Sequence[np.ndarray]) -> np.ndarray:
    """Sum grid[i, j, (k,) :] * B0[..., i] * B1[..., j] ..."""
    n = len(bases)
    spec = _LETTERS[:n] + "q," + ",".join("..." + _LETTERS[m] for m in range(n)) + "->...q"
    return np.einsum(spec, grid, *bases)


# Homogeneous points

@dataclass(frozen=True)
class HomogeneousPoint:
    """Pair (u, w) representing the point u w^-1."""

    u: Quaternion
    w: Quaternion

    def __post_init__(self):
        if self.u.norm2() == 0.0 and self.w.norm2() == 0.0:
            raise ZeroPair("homogeneous point (0, 0)")

    @classmethod
    def of(cls, u, w) -> "HomogeneousPoint":
        return cls(as_quaternion(u), as_quaternion(w))

    @classmethod
    def from_point(cls, p: MPoint) -> "HomogeneousPoint":
        if is_infinite(p):
            return cls(Quaternion(1.0), Quaternion())
        return cls(p, Quaternion(1.0))

    def study(self) -> float:
        return float(study(self.u.as_array(), self.w.as_array()))

    def on_study_quadric(self, tol: Optional[Tolerance] = None) -> bool:
        scale = self.u.norm2() + self.w.norm2()
        return resolve(tol).is_zero(self.study(), scale=scale)

    def point(self, tol: Optional[Tolerance] = None) -> MPoint:
        return proj_div(self, tol)


def proj_div(h: HomogeneousPoint, tol: Optional[Tolerance] = None) -> MPoint:
    """u w^-1, or infinity when w vanishes; the real residue is dropped."""
    tol = resolve(tol)
    if tol.is_zero(abs(h.w), scale=abs(h.u)):
        return INFINITY
    p = h.u * h.w.inverse()
    return Quaternion(0.0, p.x, p.y, p.z)


# Nets

def _frozen(values, rows: int) -> np.ndarray:
    arr = np.array(
        [as_quaternion(v).as_array() for v in values]
        if not isinstance(values, np.ndarray) else values,
        dtype=float,
    )
    if arr.shape != (rows, 4):
        raise InvalidParameter(f"net needs shape ({rows}, 4), got {arr.shape}")
    arr.setflags(write=False)
    return arr


class _Net:
    """Shared behavior of patches and cubes"""

    u: np.ndarray
    w: np.ndarray
    _size: int = 0

    @property
    def dimension(self) -> int:
        return int(round(math.log2(self._size)))

    def grid(self) -> Tuple[np.ndarray, np.ndarray]:
        """Control arrays indexed [i, j(, k), :]"""
        shape = (2,) * self.dimension + (4,)
        order = tuple(reversed(range(self.dimension))) + (self.dimension,)
        return (
            self.u.reshape(shape).transpose(order),
            self.w.reshape(shape).transpose(order),
        )

    def entry(self, index: int) -> HomogeneousPoint:
        return HomogeneousPoint(
            Quaternion.from_array(self.u[index]), Quaternion.from_array(self.w[index])
        )

    def entries(self) -> List[HomogeneousPoint]:
        return [self.entry(i) for i in range(self._size)]

    def control_points(self, tol: Optional[Tolerance] = None) -> List[MPoint]:
        return [proj_div(h, tol) for h in self.entries()]

    def scale(self) -> float:
        return float(max(np.max(np.abs(self.u)), np.max(np.abs(self.w)), 1e-300))

    def study_residuals(self) -> np.ndarray:
        return study(self.u, self.w)

    def check(self, tol: Optional[Tolerance] = None) -> None:
        """Raise InvariantViolation unless every entry is nonzero and on the Study quadric."""
        tol = resolve(tol)
        norms = qnorm2(self.u) + qnorm2(self.w)
        if np.any(norms == 0.0):
            raise InvariantViolation("net contains a zero pair")
        residual = np.abs(self.study_residuals())
        bad = [int(i) for i in np.nonzero(residual > tol.bound(1.0) * norms)[0]]
        if bad:
            raise InvariantViolation(
                "control points off the Study quadric",
                {"indices": bad, "max_residual": float(residual.max())},
            )

    def same_net(self, other: "_Net", tol: Optional[Tolerance] = None) -> bool:
        tol = resolve(tol)
        bound = tol.bound(max(self.scale(), other.scale()))
        return bool(
            np.all(np.abs(self.u - other.u) <= bound) and np.all(np.abs(self.w - other.w) <= bound)
        )

    def proportional_to(self, other: "_Net", tol: Optional[Tolerance] = None) -> bool:
        """Entries agree up to one nonzero real factor per control point."""
        tol = resolve(tol)
        for i in range(self._size):
            a = np.concatenate([self.u[i], self.w[i]])
            b = np.concatenate([other.u[i], other.w[i]])
            scale = max(np.linalg.norm(a), np.linalg.norm(b))
            rank = np.linalg.svd(np.stack([a, b]), compute_uv=False)
            if rank[1] > tol.bound(scale):
                return False
        return True

    def right_multiply(self, q: Quaternion) -> "_Net":
        qa = q.as_array()
        return self._rebuild(qmul(self.u, qa), qmul(self.w, qa))

    def _rebuild(self, u: np.ndarray, w: np.ndarray) -> "_Net":
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class DCPatch(_Net):
    """Bilinear net in (s, t); optional corner tangents used by the offset construction."""

    u: np.ndarray
    w: np.ndarray
    tangents: Optional[Tuple[Quaternion, Quaternion]] = None
    _size: int = field(default=4, init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "u", _frozen(self.u, 4))
        object.__setattr__(self, "w", _frozen(self.w, 4))

    @classmethod
    def from_points(cls, points: Sequence[HomogeneousPoint],
                    tangents: Optional[Tuple[Quaternion, Quaternion]] = None) -> "DCPatch":
        return cls(
            np.array([h.u.as_array() for h in points]),
            np.array([h.w.as_array() for h in points]),
            tangents,
        )

    def _rebuild(self, u: np.ndarray, w: np.ndarray) -> "DCPatch":
        return DCPatch(u, w)

    def evaluate(self, s: ParamLike, t: ParamLike, tol: Optional[Tolerance] = None) -> MPoint:
        gu, gw = self.grid()
        bases = [_bernstein(np.array(as_projective(x))) for x in (s, t)]
        return _to_mpoint(_contract(gu, bases), _contract(gw, bases), self.scale(), tol)


@dataclass(frozen=True, eq=False)
class DCCube(_Net):
    """Trilinear net; entry i + 2j + 4k is the corner (i, j, k)."""

    u: np.ndarray
    w: np.ndarray
    _size: int = field(default=8, init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "u", _frozen(self.u, 8))
        object.__setattr__(self, "w", _frozen(self.w, 8))

    @classmethod
    def from_points(cls, points: Sequence[HomogeneousPoint]) -> "DCCube":
        return cls(
            np.array([h.u.as_array() for h in points]),
            np.array([h.w.as_array() for h in points]),
        )

    def _rebuild(self, u: np.ndarray, w: np.ndarray) -> "DCCube":
        return DCCube(u, w)

    def evaluate(self, s: ParamLike, t: ParamLike, u: ParamLike,
                 tol: Optional[Tolerance] = None) -> MPoint:
        return eval_cube(self, s, t, u, tol)


def _to_mpoint(U: np.ndarray, W: np.ndarray, scale: float, tol: Optional[Tolerance]) -> MPoint:
    tol = resolve(tol)
    nu = float(np.sqrt(qnorm2(U)))
    nw = float(np.sqrt(qnorm2(W)))
    if tol.is_zero(nu + nw, scale=scale):
        raise IndeterminatePoint("U and W vanish together", {"scale": scale})
    if tol.is_zero(nw, scale=nu):
        return INFINITY
    p = qmul(U, qinv(W))
    return Quaternion(0.0, float(p[1]), float(p[2]), float(p[3]))


# Evaluation

def sample(net: _Net, *params: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """U and W at arrays of (num, den) pairs, one array per parameter direction."""
    gu, gw = net.grid()
    bases = [_bernstein(p) for p in params]
    return _contract(gu, bases), _contract(gw, bases)


def to_points(U: np.ndarray, W: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """3D points of homogeneous samples plus a mask of finite ones."""
    nw = qnorm2(W)
    nu = qnorm2(U)
    finite = nw > 1e-24 * np.maximum(nu, 1e-300)
    safe = np.where(finite[..., None], W, np.array([1.0, 0.0, 0.0, 0.0]))
    p = qmul(U, qinv(safe))[..., 1:]
    return np.where(finite[..., None], p, np.nan), finite


def sphere_image(U: np.ndarray, W: np.ndarray) -> np.ndarray:
    """Stereographic image on the unit 3-sphere; infinity goes to (0, 0, 0, 1).

    Euclidean distances between images are chordal distances, so samples at or
    near poles need no special casing.
    """
    nu = qnorm2(U)
    nw = qnorm2(W)
    uw = qmul(U, qconj(W))
    image = np.concatenate([2.0 * uw[..., 1:], (nu - nw)[..., None]], axis=-1)
    return image / (nu + nw)[..., None]


def mpoint_sphere_image(p: MPoint) -> np.ndarray:
    if is_infinite(p):
        return np.array([0.0, 0.0, 0.0, 1.0])
    v = p.vector
    n2 = float(v @ v)
    return np.concatenate([2.0 * v, [n2 - 1.0]]) / (n2 + 1.0)


def image_to_mpoint(image: np.ndarray) -> MPoint:
    """Inverse stereographic projection."""
    image = np.asarray(image, dtype=float)
    den = 1.0 - image[3]
    if den <= 1e-14:
        return INFINITY
    return Quaternion.from_vector(image[:3] / den)


def eval_cube(D: DCCube, s: ParamLike, t: ParamLike, u: ParamLike,
              tol: Optional[Tolerance] = None) -> MPoint:
    gu, gw = D.grid()
    bases = [_bernstein(np.array(as_projective(x))) for x in (s, t, u)]
    return _to_mpoint(_contract(gu, bases), _contract(gw, bases), D.scale(), tol)


def _frame(net: _Net, charts: Sequence[np.ndarray], derivatives: Sequence[np.ndarray]):
    gu, gw = net.grid()
    bases = [_bernstein(c) for c in charts]
    dbases = [_bernstein(d) for d in derivatives]
    U = _contract(gu, bases)
    W = _contract(gw, bases)
    Winv = qinv(W)
    F = qmul(U, Winv)
    dF = []
    for m in range(len(bases)):
        mixed = list(bases)
        mixed[m] = dbases[m]
        dU = _contract(gu, mixed)
        dW = _contract(gw, mixed)
        dF.append(qmul(dU - qmul(F, dW), Winv))
    return F, np.stack(dF, axis=-2), W


def partials(D: DCCube, s: float, t: float, u: float,
             tol: Optional[Tolerance] = None) -> np.ndarray:
    """Rows dF/ds, dF/dt, dF/du as 3-vectors at a finite parameter triple."""
    values = [as_projective(x) for x in (s, t, u)]
    if any(d == 0.0 for _, d in values):
        raise InvalidParameter("partials need finite parameters, use angular_partials")
    charts = [np.array([n / d, 1.0]) for n, d in values]
    derivs = [np.array([1.0, 0.0])] * 3
    F, dF, W = _frame(D, charts, derivs)
    if resolve(tol).is_zero(float(np.sqrt(qnorm2(W))), scale=D.scale()):
        raise PoleEncountered("partials requested at a pole", {"params": [s, t, u]})
    return dF[..., 1:]


def angular_partials(net: _Net, *alphas) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Points, partials and W in the angle chart (sin a, cos a) per direction.

    Returns (F[..., 4], dF[..., n, 4], W[..., 4]) broadcast over the angle arrays.
    """
    alphas = np.broadcast_arrays(*[np.asarray(a, dtype=float) for a in alphas])
    charts = [angle_chart(a) for a in alphas]
    derivs = [_angle_chart_derivative(a) for a in alphas]
    return _frame(net, charts, derivs)


def sphere_frame(net: _Net, *alphas) -> Tuple[np.ndarray, np.ndarray]:
    """Stereographic images and their angular derivatives.

    Norms of the derivative rows are chordal speeds, finite at infinity too.
    Returns (E[..., 4], dE[..., n, 4]).
    """
    alphas = np.broadcast_arrays(*[np.asarray(a, dtype=float) for a in alphas])
    gu, gw = net.grid()
    bases = [_bernstein(angle_chart(a)) for a in alphas]
    dbases = [_bernstein(_angle_chart_derivative(a)) for a in alphas]
    U = _contract(gu, bases)
    W = _contract(gw, bases)
    total = qnorm2(U) + qnorm2(W)
    E = sphere_image(U, W)
    rows = []
    for m in range(len(bases)):
        mixed = list(bases)
        mixed[m] = dbases[m]
        dU = _contract(gu, mixed)
        dW = _contract(gw, mixed)
        du = np.sum(U * dU, axis=-1)
        dw = np.sum(W * dW, axis=-1)
        cross = qmul(dU, qconj(W)) + qmul(U, qconj(dW))
        dN = np.concatenate([2.0 * cross[..., 1:], (2.0 * (du - dw))[..., None]], axis=-1)
        dS = 2.0 * (du + dw)
        rows.append((dN - E * dS[..., None]) / total[..., None])
    return E, np.stack(rows, axis=-2)


def chordal_jacobian(E: np.ndarray, dE: np.ndarray) -> np.ndarray:
    """Signed volume of the three tangent rows inside the tangent space of the 3-sphere."""
    return np.linalg.det(np.concatenate([E[..., None, :], dE], axis=-2))


def jacobian(D: DCCube, s: float, t: float, u: float, tol: Optional[Tolerance] = None) -> float:
    """Triple product of the three partials."""
    return float(np.linalg.det(partials(D, s, t, u, tol)))


def farin_point(h0: HomogeneousPoint, h1: HomogeneousPoint,
                tol: Optional[Tolerance] = None) -> MPoint:
    """Image of the parameter 1/2 on the arc with control pairs h0, h1."""
    if points_equal(proj_div(h0, tol), proj_div(h1, tol), tol):
        raise DegenerateArc("arc endpoints coincide")
    u = h0.u + h1.u
    w = h0.w + h1.w
    if u.norm2() == 0.0 and w.norm2() == 0.0:
        raise DegenerateArc("arc weights cancel at the midpoint")
    return proj_div(HomogeneousPoint(u, w), tol)


def reparametrize_interior(D: DCCube, l1: float, l2: float, l3: float) -> DCCube:
    if 0.0 in (l1, l2, l3):
        raise ZeroMultiplier("interior reparametrization multipliers must be nonzero")
    mult = np.array([1.0, l1, l2, l1 * l2, l3, l1 * l3, l2 * l3, l1 * l2 * l3])
    return DCCube(D.u * mult[:, None], D.w * mult[:, None])


def apply_inversion_to_net(D: DCCube, q: MPoint, r2: float) -> DCCube:
    """Net of Inv_q^r o F."""
    if is_infinite(q):
        raise InvalidParameter("inversion center must be finite")
    u, w = SphereInversion(q, r2).apply_to_pairs(D.u, D.w)
    return DCCube(u, w)


def permute_net(D: DCCube, order: Sequence[int]) -> DCCube:
    """Net with entries reordered, new entry i taken from old entry order[i]."""
    idx = list(order)
    return DCCube(D.u[idx], D.w[idx])


# Slices and faces

def slice_patch(D: DCCube, direction: Union[int, str], value: ParamLike) -> DCPatch:
    """Bilinear patch F restricted to one parameter value, remaining directions in order."""
    axis = direction_index(direction)
    basis = _bernstein(np.array(as_projective(value)))
    gu, gw = D.grid()
    su = np.tensordot(basis, gu, axes=([0], [axis]))
    sw = np.tensordot(basis, gw, axes=([0], [axis]))
    return DCPatch(su.transpose(1, 0, 2).reshape(4, 4), sw.transpose(1, 0, 2).reshape(4, 4))


def face(D: DCCube, direction: Union[int, str], side: int) -> DCPatch:
    if side not in (0, 1):
        raise InvalidParameter("face side must be 0 or 1")
    return slice_patch(D, direction, float(side))


class SliceKind(str, enum.Enum):
    POINT = "point"
    CIRCLE = "circle"
    SPHERE = "sphere"


def slice_kind(D: DCCube, direction: Union[int, str], value: ParamLike,
               tol: Optional[Tolerance] = None) -> SliceKind:
    """Degeneracy of a slice: single point, M-circle, or a genuine surface."""
    tol = resolve(tol)
    patch = slice_patch(D, direction, value)
    a, b = np.meshgrid(np.linspace(0.1, np.pi - 0.2, 5), np.linspace(0.15, np.pi - 0.25, 5))
    F, dF, W = angular_partials(patch, a.ravel(), b.ravel())
    pts, finite = to_points(*sample(patch, angle_chart(a.ravel()), angle_chart(b.ravel())))
    ref = INFINITY if not finite[0] else Quaternion.from_vector(pts[0])
    spread = max(
        chordal_distance(ref, Quaternion.from_vector(p) if f else INFINITY)
        for p, f in zip(pts, finite)
    )
    if spread <= tol.sample:
        return SliceKind.POINT
    ok = qnorm2(W) > 1e-20 * patch.scale() ** 2
    if not np.any(ok):
        return SliceKind.POINT
    x = F[ok, 1:]
    conformal = 2.0 / (1.0 + np.sum(x * x, axis=-1))
    normal = np.cross(dF[ok, 0, 1:], dF[ok, 1, 1:])
    area = np.linalg.norm(normal, axis=-1) * conformal ** 2
    if np.max(area) <= tol.sample:
        return SliceKind.CIRCLE
    return SliceKind.SPHERE


# Spherical-slice polynomials

class RootKind(str, enum.Enum):
    ZERO = "identically_zero"
    DISTINCT = "real_distinct"
    DOUBLE = "real_double"
    COMPLEX = "complex"


@dataclass(frozen=True)
class QuadraticRoots:
    """Roots of a binary quadratic form as (num, den) pairs."""

    kind: RootKind
    roots: Tuple[Tuple[float, float], ...] = ()
    discriminant: float = 0.0

    def values(self) -> List[float]:
        return [n / d if d != 0.0 else math.inf for n, d in self.roots]


DOUBLE_ROOT_TOL = 1e-10


def quadratic_roots(poly: Polynomial, zero_scale: float = 1.0,
                    tol: Optional[Tolerance] = None) -> QuadraticRoots:
    """Roots of c0 d^2 + c1 n d + c2 n^2 on the projective line."""
    tol = resolve(tol)
    c = np.zeros(3)
    coef = np.asarray(poly.coef, dtype=float)[:3]
    c[: len(coef)] = coef
    c0, c1, c2 = c
    big = float(np.max(np.abs(c)))
    if tol.is_zero(big, scale=zero_scale):
        return QuadraticRoots(RootKind.ZERO)
    disc = c1 * c1 - 4.0 * c0 * c2
    if abs(disc) <= DOUBLE_ROOT_TOL * big * big:
        first = np.array([-c1, 2.0 * c2])
        second = np.array([2.0 * c0, -c1])
        n, d = first if np.linalg.norm(first) >= np.linalg.norm(second) else second
        return QuadraticRoots(RootKind.DOUBLE, ((float(n), float(d)),), disc)
    if disc < 0.0:
        return QuadraticRoots(RootKind.COMPLEX, (), disc)
    q = -0.5 * (c1 + math.copysign(math.sqrt(disc), c1 if c1 != 0.0 else 1.0))
    roots = sorted(
        [(float(q), float(c2)), (float(c0), float(q))],
        key=lambda r: r[0] / r[1] if r[1] != 0.0 else math.inf,
    )
    return QuadraticRoots(RootKind.DISTINCT, tuple(roots), disc)


@dataclass(frozen=True)
class SphericalPolys:
    """sigma_1..3 from the corner pairs (0,3) and, as a cross-check, (1,2)."""

    primary: Tuple[Polynomial, Polynomial, Polynomial]
    secondary: Tuple[Polynomial, Polynomial, Polynomial]
    scale: float = 1.0

    def __getitem__(self, direction: Union[int, str]) -> Polynomial:
        return self.primary[direction_index(direction)]

    def roots(self, direction: Union[int, str], tol: Optional[Tolerance] = None) -> QuadraticRoots:
        return quadratic_roots(self[direction], self.scale, tol)

    def coefficients(self) -> List[List[float]]:
        return [[float(c) for c in _padded(p)] for p in self.primary]

    def pairs_agree(self, tol: Optional[Tolerance] = None) -> Tuple[bool, bool, bool]:
        """Per direction, whether both corner pairs give the same polynomial up to a factor."""
        return tuple(
            sigma_equivalent(p, q, tol) for p, q in zip(self.primary, self.secondary)
        )


def _padded(p: Polynomial) -> np.ndarray:
    out = np.zeros(3)
    coef = np.asarray(p.coef, dtype=float)[:3]
    out[: len(coef)] = coef
    return out


_SAMPLE_X = np.array([-1.0, 0.0, 1.0])


def spherical_polys(D: DCCube, tol: Optional[Tolerance] = None) -> SphericalPolys:
    primary, secondary = [], []
    vander = np.vander(_SAMPLE_X, 3, increasing=True)
    for axis in range(3):
        first, second = [], []
        for x in _SAMPLE_X:
            patch = slice_patch(D, axis, float(x))
            u, w = patch.u, patch.w
            first.append(study(u[0], w[3]) + study(u[3], w[0]))
            second.append(study(u[1], w[2]) + study(u[2], w[1]))
        primary.append(Polynomial(np.linalg.solve(vander, np.array(first))))
        secondary.append(Polynomial(np.linalg.solve(vander, np.array(second))))
    polys = SphericalPolys(tuple(primary), tuple(secondary), D.scale() ** 2)
    for name, agree, p, q in zip(DIRECTIONS, polys.pairs_agree(tol), primary, secondary):
        if not agree:
            logger.warning(
                "sigma_%s from corner pairs (0,3) and (1,2) disagree: %s vs %s",
                name, _padded(p).tolist(), _padded(q).tolist(),
            )
    return polys


def sigma_equivalent(p: Polynomial, q: Polynomial, tol: Optional[Tolerance] = None) -> bool:
    """p and q agree up to a nonzero real factor."""
    tol = resolve(tol)
    a, b = _padded(p), _padded(q)
    scale = max(np.linalg.norm(a), np.linalg.norm(b))
    sv = np.linalg.svd(np.stack([a, b]), compute_uv=False)
    return bool(sv[1] <= tol.bound(scale) * 10)
