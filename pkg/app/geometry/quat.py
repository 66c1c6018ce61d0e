"""
Quaternions, the imaginary-quaternion model of 3-space plus a point at
infinity, inversions and Moebius generators.

Two layers live here: a small immutable ``Quaternion`` value class for
control data and user-facing results, and vectorized helpers (``qmul``,
``qconj``, ``qinv``) working on numpy arrays of shape (..., 4) for the
sampling-heavy code in ``qb`` and ``analysis``.
"""

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from app.core.errors import CoincidentPoints, InvalidParameter, ZeroPair
from app.core.tolerance import Tolerance, resolve


# Vectorized kernels on (..., 4) arrays ordered (r, x, y, z)

def qmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a0, a1, a2, a3 = np.moveaxis(a, -1, 0)
    b0, b1, b2, b3 = np.moveaxis(b, -1, 0)
    return np.stack(
        [
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ],
        axis=-1,
    )


def qconj(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float, copy=True)
    out[..., 1:] *= -1.0
    return out


def qnorm2(a: np.ndarray) -> np.ndarray:
    return np.sum(np.asarray(a, dtype=float) ** 2, axis=-1)


def qinv(a: np.ndarray) -> np.ndarray:
    return qconj(a) / qnorm2(a)[..., None]


def study(u: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Polarized Study form Re(u conj(w)); equals the 4-vector dot product."""
    return np.sum(np.asarray(u, dtype=float) * np.asarray(w, dtype=float), axis=-1)


@dataclass(frozen=True)
class Quaternion:
    """Quaternion r + x i + y j + z k"""

    r: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def imag(cls, x: float = 0.0, y: float = 0.0, z: float = 0.0) -> "Quaternion":
        return cls(0.0, float(x), float(y), float(z))

    @classmethod
    def from_array(cls, values: Sequence[float]) -> "Quaternion":
        r, x, y, z = (float(v) for v in values)
        return cls(r, x, y, z)

    @classmethod
    def from_vector(cls, values: Sequence[float]) -> "Quaternion":
        x, y, z = (float(v) for v in values)
        return cls(0.0, x, y, z)

    def as_array(self) -> np.ndarray:
        return np.array([self.r, self.x, self.y, self.z], dtype=float)

    @property
    def vector(self) -> np.ndarray:
        """Imaginary part as a 3-vector."""
        return np.array([self.x, self.y, self.z], dtype=float)

    def norm2(self) -> float:
        return self.r * self.r + self.x * self.x + self.y * self.y + self.z * self.z

    def __abs__(self) -> float:
        return float(np.sqrt(self.norm2()))

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.r, -self.x, -self.y, -self.z)

    def inverse(self) -> "Quaternion":
        n2 = self.norm2()
        if n2 == 0.0:
            raise ZeroDivisionError("quaternion 0 has no inverse")
        return Quaternion(self.r / n2, -self.x / n2, -self.y / n2, -self.z / n2)

    def is_zero(self, tol: Optional[Tolerance] = None) -> bool:
        return resolve(tol).is_zero(abs(self))

    def __add__(self, other: "QuaternionLike") -> "Quaternion":
        o = as_quaternion(other)
        return Quaternion(self.r + o.r, self.x + o.x, self.y + o.y, self.z + o.z)

    __radd__ = __add__

    def __sub__(self, other: "QuaternionLike") -> "Quaternion":
        o = as_quaternion(other)
        return Quaternion(self.r - o.r, self.x - o.x, self.y - o.y, self.z - o.z)

    def __rsub__(self, other: "QuaternionLike") -> "Quaternion":
        return as_quaternion(other) - self

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.r, -self.x, -self.y, -self.z)

    def __mul__(self, other: "QuaternionLike") -> "Quaternion":
        if isinstance(other, (int, float, np.floating, np.integer)):
            s = float(other)
            return Quaternion(self.r * s, self.x * s, self.y * s, self.z * s)
        return mul(self, as_quaternion(other))

    def __rmul__(self, other: "QuaternionLike") -> "Quaternion":
        if isinstance(other, (int, float, np.floating, np.integer)):
            return self * other
        return mul(as_quaternion(other), self)

    def __truediv__(self, other: "QuaternionLike") -> "Quaternion":
        """Right division self * other^-1."""
        if isinstance(other, (int, float, np.floating, np.integer)):
            return self * (1.0 / float(other))
        return self * as_quaternion(other).inverse()

    def isclose(self, other: "QuaternionLike", tol: Optional[Tolerance] = None) -> bool:
        o = as_quaternion(other)
        return resolve(tol).is_zero(abs(self - o), scale=max(abs(self), abs(o)))

    def __repr__(self) -> str:
        return f"Quaternion({self.r!r}, {self.x!r}, {self.y!r}, {self.z!r})"

    def __str__(self) -> str:
        parts = []
        for value, unit in ((self.r, ""), (self.x, "i"), (self.y, "j"), (self.z, "k")):
            if value != 0.0:
                parts.append(f"{value:+.6g}{unit}")
        return "".join(parts).lstrip("+") if parts else "0"


QuaternionLike = Union[Quaternion, float, int, Sequence[float]]


def as_quaternion(value: QuaternionLike) -> Quaternion:
    if isinstance(value, Quaternion):
        return value
    if isinstance(value, (int, float, np.floating, np.integer)):
        return Quaternion(float(value))
    arr = np.asarray(value, dtype=float).ravel()
    if arr.size == 4:
        return Quaternion.from_array(arr)
    if arr.size == 3:
        return Quaternion.from_vector(arr)
    raise InvalidParameter(f"cannot interpret {value!r} as a quaternion")


def mul(a: Quaternion, b: Quaternion) -> Quaternion:
    """Hamilton product a*b."""
    return Quaternion.from_array(qmul(a.as_array(), b.as_array()))


ONE = Quaternion(1.0)
I = Quaternion.imag(1.0, 0.0, 0.0)
J = Quaternion.imag(0.0, 1.0, 0.0)
K = Quaternion.imag(0.0, 0.0, 1.0)
ZERO = Quaternion()


class Infinity:
    """The point at infinity of the compactified imaginary quaternions."""

    _instance: Optional["Infinity"] = None

    def __new__(cls) -> "Infinity":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INFINITY"

    def __str__(self) -> str:
        return "inf"

    def __reduce__(self):
        return (Infinity, ())


INFINITY = Infinity()

MPoint = Union[Quaternion, Infinity]


def is_infinite(p: MPoint) -> bool:
    return isinstance(p, Infinity)


def as_mpoint(value, tol: Optional[Tolerance] = None) -> MPoint:
    """Validate a finite point (zero real part) or pass infinity through."""
    if is_infinite(value):
        return INFINITY
    q = as_quaternion(value)
    if not resolve(tol).is_zero(q.r, scale=abs(q)):
        raise InvalidParameter(
            "point must be an imaginary quaternion",
            {"real_part": q.r},
        )
    return Quaternion(0.0, q.x, q.y, q.z)


def points_equal(p: MPoint, q: MPoint, tol: Optional[Tolerance] = None) -> bool:
    if is_infinite(p) or is_infinite(q):
        return is_infinite(p) and is_infinite(q)
    return resolve(tol).is_zero(chordal_distance(p, q))


def chordal_distance(p: MPoint, q: MPoint) -> float:
    """Distance of the stereographic images on the unit 3-sphere; bounded by 2."""
    if is_infinite(p) and is_infinite(q):
        return 0.0
    if is_infinite(p):
        p, q = q, p
    pn2 = float(np.dot(p.vector, p.vector))
    if is_infinite(q):
        return 2.0 / np.sqrt(1.0 + pn2)
    d = p.vector - q.vector
    qn2 = float(np.dot(q.vector, q.vector))
    return float(2.0 * np.sqrt(np.dot(d, d)) / np.sqrt((1.0 + pn2) * (1.0 + qn2)))


def inversion(q: MPoint, r2: float, p: MPoint) -> MPoint:
    """Inversion p -> q - r2 (p - q)^-1 in the sphere of center q and squared radius r2."""
    if is_infinite(q):
        raise InvalidParameter("inversion center must be finite")
    if r2 == 0.0:
        raise InvalidParameter("inversion needs r2 != 0")
    if is_infinite(p):
        return q
    diff = p - q
    if diff.norm2() == 0.0:
        return INFINITY
    return q - diff.inverse() * float(r2)


def cross_ratio(p0: MPoint, p1: MPoint, p2: MPoint, p3: MPoint,
                tol: Optional[Tolerance] = None) -> Quaternion:
    """(p0-p1)(p1-p2)^-1(p2-p3)(p3-p0)^-1 with the two factors at infinity dropped."""
    points = (p0, p1, p2, p3)
    for a, b in combinations(range(4), 2):
        if points_equal(points[a], points[b], tol):
            raise CoincidentPoints(
                "cross ratio needs pairwise distinct points",
                {"indices": [a, b]},
            )
    if is_infinite(p0):
        return -((p1 - p2).inverse() * (p2 - p3))
    if is_infinite(p1):
        return -((p2 - p3) * (p3 - p0).inverse())
    if is_infinite(p2):
        return -((p0 - p1) * (p3 - p0).inverse())
    if is_infinite(p3):
        return -((p0 - p1) * (p1 - p2).inverse())
    return (p0 - p1) * (p1 - p2).inverse() * (p2 - p3) * (p3 - p0).inverse()


def is_real(q: Quaternion, tol: Optional[Tolerance] = None) -> bool:
    return resolve(tol).is_zero(float(np.linalg.norm(q.vector)), scale=abs(q))


def concyclic(p0: MPoint, p1: MPoint, p2: MPoint, p3: MPoint,
              tol: Optional[Tolerance] = None) -> bool:
    """Four points on a common M-circle; coincident points count as concyclic."""
    try:
        return is_real(cross_ratio(p0, p1, p2, p3, tol), tol)
    except CoincidentPoints:
        return True


def collinear(points: Iterable[MPoint], tol: Optional[Tolerance] = None) -> bool:
    finite = [p.vector for p in points if not is_infinite(p)]
    if len(finite) < 3:
        return True
    base = finite[0]
    rows = np.array([v - base for v in finite[1:]])
    scale = max(1.0, float(np.max(np.abs(rows))))
    sv = np.linalg.svd(rows, compute_uv=False)
    return len(sv) < 2 or resolve(tol).is_zero(sv[1], scale=scale)


def _pentaspherical(p: MPoint) -> np.ndarray:
    if is_infinite(p):
        return np.array([1.0, 0.0, 0.0, 0.0, 0.0])
    v = p.vector
    return np.array([float(np.dot(v, v)), v[0], v[1], v[2], 1.0])


def cospherical(p0: MPoint, p1: MPoint, p2: MPoint, p3: MPoint, p4: MPoint,
                tol: Optional[Tolerance] = None) -> bool:
    """Five points on a common M-sphere (5x5 determinant of (|p|^2, x, y, z, 1) rows)."""
    rows = np.array([_pentaspherical(p) for p in (p0, p1, p2, p3, p4)])
    norms = np.linalg.norm(rows, axis=1)
    det = float(np.linalg.det(rows / norms[:, None]))
    return resolve(tol).is_zero(det)


@dataclass(frozen=True)
class MSphere:
    """M-sphere a|p|^2 + b.p + c = 0 (a plane when a = 0)."""

    a: float
    b: Tuple[float, float, float]
    c: float

    @classmethod
    def from_vector(cls, coeffs: Sequence[float]) -> "MSphere":
        v = np.asarray(coeffs, dtype=float)
        v = v / np.linalg.norm(v)
        # sign normalization keeps equality tests stable
        lead = v[np.argmax(np.abs(v) > 1e-12)]
        if lead < 0:
            v = -v
        return cls(float(v[0]), (float(v[1]), float(v[2]), float(v[3])), float(v[4]))

    @classmethod
    def fit(cls, points: Sequence[MPoint]) -> Tuple["MSphere", float, float]:
        """Least-squares sphere through points: (sphere, residual, next singular value)."""
        rows = np.array([_pentaspherical(p) for p in points])
        rows = rows / np.linalg.norm(rows, axis=1)[:, None]
        _, sv, vt = np.linalg.svd(rows)
        sv = np.concatenate([sv, np.zeros(5 - len(sv))])
        return cls.from_vector(vt[-1]), float(sv[-1]), float(sv[-2])

    @classmethod
    def through(cls, points: Sequence[MPoint], tol: Optional[Tolerance] = None) -> "MSphere":
        sphere, residual, _ = cls.fit(points)
        if not resolve(tol).is_zero(residual):
            raise InvalidParameter("points are not cospherical", {"residual": residual})
        return sphere

    @classmethod
    def plane(cls, normal: Sequence[float], offset: float) -> "MSphere":
        """Plane normal.p = offset."""
        n = np.asarray(normal, dtype=float)
        return cls.from_vector([0.0, n[0], n[1], n[2], -offset])

    @classmethod
    def sphere(cls, center: Sequence[float], r2: float) -> "MSphere":
        """Sphere |p - center|^2 = r2 (r2 < 0 gives an imaginary sphere)."""
        m = np.asarray(center, dtype=float)
        return cls.from_vector([1.0, -2 * m[0], -2 * m[1], -2 * m[2], float(m @ m) - r2])

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.a, *self.b, self.c], dtype=float)

    @property
    def is_plane(self) -> bool:
        return abs(self.a) <= 1e-12

    def value(self, p: MPoint) -> float:
        return float(self.vector @ _pentaspherical(p))

    def contains(self, p: MPoint, tol: Optional[Tolerance] = None) -> bool:
        row = _pentaspherical(p)
        return resolve(tol).is_zero(float(self.vector @ row) / np.linalg.norm(row))

    def _form(self, other: "MSphere") -> float:
        b1 = np.asarray(self.b)
        b2 = np.asarray(other.b)
        return float(b1 @ b2 - 2.0 * (self.a * other.c + other.a * self.c))

    def inversive_product(self, other: "MSphere") -> float:
        """cos of the intersection angle; |.| < 1 intersecting, = 1 tangent, > 1 disjoint."""
        n1 = self._form(self)
        n2 = other._form(other)
        if n1 <= 0.0 or n2 <= 0.0:
            raise InvalidParameter("inversive product needs real spheres")
        return self._form(other) / float(np.sqrt(n1 * n2))

    def center_radius(self) -> Tuple[np.ndarray, float]:
        if self.is_plane:
            raise InvalidParameter("a plane has no center")
        center = -np.asarray(self.b) / (2.0 * self.a)
        r2 = float(center @ center) - self.c / self.a
        return center, r2

    def as_inversion(self) -> "SphereInversion":
        center, r2 = self.center_radius()
        return SphereInversion(Quaternion.from_vector(center), r2)

    @staticmethod
    def common_points(s1: "MSphere", s2: "MSphere", s3: "MSphere",
                      tol: Optional[Tolerance] = None) -> List[MPoint]:
        """Real points lying on all three M-spheres (0, 1 or 2 of them)."""
        m = np.array([s1.vector, s2.vector, s3.vector])
        _, sv, vt = np.linalg.svd(m)
        if sv[-1] <= 1e-10 * sv[0]:
            raise InvalidParameter("M-spheres are linearly dependent")
        n1, n2 = vt[3], vt[4]

        def cone(x: np.ndarray, y: np.ndarray) -> float:
            # polarized null-cone form X0 X4 - |X123|^2
            return 0.5 * (x[0] * y[4] + x[4] * y[0]) - float(x[1:4] @ y[1:4])

        qa, qb, qc = cone(n1, n1), 2.0 * cone(n1, n2), cone(n2, n2)
        scale = max(abs(qa), abs(qb), abs(qc))
        disc = qb * qb - 4.0 * qa * qc
        if disc < -resolve(tol).bound(scale * scale):
            return []
        disc = max(disc, 0.0)
        # projective roots (alpha : beta) of qa a^2 + qb a b + qc b^2
        q = -0.5 * (qb + np.copysign(np.sqrt(disc), qb if qb != 0.0 else 1.0))
        if q == 0.0:
            roots = [(0.0, 1.0)] if abs(qa) >= abs(qc) else [(1.0, 0.0)]
        else:
            roots = [(q, qa), (qc, q)]
        points: List[MPoint] = []
        for alpha, beta in roots:
            x = alpha * n1 + beta * n2
            x = x / np.linalg.norm(x)
            if abs(x[4]) <= 1e-12:
                p: MPoint = INFINITY
            else:
                p = Quaternion.from_vector(x[1:4] / x[4])
            if not any(points_equal(p, other, tol) for other in points):
                points.append(p)
        return points


# Moebius generators

@dataclass(frozen=True)
class Translation:
    """p -> p + a"""

    a: Quaternion

    def apply(self, p: MPoint) -> MPoint:
        return p if is_infinite(p) else p + self.a

    def inverse(self) -> "Translation":
        return Translation(-self.a)

    def apply_to_pairs(self, u: np.ndarray, w: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        return u + qmul(self.a.as_array(), w), w


@dataclass(frozen=True)
class Homothety:
    """p -> factor * p"""

    factor: float

    def __post_init__(self):
        if self.factor == 0.0:
            raise InvalidParameter("homothety factor must be nonzero")

    def apply(self, p: MPoint) -> MPoint:
        return p if is_infinite(p) else p * self.factor

    def inverse(self) -> "Homothety":
        return Homothety(1.0 / self.factor)

    def apply_to_pairs(self, u: np.ndarray, w: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        return self.factor * u, w


@dataclass(frozen=True)
class UnitInversion:
    """p -> -p^-1 (inversion in the unit sphere)"""

    def apply(self, p: MPoint) -> MPoint:
        return inversion(ZERO, 1.0, p)

    def inverse(self) -> "UnitInversion":
        return self

    def apply_to_pairs(self, u: np.ndarray, w: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        return -w, u.copy()


@dataclass(frozen=True)
class SphereInversion:
    """Inversion in the sphere with center q and squared radius r2 (negative: imaginary)."""

    center: Quaternion
    r2: float

    def __post_init__(self):
        if self.r2 == 0.0:
            raise InvalidParameter("inversion needs r2 != 0")

    def apply(self, p: MPoint) -> MPoint:
        return inversion(self.center, self.r2, p)

    def inverse(self) -> "SphereInversion":
        return self

    def apply_to_pairs(self, u: np.ndarray, w: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        q = self.center.as_array()
        q2 = qmul(q, q)
        shift = self.r2 * np.array([1.0, 0.0, 0.0, 0.0]) + q2
        return qmul(q, u) - qmul(shift, w), u - qmul(q, w)


Generator = Union[Translation, Homothety, UnitInversion, SphereInversion]


@dataclass(frozen=True)
class MobiusMap:
    """Composition of generators, applied in list order."""

    generators: Tuple[Generator, ...] = field(default_factory=tuple)

    def apply(self, p: MPoint) -> MPoint:
        for g in self.generators:
            p = g.apply(p)
        return p

    __call__ = apply

    def then(self, other: "MobiusMap") -> "MobiusMap":
        return MobiusMap(self.generators + other.generators)

    def inverse(self) -> "MobiusMap":
        return MobiusMap(tuple(g.inverse() for g in reversed(self.generators)))

    def apply_to_pairs(self, u: np.ndarray, w: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        u = np.asarray(u, dtype=float)
        w = np.asarray(w, dtype=float)
        for g in self.generators:
            u, w = g.apply_to_pairs(u, w)
        # keep the pairs well scaled
        scale = max(float(np.max(np.abs(u))), float(np.max(np.abs(w))))
        if scale == 0.0:
            raise ZeroPair("Moebius map collapsed the net")
        return u / scale, w / scale

    def apply_to_net(self, net):
        """Net of the map composed after the net's parametrization (patch or cube)."""
        u, w = self.apply_to_pairs(net.u, net.w)
        return type(net)(u, w)


def random_mobius(rng: np.random.Generator, length: int = 3) -> MobiusMap:
    """Random composition of translations, homotheties and sphere inversions."""
    generators: List[Generator] = []
    for _ in range(length):
        kind = rng.integers(0, 3)
        if kind == 0:
            generators.append(Translation(Quaternion.from_vector(rng.normal(size=3))))
        elif kind == 1:
            generators.append(Homothety(float(rng.uniform(0.5, 2.0)) * float(rng.choice([-1.0, 1.0]))))
        else:
            center = Quaternion.from_vector(rng.normal(size=3) * 2.0)
            generators.append(SphereInversion(center, float(rng.uniform(0.5, 2.0))))
    return MobiusMap(tuple(generators))
