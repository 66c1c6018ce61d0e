"""
Bicircular quartics and the focal curve toolkit

A bicircular quartic in a coordinate plane with coordinates (p, q) is
lambda r^4 + L(p, q) r^2 + Q(p, q) = 0, r^2 = p^2 + q^2. It is stored as the
coefficient vector of the monomials in ``QUARTIC_MONOMIALS``; conics
(lambda = L = 0) and circular cubics (lambda = 0) use the same record.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import ndimage

from app.core.errors import InvalidParameter, NotSymmetricForm, OutOfRegion, SingularCurve
from app.geometry.analysis.types import CurveKind
from app.geometry.quat import Quaternion, SphereInversion

logger = logging.getLogger(__name__)

QUARTIC_MONOMIALS = ("r4", "pr2", "qr2", "p2", "pq", "q2", "p", "q", "1")

# |det| of the scaled conic matrix below which a conic splits into lines
_SINGULAR_CONIC = 1e-9

# Coordinate plane -> (kept coordinate indices, axis names)
PLANES: Dict[str, Tuple[Tuple[int, int], str]] = {
    "z": ((0, 1), "xy"),
    "y": ((0, 2), "xz"),
    "x": ((1, 2), "yz"),
}


def _quartic_basis(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    r2 = p * p + q * q
    return np.stack([r2 * r2, p * r2, q * r2, p * p, p * q, q * q, p, q, np.ones_like(p)], axis=-1)


@dataclass
class BicircularQuartic:
    plane: str
    coefficients: np.ndarray
    residual: float = 0.0

    def __post_init__(self):
        if self.plane not in PLANES:
            raise InvalidParameter(f"unknown carrier plane {self.plane!r}")
        self.coefficients = np.asarray(self.coefficients, dtype=float).reshape(9)

    @classmethod
    def from_terms(cls, plane: str, **terms: float) -> "BicircularQuartic":
        unknown = set(terms) - set(QUARTIC_MONOMIALS)
        if unknown:
            raise InvalidParameter(f"unknown monomials {sorted(unknown)}")
        return cls(plane, np.array([terms.get(m, 0.0) for m in QUARTIC_MONOMIALS]))

    @classmethod
    def symmetric(cls, plane: str, lam: float, A: float, B: float, C: float) -> "BicircularQuartic":
        return cls.from_terms(plane, r4=lam, p2=A, q2=B, **{"1": C})

    @property
    def axes(self) -> str:
        return PLANES[self.plane][1]

    @property
    def scale(self) -> float:
        return float(np.abs(self.coefficients).max())

    def _zero(self, value: float, tol: float = 1e-12) -> bool:
        return abs(value) <= tol * max(self.scale, 1e-300)

    @property
    def kind(self) -> CurveKind:
        c = self.coefficients
        if not self._zero(c[0]):
            return CurveKind.BICIRCULAR_QUARTIC
        if not (self._zero(c[1]) and self._zero(c[2])):
            return CurveKind.CIRCULAR_CUBIC
        return conic_kind(c[3], c[4], c[5], c[6], c[7], c[8])

    def evaluate(self, p, q) -> np.ndarray:
        return _quartic_basis(np.asarray(p, dtype=float), np.asarray(q, dtype=float)) @ self.coefficients

    def evaluate_3d(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(points)
        i, j = PLANES[self.plane][0]
        return self.evaluate(points[:, i], points[:, j])

    def plane_coordinates(self, points: np.ndarray) -> np.ndarray:
        i, j = PLANES[self.plane][0]
        return np.atleast_2d(points)[:, [i, j]]

    def normalized(self) -> np.ndarray:
        """Coefficients scaled so the largest magnitude is 1 and the leading nonzero one positive."""
        c = self.coefficients / self.scale
        lead = c[np.nonzero(np.abs(c) > 1e-9)[0][0]]
        return c * np.sign(lead)

    def equivalent(self, other: "BicircularQuartic", tol: float = 1e-8) -> bool:
        if self.plane != other.plane:
            return False
        return bool(np.max(np.abs(self.normalized() - other.normalized())) <= tol)

    def is_symmetric(self) -> bool:
        c = self.coefficients
        return all(self._zero(c[idx]) for idx in (1, 2, 4, 6, 7))

    def window(self) -> float:
        """Half-width of a square containing every bounded real branch."""
        c = np.abs(self.coefficients)
        if self._zero(c[0]):
            return 10.0
        ratio = c[1:] / c[0]
        return float(1.5 * (1.0 + max(ratio[:2].max(), math.sqrt(ratio[2:5].max()),
                                      ratio[5:7].max() ** (1 / 3), ratio[7] ** 0.25)))

    def lines(self) -> List[Tuple[np.ndarray, np.ndarray]]:
        """(point, direction) of each line when the curve is a conic that splits."""
        if not self.kind.splits:
            return []
        return conic_lines(*self.coefficients[3:])

    def components(self, resolution: int = 400) -> int:
        return count_components(self.evaluate, self.window(), resolution)

    def to_dict(self) -> Dict[str, float]:
        return {m: float(v) for m, v in zip(QUARTIC_MONOMIALS, self.coefficients)}


def _conic_matrix(a: float, b: float, c: float, d: float, e: float, f: float) -> np.ndarray:
    return np.array([[a, b / 2, d / 2], [b / 2, c, e / 2], [d / 2, e / 2, f]], dtype=float)


def conic_kind(a: float, b: float, c: float, d: float, e: float, f: float,
               tol: float = 1e-12) -> CurveKind:
    """Shape of a p^2 + b pq + c q^2 + d p + e q + f = 0 over the reals."""
    scale = max(abs(a), abs(b), abs(c), abs(d), abs(e), abs(f), 1e-300)
    if max(abs(a), abs(b), abs(c)) <= tol * scale:
        return CurveKind.LINE if max(abs(d), abs(e)) > tol * scale else CurveKind.EMPTY
    disc = b * b - 4.0 * a * c
    singular = abs(np.linalg.det(_conic_matrix(a, b, c, d, e, f) / scale)) <= max(tol, _SINGULAR_CONIC)
    if abs(disc) <= tol * scale * scale:
        if not singular:
            return CurveKind.PARABOLA
        lines = conic_lines(a, b, c, d, e, f, tol)
        return {0: CurveKind.EMPTY, 1: CurveKind.DOUBLE_LINE}.get(len(lines), CurveKind.PARALLEL_LINES)
    if disc > 0.0:
        return CurveKind.LINE_PAIR if singular else CurveKind.HYPERBOLA
    # ellipse type: real only when the value at the centre has the opposite sign of a
    center = np.linalg.solve([[2 * a, b], [b, 2 * c]], [-d, -e])
    value = a * center[0] ** 2 + b * center[0] * center[1] + c * center[1] ** 2 + d * center[0] + e * center[1] + f
    if abs(value) <= tol * scale:
        return CurveKind.POINT
    if value * a > 0.0:
        return CurveKind.EMPTY
    if abs(a - c) <= tol * scale and abs(b) <= tol * scale:
        return CurveKind.CIRCLE
    return CurveKind.ELLIPSE


def conic_lines(a: float, b: float, c: float, d: float, e: float, f: float,
                tol: float = 1e-12) -> List[Tuple[np.ndarray, np.ndarray]]:
    """Real lines of a conic that splits into lines, as (point, unit direction) pairs.

    A double line is returned once. Conics that do not split give an empty list.
    """
    scale = max(abs(a), abs(b), abs(c), abs(d), abs(e), abs(f), 1e-300)
    a, b, c, d, e, f = (v / scale for v in (a, b, c, d, e, f))
    if max(abs(a), abs(b), abs(c)) <= tol:
        norm = math.hypot(d, e)
        if norm <= tol:
            return []
        n = np.array([d, e]) / norm
        return [(-f / norm * n, np.array([-n[1], n[0]]))]
    if abs(np.linalg.det(_conic_matrix(a, b, c, d, e, f))) > max(tol, _SINGULAR_CONIC):
        return []
    quad = np.array([[a, b / 2], [b / 2, c]])
    eigvals, eigvecs = np.linalg.eigh(quad)
    disc = b * b - 4.0 * a * c
    if abs(disc) <= tol:
        # lam (n.x)^2 + g (n.x) + h = 0 with n the eigenvector of the nonzero eigenvalue
        k = int(np.argmax(np.abs(eigvals)))
        lam, n = eigvals[k], eigvecs[:, k]
        g = float(np.dot([d, e], n))
        inner = g * g - 4.0 * lam * f
        direction = np.array([-n[1], n[0]])
        if inner < -tol:
            return []
        if inner <= tol:
            return [(-g / (2.0 * lam) * n, direction)]
        root = math.sqrt(inner)
        return [((-g + s * root) / (2.0 * lam) * n, direction) for s in (1.0, -1.0)]
    if disc < 0.0:
        return []
    center = np.linalg.solve(2.0 * quad, [-d, -e])
    # a X^2 + b XY + c Y^2 = 0 in coordinates centred on the crossing
    root = math.sqrt(disc)
    if abs(a) >= abs(c):
        directions = [np.array([(-b + s * root) / (2.0 * a), 1.0]) for s in (1.0, -1.0)]
    else:
        directions = [np.array([1.0, (-b + s * root) / (2.0 * c)]) for s in (1.0, -1.0)]
    return [(center, v / np.linalg.norm(v)) for v in directions]


# Components

def count_components(curve: Callable[[np.ndarray, np.ndarray], np.ndarray],
                     window: Union[float, Sequence[float]], resolution: int = 400) -> int:
    """Number of connected real components of f(p, q) = 0 inside a window.

    Cells whose corner values change sign are labelled with 8-connectivity.
    ``window`` is a half-width or (pmin, pmax, qmin, qmax).
    """
    if np.isscalar(window):
        w = float(window)
        bounds = (-w, w, -w, w)
    else:
        bounds = tuple(float(v) for v in window)
    # odd offsets keep symmetry axes off the grid lines
    p = np.linspace(bounds[0], bounds[1], resolution + 1) + 1e-3 * (bounds[1] - bounds[0]) / resolution
    q = np.linspace(bounds[2], bounds[3], resolution + 1) + 2e-3 * (bounds[3] - bounds[2]) / resolution
    P, Q = np.meshgrid(p, q, indexing="ij")
    sign = np.sign(curve(P, Q))
    corners = np.stack([sign[:-1, :-1], sign[1:, :-1], sign[:-1, 1:], sign[1:, 1:]])
    crossing = (corners.max(axis=0) > 0) & (corners.min(axis=0) < 0) | (corners == 0).any(axis=0)
    _, count = ndimage.label(crossing, structure=np.ones((3, 3), dtype=int))
    return int(count)


def fit_planar_quartic(points: np.ndarray, plane: str) -> BicircularQuartic:
    """Bicircular quartic through planar samples (3D points are projected on the plane)."""
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or len(points) < 9:
        raise InvalidParameter("need at least 9 sample points for a quartic fit")
    if points.shape[1] == 3:
        i, j = PLANES[plane][0]
        points = points[:, [i, j]]
    scale = max(1.0, float(np.abs(points).max()))
    basis = _quartic_basis(points[:, 0] / scale, points[:, 1] / scale)
    norms = np.linalg.norm(basis, axis=0)
    norms[norms == 0.0] = 1.0
    _, sv, vt = np.linalg.svd(basis / norms, full_matrices=False)
    coef = vt[-1] / norms
    # undo the coordinate scaling: monomial of degree k picks up scale^-k
    degrees = np.array([4, 3, 3, 2, 2, 2, 1, 1, 0])
    coef = coef / scale ** degrees
    coef[np.abs(coef) < 1e-10 * np.abs(coef).max()] = 0.0
    quartic = BicircularQuartic(plane, coef, residual=float(sv[-1] / sv[0]))
    logger.debug("fitted %s on plane %s, residual %.2e", quartic.kind.value, plane, quartic.residual)
    return quartic


# Symmetric form

@dataclass
class CanonicalForm:
    """(p^2+q^2)^2 - 2K p^2 + 2M q^2 + delta = 0 after scaling coordinates by 1/mu."""

    kind: CurveKind
    K: Optional[float] = None
    M: Optional[float] = None
    delta: Optional[int] = None
    mu: Optional[float] = None
    ovals: Optional[int] = None

    def quartic(self, plane: str = "z") -> BicircularQuartic:
        if self.K is None:
            raise InvalidParameter("degenerate curve has no symmetric quartic form")
        return BicircularQuartic.symmetric(plane, 1.0, -2.0 * self.K, 2.0 * self.M, float(self.delta))

    def to_dict(self) -> Dict[str, object]:
        return {"kind": self.kind.value, "K": self.K, "M": self.M, "delta": self.delta,
                "mu": self.mu, "ovals": self.ovals}


def bq_canonicalize(B: BicircularQuartic, count_ovals: bool = True) -> CanonicalForm:
    kind = B.kind
    if kind != CurveKind.BICIRCULAR_QUARTIC:
        logger.info("curve on plane %s degenerates to %s", B.plane, kind.value)
        return CanonicalForm(kind=kind)
    if not B.is_symmetric():
        raise NotSymmetricForm(
            "curve is not in symmetric form; move it by a Mobius map first",
            {"coefficients": B.to_dict()},
        )
    lam, A, Bq, C = (B.coefficients[idx] for idx in (0, 3, 5, 8))
    A, Bq, C = A / lam, Bq / lam, C / lam
    scale = max(1.0, abs(A), abs(Bq), abs(C))
    for label, value in (("C", C), ("C - A^2/4", C - A * A / 4.0), ("C - B^2/4", C - Bq * Bq / 4.0)):
        if abs(value) <= 1e-12 * scale * scale:
            raise SingularCurve(f"bicircular quartic is singular ({label} = 0)", B.to_dict())
    mu = abs(C) ** 0.25
    form = CanonicalForm(
        kind=kind,
        K=-A / (2.0 * mu * mu),
        M=Bq / (2.0 * mu * mu),
        delta=int(np.sign(C)),
        mu=mu,
    )
    if count_ovals:
        form.ovals = form.quartic(B.plane).components()
    return form


# Focal triples

@dataclass
class FocalParameters:
    delta: int
    a: float
    b: float
    c: float

    @property
    def K(self) -> float:
        return -(self.c * self.delta + 1.0 / self.c) / 2.0

    @property
    def N(self) -> float:
        return -(self.a * self.delta + 1.0 / self.a) / 2.0

    @property
    def M(self) -> float:
        return -(self.b * self.delta + 1.0 / self.b) / 2.0

    def relation(self) -> float:
        """KM + MN + NK + delta, zero for a focal triple."""
        return self.K * self.M + self.M * self.N + self.N * self.K + self.delta

    def quartics(self) -> Tuple[BicircularQuartic, BicircularQuartic, BicircularQuartic]:
        d = float(self.delta)
        K, M, N = self.K, self.M, self.N
        return (
            BicircularQuartic.symmetric("z", 1.0, -2.0 * K, 2.0 * M, d),
            BicircularQuartic.symmetric("y", 1.0, 2.0 * N, -2.0 * M, d),
            BicircularQuartic.symmetric("x", 1.0, -2.0 * N, 2.0 * K, d),
        )


def in_focal_region(delta: int, a: float, c: float) -> bool:
    if delta == -1:
        return a > 0.0 and c > 0.0 and a * c > 1.0
    if delta == 1:
        return c < 0.0 and a > abs(c) > 1.0 / a
    return False


def focal_parameters(delta: int, a: float, c: float) -> FocalParameters:
    if delta not in (-1, 1):
        raise InvalidParameter("delta must be +1 or -1", {"delta": delta})
    if not in_focal_region(delta, a, c):
        region = "a, c > 0 and ac > 1" if delta == -1 else "c < 0 and a > |c| > 1/a"
        raise OutOfRegion(f"(a, c) outside the focal region {region}", {"delta": delta, "a": a, "c": c})
    b = -(a + c) / (1.0 + a * c * delta)
    return FocalParameters(delta, a, b, c)


def _axis_points(axis: int, squares: Sequence[float]) -> List[Quaternion]:
    out = []
    for value in sorted(squares):
        if value > 0.0:
            root = math.sqrt(value)
            for sign in (-1.0, 1.0):
                vec = [0.0, 0.0, 0.0]
                vec[axis] = sign * root
                out.append(Quaternion.imag(*vec))
    return out


def focal_points(delta: int, a: float, c: float) -> Tuple[List[Quaternion], List[Quaternion], List[Quaternion]]:
    """Real points where each focal quartic meets the planes of the other two."""
    fp = focal_parameters(delta, a, c)
    b = fp.b
    # plane z = 0: x-axis from B2, y-axis from B3
    phi1 = _axis_points(0, (a * delta, 1.0 / a)) + _axis_points(1, (-a * delta, -1.0 / a))
    # plane y = 0: x-axis from B1, z-axis from B3
    phi2 = _axis_points(0, (-c * delta, -1.0 / c)) + _axis_points(2, (c * delta, 1.0 / c))
    # plane x = 0: y-axis from B1, z-axis from B2
    phi3 = _axis_points(1, (b * delta, 1.0 / b)) + _axis_points(2, (-b * delta, -1.0 / b))
    return phi1, phi2, phi3


# Closed forms of catalog singularities

def type_a_singular_quartics(a: float, b: float, c: float) -> Tuple[BicircularQuartic, ...]:
    d = a + b + c
    abc = a * b * c
    return (
        BicircularQuartic.symmetric("z", abc, a * b - c * d, b * d - a * c, -d),
        BicircularQuartic.symmetric("y", abc, a * d - b * c, a * c - b * d, -d),
        BicircularQuartic.symmetric("x", abc, b * c - a * d, c * d - a * b, -d),
    )


@dataclass
class TypeANormalization:
    """Coordinates scaled by 1/mu turn the three quartics into a focal triple."""

    mu: float
    delta: int
    focal: FocalParameters


def normalize_type_a(a: float, b: float, c: float) -> TypeANormalization:
    d = a + b + c
    if a * b * c == 0.0 or d == 0.0:
        raise InvalidParameter("normalization needs abc != 0 and a + b + c != 0", {"a": a, "b": b, "c": c})
    ratio = d / (a * b * c)
    s = math.sqrt(abs(ratio))
    delta = -1 if ratio > 0.0 else 1
    return TypeANormalization(abs(ratio) ** 0.25, delta, FocalParameters(delta, a * s, b * s, c * s))


def two_plane_singular_quartics(a: float, b: float, c: float) -> Tuple[BicircularQuartic, BicircularQuartic]:
    bq1 = BicircularQuartic.from_terms(
        "z",
        r4=c * b * (a + c),
        pr2=-c * (a - b + c),
        p2=-(a * a + a * b + a * c + 2 * b * c + c),
        q2=a * b + a * c + b * b + c * c,
        p=-(a + b - c),
        **{"1": a + b},
    )
    bq2 = BicircularQuartic.from_terms(
        "y",
        r4=c * (4 * a * b + 4 * b * c + c),
        pr2=4 * c * (b - c),
        p2=-2 * (2 * a * b + 2 * a * c + 4 * b * c + c),
        q2=-2 * (2 * a * b + 2 * a * c + 2 * b * b + 2 * c * c + c),
        p=-4 * (b - c),
        **{"1": 4 * a + 4 * b + 1},
    )
    return bq1, bq2


def two_plane_singularity_condition(a: float, b: float, c: float) -> float:
    delta = a * a - c
    return ((4 * a + 4 * c + 1) * (4 * a * b + 4 * b * b + c) * (b - c) ** 2
            * (a + b + c) ** 2 * delta ** 2)


def two_plane_symmetry(a: float, c: float) -> SphereInversion:
    """Inversion in the imaginary sphere of the two-plane family (needs a^2 < c)."""
    delta = a * a - c
    if c == 0.0 or delta >= 0.0:
        raise OutOfRegion("symmetry sphere is imaginary only for a^2 - c < 0", {"a": a, "c": c})
    return SphereInversion(Quaternion.imag(-a / c), delta / (c * c))


def offset_singular_conics(kind: str, h: Optional[float] = None) -> Tuple[BicircularQuartic, BicircularQuartic]:
    """Focal conics of the offset families, on y = 0 then z = 0."""
    if kind == "O1":
        if h is None or h in (0.0, 1.0, -1.0):
            raise InvalidParameter("O1 needs h not in {0, 1, -1}")
        return (
            BicircularQuartic.from_terms("y", p2=1.0 / ((1 - h) / 2) ** 2, q2=-1.0 / h, **{"1": -1.0}),
            BicircularQuartic.from_terms("z", p2=1.0 / ((1 + h) / 2) ** 2, q2=1.0 / h, **{"1": -1.0}),
        )
    if kind == "O2":
        return (
            BicircularQuartic.from_terms("y", q2=1.0, p=-8.0, **{"1": -8.0}),
            BicircularQuartic.from_terms("z", q2=1.0, p=8.0, **{"1": -8.0}),
        )
    raise InvalidParameter(f"unknown offset family {kind!r}")
