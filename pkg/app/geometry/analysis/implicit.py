"""
Implicit equations of coordinate surfaces

The equation of a principal patch with control pairs (u_i, w_i) divides the
4x4 determinant det[X w_i - u_i], X = xi + yj + zk. Its columns are affine in
(x, y, z), so the determinant is expanded exactly over the 4^4 choices of one
term per column. When the determinant vanishes identically, or when it carries
extra factors, the equation is recovered from samples as the null vector of a
monomial matrix of minimal degree.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from app.core.config import settings
from app.core.errors import IdenticallyZero
from app.core.tolerance import Tolerance, resolve
from app.geometry.qb import DCCube, DCPatch, ParamLike, angle_chart, sample, slice_patch, to_points
from app.geometry.quat import I, J, K, qmul

logger = logging.getLogger(__name__)

Exponent = Tuple[int, int, int]


def monomials(degree: int) -> List[Exponent]:
    """Exponents (a, b, c) of x^a y^b z^c with a + b + c <= degree, graded order."""
    out = []
    for total in range(degree + 1):
        for a in range(total, -1, -1):
            for b in range(total - a, -1, -1):
                out.append((a, b, total - a - b))
    return out


def _monomial_matrix(points: np.ndarray, exps: List[Exponent]) -> np.ndarray:
    points = np.asarray(points, dtype=float)
    return np.stack(
        [points[:, 0] ** a * points[:, 1] ** b * points[:, 2] ** c for a, b, c in exps], axis=1
    )


@dataclass
class ImplicitSurface:
    """Polynomial sum c_e x^a y^b z^c over exponents e = (a, b, c)."""

    exponents: Tuple[Exponent, ...]
    coefficients: np.ndarray
    exact: bool = True
    flagged: bool = False

    @classmethod
    def from_terms(cls, terms: Dict[Exponent, float], **kwargs) -> "ImplicitSurface":
        exps = tuple(sorted(terms, key=lambda e: (sum(e), [-v for v in e])))
        return cls(exps, np.array([terms[e] for e in exps], dtype=float), **kwargs)

    @classmethod
    def from_function(cls, f: Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray],
                      degree: int, seed: int = 0) -> "ImplicitSurface":
        """Recover coefficients of a polynomial given as a vectorized function."""
        exps = monomials(degree)
        rng = np.random.default_rng(seed)
        pts = rng.uniform(-2.0, 2.0, size=(4 * len(exps), 3))
        values = f(pts[:, 0], pts[:, 1], pts[:, 2])
        coef, *_ = np.linalg.lstsq(_monomial_matrix(pts, exps), values, rcond=None)
        coef[np.abs(coef) < 1e-11 * np.abs(coef).max()] = 0.0
        return cls(tuple(exps), coef)

    @property
    def degree(self) -> int:
        nonzero = [sum(e) for e, c in zip(self.exponents, self.coefficients) if c != 0.0]
        return max(nonzero) if nonzero else -1

    def terms(self) -> Dict[Exponent, float]:
        return {e: float(c) for e, c in zip(self.exponents, self.coefficients) if c != 0.0}

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        return _monomial_matrix(points, list(self.exponents)) @ self.coefficients

    def normalized(self) -> "ImplicitSurface":
        """Largest coefficient 1 in magnitude, first significant coefficient positive."""
        coef = self.coefficients / np.abs(self.coefficients).max()
        lead = coef[np.nonzero(np.abs(coef) > 1e-9)[0][0]]
        return ImplicitSurface(self.exponents, coef * np.sign(lead), self.exact, self.flagged)

    def residual(self, points: np.ndarray) -> float:
        """max |f(p)| relative to the coefficient norm and the point scale."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        scale = max(1.0, float(np.abs(points).max())) ** max(self.degree, 1)
        return float(np.abs(self.evaluate(points)).max() / (np.abs(self.coefficients).max() * scale))

    def equivalent(self, other: "ImplicitSurface", tol: float = 1e-8) -> bool:
        """Equal up to a nonzero factor (max normalized coefficient deviation <= tol)."""
        keys = sorted(set(self.exponents) | set(other.exponents))
        a = np.array([self.terms().get(k, 0.0) for k in keys])
        b = np.array([other.terms().get(k, 0.0) for k in keys])
        a = a / a[np.argmax(np.abs(a))]
        b = b / b[np.argmax(np.abs(a))] if b[np.argmax(np.abs(a))] != 0.0 else b
        return bool(np.max(np.abs(a - b)) <= tol)

    def to_dict(self) -> Dict[str, float]:
        return {f"x{a}y{b}z{c}": float(v) for (a, b, c), v in self.terms().items()}


# Determinant expansion

def _column_terms(u: np.ndarray, w: np.ndarray) -> np.ndarray:
    """terms[e, col] for e in (x, y, z, 1): i w, j w, k w, -u."""
    return np.stack([
        qmul(I.as_array(), w),
        qmul(J.as_array(), w),
        qmul(K.as_array(), w),
        -u,
    ])


def determinant_polynomial(patch: DCPatch) -> ImplicitSurface:
    terms = _column_terms(patch.u, patch.w)
    choices = np.array(list(itertools.product(range(4), repeat=4)))
    mats = np.stack([terms[choices[:, col], col] for col in range(4)], axis=-1)
    dets = np.linalg.det(mats)
    acc: Dict[Exponent, float] = {}
    for choice, value in zip(choices, dets):
        counts = np.bincount(choice, minlength=4)
        key = (int(counts[0]), int(counts[1]), int(counts[2]))
        acc[key] = acc.get(key, 0.0) + float(value)
    scale = max(abs(v) for v in acc.values()) if acc else 0.0
    cleaned = {k: v for k, v in acc.items() if abs(v) > 1e-12 * scale}
    if not cleaned:
        return ImplicitSurface((), np.zeros(0))
    return ImplicitSurface.from_terms(cleaned)


# Sampled fits

def patch_samples(patch: DCPatch, count: int = 20, clip: Optional[float] = None) -> np.ndarray:
    grid = np.linspace(0.0, np.pi, count, endpoint=False) + 0.37 * np.pi / count
    a, b = np.meshgrid(grid, grid + 0.11 * np.pi / count)
    pts, finite = to_points(*sample(patch, angle_chart(a.ravel()), angle_chart(b.ravel())))
    pts = pts[finite]
    if clip is None:
        finite_cp = [p.vector for p in patch.control_points() if hasattr(p, "vector")]
        diameter = max(1.0, float(np.ptp(np.array(finite_cp), axis=0).max())) if finite_cp else 1.0
        clip = settings.CLIP_RADIUS_FACTOR * diameter
    return pts[np.linalg.norm(pts, axis=1) <= clip]


def fit_implicit(points: np.ndarray, max_degree: int = 4,
                 threshold: float = 1e-9) -> Optional[ImplicitSurface]:
    """Minimal-degree polynomial vanishing on the points, or None."""
    points = np.asarray(points, dtype=float)
    for degree in range(1, max_degree + 1):
        exps = monomials(degree)
        if len(points) < len(exps) + 5:
            break
        mat = _monomial_matrix(points, exps)
        norms = np.linalg.norm(mat, axis=0)
        norms[norms == 0.0] = 1.0
        _, sv, vt = np.linalg.svd(mat / norms, full_matrices=False)
        if sv[-1] <= threshold * sv[0]:
            nullity = int(np.sum(sv <= threshold * sv[0] * 10))
            coef = vt[-1] / norms
            coef[np.abs(coef) < 1e-10 * np.abs(coef).max()] = 0.0
            return ImplicitSurface(tuple(exps), coef, exact=False, flagged=nullity > 1)
    return None


def implicitize_patch(patch: DCPatch, tol: Optional[Tolerance] = None) -> ImplicitSurface:
    """Square-free implicit equation of the surface carrying a principal patch."""
    resolve(tol)
    det = determinant_polynomial(patch)
    points = patch_samples(patch)
    fitted = fit_implicit(points, max_degree=4)
    if det.degree < 0:
        if fitted is None:
            raise IdenticallyZero("determinant vanishes and no implicit fit of degree <= 4 exists")
        logger.debug("determinant vanishes identically, using sampled fit of degree %d", fitted.degree)
        return fitted
    if fitted is not None and fitted.degree < det.degree:
        return fitted
    return det


def implicitize_slice(D: DCCube, direction: Union[int, str], value: ParamLike,
                      tol: Optional[Tolerance] = None) -> ImplicitSurface:
    return implicitize_patch(slice_patch(D, direction, value), tol)
