"""
Catalog of canonical DC cube families

Every builder returns a DCCube with the control net of the corresponding
normal form; ``build_family`` wraps them with the classification each family
is expected to produce, which keeps the analysis tests table-driven.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.core.errors import InvalidParameter, OutOfRegion
from app.geometry.analysis.quartics import two_plane_singular_quartics, two_plane_singularity_condition
from app.geometry.analysis.types import (
    DEGREE_TABLE,
    Classification,
    CoarseType,
    CurveDescriptor,
    CurveKind,
    Subtype,
)
from app.geometry.construct import (
    axial_cube,
    bipolar_patch,
    offset_cube,
    one_polar_patch,
    patch_weights_infinite,
)
from app.geometry.qb import DCCube, DCPatch
from app.geometry.quat import I, J, K, MobiusMap, Translation

logger = logging.getLogger(__name__)


def _net(u_rows: Sequence[Sequence[float]], w_rows: Sequence[Sequence[float]]) -> DCCube:
    return DCCube(np.array(u_rows, dtype=float), np.array(w_rows, dtype=float))


def type_a_cube(a: float, b: float, c: float) -> DCCube:
    """F(s,t,u) = (d stu + si + tj + uk)(1 - b tu i - c su j - a st k)^-1 with d = a+b+c."""
    d = a + b + c
    return _net(
        [
            [0, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 1, 1, 0],
            [0, 0, 0, 1], [0, 1, 0, 1], [0, 0, 1, 1], [d, 1, 1, 1],
        ],
        [
            [1, 0, 0, 0], [1, 0, 0, 0], [1, 0, 0, 0], [1, 0, 0, -a],
            [1, 0, 0, 0], [1, 0, -c, 0], [1, -b, 0, 0], [1, -b, -c, -a],
        ],
    )


def type_a4_cube(a: float) -> DCCube:
    """Exceptional three-sphere family with two intersecting singular lines."""
    if a == -1.0:
        raise InvalidParameter("A4 family needs a != -1")
    e = 2.0 * a / (1.0 + a)
    r = -(1.0 - a) / (1.0 + a)
    return _net(
        [
            [0, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 0], [0, 1, 0, 0],
            [0, 0, 0, 1], [0, 1, 0, 1], [0, 0, 0, 1], [r, 1, 0, 1],
        ],
        [
            [1, 0, 0, 0], [1, 0, 0, 0], [1, 0, 0, 0], [1, 0, 0, 1],
            [1, 0, 0, 0], [1, 0, 0, 0], [1, -e, 0, 0], [1, -e, 0, 1],
        ],
    )


def two_plane_cube(a: float, b: float, c: float) -> DCCube:
    """Family with symmetry planes z = 0 and y = 0; Delta = a^2 - c decides O, A or B."""
    return _net(
        [
            [0, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 1, 1, 0],
            [0, 0, 0, 2], [0, 1, 0, 1], [-1, 0, 1, 2], [-(2 * a + 2 * b + 1), 1, 1, 1],
        ],
        [
            [1, 0, 0, 0], [1, 0, 0, 0], [1, 0, 0, 0], [1, 0, 0, -c],
            [1, 0, 1, 0], [1, 0, 2 * a + 2 * c + 1, 0], [1, 2 * b, 1, 0],
            [1, 2 * b - c, 2 * a + 2 * c + 1, -c],
        ],
    )


def two_plane_delta(a: float, c: float) -> float:
    return a * a - c


def type_b_weights(k: float, m: float) -> Tuple[float, float]:
    """(h0, h1) of the two-plane normal form with parameters k, m."""
    problems = []
    if k in (0.0, 1.0, -1.0) or m in (0.0, 1.0, -1.0):
        problems.append("k, m not in {0, 1, -1}")
    if abs(k * m) == 1.0:
        problems.append("km != +-1")
    if abs(k) == abs(m):
        problems.append("k != +-m")
    if math.isclose((m + k) ** 2, (k * m - 1) ** 2, rel_tol=1e-12, abs_tol=1e-12):
        problems.append("(m+k)^2 != (km-1)^2")
    if problems:
        raise InvalidParameter(
            "type B parameters violate " + ", ".join(problems),
            {"k": k, "m": m},
        )
    h0 = 2.0 * (k - m) * (k * m + 1.0)
    h1 = ((m + k) ** 2 - (k * m - 1.0) ** 2) * (k - m) * (k * m + 1.0) / ((m + k) * (k * m - 1.0))
    return h0, h1


def type_b_in_focal_region(k: float, m: float) -> bool:
    """k^2 > m^2 > 1/k^2: both singular quartics are nonempty 2-oval curves."""
    return k * k > m * m > 1.0 / (k * k)


def type_b_cube(k: float, m: float) -> DCCube:
    """Cube symmetric in z = 0, y = 0 and the imaginary unit sphere."""
    h0, h1 = type_b_weights(k, m)
    return _net(
        [
            [0, 0, 0, 0], [0, 1, 0, 0], [0, 0, 2 * k, 0], [0, 0, k * k - 1, 0],
            [0, 0, 0, -2 * m], [0, 0, 0, -(m * m - 1)], [h0, 0, 0, 0], [-h1, 0, 0, 0],
        ],
        [
            [1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, k * k - 1], [0, 0, 0, -2 * k],
            [0, 0, m * m - 1, 0], [0, 0, -2 * m, 0], [0, h1, 0, 0], [0, h0, 0, 0],
        ],
    )


def type_b_equivalents(k: float, m: float) -> List[DCCube]:
    """The four cubes at p0 = 0 sharing the singular set of type_b_cube(k, m)."""
    return [type_b_cube(kk, mm) for kk in (k, 1.0 / k) for mm in (m, 1.0 / m)]


def a3_uniqueness_cubes(T: float) -> List[DCCube]:
    """Three type-A cubes at p0 = 0 with the same focal ellipse and hyperbola."""
    if not 0.0 < T < 1.0:
        raise OutOfRegion("needs 0 < T < 1", {"T": T})
    s = T / (T - 1.0)
    return [type_a_cube(0.0, T, -1.0), type_a_cube(s, 0.0, -1.0), type_a_cube(s, T, 0.0)]


def general_cube(g: float, h: float, a: float, b: float, c: float) -> DCCube:
    """Cube at p0 = infinity with faces in the three coordinate planes of the frame i, j, k."""
    eta = g * g + h * h
    return _net(
        [
            [1, 0, 0, 0], [0, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, c],
            [0, -h, g, 0], [0, 0, eta * (b - 1), 0], [-h, eta * a + a - 1, 0, g],
            [0, c * g, c * h, eta * (b - 1)],
        ],
        [
            [0, 0, 0, 0], [0, -1, 0, 0], [0, 0, -1, 0], [1, 0, 0, 0],
            [0, 0, 0, -1], [-h, 0, 0, g], [g, 0, 1, h],
            [(eta + 1) * (a - 1) + b * eta + c, h, -g, 0],
        ],
    )


def sphere_s1_cube(a: float) -> DCCube:
    """Concentric-sphere system F = (1 - 2u) G over a 2-polar grid on the unit sphere."""
    face_u = [[0, 1, 0, 0], [0, 1, 1, 0], [0, 1, 0, 1], [a, 1, 1, 1]]
    face_w = [[1, 0, 0, 0], [1, 0, 0, 1], [1, 0, -1, 0], [1, -a, -1, 1]]
    return _net(face_u + [[-x for x in row] for row in face_u], face_w + face_w)


def spherical_cubes(kind: str, params: Sequence[float] = ()) -> DCCube:
    """Spherical families.

    S1(a): concentric spheres; S2(): offset of the 1-polar plane, S2(a): offset
    of a bipolar plane; S3(a, shift): rotated bipolar grid; S4(shift): rotated
    1-polar grid, the axis meets the pole when shift = 0.
    """
    params = list(params)
    if kind == "S1":
        return sphere_s1_cube(params[0] if params else 0.5)
    if kind == "S2":
        if not params:
            return offset_cube(one_polar_patch(), -1.0)
        return offset_cube(bipolar_patch(params[0]), 1.0)
    if kind == "S3":
        a = params[0] if params else -0.5
        shift = params[1] if len(params) > 1 else 0.3
        if a == 0.0:
            raise InvalidParameter("S3 needs a 2-polar grid (a != 0)")
        patch = MobiusMap((Translation(J * shift),)).apply_to_net(bipolar_patch(a))
        return axial_cube(patch, I)
    if kind == "S4":
        shift = params[0] if params else 0.0
        patch = one_polar_patch()
        if shift != 0.0:
            patch = MobiusMap((Translation(J * shift),)).apply_to_net(patch)
        return axial_cube(patch, I)
    raise InvalidParameter(f"unknown spherical family {kind!r}")


def _o1_face(h: float) -> DCPatch:
    return DCPatch(
        np.array([[0, -1, 0, 0], [0, 0, h, 0], [0, 0, 0, h], [h, 0, 0, 0]], dtype=float),
        np.array([[1, 0, 0, 0], [0, 0, 0, -1], [0, 0, -1, 0], [0, -h, 0, 0]], dtype=float),
        tangents=(J, K),
    )


def offset_families(kind: str, h: Optional[float] = None) -> DCCube:
    """O1(h): offsets of a 2-horn cyclide; O2: offsets of a parabolic cyclide."""
    if kind == "O1":
        if h is None or h in (0.0, 1.0, -1.0):
            raise InvalidParameter("O1 needs h not in {0, 1, -1} (h = +-1 is a torus, see S)")
        return offset_cube(_o1_face(h), 1.0)
    if kind == "O2":
        patch = patch_weights_infinite(I, I * -3.0, I, J, K)
        return offset_cube(patch, 1.0)
    raise InvalidParameter(f"unknown offset family {kind!r}")


# Expected classifications

def _expected(subtype: Optional[Subtype], coarse: Optional[CoarseType] = None,
              curves: Sequence[CurveDescriptor] = (), **parameters) -> Classification:
    coarse = coarse or subtype.coarse
    return Classification(
        coarse=coarse,
        subtype=subtype,
        parameters={k: float(v) for k, v in parameters.items()},
        singular=list(curves),
        degree=DEGREE_TABLE.get(subtype) if subtype else None,
    )


def _quartic(ovals: int) -> CurveDescriptor:
    return CurveDescriptor(CurveKind.BICIRCULAR_QUARTIC, components=ovals)


def expected_type_a(a: float, b: float, c: float) -> Classification:
    d = a + b + c
    if 0.0 in (a + b, a + c, b + c):
        return _expected(None, CoarseType.SPHERICAL, a=a, b=b, c=c)
    if a * b * c == 0.0 or d == 0.0:
        return _expected(
            Subtype.A3, curves=[CurveDescriptor(CurveKind.ELLIPSE), CurveDescriptor(CurveKind.HYPERBOLA)],
            a=a, b=b, c=c,
        )
    if d / (a * b * c) > 0.0:
        return _expected(Subtype.A1, curves=[_quartic(1)] * 3, a=a, b=b, c=c)
    return _expected(Subtype.A2, curves=[_quartic(2)] * 2, a=a, b=b, c=c)


def expected_two_plane(a: float, b: float, c: float) -> Classification:
    if b == c or a + b + c == 0.0:
        return _expected(None, CoarseType.SPHERICAL, a=a, b=b, c=c)
    delta = two_plane_delta(a, c)
    if delta < 0.0:
        curves = [
            CurveDescriptor(
                bq.kind,
                components=bq.components() if bq.kind == CurveKind.BICIRCULAR_QUARTIC else None,
                coefficients=bq.to_dict(),
            )
            for bq in two_plane_singular_quartics(a, b, c)
        ]
        expected = _expected(Subtype.B, curves=curves, a=a, b=b, c=c)
        if two_plane_singularity_condition(a, b, c) == 0.0:
            expected.notes.append("singular quartics have singular points")
        return expected
    if delta == 0.0:
        return _expected(None, CoarseType.OFFSET, a=a, b=b, c=c)
    return _expected(None, CoarseType.THREE_SPHERES, a=a, b=b, c=c)


_LINES = [CurveDescriptor(CurveKind.LINE), CurveDescriptor(CurveKind.LINE)]


@dataclass
class FamilySpec:
    label: str
    parameters: Tuple[str, ...]
    defaults: Tuple[float, ...]
    build: Callable[..., DCCube]
    expected: Callable[..., Optional[Classification]]
    description: str = ""


@dataclass
class CanonicalFamily:
    label: str
    params: Dict[str, float]
    cube: DCCube
    expected: Optional[Classification] = None
    notes: List[str] = field(default_factory=list)


CATALOG: Dict[str, FamilySpec] = {
    spec.label: spec
    for spec in (
        FamilySpec("A", ("a", "b", "c"), (1.0, 2.0, 3.0), type_a_cube, expected_type_a,
                   "three real spherical slices through one point"),
        FamilySpec("A4", ("a",), (0.5,), type_a4_cube,
                   lambda a: _expected(Subtype.A4, curves=_LINES, a=a),
                   "exceptional type A with two intersecting singular lines"),
        FamilySpec("TwoPlane", ("a", "b", "c"), (0.0, 2.0, 1.0), two_plane_cube, expected_two_plane,
                   "symmetric in z = 0 and y = 0"),
        FamilySpec("B", ("k", "m"), (2.0, 1.5), type_b_cube,
                   lambda k, m: _expected(Subtype.B, curves=[_quartic(2)] * 2, k=k, m=m),
                   "two focal 2-oval quartics, symmetric in the imaginary unit sphere"),
        FamilySpec("O1", ("h",), (0.5,), lambda h: offset_families("O1", h),
                   lambda h: _expected(
                       Subtype.O1,
                       curves=[CurveDescriptor(CurveKind.ELLIPSE), CurveDescriptor(CurveKind.HYPERBOLA)],
                       h=h,
                   ),
                   "offsets of a 2-horn cyclide"),
        FamilySpec("O2", (), (), lambda: offset_families("O2"),
                   lambda: _expected(Subtype.O2, curves=[CurveDescriptor(CurveKind.PARABOLA)] * 2),
                   "offsets of a parabolic cyclide"),
        FamilySpec("S1", ("a",), (0.5,), lambda a: spherical_cubes("S1", [a]),
                   lambda a: _expected(Subtype.S1, curves=_LINES, a=a),
                   "concentric spheres"),
        FamilySpec("S2", (), (), lambda: spherical_cubes("S2"),
                   lambda: _expected(Subtype.S2),
                   "offsets of a 1-polar plane"),
        FamilySpec("S3", ("a", "shift"), (-0.5, 0.3), lambda a, shift: spherical_cubes("S3", [a, shift]),
                   lambda a, shift: _expected(Subtype.S3, a=a, shift=shift),
                   "rotated 2-polar grid"),
        FamilySpec("S4", ("shift",), (0.0,), lambda shift: spherical_cubes("S4", [shift]),
                   lambda shift: _expected(Subtype.S4, shift=shift),
                   "rotated 1-polar grid"),
        FamilySpec("General", ("g", "h", "a", "b", "c"), (1.0, 0.5, 0.3, 0.2, 0.5), general_cube,
                   lambda *args: None,
                   "cube at infinity with faces in the coordinate planes"),
    )
}


def catalog() -> List[FamilySpec]:
    return list(CATALOG.values())


def build_family(label: str, params: Optional[Sequence[float]] = None) -> CanonicalFamily:
    spec = CATALOG.get(label)
    if spec is None:
        raise InvalidParameter(
            f"unknown family {label!r}", {"families": sorted(CATALOG)}
        )
    values = tuple(float(p) for p in params) if params else spec.defaults
    if len(values) != len(spec.parameters):
        raise InvalidParameter(
            f"family {label} takes {len(spec.parameters)} parameters "
            f"({', '.join(spec.parameters) or 'none'})",
            {"given": list(values)},
        )
    cube = spec.build(*values)
    notes = []
    if label == "B" and not type_b_in_focal_region(*values):
        notes.append("parameters outside k^2 > m^2 > 1/k^2: singular quartics are not both 2-oval")
    logger.info("built family %s with %s", label, values)
    return CanonicalFamily(
        label=label,
        params=dict(zip(spec.parameters, values)),
        cube=cube,
        expected=spec.expected(*values),
        notes=notes,
    )
