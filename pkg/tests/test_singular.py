import numpy as np
import pytest

from app.core.errors import DegenerateCube
from app.geometry.analysis.quartics import (
    QUARTIC_MONOMIALS,
    BicircularQuartic,
    offset_singular_conics,
    two_plane_singular_quartics,
    type_a_singular_quartics,
)
from app.geometry.analysis.singular import check_nondegenerate, locus_distance, singular_locus
from app.geometry.analysis.types import Carrier, CurveDescriptor, CurveKind, SingularLocus, TracedCurve
from app.geometry.canonical import offset_families, two_plane_cube, type_a4_cube, type_b_cube
from app.geometry.qb import DCCube
from app.geometry.quat import INFINITY, Quaternion


def test_planar_net_is_degenerate(rng):
    u = np.zeros((8, 4))
    u[:, 1:3] = rng.normal(size=(8, 2))
    w = np.tile([1.0, 0.0, 0.0, 0.0], (8, 1))
    with pytest.raises(DegenerateCube):
        check_nondegenerate(DCCube(u, w))


def test_constant_net_is_degenerate():
    u = np.tile([0.0, 0.0, 1.0, 0.0], (8, 1))
    w = np.tile([1.0, 0.0, 0.0, 0.0], (8, 1))
    with pytest.raises(DegenerateCube):
        check_nondegenerate(DCCube(u, w))


def test_type_a_cube_is_not_degenerate(cube_a1):
    check_nondegenerate(cube_a1)


def test_a4_singular_lines_are_split():
    locus = singular_locus(type_a4_cube(0.5))
    assert all(c.descriptor.kind != CurveKind.HYPERBOLA for c in locus.curves)
    lines = [c for c in locus.curves if c.descriptor.kind == CurveKind.LINE]
    assert len(lines) >= 2
    assert len({id(c.descriptor) for c in lines}) == len(lines)
    for curve in lines:
        pts = curve.polyline[np.all(np.isfinite(curve.polyline), axis=1)]
        pts = pts[np.linalg.norm(pts, axis=1) <= 100.0]
        centred = pts - pts.mean(axis=0)
        sv = np.linalg.svd(centred, compute_uv=False)
        assert sv[1] <= 1e-5 * sv[0]
        assert not curve.closed


def test_locus_distance():
    curve = TracedCurve(
        descriptor=CurveDescriptor(CurveKind.LINE, direction=0),
        carrier=Carrier((0.0, 1.0, 0.0, 0.0, 0.0), plane="x"),
        polyline=np.array([[0.0, 0.0, 0.0], [0.0, 1.0, 0.0]]),
        parameters=np.zeros((2, 3)),
    )
    locus = SingularLocus(curves=[curve], points=[INFINITY])
    # origin and (0, 1, 0) sit on the sphere images (0, 0, 0, -1) and (0, 1, 0, 0)
    assert locus_distance(locus, Quaternion.imag(0.0, 0.0, 0.0)) == pytest.approx(0.0)
    assert locus_distance(locus, Quaternion.imag(0.0, -1.0, 0.0)) == pytest.approx(np.sqrt(2.0))
    assert locus_distance(locus, Quaternion.imag(1e6, 0.0, 0.0)) == pytest.approx(0.0, abs=1e-5)
    assert locus_distance(SingularLocus(), Quaternion.imag(1.0, 0.0, 0.0)) == float("inf")


def test_two_plane_locus_matches_the_closed_form():
    locus = singular_locus(two_plane_cube(0.0, 2.0, 1.0))
    fitted = [
        BicircularQuartic(c.carrier.plane, [c.descriptor.coefficients.get(m, 0.0) for m in QUARTIC_MONOMIALS])
        for c in locus.curves
        if c.carrier is not None and c.carrier.plane is not None
    ]
    for expected in two_plane_singular_quartics(0.0, 2.0, 1.0):
        assert any(f.equivalent(expected, tol=1e-5) for f in fitted)


def test_type_b_quartic_in_the_plane_z_is_symmetric():
    locus = singular_locus(type_b_cube(2.0, 1.5))
    on_z = [c for c in locus.curves if c.carrier is not None and c.carrier.plane == "z"]
    assert on_z
    descriptor = on_z[0].descriptor
    assert descriptor.kind == CurveKind.BICIRCULAR_QUARTIC
    for monomial in ("pr2", "qr2", "pq", "p", "q"):
        assert abs(descriptor.coefficients[monomial]) < 1e-6
    assert descriptor.components == 2


def _fitted(locus):
    return [
        BicircularQuartic(c.carrier.plane, [c.descriptor.coefficients.get(m, 0.0) for m in QUARTIC_MONOMIALS])
        for c in locus.curves
        if c.carrier is not None and c.carrier.plane is not None and c.descriptor.coefficients
    ]


def test_type_a_locus_matches_the_closed_form(cube_a1):
    expected = {q.plane: q for q in type_a_singular_quartics(1.0, 2.0, 3.0)}
    fitted = _fitted(singular_locus(cube_a1))
    assert fitted
    for quartic in fitted:
        assert quartic.equivalent(expected[quartic.plane], tol=1e-5)


@pytest.mark.parametrize("kind, h", [("O1", 0.5), ("O2", None)])
def test_offset_locus_is_the_focal_conics(kind, h):
    fitted = _fitted(singular_locus(offset_families(kind, h)))
    for conic in offset_singular_conics(kind, h):
        assert any(f.plane == conic.plane and f.equivalent(conic, tol=1e-5) for f in fitted)
