import numpy as np
import pytest

from app.core.errors import (
    DegenerateTriangle,
    IncompatibleFaces,
    InvalidParameter,
    NonCollinearInput,
    NonConcyclicCorners,
    NonOrthogonalTangents,
)
from app.geometry.analysis.checks import involution_check
from app.geometry.construct import (
    axial_cube,
    bipolar_patch,
    classify_patch,
    complete_cube,
    miquel_point,
    offset_cube,
    one_polar_patch,
    patch_weights_finite,
    patch_weights_infinite,
)
from app.geometry.qb import DCPatch, face, slice_patch
from app.geometry.quat import I, J, K, Quaternion, ZERO, chordal_distance


def test_bipolar_patch_closed_form():
    a = 0.5
    patch = bipolar_patch(a)
    patch.check()
    for s, t in [(0.3, 0.7), (1.5, -2.0), (0.0, 4.0)]:
        expected = Quaternion.imag(s, t, 0.0) * Quaternion(1.0, 0.0, 0.0, -a * s * t).inverse()
        assert patch.evaluate(s, t).isclose(expected)


def test_finite_weights_validate_input():
    with pytest.raises(NonConcyclicCorners):
        patch_weights_finite(ZERO, I, J, K, I, J)
    with pytest.raises(NonOrthogonalTangents):
        patch_weights_finite(ZERO, I, J, I + J, I, I + J)


def test_infinite_weights_need_collinear_corners():
    with pytest.raises(NonCollinearInput):
        patch_weights_infinite(I, J, K, I, J)
    patch = patch_weights_infinite(I, I * -3.0, I, J, K)
    patch.check()


def test_patch_poles():
    assert classify_patch(bipolar_patch(0.5)) == "2-polar"
    assert classify_patch(one_polar_patch()) == "1-polar"


def test_bipolar_involution():
    assert involution_check(bipolar_patch(0.5), 0.5) is True
    assert involution_check(bipolar_patch(0.0), 0.0) is None


def test_miquel_point_of_midpoints_is_circumcenter():
    m = miquel_point(ZERO, I * 2.0, J * 2.0, 0.5, 0.5, 0.5)
    assert m.isclose(I + J)
    with pytest.raises(DegenerateTriangle):
        miquel_point(ZERO, I, I * 2.0, 0.5, 0.5, 0.5)


@pytest.mark.parametrize("l1, l2, l3", [(0.0, 0.5, 0.5), (0.5, 1.0, 0.5), (0.5, 0.5, 1e-15)])
def test_miquel_point_needs_proper_side_points(l1, l2, l3):
    with pytest.raises(DegenerateTriangle):
        miquel_point(ZERO, I * 2.0, J * 2.0, l1, l2, l3)


def test_complete_cube_reproduces_type_a(cube_a1):
    cube = complete_cube(face(cube_a1, "u", 0), slice_patch(cube_a1, "t", 0.0), face(cube_a1, "s", 0))
    cube.check()
    for params in [(1, 1, 1), (0.3, 0.6, 0.9), (2.0, 0.5, -1.0)]:
        assert chordal_distance(cube.evaluate(*params), cube_a1.evaluate(*params)) < 1e-7


def test_offset_face_is_at_constant_distance():
    cube = offset_cube(bipolar_patch(0.5), 1.0)
    cube.check()
    for s, t in [(0.2, 0.4), (1.0, 1.0), (-0.7, 3.0)]:
        near = cube.evaluate(s, t, 0.0)
        far = cube.evaluate(s, t, 1.0)
        assert np.linalg.norm(far.vector - near.vector) == pytest.approx(1.0)


def test_offset_distance_must_be_nonzero():
    with pytest.raises(InvalidParameter):
        offset_cube(bipolar_patch(0.5), 0.0)


def test_complete_cube_rejects_a_collapsed_edge(cube_a1):
    st = face(cube_a1, "u", 0)
    collapsed = DCPatch(np.array(st.u)[[0, 0, 2, 3]], np.array(st.w)[[0, 0, 2, 3]])
    su = slice_patch(cube_a1, "t", 0.0)
    su = DCPatch(np.array(su.u)[[0, 0, 2, 3]], np.array(su.w)[[0, 0, 2, 3]])
    with pytest.raises(IncompatibleFaces, match="edge s is degenerate"):
        complete_cube(collapsed, su, face(cube_a1, "s", 0))


def test_axial_cube_rotates_the_patch_about_the_axis():
    patch = bipolar_patch(0.5)
    D = axial_cube(patch, I)
    D.check()
    for s, t in [(0.3, 0.6), (0.7, 0.2)]:
        p = patch.evaluate(s, t).vector
        np.testing.assert_allclose(D.evaluate(s, t, 0.0).vector, p, atol=1e-12)
        q = D.evaluate(s, t, 0.5).vector
        assert q[0] == pytest.approx(p[0], abs=1e-12)
        assert q[1] == pytest.approx(0.0, abs=1e-12)
        assert abs(q[2]) == pytest.approx(np.hypot(p[1], p[2]), abs=1e-12)
        np.testing.assert_allclose(D.evaluate(s, t, 1.0).vector, [p[0], -p[1], -p[2]], atol=1e-12)


@pytest.mark.parametrize("axis", [K, ZERO])
def test_axial_cube_rejects_a_bad_axis(axis):
    with pytest.raises(InvalidParameter):
        axial_cube(bipolar_patch(0.5), axis)
