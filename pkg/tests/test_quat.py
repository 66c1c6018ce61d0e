import math

import numpy as np
import pytest

from app.core.errors import CoincidentPoints, InvalidParameter
from app.core.tolerance import Tolerance
from app.geometry.canonical import two_plane_cube, type_a_cube
from app.geometry.qb import HomogeneousPoint, proj_div
from app.geometry.quat import (
    INFINITY,
    I,
    J,
    K,
    MSphere,
    ONE,
    Quaternion,
    ZERO,
    chordal_distance,
    concyclic,
    cospherical,
    cross_ratio,
    inversion,
    is_infinite,
    random_mobius,
)


def test_hamilton_units():
    assert (I * J).isclose(K)
    assert (J * I).isclose(-K)
    assert (I * I).isclose(-ONE)
    assert (I * J * K).isclose(-ONE)


def test_inverse_and_division():
    q = Quaternion(1.0, -2.0, 0.5, 3.0)
    assert (q * q.inverse()).isclose(ONE)
    assert ((q / J) * J).isclose(q)
    with pytest.raises(ZeroDivisionError):
        ZERO.inverse()


def test_chordal_distance_to_infinity():
    assert chordal_distance(ZERO, INFINITY) == pytest.approx(2.0)
    assert chordal_distance(INFINITY, INFINITY) == 0.0
    p = Quaternion.imag(1.0, 1.0, 0.0)
    assert chordal_distance(p, INFINITY) == pytest.approx(2.0 / math.sqrt(3.0))


def test_inversion_in_unit_sphere():
    assert inversion(ZERO, 1.0, I).isclose(I)
    assert inversion(ZERO, 1.0, I * 2.0).isclose(I * 0.5)
    assert is_infinite(inversion(ZERO, 1.0, ZERO))
    assert inversion(ZERO, 1.0, INFINITY) is ZERO
    with pytest.raises(InvalidParameter):
        inversion(INFINITY, 1.0, I)


def test_concyclic_points():
    assert concyclic(I, J, -I, -J)
    assert not concyclic(I, J, -I, K)
    # a line counts as a circle through infinity
    assert concyclic(ZERO, I, I * 2.0, INFINITY)


def test_cross_ratio_needs_distinct_points():
    with pytest.raises(CoincidentPoints):
        cross_ratio(I, I, J, K)


def test_inversive_product_of_spheres():
    unit = MSphere.sphere([0.0, 0.0, 0.0], 1.0)
    assert abs(unit.inversive_product(MSphere.sphere([3.0, 0.0, 0.0], 1.0))) == pytest.approx(3.5)
    assert abs(unit.inversive_product(MSphere.sphere([1.0, 0.0, 0.0], 1.0))) == pytest.approx(0.5)
    assert abs(unit.inversive_product(MSphere.sphere([2.0, 0.0, 0.0], 1.0))) == pytest.approx(1.0)


def test_common_points_of_coordinate_planes():
    planes = [MSphere.plane(n, 0.0) for n in ([1, 0, 0], [0, 1, 0], [0, 0, 1])]
    points = MSphere.common_points(*planes)
    assert len(points) == 2
    assert any(is_infinite(p) for p in points)
    assert any(not is_infinite(p) and abs(p) < 1e-9 for p in points)


def test_mobius_map_agrees_with_pairs(rng):
    f = random_mobius(rng, length=4)
    for _ in range(10):
        p = Quaternion.from_vector(rng.normal(size=3))
        h = HomogeneousPoint.from_point(p)
        u, w = f.apply_to_pairs(h.u.as_array()[None], h.w.as_array()[None])
        image = proj_div(HomogeneousPoint(Quaternion.from_array(u[0]), Quaternion.from_array(w[0])))
        assert chordal_distance(image, f.apply(p)) < 1e-9


def test_mobius_inverse_round_trip(rng):
    f = random_mobius(rng)
    p = Quaternion.imag(0.3, -0.7, 1.1)
    assert chordal_distance(f.inverse().apply(f.apply(p)), p) < 1e-9


def test_mobius_preserves_concyclicity(rng):
    f = random_mobius(rng)
    angles = np.array([0.1, 1.3, 2.9, 4.4])
    circle = [Quaternion.imag(math.cos(a), math.sin(a), 0.5) for a in angles]
    assert concyclic(*[f.apply(p) for p in circle])


def test_cospherical_points():
    assert cospherical(ZERO, I, J, K, I + J + K)
    assert not cospherical(ZERO, I, J, K, I * 2.0)
    assert not cospherical(ZERO, I, J, K, INFINITY)
    assert cospherical(ZERO, I, J, I + J, INFINITY)


@pytest.mark.parametrize(
    "D",
    [type_a_cube(1.0, 2.0, 3.0), type_a_cube(3.0, 1.0, -2.0), two_plane_cube(0.0, 2.0, 1.0)],
    ids=["A(1,2,3)", "A(3,1,-2)", "two-plane"],
)
def test_cube_control_points_are_cospherical(D, rng):
    for net in (D, random_mobius(rng).apply_to_net(D)):
        p = net.control_points()
        for k in (3, 5, 6, 7):
            assert cospherical(p[0], p[1], p[2], p[4], p[k], tol=Tolerance(1e-9, 1e-9))
    p = D.control_points()
    assert not cospherical(p[0], p[1], p[2], p[4], p[7] + I * 0.1)
