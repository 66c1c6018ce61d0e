import logging
import math

import numpy as np
import pytest

from app.core.errors import (
    DegenerateArc,
    IndeterminatePoint,
    InvalidParameter,
    InvariantViolation,
    ZeroMultiplier,
    ZeroPair,
)
from app.geometry.canonical import build_family, general_cube, offset_families, type_a_cube, type_b_cube
from app.geometry.qb import (
    DCCube,
    HomogeneousPoint,
    RootKind,
    SliceKind,
    apply_inversion_to_net,
    as_projective,
    direction_index,
    eval_cube,
    face,
    farin_point,
    jacobian,
    partials,
    reparametrize_interior,
    slice_kind,
    slice_patch,
    spherical_polys,
)
from app.geometry.quat import (
    INFINITY,
    I,
    J,
    K,
    Quaternion,
    ZERO,
    chordal_distance,
    inversion,
    is_infinite,
    qmul,
    random_mobius,
)


def test_projective_parameters():
    assert as_projective(0.25) == (0.25, 1.0)
    assert as_projective(math.inf) == (1.0, 0.0)
    assert as_projective((2.0, 0.0)) == (2.0, 0.0)
    with pytest.raises(ZeroPair):
        as_projective((0.0, 0.0))


def test_direction_names():
    assert [direction_index(d) for d in ("s", "t", "u")] == [0, 1, 2]
    with pytest.raises(InvalidParameter):
        direction_index("v")


def test_homogeneous_point_of_infinity():
    h = HomogeneousPoint.from_point(INFINITY)
    assert is_infinite(h.point())
    with pytest.raises(ZeroPair):
        HomogeneousPoint(ZERO, ZERO)


def test_type_a_net_is_on_study_quadric(cube_a1):
    cube_a1.check()
    assert np.max(np.abs(cube_a1.study_residuals())) == 0.0


def test_net_off_study_quadric_is_rejected(cube_a1):
    u = cube_a1.u.copy()
    u[7, 0] += 1e-3
    with pytest.raises(InvariantViolation) as exc:
        DCCube(u, cube_a1.w).check()
    assert exc.value.context["indices"] == [7]


def test_corners_of_type_a(cube_a1):
    assert cube_a1.evaluate(0, 0, 0).isclose(ZERO)
    assert cube_a1.evaluate(1, 0, 0).isclose(I)
    assert cube_a1.evaluate(0, 1, 0).isclose(J)
    assert cube_a1.evaluate(0, 0, 1).isclose(K)


def test_evaluation_matches_closed_form(cube_a1):
    a, b, c = 1.0, 2.0, 3.0
    d = a + b + c
    for s, t, u in [(0.3, 0.6, 0.9), (2.0, -1.0, 0.5), (-0.4, 0.1, 3.0)]:
        num = Quaternion(d * s * t * u, s, t, u)
        den = Quaternion(1.0, -b * t * u, -c * s * u, -a * s * t)
        expected = num * den.inverse()
        got = eval_cube(cube_a1, s, t, u)
        assert got.isclose(Quaternion.imag(expected.x, expected.y, expected.z))


def test_slices_and_faces(cube_a1):
    bottom = face(cube_a1, "u", 0)
    assert np.array_equal(bottom.u, cube_a1.u[:4])
    assert np.array_equal(bottom.w, cube_a1.w[:4])
    side = slice_patch(cube_a1, "t", 0.0)
    assert np.array_equal(side.u, cube_a1.u[[0, 1, 4, 5]])
    assert slice_patch(cube_a1, 0, 0.5).evaluate(0.2, 0.7).isclose(cube_a1.evaluate(0.5, 0.2, 0.7))


def test_spherical_polynomials_of_type_a(cube_a1):
    coef = spherical_polys(cube_a1).coefficients()
    # sigma_s = (a + c) x, sigma_t = (a + b) x, sigma_u = (b + c) x
    np.testing.assert_allclose(coef, [[0, 4, 0], [0, 3, 0], [0, 5, 0]], atol=1e-12)
    roots = spherical_polys(cube_a1).roots("s")
    assert roots.kind == RootKind.DISTINCT
    low, high = roots.values()
    assert low == pytest.approx(0.0, abs=1e-12)
    assert abs(high) > 1e12


def test_offset_cube_has_constant_sigma():
    D = offset_families("O1", 0.5)
    c0, c1, c2 = spherical_polys(D).coefficients()[2]
    assert abs(c0) > 1e-6
    assert abs(c1) < 1e-9 and abs(c2) < 1e-9
    roots = spherical_polys(D).roots("u")
    assert roots.kind == RootKind.DOUBLE
    (n, d), = roots.roots
    assert abs(d) <= 1e-9 * abs(n)


def test_slice_kinds():
    D = offset_families("O1", 0.5)
    assert slice_kind(D, "u", math.inf) == SliceKind.POINT
    assert slice_kind(D, "u", 0.5) == SliceKind.SPHERE


def test_indeterminate_point():
    rows = np.tile([1.0, 0.0, 0.0, 0.0], (8, 1))
    rows[1] *= -1.0
    # entries 0 and 1 cancel halfway along the s edge
    with pytest.raises(IndeterminatePoint):
        DCCube(rows, rows).evaluate(0.5, 0.0, 0.0)


# Corner pair cross-check

@pytest.mark.parametrize("label, params", [("A", [1.0, 2.0, 3.0]), ("B", [2.0, 1.5]), ("O1", [0.5])])
def test_corner_pairs_agree_on_dc_cubes(label, params):
    assert spherical_polys(build_family(label, params).cube).pairs_agree() == (True, True, True)


def test_corner_pairs_disagree_on_a_random_net(rng, caplog):
    points = np.concatenate([np.zeros((8, 1)), rng.normal(size=(8, 3))], axis=1)
    weights = rng.normal(size=(8, 4))
    D = DCCube(qmul(points, weights), weights)
    with caplog.at_level(logging.WARNING, logger="app.geometry.qb"):
        polys = spherical_polys(D)
    assert not all(polys.pairs_agree())
    assert "disagree" in caplog.text


# Derivatives

@pytest.mark.parametrize("label, params", [
    ("A", [1.0, 2.0, 3.0]),
    ("A", [3.0, 1.0, -2.0]),
    ("B", [2.0, 1.5]),
    ("O1", [0.5]),
])
@pytest.mark.parametrize("s, t, u", [(0.3, 0.6, 0.9), (-0.7, 1.3, 0.2)])
def test_partials_are_orthogonal(label, params, s, t, u):
    D = build_family(label, params).cube
    rows = partials(D, s, t, u)
    norms = np.linalg.norm(rows, axis=1)
    gram = rows @ rows.T / np.outer(norms, norms)
    assert np.max(np.abs(gram - np.eye(3))) < 1e-8
    assert abs(jacobian(D, s, t, u)) == pytest.approx(float(np.prod(norms)), rel=1e-6)


def test_partials_need_finite_parameters(cube_a1):
    with pytest.raises(InvalidParameter):
        partials(cube_a1, math.inf, 0.5, 0.5)


# Net operations

def test_farin_point():
    h0 = HomogeneousPoint.of(ZERO, 1.0)
    h1 = HomogeneousPoint.of(I, 1.0)
    assert farin_point(h0, h1).isclose(I * 0.5)
    with pytest.raises(DegenerateArc):
        farin_point(h1, HomogeneousPoint.of(I * 2.0, 2.0))


def _moved(x, lam):
    return lam * x / (1.0 - x + lam * x)


def test_reparametrize_interior(cube_a1):
    D = reparametrize_interior(cube_a1, 2.0, 0.5, 3.0)
    D.check()
    for a, b in zip(D.control_points(), cube_a1.control_points()):
        assert chordal_distance(a, b) < 1e-12
    for s, t, u in [(0.3, 0.6, 0.9), (0.5, 0.5, 0.5)]:
        expected = cube_a1.evaluate(_moved(s, 2.0), _moved(t, 0.5), _moved(u, 3.0))
        assert chordal_distance(D.evaluate(s, t, u), expected) < 1e-10
    with pytest.raises(ZeroMultiplier):
        reparametrize_interior(cube_a1, 0.0, 1.0, 1.0)


def test_inverted_net_evaluates_to_inverted_points(cube_a1):
    center, r2 = Quaternion.imag(0.4, -1.1, 2.0), 2.5
    D = apply_inversion_to_net(cube_a1, center, r2)
    D.check()
    for s, t, u in [(0.3, 0.6, 0.9), (-2.0, 0.5, 1.5)]:
        expected = inversion(center, r2, cube_a1.evaluate(s, t, u))
        assert chordal_distance(D.evaluate(s, t, u), expected) < 1e-9
    with pytest.raises(InvalidParameter):
        apply_inversion_to_net(cube_a1, INFINITY, 1.0)


@pytest.mark.parametrize("seed", range(20))
def test_spherical_roots_are_mobius_invariant(seed):
    rng = np.random.default_rng(seed)
    D = type_a_cube(*rng.uniform(0.5, 3.0, size=3))
    reference = [spherical_polys(D).roots(d).kind for d in range(3)]
    for _ in range(5):
        moved = random_mobius(rng).apply_to_net(D)
        assert spherical_polys(moved).pairs_agree() == (True, True, True)
        assert [spherical_polys(moved).roots(d).kind for d in range(3)] == reference


# Catalog nets

def test_type_b_control_points_lie_on_the_x_axis():
    D = type_b_cube(2.0, 1.5)
    points = D.control_points()
    assert points[0].isclose(ZERO)
    assert is_infinite(points[1])
    for p in points[2:]:
        assert abs(p.y) < 1e-12 and abs(p.z) < 1e-12
    # the imaginary unit sphere swaps x and -1/x
    for first, second in ((2, 3), (4, 5), (6, 7)):
        assert points[second].x == pytest.approx(-1.0 / points[first].x)


def test_general_cube_has_its_corner_at_infinity():
    D = general_cube(0.5, -0.3, 0.2, 0.7, 1.4)
    D.check()
    assert is_infinite(D.control_points()[0])
