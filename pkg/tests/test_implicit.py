import numpy as np
import pytest

from app.geometry.analysis.implicit import (
    ImplicitSurface,
    implicitize_patch,
    implicitize_slice,
    monomials,
    patch_samples,
)
from app.geometry.canonical import offset_families, sphere_s1_cube
from app.geometry.construct import bipolar_patch, patch_weights_infinite
from app.geometry.qb import slice_patch
from app.geometry.quat import I, J, K


def test_monomial_count():
    assert len(monomials(2)) == 10
    assert len(monomials(4)) == 35


def test_planar_patch_is_a_plane():
    surface = implicitize_patch(bipolar_patch(0.5))
    assert surface.degree == 1
    assert set(surface.terms()) == {(0, 0, 1)}


def test_spherical_slice_is_the_unit_sphere(rng):
    surface = implicitize_slice(sphere_s1_cube(0.5), "u", 0.0)
    assert surface.degree == 2
    points = rng.normal(size=(50, 3))
    points /= np.linalg.norm(points, axis=1)[:, None]
    assert surface.residual(points) < 1e-8
    sphere = ImplicitSurface.from_terms({(2, 0, 0): 1.0, (0, 2, 0): 1.0, (0, 0, 2): 1.0, (0, 0, 0): -1.0})
    assert surface.equivalent(sphere, tol=1e-6)


def test_from_function_recovers_coefficients():
    surface = ImplicitSurface.from_function(lambda x, y, z: x * x + 2 * y * z - 3, degree=2)
    assert set(surface.terms()) == {(2, 0, 0), (0, 1, 1), (0, 0, 0)}
    np.testing.assert_allclose(
        [surface.terms()[(2, 0, 0)], surface.terms()[(0, 1, 1)], surface.terms()[(0, 0, 0)]],
        [1.0, 2.0, -3.0],
    )


def _o1_offset(h, d):
    return lambda x, y, z: (x * x + y * y + z * z + h - d * d) ** 2 - ((1 + h) * x - d * (1 - h)) ** 2 - 4 * h * y * y


def _o2_offset(d):
    return lambda x, y, z: z * z * (x + 3 - d) + y * y * (x - 1 - d) + (x + 3 - d) * (x - 1 - d) * (x - 1 + d)


def _du_cubic(h1, h2, h3):
    return lambda x, y, z: (x - h1) * (x - h2) * (x - h3) + (x - h1) * y * y + (x - h2) * z * z


def _matches_offset(surface, family, value, degree):
    # the offset side depends on the orientation of the face normal
    return any(
        surface.equivalent(ImplicitSurface.from_function(family(d), degree=degree), tol=1e-8)
        for d in (value, -value)
    )


@pytest.mark.parametrize("value", [0.0, 0.25, 0.5])
def test_o1_slices_are_offset_horn_cyclides(value):
    D = offset_families("O1", 0.5)
    surface = implicitize_slice(D, "u", value)
    assert surface.degree == 4
    assert _matches_offset(surface, lambda d: _o1_offset(0.5, d), value, 4)


@pytest.mark.parametrize("value", [0.0, 0.5])
def test_o2_slices_are_parabolic_cyclides(value):
    D = offset_families("O2")
    surface = implicitize_slice(D, "u", value)
    assert surface.degree == 3
    assert _matches_offset(surface, _o2_offset, value, 3)


def test_du_cubic_patch():
    h = (1.0, -2.0, 0.5)
    patch = patch_weights_infinite(I * h[0], I * h[1], I * h[2], J, K)
    surface = implicitize_patch(patch)
    expected = ImplicitSurface.from_function(_du_cubic(*h), degree=3)
    assert surface.equivalent(expected, tol=1e-8)
    points = patch_samples(patch)
    assert len(points) > 300
    assert expected.residual(points) < 1e-7
    assert surface.residual(points) < 1e-7


@pytest.mark.parametrize("D", [offset_families("O1", 0.5), offset_families("O2")], ids=["O1", "O2"])
def test_slices_vanish_on_their_samples(D):
    for value in (0.0, 0.5, 1.0):
        patch = slice_patch(D, "u", value)
        assert implicitize_patch(patch).residual(patch_samples(patch)) < 1e-7
