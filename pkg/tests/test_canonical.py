import numpy as np
import pytest

from app.core.errors import InvalidParameter, OutOfRegion
from app.geometry.analysis.implicit import implicitize_patch, patch_samples
from app.geometry.analysis.types import CoarseType, CurveKind, Subtype
from app.geometry.canonical import (
    CATALOG,
    a3_uniqueness_cubes,
    build_family,
    catalog,
    expected_two_plane,
    expected_type_a,
    type_a_cube,
    type_b_cube,
    type_b_equivalents,
    type_b_in_focal_region,
    type_b_weights,
)
from app.geometry.qb import DCCube, slice_patch


@pytest.mark.parametrize("label", sorted(CATALOG))
def test_catalog_nets_are_valid(label):
    family = build_family(label)
    family.cube.check()
    assert family.label == label
    assert list(family.params) == list(CATALOG[label].parameters)


def test_type_a_entries():
    D = type_a_cube(1.0, 2.0, 3.0)
    assert list(D.u[7]) == [6.0, 1.0, 1.0, 1.0]
    assert list(D.w[7]) == [1.0, -2.0, -3.0, -1.0]


def test_build_family_with_parameters():
    family = build_family("A", [1.0, 1.0, 1.0])
    assert family.params == {"a": 1.0, "b": 1.0, "c": 1.0}
    assert family.cube.u[7][0] == 3.0


def test_build_family_rejects_bad_input():
    with pytest.raises(InvalidParameter):
        build_family("Z")
    with pytest.raises(InvalidParameter):
        build_family("A", [1.0, 2.0])


def test_expected_type_a_subtypes():
    assert expected_type_a(1.0, 2.0, 3.0).subtype == Subtype.A1
    assert expected_type_a(3.0, 1.0, -2.0).subtype == Subtype.A2
    assert expected_type_a(1.0, 2.0, 3.0).coarse == CoarseType.THREE_SPHERES


def test_type_b_region():
    assert type_b_in_focal_region(2.0, 1.5)
    assert not type_b_in_focal_region(2.0, 0.1)
    with pytest.raises(InvalidParameter):
        type_b_weights(1.0, 1.5)
    assert len(type_b_equivalents(2.0, 1.5)) == 4


def test_b_family_outside_region_adds_note():
    family = build_family("B", [2.0, 0.1])
    assert family.notes


def test_a3_uniqueness_needs_admissible_t():
    with pytest.raises(OutOfRegion):
        a3_uniqueness_cubes(1.5)


def test_catalog_lists_every_family():
    assert [spec.label for spec in catalog()] == list(CATALOG)
    assert {"A", "B", "O1", "O2", "S1", "S2", "S3", "S4"} <= set(CATALOG)


def test_two_plane_default_is_type_b():
    family = build_family("TwoPlane")
    assert family.params == {"a": 0.0, "b": 2.0, "c": 1.0}
    assert family.expected.subtype == Subtype.B
    assert [d.kind for d in family.expected.singular] == [CurveKind.BICIRCULAR_QUARTIC] * 2
    assert [d.components for d in family.expected.singular] == [2, 2]
    assert not family.expected.notes


@pytest.mark.parametrize("params, coarse", [
    ((0.0, 1.0, 1.0), CoarseType.SPHERICAL),
    ((1.0, 2.0, 1.0), CoarseType.OFFSET),
    ((2.0, 3.0, 1.0), CoarseType.THREE_SPHERES),
])
def test_expected_two_plane_outside_type_b(params, coarse):
    assert expected_two_plane(*params).coarse == coarse


def test_type_b_net_is_valid_for_both_weight_signs():
    h0, h1 = type_b_weights(2.0, 1.5)
    cube = type_b_cube(2.0, 1.5)
    cube.check()
    u, w = cube.u.copy(), cube.w.copy()
    u[7, 0] = h1
    w[6, 1] = -h1
    DCCube(u, w).check()
    # p6 = -h0/h1 i, the value the symmetric z = 0 quartic needs
    assert cube.control_points()[6].x == pytest.approx(-h0 / h1)


TYPE_B_SAMPLES = [
    (2.0, 1.5), (3.0, 2.5), (3.0, 0.5), (2.5, -1.2), (-2.0, 1.5),
    (4.0, 3.0), (1.5, 1.2), (5.0, 0.5), (2.0, -0.8), (3.0, -2.5),
]


@pytest.mark.parametrize("k, m", TYPE_B_SAMPLES)
def test_type_b_surfaces_are_symmetric_in_the_imaginary_sphere(k, m):
    assert type_b_in_focal_region(k, m)
    D = type_b_cube(k, m)
    for direction in ("t", "u"):
        for value in (0.3, 0.7):
            patch = slice_patch(D, direction, value)
            surface = implicitize_patch(patch)
            points = patch_samples(patch)
            # p -> p^-1 swaps x and -1/x on the x-axis
            image = -points / np.sum(points**2, axis=1)[:, None]
            image = image[np.linalg.norm(image, axis=1) <= 50.0]
            assert len(image) > 100
            assert surface.residual(image) < 1e-7
