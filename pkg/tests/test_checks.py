import numpy as np

from app.geometry.analysis.checks import (
    discriminant_region,
    discriminant_sweep,
    same_carrier,
    slice_carrier,
)
from app.geometry.canonical import sphere_s1_cube


def test_discriminant_sweep_finds_no_counterexample():
    sweep = discriminant_sweep(seed=0)
    assert sweep.samples == 100_000
    assert sweep.all_negative == 0
    assert sweep.two_negative == 0
    assert sweep.misplaced == 0


def test_discriminant_region_of_catalog_cube():
    report = discriminant_region(1.0, 0.5, 0.3, 0.2, 0.5)
    assert report.positive >= 2
    assert report.in_c_slab


def test_face_carrier_is_a_coordinate_plane(cube_a1):
    carrier = slice_carrier(cube_a1, "s", 0.0)
    assert carrier.is_plane
    np.testing.assert_allclose(np.abs(carrier.b), [1.0, 0.0, 0.0], atol=1e-9)
    assert abs(carrier.c) < 1e-9


def test_concentric_family_repeats_carrier():
    D = sphere_s1_cube(0.5)
    assert same_carrier(D, "u", 0.0, 1.0)
    assert not same_carrier(D, "u", 0.0, 0.25)
